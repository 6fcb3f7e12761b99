// Finite words over the digit alphabet {0, ..., alphabet_top}. Words are
// cheap value types with lexicographic ordering, usable as map keys.
#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "betatherm/errors.hpp"

namespace betatherm {

using Digit = std::uint8_t;

enum class Ordering { LT, EQ, GT };

class Word {
public:
    Word() = default;
    explicit Word(std::vector<Digit> digits) : digits_(std::move(digits)) {}
    Word(std::initializer_list<int> digits) {
        digits_.reserve(digits.size());
        for (int d : digits) digits_.push_back(static_cast<Digit>(d));
    }

    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    Digit operator[](std::size_t i) const { return digits_[i]; }
    const std::vector<Digit>& digits() const { return digits_; }

    // First n digits; n must not exceed the length.
    Word prefix(std::size_t n) const {
        return Word(std::vector<Digit>(digits_.begin(), digits_.begin() + n));
    }
    Word suffix_from(std::size_t i) const {
        return Word(std::vector<Digit>(digits_.begin() + i, digits_.end()));
    }
    Word reversed() const { return Word(std::vector<Digit>(digits_.rbegin(), digits_.rend())); }

    Word appended(Digit d) const {
        std::vector<Digit> v = digits_;
        v.push_back(d);
        return Word(std::move(v));
    }
    Word prepended(Digit d) const {
        std::vector<Digit> v;
        v.reserve(digits_.size() + 1);
        v.push_back(d);
        v.insert(v.end(), digits_.begin(), digits_.end());
        return Word(std::move(v));
    }

    friend Word operator+(const Word& a, const Word& b) {
        std::vector<Digit> v = a.digits_;
        v.insert(v.end(), b.digits_.begin(), b.digits_.end());
        return Word(std::move(v));
    }

    Digit max_digit() const {
        Digit m = 0;
        for (Digit d : digits_)
            if (d > m) m = d;
        return m;
    }

    // Smallest u with this == u^m; equals *this when primitive.
    Word primitive_root() const {
        const std::size_t n = size();
        for (std::size_t p = 1; p <= n; ++p) {
            if (n % p != 0) continue;
            bool ok = true;
            for (std::size_t i = p; i < n && ok; ++i) ok = digits_[i] == digits_[i - p];
            if (ok) return prefix(p);
        }
        return *this;
    }
    bool is_primitive() const { return primitive_root().size() == size(); }

    Word rotated_left(std::size_t r) const {
        const std::size_t n = size();
        if (n == 0) return *this;
        r %= n;
        std::vector<Digit> v;
        v.reserve(n);
        for (std::size_t i = 0; i < n; ++i) v.push_back(digits_[(i + r) % n]);
        return Word(std::move(v));
    }

    auto operator<=>(const Word&) const = default;

private:
    std::vector<Digit> digits_;
};

// Lexicographic comparison; on unequal lengths the common prefix decides
// first, then a proper prefix compares LT.
inline Ordering lex_compare(const Word& u, const Word& v) {
    const auto c = u <=> v;
    if (c < 0) return Ordering::LT;
    if (c > 0) return Ordering::GT;
    return Ordering::EQ;
}

inline Word transpose_word(const Word& w) { return w.reversed(); }

// Plain digit string for alphabets within 0..9, comma-separated otherwise.
inline std::string format_word(const Word& w) {
    if (w.empty()) return "";
    std::ostringstream os;
    if (w.max_digit() <= 9) {
        for (std::size_t i = 0; i < w.size(); ++i) os << static_cast<int>(w[i]);
    } else {
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) os << ',';
            os << static_cast<int>(w[i]);
        }
    }
    return os.str();
}

inline Word parse_word(const std::string& text) {
    std::vector<Digit> digits;
    if (text.find(',') != std::string::npos) {
        std::istringstream is(text);
        std::string field;
        while (std::getline(is, field, ',')) {
            if (field.empty()) throw SchemaError("empty digit field in word \"" + text + "\"");
            int v = 0;
            for (char c : field) {
                if (c < '0' || c > '9') throw SchemaError("bad digit in word \"" + text + "\"");
                v = v * 10 + (c - '0');
            }
            if (v > 255) throw SchemaError("digit out of range in word \"" + text + "\"");
            digits.push_back(static_cast<Digit>(v));
        }
    } else {
        digits.reserve(text.size());
        for (char c : text) {
            if (c < '0' || c > '9') throw SchemaError("bad digit in word \"" + text + "\"");
            digits.push_back(static_cast<Digit>(c - '0'));
        }
    }
    return Word(std::move(digits));
}

}  // namespace betatherm
