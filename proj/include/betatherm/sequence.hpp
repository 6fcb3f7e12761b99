// Eventually periodic one-sided digit sequences. Every sequence materialized
// by the engine has this form; aperiodic data is carried as a finite prefix
// with an explicit zero tail. The representation is canonical (primitive
// period, shortest preperiod), so structural equality coincides with equality
// of the infinite sequences.
#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>

#include "betatherm/errors.hpp"
#include "betatherm/word.hpp"

namespace betatherm {

class EventuallyPeriodicSeq {
public:
    EventuallyPeriodicSeq() : period_({0}) {}

    EventuallyPeriodicSeq(Word preperiod, Word period)
        : preperiod_(std::move(preperiod)), period_(std::move(period)) {
        if (period_.empty()) throw SchemaError("eventually periodic sequence needs a nonempty period");
        canonicalize();
    }

    static EventuallyPeriodicSeq zeros() { return EventuallyPeriodicSeq(); }
    // w followed by the zero tail
    static EventuallyPeriodicSeq from_word(const Word& w) {
        return EventuallyPeriodicSeq(w, Word({0}));
    }
    static EventuallyPeriodicSeq periodic(const Word& p) { return EventuallyPeriodicSeq(Word(), p); }

    const Word& preperiod() const { return preperiod_; }
    const Word& period() const { return period_; }
    std::size_t presentation_length() const { return preperiod_.size() + period_.size(); }

    Digit at(std::size_t i) const {
        if (i < preperiod_.size()) return preperiod_[i];
        return period_[(i - preperiod_.size()) % period_.size()];
    }

    Word first(std::size_t k) const {
        std::vector<Digit> v;
        v.reserve(k);
        for (std::size_t i = 0; i < k; ++i) v.push_back(at(i));
        return Word(std::move(v));
    }

    EventuallyPeriodicSeq shifted() const {
        if (!preperiod_.empty()) return EventuallyPeriodicSeq(preperiod_.suffix_from(1), period_);
        return EventuallyPeriodicSeq(Word(), period_.rotated_left(1));
    }
    EventuallyPeriodicSeq shifted(std::size_t n) const {
        EventuallyPeriodicSeq s = *this;
        for (std::size_t i = 0; i < n; ++i) s = s.shifted();
        return s;
    }
    EventuallyPeriodicSeq prepended(Digit a) const {
        return EventuallyPeriodicSeq(preperiod_.prepended(a), period_);
    }

    bool is_zero() const { return preperiod_.max_digit() == 0 && period_.max_digit() == 0; }
    bool has_nonzero_period() const { return period_.max_digit() > 0; }
    Digit max_digit() const { return std::max(preperiod_.max_digit(), period_.max_digit()); }

    bool operator==(const EventuallyPeriodicSeq&) const = default;

private:
    void canonicalize() {
        period_ = period_.primitive_root();
        while (!preperiod_.empty() && preperiod_[preperiod_.size() - 1] == period_[period_.size() - 1]) {
            // absorb the last preperiod digit by rotating the period right
            period_ = period_.rotated_left(period_.size() - 1);
            preperiod_ = preperiod_.prefix(preperiod_.size() - 1);
        }
    }

    Word preperiod_;
    Word period_;
};

// Exact lexicographic comparison of two eventually periodic sequences. Beyond
// max preperiod both are periodic with period lcm(p, q), so agreement on
// max(pre) + lcm digits implies equality.
inline Ordering compare_sequences(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b) {
    const std::size_t pre = std::max(a.preperiod().size(), b.preperiod().size());
    const std::size_t l = std::lcm(a.period().size(), b.period().size());
    const std::size_t bound = pre + l;
    for (std::size_t i = 0; i < bound; ++i) {
        const Digit x = a.at(i), y = b.at(i);
        if (x < y) return Ordering::LT;
        if (x > y) return Ordering::GT;
    }
    return Ordering::EQ;
}

// Index (1-based) of the first disagreement, or 0 when equal.
inline std::size_t first_disagreement(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b) {
    const std::size_t pre = std::max(a.preperiod().size(), b.preperiod().size());
    const std::size_t bound = pre + std::lcm(a.period().size(), b.period().size());
    for (std::size_t i = 0; i < bound; ++i)
        if (a.at(i) != b.at(i)) return i + 1;
    return 0;
}

// d(x, y) = 2^{-(n-1)} with n the first disagreeing index; 0 for equal
// sequences.
inline double shift_metric(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b) {
    const std::size_t n = first_disagreement(a, b);
    if (n == 0) return 0.0;
    return std::ldexp(1.0, -static_cast<int>(n - 1));
}

inline double shift_metric(const Word& u, const Word& v) {
    return shift_metric(EventuallyPeriodicSeq::from_word(u), EventuallyPeriodicSeq::from_word(v));
}

// (y_m, ..., y_1, x_1, x_2, ...); m = 0 returns x unchanged.
inline EventuallyPeriodicSeq tau_concat(const EventuallyPeriodicSeq& y, std::size_t m,
                                        const EventuallyPeriodicSeq& x) {
    if (m == 0) return x;
    Word head = y.first(m).reversed();
    return EventuallyPeriodicSeq(head + x.preperiod(), x.period());
}

// "pre(period)"; a bare word w means w with a zero tail.
inline std::string format_sequence(const EventuallyPeriodicSeq& s) {
    return format_word(s.preperiod()) + "(" + format_word(s.period()) + ")";
}

inline EventuallyPeriodicSeq parse_sequence(const std::string& text) {
    const auto open = text.find('(');
    if (open == std::string::npos) {
        if (text.empty()) throw SchemaError("empty sequence literal");
        return EventuallyPeriodicSeq::from_word(parse_word(text));
    }
    const auto close = text.find(')', open);
    if (close == std::string::npos || close != text.size() - 1)
        throw SchemaError("malformed sequence literal \"" + text + "\"");
    const std::string pre = text.substr(0, open);
    const std::string per = text.substr(open + 1, close - open - 1);
    if (per.empty()) throw SchemaError("empty period in \"" + text + "\"");
    return EventuallyPeriodicSeq(parse_word(pre), parse_word(per));
}

}  // namespace betatherm
