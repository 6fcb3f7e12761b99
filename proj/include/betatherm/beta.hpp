// Base-beta expansions and the admissibility core: greedy and quasi-greedy
// digit streams, recovery of beta from a digit presentation, the suffix
// criterion deciding membership in the one-sided shift and its transpose,
// language enumeration with the cached left-extension branch structure, and
// window checks for bilateral pairs.
//
// Two input modes. A numeric beta is processed at 50 decimal digits of
// working precision with a tie guard: a digit decision landing within
// [1e-30, 1e-12) of an integer boundary raises PrecisionBreach, and anything
// closer than 1e-30 is treated as an exact algebraic tie. An exact eventually
// periodic digit presentation recovers beta by bisection and is the reference
// mode.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "betatherm/bilateral.hpp"
#include "betatherm/errors.hpp"
#include "betatherm/sequence.hpp"
#include "betatherm/word.hpp"

namespace betatherm {

using HighPrec = boost::multiprecision::cpp_bin_float_50;

inline constexpr double digit_tie_guard = 1e-12;   // ambiguous zone half-width
inline constexpr double digit_tie_snap = 1e-30;    // below this: exact algebraic tie

namespace detail {

inline long long floor_ll(const HighPrec& v) {
    return boost::multiprecision::floor(v).convert_to<long long>();
}

}  // namespace detail

// Greedy expansion digits of alpha in base beta: d_n = min(floor(beta r), top)
// applied to remainders. Raises PrecisionBreach when a floor decision falls
// inside the guard zone around an integer boundary.
inline Word greedy_expansion(const HighPrec& alpha, const HighPrec& beta, std::size_t n) {
    if (beta <= 1) throw SchemaError("beta must exceed 1");
    const long long top = detail::floor_ll(beta);
    if (alpha < 0 || alpha > HighPrec(top) / (beta - 1) + HighPrec(digit_tie_snap))
        throw SchemaError("alpha outside the representable interval");
    std::vector<Digit> digits;
    digits.reserve(n);
    HighPrec r = alpha;
    for (std::size_t i = 0; i < n; ++i) {
        const HighPrec v = beta * r;
        const long long k = detail::floor_ll(v);
        if (k >= top + 1) {
            digits.push_back(static_cast<Digit>(top));
            r = v - top;
            continue;
        }
        const HighPrec frac = v - k;
        if (frac < digit_tie_snap) {
            digits.push_back(static_cast<Digit>(k));
            r = 0;
        } else if (frac > 1 - HighPrec(digit_tie_snap)) {
            if (k + 1 <= top) {
                digits.push_back(static_cast<Digit>(k + 1));
                r = 0;
            } else {
                digits.push_back(static_cast<Digit>(top));
                r = v - top;
            }
        } else if (frac < digit_tie_guard || frac > 1 - HighPrec(digit_tie_guard)) {
            throw PrecisionBreach("greedy digit " + std::to_string(i + 1) +
                                  " is within the tie guard; raise precision or use a digit presentation");
        } else {
            digits.push_back(static_cast<Digit>(k));
            r = v - k;
        }
    }
    return Word(std::move(digits));
}

struct QuasiGreedyResult {
    Word digits;                                  // first n digits of the stream
    std::optional<EventuallyPeriodicSeq> exact;   // set when the greedy expansion of 1 is finite
};

// Quasi-greedy expansion of 1: the greedy digits when the greedy expansion is
// infinite; otherwise greedy w_1...w_m converts to (w_1...w_{m-1}(w_m - 1))^inf.
inline QuasiGreedyResult quasi_greedy_of_one(const HighPrec& beta, std::size_t n) {
    if (beta <= 1) throw SchemaError("beta must exceed 1");
    const long long top = detail::floor_ll(beta);
    std::vector<Digit> digits;
    HighPrec r = 1;
    bool finite = false;
    std::size_t want = std::max<std::size_t>(n, 8);
    for (std::size_t i = 0; i < want; ++i) {
        const HighPrec v = beta * r;
        const long long k = detail::floor_ll(v);
        long long d;
        if (k >= top + 1) {
            d = top;
            r = v - top;
        } else {
            const HighPrec frac = v - k;
            if (frac < digit_tie_snap) {
                d = k;
                r = 0;
            } else if (frac > 1 - HighPrec(digit_tie_snap)) {
                if (k + 1 <= top) {
                    d = k + 1;
                    r = 0;
                } else {
                    d = top;
                    r = v - top;
                }
            } else if (frac < digit_tie_guard || frac > 1 - HighPrec(digit_tie_guard)) {
                throw PrecisionBreach("quasi-greedy digit " + std::to_string(i + 1) +
                                      " is within the tie guard");
            } else {
                d = k;
                r = v - k;
            }
        }
        digits.push_back(static_cast<Digit>(d));
        if (r == 0) {
            finite = true;
            break;
        }
    }
    QuasiGreedyResult out;
    if (finite) {
        // digits end with the last (nonzero) greedy digit
        std::vector<Digit> w = digits;
        while (!w.empty() && w.back() == 0) w.pop_back();
        if (w.empty()) throw PrecisionBreach("greedy expansion of 1 collapsed to zero");
        w.back() = static_cast<Digit>(w.back() - 1);
        out.exact = EventuallyPeriodicSeq::periodic(Word(std::move(w)));
        out.digits = out.exact->first(n);
    } else {
        out.digits = Word(digits).prefix(n);
    }
    return out;
}

// Unique beta > 1 with sum d_n beta^{-n} = 1, for a self-admissible
// presentation with infinitely many nonzero digits.
inline HighPrec beta_from_digits(const EventuallyPeriodicSeq& d);

struct SpecGap {
    std::size_t value = 0;
    bool exact = true;  // false: lower bound from a truncated stream
};

class BetaSpec {
public:
    // Reference mode: exact eventually periodic quasi-greedy presentation.
    static BetaSpec from_digits(const EventuallyPeriodicSeq& d) {
        const HighPrec beta = beta_from_digits(d);  // validates d
        BetaSpec spec;
        spec.beta_ = beta;
        spec.presentation_ = d;
        spec.alphabet_top_ = static_cast<Digit>(
            (d.preperiod().empty() && d.period().size() == 1) ? d.at(0) + 1 : d.at(0));
        spec.gap_ = spec.compute_gap();
        return spec;
    }

    // Numeric mode: digits computed under the tie guard. When the greedy
    // expansion of 1 terminates the presentation is exact and periodic,
    // otherwise a truncated stream of stream_digits digits is kept.
    static BetaSpec from_value(const HighPrec& beta, std::size_t stream_digits = 64) {
        BetaSpec spec;
        spec.beta_ = beta;
        spec.alphabet_top_ = static_cast<Digit>(detail::floor_ll(beta));
        QuasiGreedyResult qg = quasi_greedy_of_one(beta, stream_digits);
        if (qg.exact)
            spec.presentation_ = *qg.exact;
        else
            spec.presentation_ = qg.digits;
        spec.gap_ = spec.compute_gap();
        return spec;
    }
    static BetaSpec from_value(double beta, std::size_t stream_digits = 64) {
        return from_value(HighPrec(beta), stream_digits);
    }

    const HighPrec& beta() const { return beta_; }
    double beta_double() const { return beta_.convert_to<double>(); }
    Digit alphabet_top() const { return alphabet_top_; }
    SpecGap specification_gap() const { return gap_; }

    bool periodic_presentation() const {
        return std::holds_alternative<EventuallyPeriodicSeq>(presentation_);
    }
    const EventuallyPeriodicSeq& xbeta() const {
        if (!periodic_presentation())
            throw UnknownAtDepth(std::get<Word>(presentation_).size());
        return std::get<EventuallyPeriodicSeq>(presentation_);
    }
    // Digits of x^beta as far as the presentation reaches.
    std::size_t presentation_length() const {
        return periodic_presentation() ? xbeta().presentation_length()
                                       : std::get<Word>(presentation_).size();
    }
    Digit xbeta_digit(std::size_t i) const {
        if (periodic_presentation()) return xbeta().at(i);
        const Word& w = std::get<Word>(presentation_);
        if (i >= w.size()) throw UnknownAtDepth(w.size());
        return w[i];
    }
    std::string presentation_string() const {
        if (periodic_presentation()) return format_sequence(xbeta());
        return format_word(std::get<Word>(presentation_)) + "...";
    }

    // s <= x^beta as infinite sequences; UnknownAtDepth when a truncated
    // presentation runs out before the comparison is decided.
    Ordering compare_with_xbeta(const EventuallyPeriodicSeq& s) const {
        if (periodic_presentation()) return compare_sequences(s, xbeta());
        const Word& w = std::get<Word>(presentation_);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const Digit a = s.at(i), b = w[i];
            if (a < b) return Ordering::LT;
            if (a > b) return Ordering::GT;
        }
        throw UnknownAtDepth(w.size());
    }

    // Suffix criterion on w . 0^inf: every shift must stay <= x^beta.
    bool is_admissible_word(const Word& w) const {
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (w[j] == 0) continue;  // a zero head compares below x^beta_1 >= 1
            if (compare_with_xbeta(EventuallyPeriodicSeq::from_word(w.suffix_from(j))) == Ordering::GT)
                return false;
        }
        return true;
    }

    bool is_admissible_transpose(const Word& w) const { return is_admissible_word(w.reversed()); }

    bool is_admissible_word(const Word& w, bool transpose) const {
        return transpose ? is_admissible_transpose(w) : is_admissible_word(w);
    }

    // All shifts of an eventually periodic sequence against x^beta.
    bool is_admissible_seq(const EventuallyPeriodicSeq& s) const {
        EventuallyPeriodicSeq cur = s;
        const std::size_t n = s.presentation_length();
        for (std::size_t j = 0; j < n; ++j) {
            if (compare_with_xbeta(cur) == Ordering::GT) return false;
            cur = cur.shifted();
        }
        return true;
    }

    // Left extension of an already admissible word: only the new full-word
    // suffix needs checking.
    bool admits_left_extension(Digit a, const Word& w) const {
        return compare_with_xbeta(EventuallyPeriodicSeq::from_word(w.prepended(a))) != Ordering::GT;
    }

    // Depth-k cylinder pairs: (u, w) is jointly admissible iff the window
    // u_k ... u_1 w_1 ... w_k is an admissible word; deeper windows only add
    // leading zeros.
    bool is_bilateral_words(const Word& u, const Word& w) const {
        return is_admissible_word(u.reversed() + w);
    }

    // Window admissibility of a bilateral pair. The suffix set of the window
    // heads tau_{y,m}(x) is {tau_{y,i}(x) : i <= m} plus the shifts of x, so
    // it is enough that x is admissible and every head stays <= x^beta. For
    // m beyond the horizon the heads repeat reversed period blocks of y and
    // the comparisons replay decisions already made inside the horizon.
    bool is_bilateral(const BilateralPair& p, std::size_t window = 0) const {
        if (!is_admissible_seq(p.future)) return false;
        const std::size_t horizon = window ? window : bilateral_horizon(p);
        EventuallyPeriodicSeq head = p.future;
        for (std::size_t m = 1; m <= horizon; ++m) {
            head = head.prepended(p.past.at(m - 1));
            if (compare_with_xbeta(head) == Ordering::GT) return false;
        }
        return true;
    }

    std::size_t bilateral_horizon(const BilateralPair& p) const {
        const std::size_t q = p.past.period().size();
        const std::size_t xper = periodic_presentation() ? xbeta().period().size() : 1;
        const std::size_t probe = presentation_length() + std::lcm(q, xper) +
                                  p.future.presentation_length() + 4;
        return p.past.preperiod().size() + q * (2 + (probe + q - 1) / q);
    }

private:
    SpecGap compute_gap() const {
        std::size_t best = 0, run = 0;
        if (periodic_presentation()) {
            const EventuallyPeriodicSeq& x = xbeta();
            const std::size_t scan = x.preperiod().size() + 3 * x.period().size();
            for (std::size_t i = 0; i < scan; ++i) {
                run = x.at(i) == 0 ? run + 1 : 0;
                best = std::max(best, run);
            }
            return {best, true};
        }
        const Word& w = std::get<Word>(presentation_);
        for (std::size_t i = 0; i < w.size(); ++i) {
            run = w[i] == 0 ? run + 1 : 0;
            best = std::max(best, run);
        }
        return {best, false};
    }

    HighPrec beta_ = 2;
    std::variant<EventuallyPeriodicSeq, Word> presentation_;
    Digit alphabet_top_ = 1;
    SpecGap gap_;
};

// sum_n x_n beta^{-n}, evaluated in closed form.
inline HighPrec evaluate_beta_x(const EventuallyPeriodicSeq& x, const HighPrec& beta) {
    const std::size_t p = x.preperiod().size(), q = x.period().size();
    HighPrec pre = 0, pw = 1;
    for (std::size_t i = 0; i < p; ++i) {
        pw /= beta;
        pre += pw * x.at(i);
    }
    HighPrec per = 0, pw2 = 1;
    for (std::size_t j = 0; j < q; ++j) {
        pw2 /= beta;
        per += pw2 * x.at(p + j);
    }
    const HighPrec qinv = boost::multiprecision::pow(beta, -static_cast<int>(q));
    return pre + pw * per / (1 - qinv);
}

inline HighPrec evaluate_beta_x(const EventuallyPeriodicSeq& x, const BetaSpec& spec) {
    if (x.max_digit() > spec.alphabet_top())
        throw NotAdmissible("digit exceeds the alphabet bound in beta_x evaluation");
    return evaluate_beta_x(x, spec.beta());
}

inline HighPrec beta_from_digits(const EventuallyPeriodicSeq& d) {
    if (!d.has_nonzero_period())
        throw NotQuasiGreedy("finitely many nonzero digits in \"" + format_sequence(d) + "\"");
    // self-admissibility: every shift <= d
    {
        EventuallyPeriodicSeq cur = d.shifted();
        const std::size_t n = d.presentation_length();
        for (std::size_t j = 1; j <= n; ++j) {
            if (compare_sequences(cur, d) == Ordering::GT)
                throw NotQuasiGreedy("shift " + std::to_string(j) + " of \"" + format_sequence(d) +
                                     "\" exceeds the sequence");
            cur = cur.shifted();
        }
    }
    const Digit top = d.max_digit();
    if (d.preperiod().empty() && d.period().size() == 1) return HighPrec(static_cast<int>(top) + 1);

    HighPrec lo = 1 + HighPrec("1e-9"), hi = HighPrec(static_cast<int>(top) + 1);
    for (int it = 0; it < 220; ++it) {
        const HighPrec mid = (lo + hi) / 2;
        if (evaluate_beta_x(d, mid) > 1)
            lo = mid;
        else
            hi = mid;
    }
    const HighPrec beta = (lo + hi) / 2;

    // round-trip: the quasi-greedy stream of the recovered beta must
    // reproduce the presentation
    const std::size_t probe = d.presentation_length() + d.period().size() + 16;
    try {
        QuasiGreedyResult qg = quasi_greedy_of_one(beta, probe);
        if (qg.exact) {
            if (!(*qg.exact == d))
                throw NotQuasiGreedy("\"" + format_sequence(d) + "\" is not the quasi-greedy stream of its base");
        } else {
            for (std::size_t i = 0; i < probe; ++i)
                if (qg.digits[i] != d.at(i))
                    throw NotQuasiGreedy("digit " + std::to_string(i + 1) + " of \"" + format_sequence(d) +
                                         "\" disagrees with the quasi-greedy stream");
        }
    } catch (const PrecisionBreach&) {
        throw NotQuasiGreedy("round-trip of \"" + format_sequence(d) + "\" undecidable at working precision");
    }
    return beta;
}

inline constexpr std::size_t default_language_cap = 2'000'000;

// Lexicographically sorted admissible words of length n, grown by left
// extension (forward side) or taken as reversals (transpose side).
inline std::vector<Word> enumerate_language(std::size_t n, const BetaSpec& spec, bool transpose = false,
                                            std::size_t cap = default_language_cap) {
    if (n == 0) throw SchemaError("language depth must be positive");
    std::vector<Word> cur;
    for (Digit a = 0; a <= spec.alphabet_top(); ++a) {
        const Word w({static_cast<int>(a)});
        if (spec.is_admissible_word(w)) cur.push_back(w);
    }
    for (std::size_t len = 2; len <= n; ++len) {
        std::vector<Word> next;
        next.reserve(cur.size() * 2);
        for (const Word& w : cur)
            for (Digit a = 0; a <= spec.alphabet_top(); ++a)
                if (spec.admits_left_extension(a, w)) next.push_back(w.prepended(a));
        if (next.size() > cap)
            throw ResourceLimit("language at depth " + std::to_string(len) + " exceeds cap");
        cur = std::move(next);
    }
    if (transpose)
        for (Word& w : cur) w = w.reversed();
    std::sort(cur.begin(), cur.end());
    return cur;
}

// Depth-k cylinder index with the left-extension branch structure cached:
// edges[i] lists the digits a with a.w admissible and the index of the
// depth-k prefix of a.w, which is exactly the preimage branch set of the
// transfer operator.
class Language {
public:
    struct Edge {
        Digit digit;
        std::uint32_t target;  // index of prefix_k(a . w)
    };

    Language(const BetaSpec& spec, std::size_t depth, bool transpose = false)
        : depth_(depth), transpose_(transpose), words_(enumerate_language(depth, spec, transpose)) {
        for (std::uint32_t i = 0; i < words_.size(); ++i) index_[words_[i]] = i;
        edges_.resize(words_.size());
        for (std::uint32_t i = 0; i < words_.size(); ++i) {
            const Word& w = words_[i];
            for (Digit a = 0; a <= spec.alphabet_top(); ++a) {
                const Word ext = w.prepended(a);
                const bool ok = transpose_ ? spec.is_admissible_transpose(ext)
                                           : spec.admits_left_extension(a, w);
                if (!ok) continue;
                const auto it = index_.find(ext.prefix(depth_));
                if (it == index_.end())
                    throw NotAdmissible("factor closure violated for " + format_word(ext));
                edges_[i].push_back({a, it->second});
            }
        }
    }

    std::size_t depth() const { return depth_; }
    bool transpose() const { return transpose_; }
    std::size_t size() const { return words_.size(); }
    const std::vector<Word>& words() const { return words_; }
    const Word& word(std::size_t i) const { return words_[i]; }
    const std::vector<Edge>& edges(std::size_t i) const { return edges_[i]; }

    std::optional<std::uint32_t> index_of(const Word& w) const {
        const auto it = index_.find(w);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::uint32_t require_index(const Word& w) const {
        const auto it = index_.find(w);
        if (it == index_.end()) throw NotAdmissible("word " + format_word(w) + " not in the language");
        return it->second;
    }

private:
    std::size_t depth_;
    bool transpose_;
    std::vector<Word> words_;
    std::map<Word, std::uint32_t> index_;
    std::vector<std::vector<Edge>> edges_;
};

}  // namespace betatherm
