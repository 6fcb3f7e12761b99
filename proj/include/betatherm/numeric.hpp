// Small numeric helpers: stable log-sum-exp and the affine 1/t fit used by
// the zero-temperature extrapolations.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace betatherm {

inline constexpr double neg_infinity = -std::numeric_limits<double>::infinity();

inline double logsumexp(std::span<const double> xs) {
    double m = neg_infinity;
    for (double x : xs) m = std::max(m, x);
    if (m == neg_infinity) return neg_infinity;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

inline double logsumexp(const std::vector<double>& xs) {
    return logsumexp(std::span<const double>(xs));
}

// Incremental accumulator for logsumexp over a stream of terms.
class LogSumAcc {
public:
    void add(double x) { terms_.push_back(x); }
    double value() const { return logsumexp(terms_); }
    bool empty() const { return terms_.empty(); }

private:
    std::vector<double> terms_;
};

struct AffineFit {
    double intercept = 0.0;  // value at 1/t -> 0
    double slope = 0.0;      // coefficient of 1/t
    double residual = 0.0;   // max |fit - sample| over the fitted points
};

// Least-squares fit of value(t) = intercept + slope / t.
inline AffineFit affine_fit_in_inverse_t(std::span<const std::pair<double, double>> samples) {
    const std::size_t n = samples.size();
    AffineFit out;
    if (n == 0) return out;
    if (n == 1) {
        out.intercept = samples[0].second;
        return out;
    }
    double su = 0, suu = 0, sv = 0, suv = 0;
    for (const auto& [t, v] : samples) {
        const double u = 1.0 / t;
        su += u;
        suu += u * u;
        sv += v;
        suv += u * v;
    }
    const double det = static_cast<double>(n) * suu - su * su;
    if (det == 0.0) {
        out.intercept = sv / static_cast<double>(n);
    } else {
        out.slope = (static_cast<double>(n) * suv - su * sv) / det;
        out.intercept = (sv - out.slope * su) / static_cast<double>(n);
    }
    for (const auto& [t, v] : samples)
        out.residual = std::max(out.residual, std::abs(out.intercept + out.slope / t - v));
    return out;
}

}  // namespace betatherm
