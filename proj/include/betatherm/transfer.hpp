// Cylinder-basis discretization of the weighted transfer operator, its
// adjoint on measures, and Perron eigendata by power iteration. Iterations
// run in the log domain so that sweeps at large inverse temperature neither
// overflow nor flush small eigenfunction entries to zero; SpectralTriple
// keeps both the linear and the log views.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "betatherm/numeric.hpp"
#include "betatherm/potential.hpp"

namespace betatherm {

inline constexpr double default_power_tol = 1e-12;
inline constexpr std::size_t default_power_max_iter = 100'000;

namespace detail {

inline void check_depths(const Potential& a, std::size_t k) {
    if (k < a.depth)
        throw DepthMismatch("cylinder depth " + std::to_string(k) + " below potential depth " +
                            std::to_string(a.depth));
}

// Weight of the preimage branch a.w: the potential at the depth-d prefix of
// the extended word.
inline double branch_weight(const Potential& a, const Word& w, Digit digit) {
    return a.at_prefix(w.prepended(digit));
}

// One application of the transfer operator in the log domain:
// (log L f)(w) = logsumexp over branches of (A(a.w) + logf(prefix_k(a.w))).
inline std::vector<double> log_apply(const Language& lang, const Potential& a,
                                     const std::vector<double>& logf) {
    std::vector<double> out(lang.size(), neg_infinity);
    std::vector<double> terms;
    for (std::size_t i = 0; i < lang.size(); ++i) {
        terms.clear();
        for (const auto& e : lang.edges(i))
            terms.push_back(branch_weight(a, lang.word(i), e.digit) + logf[e.target]);
        out[i] = logsumexp(terms);
    }
    return out;
}

// Adjoint in the log domain: mass flows along the reversed branches.
inline std::vector<double> log_apply_adjoint(const Language& lang, const Potential& a,
                                             const std::vector<double>& logm) {
    std::vector<std::vector<double>> terms(lang.size());
    for (std::size_t i = 0; i < lang.size(); ++i)
        for (const auto& e : lang.edges(i))
            terms[e.target].push_back(branch_weight(a, lang.word(i), e.digit) + logm[i]);
    std::vector<double> out(lang.size(), neg_infinity);
    for (std::size_t i = 0; i < lang.size(); ++i) out[i] = logsumexp(terms[i]);
    return out;
}

struct LogEigenResult {
    std::vector<double> log_vec;  // normalized: sup (forward) or total mass (adjoint) = 1
    double log_lambda = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;
    double cauchy_gap = 0.0;
};

// Normalized power iteration in the log domain. The iterated operator is
// L + cI with c tracking the eigenvalue estimate: the diagonal shift leaves
// the eigenvectors untouched and restores a spectral gap when the matrix
// approaches a pure cycle permutation at large inverse temperature, which
// would otherwise make the iterates oscillate with period two. Eigenvalue
// and residual are always measured against L itself.
template <typename Apply>
LogEigenResult log_power_iteration(std::size_t n, Apply&& apply, bool sup_normalize, double tol,
                                   std::size_t max_iter) {
    LogEigenResult r;
    r.log_vec.assign(n, 0.0);
    if (!sup_normalize) {
        const double s = std::log(static_cast<double>(n));
        for (double& v : r.log_vec) v = -s;
    }
    double log_shift_c = neg_infinity;  // no shift until a first estimate exists
    double prev = std::numeric_limits<double>::quiet_NaN();
    double prev2 = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const std::vector<double> raw = apply(r.log_vec);
        // Collatz bound as the eigenvalue estimate
        double log_lambda = neg_infinity;
        for (std::size_t i = 0; i < n; ++i) log_lambda = std::max(log_lambda, raw[i] - r.log_vec[i]);
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = raw[i] - log_lambda - r.log_vec[i];
            residual = std::max(residual, std::abs(std::expm1(delta)) * std::exp(r.log_vec[i]));
        }
        std::vector<double> mixed(n);
        for (std::size_t i = 0; i < n; ++i)
            mixed[i] = log_shift_c == neg_infinity
                           ? raw[i]
                           : logsumexp(std::vector<double>{raw[i], log_shift_c + r.log_vec[i]});
        double norm;
        if (sup_normalize) {
            norm = neg_infinity;
            for (double v : mixed) norm = std::max(norm, v);
        } else {
            norm = logsumexp(mixed);
        }
        for (std::size_t i = 0; i < n; ++i) r.log_vec[i] = mixed[i] - norm;
        r.log_lambda = log_lambda;
        r.iterations = it;
        r.residual = residual;
        const double gap = std::abs(log_lambda - prev);
        r.cauchy_gap = gap;
        if (it >= 3 && gap <= tol && residual <= tol) return r;
        if (it >= 64 && std::abs(log_lambda - prev2) < tol * 1e-2 && gap > 1e3 * tol)
            throw NonPrimitive("eigenvalue estimate alternates between " +
                               std::to_string(std::exp(prev)) + " and " +
                               std::to_string(std::exp(log_lambda)));
        prev2 = prev;
        prev = log_lambda;
        log_shift_c = log_lambda;
    }
    throw NoConvergence("power iteration spent " + std::to_string(max_iter) +
                        " iterations (residual " + std::to_string(r.residual) + ")");
}

}  // namespace detail

inline CylinderFunction apply_transfer(const Potential& a, const CylinderFunction& phi,
                                       const BetaSpec& spec) {
    detail::check_depths(a, phi.depth);
    const Language lang(spec, phi.depth, a.side == Side::transpose);
    CylinderFunction out;
    out.depth = phi.depth;
    for (std::size_t i = 0; i < lang.size(); ++i) {
        double s = 0.0;
        for (const auto& e : lang.edges(i))
            s += std::exp(detail::branch_weight(a, lang.word(i), e.digit)) * phi(lang.word(e.target));
        out.values[lang.word(i)] = s;
    }
    return out;
}

inline CylinderMeasure adjoint_apply(const Potential& a, const CylinderMeasure& m, const BetaSpec& spec) {
    detail::check_depths(a, m.depth);
    const Language lang(spec, m.depth, a.side == Side::transpose);
    CylinderMeasure out;
    out.depth = m.depth;
    for (const Word& w : lang.words()) out.masses[w] = 0.0;
    for (std::size_t i = 0; i < lang.size(); ++i)
        for (const auto& e : lang.edges(i))
            out.masses[lang.word(e.target)] +=
                std::exp(detail::branch_weight(a, lang.word(i), e.digit)) * m(lang.word(i));
    return out;
}

struct SpectralTriple {
    double lambda = 0.0;
    CylinderFunction psi;    // normalized: sum psi * rho = 1
    CylinderMeasure rho;     // total mass 1
    CylinderMeasure gibbs;   // psi * rho
    double t = 1.0;          // inverse temperature the potential was scaled by
    std::size_t iterations = 0;
    double residual = 0.0;
    double cauchy_gap = 0.0;
    double log_lambda = 0.0;
    CylinderFunction log_psi;  // log view; safe at large t
    CylinderFunction log_rho;
};

// Perron eigendata of the depth-k discretization: eigenfunction by forward
// iteration from the constant function, eigenmeasure by adjoint iteration,
// Gibbs state as the renormalized entrywise product.
inline SpectralTriple power_iteration(const Potential& a, const Language& lang,
                                      double tol = default_power_tol,
                                      std::size_t max_iter = default_power_max_iter) {
    const std::size_t depth = lang.depth();
    detail::check_depths(a, depth);
    const auto fwd = detail::log_power_iteration(
        lang.size(), [&](const std::vector<double>& v) { return detail::log_apply(lang, a, v); }, true,
        tol, max_iter);
    const auto adj = detail::log_power_iteration(
        lang.size(), [&](const std::vector<double>& v) { return detail::log_apply_adjoint(lang, a, v); },
        false, tol, max_iter);

    std::vector<double> log_psi = fwd.log_vec;
    std::vector<double> log_rho = adj.log_vec;
    // pin rho to total mass 1, then psi to integral 1 against rho
    {
        const double mass = logsumexp(log_rho);
        for (double& v : log_rho) v -= mass;
        std::vector<double> prod(log_psi.size());
        for (std::size_t i = 0; i < log_psi.size(); ++i) prod[i] = log_psi[i] + log_rho[i];
        const double integral = logsumexp(prod);
        for (double& v : log_psi) v -= integral;
    }

    SpectralTriple out;
    out.log_lambda = fwd.log_lambda;
    out.lambda = std::exp(fwd.log_lambda);
    out.iterations = fwd.iterations + adj.iterations;
    out.residual = std::max(fwd.residual, adj.residual);
    out.cauchy_gap = std::max(fwd.cauchy_gap, adj.cauchy_gap);
    out.psi.depth = out.log_psi.depth = depth;
    out.rho.depth = out.log_rho.depth = depth;
    out.gibbs.depth = depth;
    for (std::size_t i = 0; i < lang.size(); ++i) {
        const Word& w = lang.word(i);
        out.log_psi.values[w] = log_psi[i];
        out.log_rho.values[w] = log_rho[i];
        out.psi.values[w] = std::exp(log_psi[i]);
        out.rho.masses[w] = std::exp(log_rho[i]);
        out.gibbs.masses[w] = std::exp(log_psi[i] + log_rho[i]);
    }
    return out;
}

inline SpectralTriple power_iteration(const Potential& a, std::size_t depth, const BetaSpec& spec,
                                      double tol = default_power_tol,
                                      std::size_t max_iter = default_power_max_iter) {
    const Language lang(spec, depth, a.side == Side::transpose);
    return power_iteration(a, lang, tol, max_iter);
}

struct ConeReport {
    bool member = true;
    double worst_ratio = 0.0;  // max log-ratio over paired cylinders divided by K d^theta
};

// Membership in the ratio cone: after rescaling to sup 1, phi(x)/phi(y) must
// stay below e^{K d(x,y)^theta} whenever x and y carry the same one-digit
// extension branch set.
inline ConeReport cone_membership(const CylinderFunction& phi, double K, double theta,
                                  const BetaSpec& spec, bool transpose = false) {
    const Language lang(spec, phi.depth, transpose);
    std::vector<std::vector<Digit>> branch_sets(lang.size());
    for (std::size_t i = 0; i < lang.size(); ++i)
        for (const auto& e : lang.edges(i)) branch_sets[i].push_back(e.digit);

    double sup = 0.0;
    for (const auto& [w, v] : phi.values) {
        (void)w;
        if (v <= 0.0) throw SchemaError("cone membership needs a strictly positive function");
        sup = std::max(sup, v);
    }

    ConeReport rep;
    for (std::size_t i = 0; i < lang.size(); ++i)
        for (std::size_t j = i + 1; j < lang.size(); ++j) {
            if (branch_sets[i] != branch_sets[j]) continue;
            const double d = shift_metric(lang.word(i), lang.word(j));
            const double gap = std::abs(std::log(phi(lang.word(i))) - std::log(phi(lang.word(j))));
            const double bound = K * std::pow(d, theta);
            const double ratio = bound > 0.0 ? gap / bound
                                             : (gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            rep.worst_ratio = std::max(rep.worst_ratio, ratio);
        }
    rep.member = rep.worst_ratio <= 1.0 + 1e-12;
    return rep;
}

// Shift-invariance defect: max over coarser cylinders [w] of
// |mu(sigma^{-1}[w]) - mu([w])|.
inline double invariance_check(const CylinderMeasure& mu, const BetaSpec& spec, bool transpose = false) {
    if (mu.depth < 2) throw DepthMismatch("invariance check needs depth >= 2");
    const Language lang(spec, mu.depth, transpose);
    std::map<Word, double> preimage, direct;
    for (const Word& w : enumerate_language(mu.depth - 1, spec, transpose)) {
        preimage[w] = 0.0;
        direct[w] = 0.0;
    }
    for (const auto& [w, m] : mu.masses) {
        direct[w.prefix(mu.depth - 1)] += m;        // mu([w_1 ... w_{k-1}])
        preimage[w.suffix_from(1)] += m;            // [w] refines sigma^{-1}[w_2 ... w_k]
    }
    double defect = 0.0;
    for (const auto& [w, m] : direct) defect = std::max(defect, std::abs(preimage[w] - m));
    return defect;
}

}  // namespace betatherm
