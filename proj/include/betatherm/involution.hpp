// Involution kernel W, the transpose potential it induces, the duality
// identity tying the two transfer operators together, kernel-built
// eigenfunctions with their normalization constant, and the coupling measure
// on bilateral pairs with marginal checks.
//
// Side bookkeeping: a pair in the geometry of a forward potential is
// (y, x) with y listing the past (a transpose-side sequence) and x the
// future. For a transpose-side potential the roles mirror: its pasts are
// forward-side sequences, and a window is jointly admissible iff the
// mirrored pair passes the forward window check.
#pragma once

#include <cmath>
#include <utility>

#include "betatherm/numeric.hpp"
#include "betatherm/transfer.hpp"

namespace betatherm {

struct KernelSpec {
    EventuallyPeriodicSeq reference;  // x'; the zero sequence is always admissible
    std::size_t truncation = 0;       // N terms of the defining sum
    double tail_bound = 0.0;          // Hol_A * sum_{n > N} 2^{-theta n}
    bool exact = false;               // locally constant and N >= depth - 1

    // Exact kernel for a locally constant potential: terms beyond depth - 1
    // cancel because both tau-sequences share their leading digits.
    static KernelSpec exact_for(const Potential& a) {
        KernelSpec ks;
        ks.reference = EventuallyPeriodicSeq::zeros();
        ks.truncation = a.depth == 0 ? 0 : a.depth - 1;
        ks.tail_bound = 0.0;
        ks.exact = true;
        return ks;
    }

    static KernelSpec with_truncation(const Potential& a, std::size_t n) {
        KernelSpec ks;
        ks.reference = EventuallyPeriodicSeq::zeros();
        ks.truncation = n;
        if (n >= a.depth - 1) {
            ks.tail_bound = 0.0;
            ks.exact = true;
        } else {
            const double r = std::pow(2.0, -a.theta);
            ks.tail_bound = a.holder_const * std::pow(r, static_cast<double>(n) + 1.0) / (1.0 - r);
        }
        return ks;
    }
};

namespace detail {

inline bool pair_bilateral(const BetaSpec& spec, const EventuallyPeriodicSeq& y,
                           const EventuallyPeriodicSeq& x, Side side, std::size_t window = 0) {
    return side == Side::forward ? spec.is_bilateral({y, x}, window)
                                 : spec.is_bilateral({x, y}, window);
}

// Depth-k cylinder pair (u past, w future) in the geometry of the given side.
inline bool pair_bilateral_words(const BetaSpec& spec, const Word& u, const Word& w, Side side) {
    return side == Side::forward ? spec.is_admissible_word(u.reversed() + w)
                                 : spec.is_admissible_word(w.reversed() + u);
}

// Truncated kernel sum without the window check.
inline double kernel_sum(const Potential& a, const EventuallyPeriodicSeq& y,
                         const EventuallyPeriodicSeq& x, const KernelSpec& ks) {
    const std::size_t terms = std::min(ks.truncation, a.depth == 0 ? std::size_t{0} : a.depth - 1);
    double w = 0.0;
    for (std::size_t n = 1; n <= terms; ++n)
        w += a.at_sequence(tau_concat(y, n, x)) - a.at_sequence(tau_concat(y, n, ks.reference));
    return w;
}

}  // namespace detail

// W(y, x) = sum_{n >= 1} A(tau_{y,n}(x)) - A(tau_{y,n}(x')), truncated to the
// kernel spec; exact for locally constant potentials once the truncation
// reaches depth - 1.
inline double involution_kernel(const Potential& a, const EventuallyPeriodicSeq& y,
                                const EventuallyPeriodicSeq& x, const KernelSpec& ks,
                                const BetaSpec& spec) {
    if (!detail::pair_bilateral(spec, y, x, a.side))
        throw NotBilateral("kernel argument pair fails a window check");
    if (!(ks.reference == EventuallyPeriodicSeq::zeros()) &&
        !detail::pair_bilateral(spec, y, ks.reference, a.side))
        throw NotBilateral("kernel reference fails a window check against the past");
    return detail::kernel_sum(a, y, x, ks);
}

// Transpose potential induced by the kernel: a depth-d table over the other
// side with A^T(a y...) = A(a x...) + W(y, ax) - W(ay, x), computed with the
// zero filler and verified to be filler independent.
inline Potential transpose_potential(const Potential& a, const BetaSpec& spec, const KernelSpec& ks) {
    const Side out_side = a.side == Side::forward ? Side::transpose : Side::forward;
    const std::vector<Word> out_lang = enumerate_language(a.depth, spec, out_side == Side::transpose);
    const std::vector<Word> fillers = enumerate_language(a.depth, spec, a.side == Side::transpose);

    std::map<Word, double> table;
    const double slack = 2.0 * ks.tail_bound + 1e-12;
    for (const Word& z : out_lang) {
        const Digit head = z[0];
        const EventuallyPeriodicSeq y = EventuallyPeriodicSeq::from_word(z.suffix_from(1));
        const EventuallyPeriodicSeq ay = EventuallyPeriodicSeq::from_word(z);
        auto value = [&](const EventuallyPeriodicSeq& x) {
            const EventuallyPeriodicSeq ax = x.prepended(head);
            return a.at_sequence(ax) + detail::kernel_sum(a, y, ax, ks) -
                   detail::kernel_sum(a, ay, x, ks);
        };
        const double base = value(EventuallyPeriodicSeq::zeros());
        for (const Word& f : fillers) {
            const EventuallyPeriodicSeq x = EventuallyPeriodicSeq::from_word(f);
            if (!detail::pair_bilateral(spec, ay, x, a.side)) continue;
            const double v = value(x);
            if (std::abs(v - base) > slack)
                throw FillerDependence("transpose value at \"" + format_word(z) + "\" moved by " +
                                       std::to_string(std::abs(v - base)) + " across fillers");
        }
        table[z] = base;
    }
    return Potential::from_table(spec, a.depth, std::move(table), a.theta, out_side);
}

// |L_{A^T}(1 e^{W(., x)})(y) - L_A(1 e^{W(y, .)})(x)|; the window indicator
// kills non-bilateral branches on both sides.
inline double check_duality(const Potential& a, const Potential& at, const EventuallyPeriodicSeq& y,
                            const EventuallyPeriodicSeq& x, const BetaSpec& spec, const KernelSpec& ks) {
    if (!detail::pair_bilateral(spec, y, x, a.side))
        throw NotBilateral("duality check needs a bilateral pair");
    double lhs = 0.0, rhs = 0.0;
    for (Digit d = 0; d <= spec.alphabet_top(); ++d) {
        const EventuallyPeriodicSeq ay = y.prepended(d);
        if (detail::pair_bilateral(spec, ay, x, a.side))
            lhs += std::exp(at.at_sequence(ay) + detail::kernel_sum(a, ay, x, ks));
        const EventuallyPeriodicSeq ax = x.prepended(d);
        if (detail::pair_bilateral(spec, y, ax, a.side))
            rhs += std::exp(a.at_sequence(ax) + detail::kernel_sum(a, y, ax, ks));
    }
    return std::abs(lhs - rhs);
}

inline double check_duality(const Potential& a, const EventuallyPeriodicSeq& y,
                            const EventuallyPeriodicSeq& x, const BetaSpec& spec,
                            const KernelSpec& ks) {
    return check_duality(a, transpose_potential(a, spec, ks), y, x, spec, ks);
}

// c_A = log of the bilateral pair sum of e^W against the two eigenmeasures,
// evaluated in the log domain at depth-k representatives.
inline double normalization_constant(const Potential& a, const SpectralTriple& own,
                                     const SpectralTriple& other, std::size_t depth,
                                     const BetaSpec& spec, const KernelSpec& ks) {
    if (own.rho.depth != depth || other.rho.depth != depth)
        throw DepthMismatch("normalization constant needs triples at the requested depth");
    LogSumAcc acc;
    for (const auto& [u, log_rho_t] : other.log_rho.values)
        for (const auto& [w, log_rho] : own.log_rho.values) {
            if (!detail::pair_bilateral_words(spec, u, w, a.side)) continue;
            const double kw = detail::kernel_sum(a, EventuallyPeriodicSeq::from_word(u),
                                                 EventuallyPeriodicSeq::from_word(w), ks);
            acc.add(kw + log_rho_t + log_rho);
        }
    if (acc.empty()) throw NotBilateral("no bilateral pair at depth " + std::to_string(depth));
    return acc.value();
}

struct KernelEigenfunction {
    CylinderFunction psi;      // normalized: integral against rho equals 1
    CylinderFunction log_psi;
    double c = 0.0;            // the normalization constant used
    double residual = 0.0;     // sup |log(L psi) - log lambda - log psi|
};

// psi(w) = sum over bilateral pasts of e^{W(u, w) - c_A} rho^T(u): an
// eigenfunction of the depth-k discretized operator, checked against the
// power-iteration eigenvalue.
inline KernelEigenfunction eigenfunction_from_kernel(const Potential& a, const SpectralTriple& own,
                                                     const SpectralTriple& other, const KernelSpec& ks,
                                                     std::size_t depth, const BetaSpec& spec,
                                                     double mismatch_tol = 1e-8) {
    const double c = normalization_constant(a, own, other, depth, spec, ks);
    const Language lang(spec, depth, a.side == Side::transpose);

    KernelEigenfunction out;
    out.c = c;
    out.psi.depth = out.log_psi.depth = depth;
    std::vector<double> logpsi(lang.size(), neg_infinity);
    for (std::size_t i = 0; i < lang.size(); ++i) {
        const Word& w = lang.word(i);
        LogSumAcc acc;
        for (const auto& [u, log_rho_t] : other.log_rho.values) {
            if (!detail::pair_bilateral_words(spec, u, w, a.side)) continue;
            acc.add(detail::kernel_sum(a, EventuallyPeriodicSeq::from_word(u),
                                       EventuallyPeriodicSeq::from_word(w), ks) +
                    log_rho_t);
        }
        logpsi[i] = acc.empty() ? neg_infinity : acc.value() - c;
    }

    const std::vector<double> image = detail::log_apply(lang, a, logpsi);
    for (std::size_t i = 0; i < lang.size(); ++i)
        out.residual = std::max(out.residual, std::abs(image[i] - own.log_lambda - logpsi[i]));
    if (out.residual > mismatch_tol + ks.tail_bound)
        throw EigenMismatch("kernel eigenfunction residual " + std::to_string(out.residual));

    double norm = neg_infinity;
    {
        LogSumAcc acc;
        for (std::size_t i = 0; i < lang.size(); ++i)
            acc.add(logpsi[i] + own.log_rho.values.at(lang.word(i)));
        norm = acc.value();
    }
    if (std::abs(norm) > 1e-10)
        throw EigenMismatch("kernel eigenfunction integral against rho is off by " +
                            std::to_string(std::expm1(norm)));

    for (std::size_t i = 0; i < lang.size(); ++i) {
        out.log_psi.values[lang.word(i)] = logpsi[i];
        out.psi.values[lang.word(i)] = std::exp(logpsi[i]);
    }
    return out;
}

struct CouplingMeasure {
    std::size_t depth = 1;
    std::map<std::pair<Word, Word>, double> masses;  // (past word, future word)
    double c = 0.0;

    double total() const {
        double s = 0.0;
        for (const auto& [k, m] : masses) {
            (void)k;
            s += m;
        }
        return s;
    }
};

// mu_hat = e^{W - c_A} d(rho^T x rho) restricted to bilateral pairs.
inline CouplingMeasure coupling_measure(const Potential& a, const SpectralTriple& own,
                                        const SpectralTriple& other, const KernelSpec& ks,
                                        std::size_t depth, const BetaSpec& spec) {
    CouplingMeasure cm;
    cm.depth = depth;
    cm.c = normalization_constant(a, own, other, depth, spec, ks);
    for (const auto& [u, log_rho_t] : other.log_rho.values)
        for (const auto& [w, log_rho] : own.log_rho.values) {
            if (!detail::pair_bilateral_words(spec, u, w, a.side)) continue;
            const double kw = detail::kernel_sum(a, EventuallyPeriodicSeq::from_word(u),
                                                 EventuallyPeriodicSeq::from_word(w), ks);
            cm.masses[{u, w}] = std::exp(kw + log_rho_t + log_rho - cm.c);
        }
    return cm;
}

// Sup-distance of the coupling marginals from the two reference measures:
// (past defect, future defect).
inline std::pair<double, double> check_marginals(const CouplingMeasure& cm, const CylinderMeasure& mu_t,
                                                 const CylinderMeasure& mu) {
    if (mu_t.depth != cm.depth || mu.depth != cm.depth)
        throw DepthMismatch("marginal check needs equal depths");
    std::map<Word, double> past, future;
    for (const auto& [uw, m] : cm.masses) {
        past[uw.first] += m;
        future[uw.second] += m;
    }
    double dp = 0.0, df = 0.0;
    for (const auto& [u, m] : mu_t.masses) dp = std::max(dp, std::abs(m - past[u]));
    for (const auto& [w, m] : mu.masses) df = std::max(df, std::abs(m - future[w]));
    for (const auto& [u, m] : past)
        if (!mu_t.masses.count(u)) dp = std::max(dp, m);
    for (const auto& [w, m] : future)
        if (!mu.masses.count(w)) df = std::max(df, m);
    return {dp, df};
}

}  // namespace betatherm
