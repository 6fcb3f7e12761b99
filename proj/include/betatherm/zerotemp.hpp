// The large inverse-temperature sweep and everything extracted from it:
// eigenvalue limits, calibrated sub-actions on both sides, the constant gamma
// by two independent routes, the rate function with its minus-infinity flag,
// the F_k family on bilateral pairs, and cylinder-level decay limits.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "betatherm/involution.hpp"
#include "betatherm/numeric.hpp"
#include "betatherm/orbit.hpp"

namespace betatherm {

inline constexpr double default_tol_zero = 1e-9;       // per-period defect treated as zero
inline constexpr double default_fit_bound = 5e-2;      // extrapolation residual guard
inline constexpr double default_oracle_tol = 1e-6;
inline constexpr double default_transpose_tol = 1e-8;
inline constexpr double default_gamma_tol = 1e-3;
inline constexpr double default_support_floor = 1e-3;  // coupling mass floor at t_max

struct TemperatureGrid {
    std::vector<double> values;

    TemperatureGrid() = default;
    explicit TemperatureGrid(std::vector<double> v) : values(std::move(v)) {
        if (values.empty()) throw SchemaError("temperature grid is empty");
        if (values.front() <= 1.0) throw SchemaError("temperature grid must start above 1");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] <= values[i - 1]) throw SchemaError("temperature grid must increase strictly");
    }

    static TemperatureGrid geometric(double start = 2.0, double stop = 256.0, double factor = 2.0) {
        if (factor <= 1.0) throw SchemaError("geometric grid needs factor > 1");
        std::vector<double> v;
        for (double t = start; t <= stop * (1.0 + 1e-12); t *= factor) v.push_back(t);
        return TemperatureGrid(std::move(v));
    }

    double t_max() const { return values.back(); }
};

struct ExtrapolationResult {
    double limit = 0.0;
    double residual = 0.0;
};

// Affine fit value(t) = limit + c/t over the last half of the samples.
inline ExtrapolationResult extrapolate_limit(const std::vector<std::pair<double, double>>& samples,
                                             double residual_bound = default_fit_bound) {
    if (samples.size() < 3) throw SchemaError("extrapolation needs at least 3 samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].first <= samples[i - 1].first)
            throw SchemaError("extrapolation samples must increase in t");
    const std::size_t from = samples.size() / 2;
    const AffineFit fit = affine_fit_in_inverse_t(
        std::span<const std::pair<double, double>>(samples.data() + from, samples.size() - from));
    if (fit.residual > residual_bound)
        throw IllConditioned("fit residual " + std::to_string(fit.residual) + " exceeds bound " +
                             std::to_string(residual_bound));
    return {fit.intercept, fit.residual};
}

struct PerTemperature {
    double t = 1.0;
    SpectralTriple forward;
    SpectralTriple transpose;
    double log_lambda_over_t = 0.0;
    double log_lambda_transpose_over_t = 0.0;
    double c = 0.0;  // normalization constant of the scaled potential
    double c_over_t = 0.0;
};

struct GammaEstimate {
    double value = 0.0;           // the direct sup, used downstream
    double from_c_rate = 0.0;     // extrapolated c_t / t
    double fit_residual = 0.0;
    Word argmax_past, argmax_future;
    double argmax_coupling_mass = 0.0;  // mass the argmax pair carries at t_max
};

struct ZeroTempReport {
    std::size_t depth = 1;
    TemperatureGrid grid;
    Potential a;            // the unscaled potential
    Potential a_transpose;  // its kernel-induced transpose
    KernelSpec ks;
    std::vector<PerTemperature> per_t;

    double m = 0.0;
    ExtrapolationResult m_fit, m_transpose_fit;
    CylinderFunction V, V_transpose;
    double calibration_defect = 0.0, calibration_defect_transpose = 0.0;
    GammaEstimate gamma;
    std::optional<OrbitMax> oracle;
};

// Per-temperature pipeline: spectral data on both sides plus the kernel
// normalization constant, everything carried in the log domain.
inline ZeroTempReport sweep(const Potential& a, const TemperatureGrid& grid, std::size_t depth,
                            const BetaSpec& spec, double tol = default_power_tol,
                            std::size_t max_iter = default_power_max_iter) {
    if (a.side != Side::forward) throw SchemaError("the sweep expects a forward-side potential");
    ZeroTempReport rep;
    rep.depth = depth;
    rep.grid = grid;
    rep.a = a;
    rep.ks = KernelSpec::exact_for(a);
    rep.a_transpose = transpose_potential(a, spec, rep.ks);

    const Language lang_f(spec, depth, false);
    const Language lang_t(spec, depth, true);
    for (double t : grid.values) {
        PerTemperature pt;
        pt.t = t;
        const Potential at = a.scaled(t);
        const Potential att = rep.a_transpose.scaled(t);
        try {
            pt.forward = power_iteration(at, lang_f, tol, max_iter);
            pt.transpose = power_iteration(att, lang_t, tol, max_iter);
        } catch (const NoConvergence& e) {
            throw NoConvergence("t = " + std::to_string(t) + ": " + e.what());
        }
        pt.forward.t = pt.transpose.t = t;
        pt.log_lambda_over_t = pt.forward.log_lambda / t;
        pt.log_lambda_transpose_over_t = pt.transpose.log_lambda / t;
        pt.c = normalization_constant(at, pt.forward, pt.transpose, depth, spec,
                                      KernelSpec::exact_for(at));
        pt.c_over_t = pt.c / t;
        rep.per_t.push_back(std::move(pt));
    }
    return rep;
}

// (1/t) log psi_t as a cylinder function.
inline CylinderFunction per_t_subaction(const PerTemperature& pt, Side side) {
    const SpectralTriple& tr = side == Side::forward ? pt.forward : pt.transpose;
    CylinderFunction v;
    v.depth = tr.log_psi.depth;
    for (const auto& [w, lp] : tr.log_psi.values) v.values[w] = lp / pt.t;
    return v;
}

// Extrapolated limit of (1/t) log lambda_t; checks the transpose route and
// the periodic-orbit oracle.
inline double maximizing_value(ZeroTempReport& rep, const BetaSpec& spec,
                               std::size_t p_max = 0, double oracle_tol = default_oracle_tol,
                               double transpose_tol = default_transpose_tol,
                               double fit_bound = default_fit_bound) {
    std::vector<std::pair<double, double>> fwd, trans;
    for (const PerTemperature& pt : rep.per_t) {
        fwd.emplace_back(pt.t, pt.log_lambda_over_t);
        trans.emplace_back(pt.t, pt.log_lambda_transpose_over_t);
    }
    rep.m_fit = extrapolate_limit(fwd, fit_bound);
    rep.m_transpose_fit = extrapolate_limit(trans, fit_bound);
    rep.m = rep.m_fit.limit;
    if (std::abs(rep.m_fit.limit - rep.m_transpose_fit.limit) > transpose_tol)
        throw EstimateDivergence("forward and transpose eigenvalue routes give " +
                                 std::to_string(rep.m_fit.limit) + " vs " +
                                 std::to_string(rep.m_transpose_fit.limit));
    if (p_max == 0) p_max = rep.a.depth + spec.presentation_length() + 4;
    rep.oracle = max_orbit_mean(rep.a, p_max, spec);
    if (std::abs(rep.m - rep.oracle->m) > oracle_tol)
        throw OracleMismatch("eigenvalue route " + std::to_string(rep.m) + " vs orbit oracle " +
                             std::to_string(rep.oracle->m));
    return rep.m;
}

// Per-cylinder extrapolation of (1/t) log psi_t on both sides.
inline std::pair<CylinderFunction, CylinderFunction> calibrated_subactions(
    ZeroTempReport& rep, double fit_bound = default_fit_bound) {
    auto build = [&](Side side) {
        CylinderFunction v;
        v.depth = rep.depth;
        const CylinderFunction& keys = side == Side::forward ? rep.per_t.front().forward.log_psi
                                                             : rep.per_t.front().transpose.log_psi;
        for (const auto& [w, unused] : keys.values) {
            (void)unused;
            std::vector<std::pair<double, double>> samples;
            for (const PerTemperature& pt : rep.per_t) {
                const SpectralTriple& tr = side == Side::forward ? pt.forward : pt.transpose;
                samples.emplace_back(pt.t, tr.log_psi.values.at(w) / pt.t);
            }
            v.values[w] = extrapolate_limit(samples, fit_bound).limit;
        }
        return v;
    };
    rep.V = build(Side::forward);
    rep.V_transpose = build(Side::transpose);
    return {rep.V, rep.V_transpose};
}

// Calibration defect: max over depth-k cylinders of
// |m - (max_a {A(a.w) + V(a.w)} - V(w))|.
inline double check_calibration(const CylinderFunction& v, const Potential& a, double m,
                                const BetaSpec& spec, std::size_t depth) {
    if (v.depth != depth) throw DepthMismatch("sub-action depth disagrees with the requested depth");
    const Language lang(spec, depth, a.side == Side::transpose);
    double defect = 0.0;
    for (std::size_t i = 0; i < lang.size(); ++i) {
        double best = neg_infinity;
        for (const auto& e : lang.edges(i)) {
            const Word ext = lang.word(i).prepended(e.digit);
            best = std::max(best, a.at_prefix(ext) + v(lang.word(e.target)));
        }
        defect = std::max(defect, std::abs(m - (best - v(lang.word(i)))));
    }
    return defect;
}

// gamma two ways: the extrapolated growth rate of c_t, and the direct sup of
// W - V - V^T over bilateral depth-k pairs. Ties in the direct sup break
// toward the pair carrying the most coupling mass at t_max, which is also
// the support witness reported.
inline GammaEstimate gamma_estimate(ZeroTempReport& rep, const BetaSpec& spec,
                                    double agreement_tol = default_gamma_tol,
                                    double fit_bound = default_fit_bound) {
    if (rep.V.values.empty() || rep.V_transpose.values.empty())
        throw SchemaError("gamma needs the calibrated sub-actions first");
    GammaEstimate g;
    {
        std::vector<std::pair<double, double>> samples;
        for (const PerTemperature& pt : rep.per_t) samples.emplace_back(pt.t, pt.c_over_t);
        const ExtrapolationResult fit = extrapolate_limit(samples, fit_bound);
        g.from_c_rate = fit.limit;
        g.fit_residual = fit.residual;
    }

    const PerTemperature& last = rep.per_t.back();
    const CouplingMeasure coupling = coupling_measure(rep.a.scaled(last.t), last.forward,
                                                      last.transpose, KernelSpec::exact_for(rep.a),
                                                      rep.depth, spec);
    double best = neg_infinity;
    for (const auto& [uw, unused] : coupling.masses) {
        (void)unused;
        const auto& [u, w] = uw;
        const double value = detail::kernel_sum(rep.a, EventuallyPeriodicSeq::from_word(u),
                                                EventuallyPeriodicSeq::from_word(w), rep.ks) -
                             rep.V(w) - rep.V_transpose(u);
        best = std::max(best, value);
    }
    double best_mass = -1.0;
    for (const auto& [uw, mass] : coupling.masses) {
        const auto& [u, w] = uw;
        const double value = detail::kernel_sum(rep.a, EventuallyPeriodicSeq::from_word(u),
                                                EventuallyPeriodicSeq::from_word(w), rep.ks) -
                             rep.V(w) - rep.V_transpose(u);
        if (value >= best - 1e-9 && mass > best_mass) {
            best_mass = mass;
            g.argmax_past = u;
            g.argmax_future = w;
        }
    }
    g.value = best;
    g.argmax_coupling_mass = best_mass;
    if (std::abs(g.value - g.from_c_rate) > agreement_tol)
        throw EstimateDivergence("gamma routes disagree: direct " + std::to_string(g.value) +
                                 " vs c-rate " + std::to_string(g.from_c_rate));
    rep.gamma = g;
    return g;
}

struct RateValue {
    bool finite = false;
    double value = 0.0;  // meaningful only when finite

    static RateValue minus_infinity() { return {false, 0.0}; }
    static RateValue of(double v) { return {true, v}; }
};

// I(x) for an eventually periodic point: the finite preperiod sum plus the
// per-period defect, which must vanish (within tol_zero) for a finite value.
inline RateValue rate_function(const EventuallyPeriodicSeq& x, const CylinderFunction& v,
                               const Potential& a, double m, const BetaSpec& spec,
                               std::size_t k_max = 4096, double tol_zero = default_tol_zero) {
    if (!spec.is_admissible_seq(x)) throw NotAdmissible("rate function argument");
    const std::size_t p = x.preperiod().size(), q = x.period().size();
    if (p + q > k_max)
        throw SchemaError("evaluation window k_max is shorter than the presentation of x");

    double cycle = 0.0;  // per-period defect of the partial sums: sum (A - m)
    {
        EventuallyPeriodicSeq s = x.shifted(p);
        for (std::size_t j = 0; j < q; ++j) {
            cycle += a.at_sequence(s) - m;
            s = s.shifted();
        }
    }
    if (cycle < -tol_zero) return RateValue::minus_infinity();
    if (cycle > tol_zero)
        throw OracleMismatch("periodic tail of x beats the maximizing value by " +
                             std::to_string(cycle));

    double sum = 0.0;  // sum of (V o sigma - V - A + m) over the preperiod
    EventuallyPeriodicSeq s = x;
    for (std::size_t j = 0; j < p; ++j) {
        const EventuallyPeriodicSeq next = s.shifted();
        sum += v.at_sequence(next) - v.at_sequence(s) - a.at_sequence(s) + m;
        s = next;
    }
    return RateValue::of(-sum);
}

// F_k on a bilateral pair, all ingredients taken from the finished report.
inline double evaluate_F_k(const BilateralPair& pair, std::size_t k, const ZeroTempReport& rep,
                           const BetaSpec& spec) {
    if (!spec.is_bilateral(pair)) throw NotBilateral("F_k argument pair");
    const EventuallyPeriodicSeq& y = pair.past;
    const EventuallyPeriodicSeq& x = pair.future;
    double f = -rep.gamma.value + detail::kernel_sum(rep.a, y, x, rep.ks) - rep.V.at_sequence(x) -
               rep.V_transpose.at_sequence(y);
    for (std::size_t j = 0; j < k; ++j) {
        const EventuallyPeriodicSeq cur = tau_concat(x, j + 1, y);
        const EventuallyPeriodicSeq nxt = tau_concat(x, j, y);  // sigma of cur
        f -= rep.V_transpose.at_sequence(nxt) - rep.V_transpose.at_sequence(cur) -
             rep.a_transpose.at_sequence(cur) + rep.m;
    }
    return f;
}

// Natural extension of the rate function, evaluated through the telescoped
// kernel formula; the boundary term must settle at gamma.
inline RateValue rate_function_bilateral(const BilateralPair& pair, const ZeroTempReport& rep,
                                         const BetaSpec& spec, std::size_t k_max = 64,
                                         double tol = 1e-6) {
    if (!spec.is_bilateral(pair)) throw NotBilateral("natural-extension argument pair");
    const RateValue ix = rate_function(pair.future, rep.V, rep.a, rep.m, spec);
    if (!ix.finite) return RateValue::minus_infinity();

    const BilateralPair end = bilateral_shift(pair, k_max);
    const double boundary = detail::kernel_sum(rep.a, end.past, end.future, rep.ks) -
                            rep.V.at_sequence(end.future) - rep.V_transpose.at_sequence(end.past);
    if (std::abs(boundary - rep.gamma.value) > tol)
        throw BoundaryDivergence("boundary term " + std::to_string(boundary) + " vs gamma " +
                                 std::to_string(rep.gamma.value) + " at k = " + std::to_string(k_max));

    double value = -boundary + detail::kernel_sum(rep.a, pair.past, pair.future, rep.ks) -
                   rep.V.at_sequence(pair.future) - rep.V_transpose.at_sequence(pair.past);
    for (std::size_t j = 0; j < k_max; ++j) {
        const EventuallyPeriodicSeq cur = tau_concat(pair.future, j + 1, pair.past);
        const EventuallyPeriodicSeq nxt = tau_concat(pair.future, j, pair.past);
        value -= rep.V_transpose.at_sequence(nxt) - rep.V_transpose.at_sequence(cur) -
                 rep.a_transpose.at_sequence(cur) + rep.m;
    }
    if (std::abs(value - ix.value) > tol)
        throw EstimateDivergence("natural extension " + std::to_string(value) +
                                 " disagrees with I(x) = " + std::to_string(ix.value));
    return RateValue::of(value);
}

struct ZeroTempOptions {
    double power_tol = default_power_tol;
    std::size_t max_iter = default_power_max_iter;
    double fit_bound = default_fit_bound;
    double oracle_tol = default_oracle_tol;
    double transpose_tol = default_transpose_tol;
    double gamma_tol = default_gamma_tol;
    std::size_t p_max = 0;  // 0: derived from depth and presentation length
    double tol_zero = default_tol_zero;
};

// The full pipeline: sweep, eigenvalue limits, sub-actions, calibration
// defects on both sides, gamma.
inline ZeroTempReport run_zero_temperature(const Potential& a, const TemperatureGrid& grid,
                                           std::size_t depth, const BetaSpec& spec,
                                           const ZeroTempOptions& opt = {}) {
    ZeroTempReport rep = sweep(a, grid, depth, spec, opt.power_tol, opt.max_iter);
    maximizing_value(rep, spec, opt.p_max, opt.oracle_tol, opt.transpose_tol, opt.fit_bound);
    calibrated_subactions(rep, opt.fit_bound);
    rep.calibration_defect = check_calibration(rep.V, rep.a, rep.m, spec, depth);
    rep.calibration_defect_transpose =
        check_calibration(rep.V_transpose, rep.a_transpose, rep.m, spec, depth);
    gamma_estimate(rep, spec, opt.gamma_tol, opt.fit_bound);
    return rep;
}

struct LdpResult {
    double empirical_limit = 0.0;
    double sup_I = 0.0;
    double gap = 0.0;
    EventuallyPeriodicSeq witness;
    bool unique_maximizer = true;
    std::vector<std::pair<double, double>> series;  // (t, (1/t) log mu_t([w]))
};

// Cylinder decay rate two ways: the extrapolated Gibbs masses against the
// sup of the rate function over closures of w into the maximizing orbit.
inline LdpResult ldp_cylinder_limit(const Word& w, const ZeroTempReport& rep, const BetaSpec& spec,
                                    double fit_bound = default_fit_bound) {
    if (!spec.is_admissible_word(w)) throw NotAdmissible("cylinder word " + format_word(w));
    if (w.size() > rep.depth) throw DepthMismatch("cylinder finer than the report depth");
    if (!rep.oracle) throw SchemaError("run maximizing_value before the cylinder limits");

    LdpResult out;
    out.unique_maximizer = rep.oracle->unique;

    for (const PerTemperature& pt : rep.per_t) {
        LogSumAcc acc;
        for (const auto& [word, lp] : pt.forward.log_psi.values)
            if (word.prefix(w.size()) == w) acc.add(lp + pt.forward.log_rho.values.at(word));
        if (acc.empty()) throw NotAdmissible("cylinder has no admissible refinement");
        out.series.emplace_back(pt.t, acc.value() / pt.t);
    }
    out.empirical_limit = extrapolate_limit(out.series, fit_bound).limit;

    // candidate family: w . bridge . (rotation of an argmax cycle)^inf, with
    // the zero fixed point always among the closures
    double sup = neg_infinity;
    std::vector<Word> cycles;
    for (const PeriodicOrbit& orb : rep.oracle->argmax) cycles.push_back(orb.word);
    if (std::find(cycles.begin(), cycles.end(), Word{0}) == cycles.end()) cycles.push_back(Word{0});
    std::size_t max_period = 1;
    for (const Word& c : cycles) max_period = std::max(max_period, c.size());
    const std::size_t bridge_len = 2 * (spec.specification_gap().value + max_period);
    std::vector<Word> bridges{Word{}};
    for (std::size_t n = 1; n <= bridge_len; ++n)
        for (const Word& b : enumerate_language(n, spec)) bridges.push_back(b);

    for (const Word& c : cycles)
        for (std::size_t r = 0; r < c.size(); ++r) {
            const Word rot = c.rotated_left(r);
            for (const Word& b : bridges) {
                EventuallyPeriodicSeq cand(w + b, rot);
                if (!spec.is_admissible_seq(cand)) continue;
                const RateValue iv = rate_function(cand, rep.V, rep.a, rep.m, spec);
                if (iv.finite && iv.value > sup) {
                    sup = iv.value;
                    out.witness = cand;
                }
            }
        }
    out.sup_I = sup;
    out.gap = std::abs(out.empirical_limit - out.sup_I);
    return out;
}

}  // namespace betatherm
