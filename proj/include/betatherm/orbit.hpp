// Brute-force ground truth for ergodic optimization: admissible periodic
// orbits up to a period bound, Birkhoff means, the maximizing mean with its
// argmax set and a uniqueness flag, and empirical orbit measures. The oracle
// certifies a lower bound on the maximizing value; the acceptance suites use
// potentials whose optimum is periodic, where it is exact.
#pragma once

#include <algorithm>
#include <vector>

#include "betatherm/potential.hpp"

namespace betatherm {

struct PeriodicOrbit {
    Word word;                   // primitive cycle, lexicographically minimal rotation
    double birkhoff_mean = 0.0;  // filled against a concrete potential

    std::size_t period() const { return word.size(); }
    EventuallyPeriodicSeq point() const { return EventuallyPeriodicSeq::periodic(word); }
};

inline constexpr std::size_t default_cycle_cap = 1'000'000;

inline double birkhoff_average(const Potential& a, const PeriodicOrbit& orbit) {
    if (a.side != Side::forward) throw SchemaError("orbit oracle works on forward potentials");
    EventuallyPeriodicSeq s = orbit.point();
    double sum = 0.0;
    for (std::size_t j = 0; j < orbit.period(); ++j) {
        sum += a.at_sequence(s);
        s = s.shifted();
    }
    return sum / static_cast<double>(orbit.period());
}

// All primitive admissible cycles of period <= p_max, each reported at its
// lexicographically minimal rotation. A cycle passes when the infinite
// repetition of every rotation stays below x^beta.
inline std::vector<PeriodicOrbit> enumerate_cycles(std::size_t p_max, const BetaSpec& spec,
                                                   std::size_t cap = default_cycle_cap) {
    if (p_max == 0) throw SchemaError("cycle period bound must be positive");
    const std::size_t base = static_cast<std::size_t>(spec.alphabet_top()) + 1;
    std::vector<PeriodicOrbit> out;
    for (std::size_t len = 1; len <= p_max; ++len) {
        std::vector<Digit> digits(len, 0);
        while (true) {
            const Word w{std::vector<Digit>(digits)};
            bool keep = w.is_primitive();
            for (std::size_t r = 1; keep && r < len; ++r)
                if (w.rotated_left(r) < w) keep = false;
            if (keep) {
                EventuallyPeriodicSeq s = EventuallyPeriodicSeq::periodic(w);
                for (std::size_t j = 0; keep && j < len; ++j) {
                    if (spec.compare_with_xbeta(s) == Ordering::GT) keep = false;
                    s = s.shifted();
                }
                if (keep) {
                    out.push_back({w, 0.0});
                    if (out.size() > cap) throw ResourceLimit("cycle enumeration exceeds cap");
                }
            }
            // odometer step
            std::size_t i = len;
            while (i > 0 && digits[i - 1] + 1u == base) digits[--i] = 0;
            if (i == 0) break;
            ++digits[i - 1];
        }
    }
    return out;
}

struct OrbitMax {
    double m = 0.0;
    std::vector<PeriodicOrbit> argmax;  // means within the tie threshold of the best
    bool unique = true;
};

inline constexpr double orbit_tie_threshold = 1e-12;

// Maximal Birkhoff mean over all enumerated cycles, with the full argmax set.
inline OrbitMax max_orbit_mean(const Potential& a, std::size_t p_max, const BetaSpec& spec) {
    std::vector<PeriodicOrbit> cycles = enumerate_cycles(p_max, spec);
    if (cycles.empty()) throw NotAdmissible("no admissible cycle up to the period bound");
    OrbitMax out;
    out.m = -std::numeric_limits<double>::infinity();
    for (PeriodicOrbit& c : cycles) {
        c.birkhoff_mean = birkhoff_average(a, c);
        out.m = std::max(out.m, c.birkhoff_mean);
    }
    for (const PeriodicOrbit& c : cycles)
        if (c.birkhoff_mean >= out.m - orbit_tie_threshold) out.argmax.push_back(c);
    out.unique = out.argmax.size() == 1;
    return out;
}

// Frequencies of the depth-k factors along one period: the shift-invariant
// measure of the cycle at cylinder resolution k.
inline CylinderMeasure empirical_orbit_measure(const PeriodicOrbit& orbit, std::size_t k) {
    if (k == 0) throw SchemaError("cylinder resolution must be positive");
    CylinderMeasure mu;
    mu.depth = k;
    EventuallyPeriodicSeq s = orbit.point();
    const double weight = 1.0 / static_cast<double>(orbit.period());
    for (std::size_t j = 0; j < orbit.period(); ++j) {
        mu.masses[s.first(k)] += weight;
        s = s.shifted();
    }
    return mu;
}

}  // namespace betatherm
