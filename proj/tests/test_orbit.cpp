#include <catch2/catch_amalgamated.hpp>

#include "betatherm/orbit.hpp"
#include "betatherm/transfer.hpp"

using namespace betatherm;

namespace {

const BetaSpec& golden() {
    static const BetaSpec spec = BetaSpec::from_digits(parse_sequence("(10)"));
    return spec;
}
const BetaSpec& full2() {
    static const BetaSpec spec = BetaSpec::from_digits(parse_sequence("(1)"));
    return spec;
}

// primitive cycle counts through Moebius inversion of tr(T^n)
std::vector<std::size_t> necklace_counts(const std::vector<std::vector<long long>>& t, std::size_t n_max) {
    const std::size_t s = t.size();
    std::vector<long long> traces;  // tr(T^n), n = 1..n_max
    std::vector<std::vector<long long>> p = t;
    for (std::size_t n = 1; n <= n_max; ++n) {
        long long tr = 0;
        for (std::size_t i = 0; i < s; ++i) tr += p[i][i];
        traces.push_back(tr);
        std::vector<std::vector<long long>> q(s, std::vector<long long>(s, 0));
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t k = 0; k < s; ++k)
                for (std::size_t j = 0; j < s; ++j) q[i][j] += p[i][k] * t[k][j];
        p = q;
    }
    auto moebius = [](std::size_t n) {
        int m = 1;
        for (std::size_t f = 2; f * f <= n; ++f)
            if (n % f == 0) {
                n /= f;
                if (n % f == 0) return 0;
                m = -m;
            }
        if (n > 1) m = -m;
        return m;
    };
    std::vector<std::size_t> counts;
    for (std::size_t n = 1; n <= n_max; ++n) {
        long long c = 0;
        for (std::size_t d = 1; d <= n; ++d)
            if (n % d == 0) c += moebius(n / d) * traces[d - 1];
        counts.push_back(static_cast<std::size_t>(c / static_cast<long long>(n)));
    }
    return counts;
}

}  // namespace

TEST_CASE("cycle enumeration on the golden shift") {
    const auto c2 = enumerate_cycles(2, golden());
    REQUIRE(c2.size() == 2);
    CHECK(c2[0].word == Word{0});
    CHECK(c2[1].word == Word{0, 1});

    // counts per period match the necklace numbers of the presentation
    const auto expected = necklace_counts({{1, 1}, {1, 0}}, 8);
    for (std::size_t p = 1; p <= 8; ++p) {
        std::size_t count = 0;
        for (const auto& c : enumerate_cycles(p, golden()))
            if (c.period() == p) ++count;
        CHECK(count == expected[p - 1]);
    }
}

TEST_CASE("cycle enumeration on the full shift") {
    const auto c1 = enumerate_cycles(1, full2());
    REQUIRE(c1.size() == 2);
    CHECK(c1[0].word == Word{0});
    CHECK(c1[1].word == Word{1});
    // digit 2 is never admissible
    for (const auto& c : enumerate_cycles(5, full2())) CHECK(c.word.max_digit() <= 1);
}

TEST_CASE("birkhoff averages") {
    const Potential a = Potential::from_table(golden(), 1, {{Word{0}, -1.0}, {Word{1}, 0.0}});
    CHECK(birkhoff_average(a, {Word{0, 1}, 0.0}) == Catch::Approx(-0.5));
    CHECK(birkhoff_average(a, {Word{0}, 0.0}) == Catch::Approx(-1.0));
    // concatenation powers do not change the mean: evaluate on 001 vs 001001
    const Potential b = Potential::from_table(
        golden(), 2, {{parse_word("00"), 0.2}, {parse_word("01"), -0.4}, {parse_word("10"), 0.9}});
    const double m1 = birkhoff_average(b, {parse_word("001"), 0.0});
    EventuallyPeriodicSeq twice = EventuallyPeriodicSeq::periodic(parse_word("001001"));
    // the canonical form collapses the square to the primitive word
    CHECK(twice == EventuallyPeriodicSeq::periodic(parse_word("001")));
    CHECK(birkhoff_average(b, {parse_word("001"), 0.0}) == Catch::Approx(m1));
}

TEST_CASE("maximizing orbit means") {
    {
        const Potential a = Potential::from_table(full2(), 1, {{Word{0}, 0.0}, {Word{1}, -1.0}});
        const OrbitMax mx = max_orbit_mean(a, 6, full2());
        CHECK(mx.m == Catch::Approx(0.0).margin(1e-15));
        REQUIRE(mx.unique);
        CHECK(mx.argmax[0].word == Word{0});
    }
    {
        const Potential a = Potential::from_table(golden(), 1, {{Word{0}, -1.0}, {Word{1}, 0.0}});
        const OrbitMax mx = max_orbit_mean(a, 6, golden());
        CHECK(mx.m == Catch::Approx(-0.5));
        REQUIRE(mx.unique);
        CHECK(mx.argmax[0].word == Word{0, 1});  // the fixed point 1^inf is inadmissible
    }
    {
        const OrbitMax mx = max_orbit_mean(Potential::zero(golden(), 1), 6, golden());
        CHECK(mx.m == Catch::Approx(0.0).margin(1e-15));
        CHECK_FALSE(mx.unique);  // every cycle ties at a constant potential
        CHECK(mx.argmax.size() == enumerate_cycles(6, golden()).size());
    }
}

TEST_CASE("empirical orbit measures") {
    const PeriodicOrbit orb{Word{0, 1}, 0.0};
    const CylinderMeasure mu = empirical_orbit_measure(orb, 2);
    CHECK(mu(parse_word("01")) == Catch::Approx(0.5));
    CHECK(mu(parse_word("10")) == Catch::Approx(0.5));
    CHECK(mu.total() == Catch::Approx(1.0));

    const CylinderMeasure point = empirical_orbit_measure({Word{0}, 0.0}, 3);
    CHECK(point(parse_word("000")) == Catch::Approx(1.0));

    // periodic empirical measures are exactly shift invariant
    CHECK(invariance_check(mu, golden()) == 0.0);
    const CylinderMeasure mu3 = empirical_orbit_measure({parse_word("001"), 0.0}, 3);
    CHECK(invariance_check(mu3, golden()) == 0.0);
}

TEST_CASE("argmax empirical measure integrates the potential to the oracle value") {
    const Potential a = Potential::from_table(
        golden(), 2, {{parse_word("00"), -0.8}, {parse_word("01"), 0.25}, {parse_word("10"), 0.15}});
    const OrbitMax mx = max_orbit_mean(a, 8, golden());
    REQUIRE(mx.unique);
    const CylinderMeasure nu = empirical_orbit_measure(mx.argmax[0], 2);
    double integral = 0.0;
    for (const auto& [w, m] : nu.masses) integral += a(w) * m;
    CHECK(integral == Catch::Approx(mx.m).margin(1e-15));
}
