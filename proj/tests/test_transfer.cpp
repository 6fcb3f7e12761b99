#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <random>

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

Potential depth1(const BetaSpec& spec, double a0, double a1) {
    return Potential::from_table(spec, 1, {{Word{0}, a0}, {Word{1}, a1}});
}

// Perron root through Eigen's dense eigensolver, on the matrix assembled by
// applying the operator to indicator functions.
double dense_perron_root(const Potential& a, std::size_t depth, const BetaSpec& spec) {
    const Language lang(spec, depth, a.side == Side::transpose);
    const std::size_t n = lang.size();
    Eigen::MatrixXd m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        CylinderFunction e;
        e.depth = depth;
        for (std::size_t i = 0; i < n; ++i) e.values[lang.word(i)] = i == j ? 1.0 : 0.0;
        const CylinderFunction col = apply_transfer(a, e, spec);
        for (std::size_t i = 0; i < n; ++i) m(i, j) = col(lang.word(i));
    }
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(m, false).eigenvalues();
    double best = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) best = std::max(best, std::abs(ev[i]));
    return best;
}

}  // namespace

TEST_CASE("apply_transfer counts admissible branches") {
    const Potential zero = Potential::zero(golden(), 1);
    CylinderFunction one = CylinderFunction::constant(Language(golden(), 2), 1.0);
    const CylinderFunction img = apply_transfer(zero, one, golden());
    CHECK(img(parse_word("00")) == Catch::Approx(2.0));
    CHECK(img(parse_word("01")) == Catch::Approx(2.0));
    CHECK(img(parse_word("10")) == Catch::Approx(1.0));

    CylinderFunction one1 = CylinderFunction::constant(Language(full2(), 1), 1.0);
    const CylinderFunction img2 = apply_transfer(Potential::zero(full2(), 1), one1, full2());
    CHECK(img2(Word{0}) == Catch::Approx(2.0));
    CHECK(img2(Word{1}) == Catch::Approx(2.0));
}

TEST_CASE("apply_transfer weighs branches by the potential at the extension") {
    const Potential a = depth1(golden(), 0.0, -1.0);
    CylinderFunction one = CylinderFunction::constant(Language(golden(), 1), 1.0);
    const CylinderFunction img = apply_transfer(a, one, golden());
    CHECK(img(Word{0}) == Catch::Approx(1.0 + std::exp(-1.0)));
    CHECK(img(Word{1}) == Catch::Approx(1.0));
    CHECK_THROWS_AS(apply_transfer(Potential::zero(golden(), 2), one, golden()), DepthMismatch);
}

TEST_CASE("adjoint duality") {
    const Potential a = Potential::from_table(
        golden(), 2, {{parse_word("00"), 0.3}, {parse_word("01"), -0.2}, {parse_word("10"), 0.7}});
    const Language lang(golden(), 6);
    std::mt19937_64 rng(777);
    for (int rep = 0; rep < 20; ++rep) {
        CylinderFunction phi;
        phi.depth = 6;
        CylinderMeasure mu;
        mu.depth = 6;
        for (const Word& w : lang.words()) {
            phi.values[w] = std::uniform_real_distribution<>(-1.0, 1.0)(rng);
            mu.masses[w] = std::uniform_real_distribution<>(0.0, 1.0)(rng);
        }
        const CylinderFunction lphi = apply_transfer(a, phi, golden());
        const CylinderMeasure lmu = adjoint_apply(a, mu, golden());
        double lhs = 0.0, rhs = 0.0;
        for (const Word& w : lang.words()) {
            lhs += lphi(w) * mu(w);
            rhs += phi(w) * lmu(w);
        }
        CHECK(lhs == Catch::Approx(rhs).margin(1e-14 * std::max(1.0, std::abs(lhs))));
    }
}

TEST_CASE("adjoint on the uniform measure") {
    CylinderMeasure uni;
    uni.depth = 1;
    uni.masses[Word{0}] = 0.5;
    uni.masses[Word{1}] = 0.5;
    const CylinderMeasure img = adjoint_apply(Potential::zero(full2(), 1), uni, full2());
    CHECK(img.total() == Catch::Approx(2.0));
    CHECK(img(Word{0}) == Catch::Approx(1.0));

    CylinderMeasure uni3;
    uni3.depth = 2;
    for (const Word& w : enumerate_language(2, golden())) uni3.masses[w] = 1.0 / 3.0;
    const CylinderMeasure img3 = adjoint_apply(Potential::zero(golden(), 1), uni3, golden());
    CHECK(img3.total() == Catch::Approx(5.0 / 3.0));
    CHECK(img3(parse_word("00")) == Catch::Approx(2.0 / 3.0));
    CHECK(img3(parse_word("01")) == Catch::Approx(1.0 / 3.0));
    CHECK(img3(parse_word("10")) == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("power iteration eigendata") {
    const SpectralTriple g = power_iteration(Potential::zero(golden(), 1), 6, golden());
    CHECK(g.lambda == Catch::Approx(golden().beta_double()).margin(1e-9));
    CHECK(g.residual <= 1e-12);

    const SpectralTriple f = power_iteration(Potential::zero(full2(), 1), 4, full2());
    CHECK(f.lambda == Catch::Approx(2.0).margin(1e-12));

    const SpectralTriple b = power_iteration(depth1(full2(), 0.0, -1.0), 4, full2());
    CHECK(b.lambda == Catch::Approx(1.0 + std::exp(-1.0)).margin(1e-12));

    // psi is strictly positive and normalized against rho
    double integral = 0.0, mass = 0.0;
    for (const auto& [w, p] : b.psi.values) {
        CHECK(p > 0.0);
        integral += p * b.rho(w);
    }
    for (const auto& [w, r] : b.rho.masses) {
        (void)w;
        mass += r;
    }
    CHECK(integral == Catch::Approx(1.0).margin(1e-12));
    CHECK(mass == Catch::Approx(1.0).margin(1e-12));
    CHECK(b.gibbs.total() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("eigenvalue agrees with a dense solve") {
    std::mt19937_64 rng(4242);
    for (int rep = 0; rep < 5; ++rep) {
        std::map<Word, double> table;
        for (const Word& w : enumerate_language(2, golden()))
            table[w] = std::uniform_real_distribution<>(-1.0, 1.0)(rng);
        const Potential a = Potential::from_table(golden(), 2, std::move(table));
        for (std::size_t k : {2u, 4u, 6u, 8u}) {
            const double via_power = power_iteration(a, k, golden()).lambda;
            const double via_dense = dense_perron_root(a, k, golden());
            CHECK(via_power == Catch::Approx(via_dense).margin(1e-10));
        }
    }
}

TEST_CASE("eigenvalue plateau in the depth") {
    const Potential a = depth1(golden(), -0.4, 0.9);
    const double l1 = power_iteration(a, 1, golden()).lambda;
    for (std::size_t k : {2u, 3u, 4u, 5u, 6u})
        CHECK(power_iteration(a, k, golden()).lambda == Catch::Approx(l1).margin(1e-12));

    const BetaSpec trib = BetaSpec::from_digits(parse_sequence("(110)"));
    const Potential z = Potential::zero(trib, 1);
    const double l2 = power_iteration(z, 2, trib).lambda;
    for (std::size_t k : {3u, 4u, 5u, 6u})
        CHECK(power_iteration(z, k, trib).lambda == Catch::Approx(l2).margin(1e-12));
    CHECK(l2 == Catch::Approx(trib.beta_double()).margin(1e-10));
}

TEST_CASE("transpose side reaches the same eigenvalue") {
    // transpose languages drive the branch structure; with the reversed
    // table the spectrum matches the forward side exactly
    const Potential a = Potential::from_table(
        golden(), 2, {{parse_word("00"), 0.1}, {parse_word("01"), 0.6}, {parse_word("10"), -0.5}});
    std::map<Word, double> rev;
    for (const auto& [w, v] : a.table) rev[w.reversed()] = v;
    const Potential at = Potential::from_table(golden(), 2, std::move(rev), 1.0, Side::transpose);
    CHECK(power_iteration(at, 5, golden()).lambda ==
          Catch::Approx(power_iteration(a, 5, golden()).lambda).margin(1e-10));
}

TEST_CASE("cone membership") {
    const Language lang(golden(), 4);
    const CylinderFunction flat = CylinderFunction::constant(lang, 0.7);
    CHECK(cone_membership(flat, 0.0, 1.0, golden()).member);
    CHECK(cone_membership(flat, 2.0, 1.0, golden()).member);

    const Potential a = Potential::from_table(
        golden(), 2, {{parse_word("00"), 0.25}, {parse_word("01"), -0.15}, {parse_word("10"), 0.4}});
    const SpectralTriple tr = power_iteration(a, 8, golden());
    CHECK(cone_membership(tr.psi, a.holder_const, a.theta, golden()).member);

    // an artificial spike on sibling cylinders violates the ratio bound
    CylinderFunction spiked = tr.psi;
    const double k_const = a.holder_const;
    spiked.values[parse_word("00000000")] *= std::exp(2.0 * k_const + 1.0);
    CHECK_FALSE(cone_membership(spiked, k_const, a.theta, golden()).member);
}

TEST_CASE("cone preservation under the operator") {
    const Potential a = Potential::from_table(
        golden(), 2, {{parse_word("00"), 0.25}, {parse_word("01"), -0.15}, {parse_word("10"), 0.4}});
    const SpectralTriple tr = power_iteration(a, 8, golden());
    const CylinderFunction img = apply_transfer(a, tr.psi, golden());
    CHECK(cone_membership(img, a.holder_const, a.theta, golden()).member);
}

TEST_CASE("invariance of the Gibbs state") {
    const SpectralTriple g = power_iteration(Potential::zero(golden(), 1), 8, golden());
    CHECK(invariance_check(g.gibbs, golden()) <= 1e-10);

    const SpectralTriple b = power_iteration(depth1(full2(), 0.0, -1.0), 6, full2());
    CHECK(invariance_check(b.gibbs, full2()) <= 1e-12);

    // a point mass is far from invariant
    CylinderMeasure point;
    point.depth = 2;
    for (const Word& w : enumerate_language(2, golden())) point.masses[w] = 0.0;
    point.masses[parse_word("10")] = 1.0;
    CHECK(invariance_check(point, golden()) > 0.5);
}
