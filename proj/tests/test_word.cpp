#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "betatherm/bilateral.hpp"
#include "betatherm/sequence.hpp"
#include "betatherm/word.hpp"

using namespace betatherm;

namespace {

std::mt19937_64 rng(20250613);

Word random_word(std::size_t max_len, Digit top) {
    const std::size_t n = rng() % (max_len + 1);
    std::vector<Digit> v(n);
    for (auto& d : v) d = static_cast<Digit>(rng() % (top + 1));
    return Word(std::move(v));
}

}  // namespace

TEST_CASE("lex_compare basics") {
    CHECK(lex_compare(Word{1, 0}, Word{1, 0}) == Ordering::EQ);
    CHECK(lex_compare(Word{1, 0}, Word{1, 1}) == Ordering::LT);
    CHECK(lex_compare(Word{1, 0, 1}, Word{1, 0}) == Ordering::GT);  // proper prefix rule
    CHECK(lex_compare(Word{}, Word{0}) == Ordering::LT);
}

TEST_CASE("lex_compare is a total order on random triples") {
    for (int i = 0; i < 300; ++i) {
        const Word a = random_word(6, 2), b = random_word(6, 2), c = random_word(6, 2);
        // antisymmetry
        if (lex_compare(a, b) == Ordering::LT) CHECK(lex_compare(b, a) == Ordering::GT);
        if (lex_compare(a, b) == Ordering::EQ) CHECK(a == b);
        // transitivity
        if (lex_compare(a, b) != Ordering::GT && lex_compare(b, c) != Ordering::GT)
            CHECK(lex_compare(a, c) != Ordering::GT);
    }
}

TEST_CASE("transpose_word") {
    CHECK(transpose_word(Word{1, 1, 0}) == Word{0, 1, 1});
    CHECK(transpose_word(Word{}) == Word{});
    for (int i = 0; i < 100; ++i) {
        const Word v = random_word(5, 3), w = random_word(5, 3);
        CHECK(transpose_word(transpose_word(v)) == v);
        CHECK(transpose_word(v + w) == transpose_word(w) + transpose_word(v));
    }
}

TEST_CASE("word formatting round-trip") {
    CHECK(format_word(Word{0, 1, 1, 0}) == "0110");
    CHECK(format_word(Word{10, 2, 0}) == "10,2,0");
    CHECK(parse_word("0110") == Word{0, 1, 1, 0});
    CHECK(parse_word("10,2,0") == Word{10, 2, 0});
    CHECK_THROWS_AS(parse_word("01a"), SchemaError);
}

TEST_CASE("eventually periodic canonical form") {
    // period reduced to its primitive root
    CHECK(EventuallyPeriodicSeq(Word{}, Word{1, 1}) == EventuallyPeriodicSeq(Word{}, Word{1}));
    // preperiod absorbed into a rotation
    const EventuallyPeriodicSeq a(Word{1, 1}, Word{0, 1});
    const EventuallyPeriodicSeq b(Word{1}, Word{1, 0});
    CHECK(a == b);
    for (std::size_t i = 0; i < 12; ++i) CHECK(a.at(i) == b.at(i));
    CHECK(format_sequence(b) == "1(10)");
    CHECK(parse_sequence("11(01)") == b);
    CHECK(parse_sequence("0110") == EventuallyPeriodicSeq::from_word(Word{0, 1, 1, 0}));
}

TEST_CASE("sequence comparison and shift metric") {
    const auto x = parse_sequence("(10)");
    const auto y = parse_sequence("1(0)");
    CHECK(compare_sequences(x, x) == Ordering::EQ);
    CHECK(compare_sequences(y, x) == Ordering::LT);  // 100... < 1010...
    CHECK(shift_metric(x, x) == 0.0);
    CHECK(shift_metric(parse_sequence("(01)"), parse_sequence("(10)")) == 1.0);
    CHECK(shift_metric(x, y) == 0.25);  // first disagreement at n = 3
}

TEST_CASE("shift metric is an ultrametric on random triples") {
    auto random_seq = [&] {
        return EventuallyPeriodicSeq(random_word(4, 1), random_word(3, 1).appended(1));
    };
    for (int i = 0; i < 300; ++i) {
        const auto x = random_seq(), y = random_seq(), z = random_seq();
        CHECK(shift_metric(x, z) <= std::max(shift_metric(x, y), shift_metric(y, z)) + 1e-15);
    }
}

TEST_CASE("tau_concat") {
    const auto y = parse_sequence("100(0)");
    const auto x = parse_sequence("010(0)");
    CHECK(tau_concat(y, 0, x) == x);
    const auto t2 = tau_concat(y, 2, x);
    CHECK(t2.first(5) == Word{0, 1, 0, 1, 0});
    CHECK(tau_concat(parse_sequence("(1)"), 3, parse_sequence("(0)")).first(5) == Word{1, 1, 1, 0, 0});

    // tau_{y,m+1}(x) prepends y_{m+1} in front of tau_{y,m}(x)
    for (int i = 0; i < 100; ++i) {
        const EventuallyPeriodicSeq ys(random_word(4, 2), random_word(3, 2).appended(1));
        const EventuallyPeriodicSeq xs(random_word(4, 2), random_word(3, 2).appended(1));
        const std::size_t m = rng() % 6;
        const auto a = tau_concat(ys, m + 1, xs);
        const auto b = tau_concat(ys, m, xs).prepended(ys.at(m));
        for (std::size_t k = 0; k < 14; ++k) CHECK(a.at(k) == b.at(k));
    }
}

TEST_CASE("bilateral shift and its inverse") {
    const BilateralPair p{parse_sequence("(0)"), parse_sequence("10(0)")};
    const BilateralPair q = bilateral_shift(p);
    CHECK(q.past == parse_sequence("1(0)"));
    CHECK(q.future == parse_sequence("0(0)"));

    const BilateralPair r{parse_sequence("(0)"), parse_sequence("(01)")};
    const BilateralPair s = bilateral_shift(r);
    CHECK(s.past == parse_sequence("0(0)"));
    CHECK(s.future == parse_sequence("(10)"));

    for (int i = 0; i < 50; ++i) {
        const BilateralPair t{EventuallyPeriodicSeq(random_word(4, 1), random_word(3, 1).appended(1)),
                              EventuallyPeriodicSeq(random_word(4, 1), random_word(3, 1).appended(1))};
        CHECK(bilateral_shift_inverse(bilateral_shift(t)) == t);
        CHECK(bilateral_shift(bilateral_shift_inverse(t)) == t);
    }
}
