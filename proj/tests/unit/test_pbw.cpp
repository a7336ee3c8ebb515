#include "glhat/pbw.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace glhat;

namespace {

AlgebraElement eltE(int r, int c, int s, long coeff = 1) {
    return AlgebraElement::unit(Unit(r, c, s), Scalar(coeff));
}

std::vector<Unit> random_word(std::mt19937_64& rng, const RankData& ctx, int len, int mode_bound) {
    std::uniform_int_distribution<int> idx(1, ctx.size());
    std::uniform_int_distribution<int> mode(-mode_bound, mode_bound);
    std::vector<Unit> w;
    for (int i = 0; i < len; ++i) w.emplace_back(idx(rng), idx(rng), mode(rng));
    return w;
}

// Multiplies the word's factors along a random binary association tree.
AlgebraElement eval_random_tree(std::mt19937_64& rng, const RankData& ctx,
                                std::span<const Unit> word) {
    if (word.size() == 1) return AlgebraElement::unit(word[0]);
    std::uniform_int_distribution<std::size_t> cut(1, word.size() - 1);
    std::size_t k = cut(rng);
    AlgebraElement left = eval_random_tree(rng, ctx, word.subspan(0, k));
    AlgebraElement right = eval_random_tree(rng, ctx, word.subspan(k));
    return multiply(ctx, left, right);
}

}  // namespace

TEST_CASE("normal order straightening examples") {
    RankData ctx(3, 2);

    // E_{2,1}(0) E_{1,2}(0) -> E_{1,2}(0) E_{2,1}(0) + E_{2,2}(0) - E_{1,1}(0)
    std::vector<Unit> word{Unit(2, 1, 0), Unit(1, 2, 0)};
    AlgebraElement no = normal_order(ctx, word, Scalar(1));
    AlgebraElement expected;
    expected.add_term(PbwMonomial({Unit(1, 2, 0), Unit(2, 1, 0)}, 0, 0), Scalar(1));
    expected.add_term(PbwMonomial({Unit(2, 2, 0)}, 0, 0), Scalar(1));
    expected.add_term(PbwMonomial({Unit(1, 1, 0)}, 0, 0), Scalar(-1));
    CHECK(no == expected);

    // odd square dies: E_{5,1}(1) E_{5,1}(1) -> 0
    word = {Unit(5, 1, 1), Unit(5, 1, 1)};
    CHECK(normal_order(ctx, word, Scalar(1)).is_zero());

    // ordered word passes through
    word = {Unit(1, 2, -1), Unit(1, 2, 0), Unit(2, 1, 3)};
    no = normal_order(ctx, word, Scalar(7));
    REQUIRE(no.size() == 1);
    CHECK(no.terms().begin()->first.factors == word);
    CHECK(no.terms().begin()->second == Scalar(7));
}

TEST_CASE("multiply basics") {
    RankData ctx(3, 2);
    AlgebraElement x = eltE(1, 2, 0);
    AlgebraElement y = eltE(2, 1, 0);

    CHECK(multiply(ctx, AlgebraElement::one(), x) == x);

    AlgebraElement xy = multiply(ctx, x, y);
    REQUIRE(xy.size() == 1);  // already ordered
    CHECK(xy.terms().begin()->first.factors == std::vector<Unit>{Unit(1, 2, 0), Unit(2, 1, 0)});

    AlgebraElement yx = multiply(ctx, y, x);
    AlgebraElement expected = xy;
    expected.add_term(PbwMonomial({Unit(2, 2, 0)}, 0, 0), Scalar(1));
    expected.add_term(PbwMonomial({Unit(1, 1, 0)}, 0, 0), Scalar(-1));
    CHECK(yx == expected);
}

TEST_CASE("bracket_u agrees with the Lie bracket on generators") {
    RankData ctx(3, 2);
    long violations = 0;
    for (int r1 = 1; r1 <= 5; ++r1)
        for (int c1 = 1; c1 <= 5; ++c1)
            for (int r2 = 1; r2 <= 5; ++r2)
                for (int c2 = 1; c2 <= 5; ++c2) {
                    Unit a(r1, c1, 1), b(r2, c2, -1);
                    AlgebraElement viaU =
                        bracket_u(ctx, AlgebraElement::unit(a), AlgebraElement::unit(b));
                    AlgebraElement viaLie = embed(bracket(ctx, lie_unit(a), lie_unit(b)));
                    if (!(viaU == viaLie)) ++violations;
                }
    CHECK(violations == 0);
}

TEST_CASE("bracket_u examples") {
    RankData ctx(3, 2);
    // [E_{1,1}(0), E_{1,2}(3) E_{2,1}(-3)] = 0 (derivation terms cancel)
    AlgebraElement prod = multiply(ctx, eltE(1, 2, 3), eltE(2, 1, -3));
    CHECK(bracket_u(ctx, eltE(1, 1, 0), prod).is_zero());

    // [x, x] = 0 for even x
    AlgebraElement x = eltE(1, 2, 1) + eltE(2, 3, -2);
    CHECK(bracket_u(ctx, x, x).is_zero());
}

TEST_CASE("degree and truncation") {
    RankData ctx(3, 2);
    PbwMonomial m({Unit(1, 2, -3), Unit(2, 1, 3)}, 0, 0);
    CHECK(m.degree() == 0);
    CHECK(PbwMonomial({Unit(1, 2, 5)}, 0, 0).degree() == 5);
    CHECK(PbwMonomial({}, 2, 1).degree() == 0);

    AlgebraElement e = multiply(ctx, eltE(2, 1, -5), eltE(1, 2, 5));
    CHECK(truncate_project(e, 2).is_zero());

    e = multiply(ctx, eltE(2, 1, -1), eltE(1, 2, 1)) + multiply(ctx, eltE(2, 1, -3), eltE(1, 2, 3));
    AlgebraElement kept = truncate_project(e, 2);
    CHECK(kept == multiply(ctx, eltE(2, 1, -1), eltE(1, 2, 1)));

    AlgebraElement central = AlgebraElement::term(PbwMonomial({Unit(5, 5, 0)}, 1, 0), Scalar(1));
    CHECK(truncate_project(central, 0) == central);
}

TEST_CASE("degree preservation under normal ordering") {
    RankData ctx(2, 3);
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 100; ++iter) {
        auto word = random_word(rng, ctx, 4, 3);
        long total = 0;
        for (const auto& u : word) total += u.mode;
        AlgebraElement no = normal_order(ctx, word, Scalar(1));
        for (const auto& [mono, coeff] : no.terms()) CHECK(mono.degree() == total);
    }
}

TEST_CASE("confluence: association paths agree on random words") {
    std::mt19937_64 rng(4242);
    for (RankData ctx : {RankData(2, 3), RankData(3, 2)}) {
        for (int iter = 0; iter < 100; ++iter) {
            std::uniform_int_distribution<int> len(2, 4);
            auto word = random_word(rng, ctx, len(rng), 2);
            AlgebraElement reference = normal_order(ctx, word, Scalar(1));
            for (int path = 0; path < 3; ++path) {
                AlgebraElement via = eval_random_tree(rng, ctx, word);
                REQUIRE(via == reference);
            }
        }
    }
}

TEST_CASE("associativity on random elements") {
    std::mt19937_64 rng(31337);
    RankData ctx(3, 2);
    for (int iter = 0; iter < 100; ++iter) {
        AlgebraElement x = normal_order(ctx, random_word(rng, ctx, 2, 2), Scalar(1));
        AlgebraElement y = normal_order(ctx, random_word(rng, ctx, 2, 2), Scalar(1));
        AlgebraElement z = normal_order(ctx, random_word(rng, ctx, 2, 2), Scalar(1));
        CHECK(multiply(ctx, multiply(ctx, x, y), z) == multiply(ctx, x, multiply(ctx, y, z)));
    }
}

TEST_CASE("super-Leibniz rule for bracket_u") {
    std::mt19937_64 rng(2718);
    RankData ctx(3, 2);
    std::uniform_int_distribution<int> idx(1, 5);
    std::uniform_int_distribution<int> mode(-2, 2);
    for (int iter = 0; iter < 100; ++iter) {
        Unit xg(idx(rng), idx(rng), mode(rng));
        Unit yg(idx(rng), idx(rng), mode(rng));
        Unit zg(idx(rng), idx(rng), mode(rng));
        AlgebraElement x = AlgebraElement::unit(xg);
        AlgebraElement y = AlgebraElement::unit(yg);
        AlgebraElement z = AlgebraElement::unit(zg);
        AlgebraElement lhs = bracket_u(ctx, x, multiply(ctx, y, z));
        AlgebraElement rhs = multiply(ctx, bracket_u(ctx, x, y), z);
        AlgebraElement tail = multiply(ctx, y, bracket_u(ctx, x, z));
        if (unit_parity(ctx, xg) && unit_parity(ctx, yg)) tail.scale(Scalar(-1));
        rhs += tail;
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("sl membership") {
    RankData ctx(3, 2);
    CHECK(sl_membership(ctx, eltE(1, 2, 5)).in_sl);
    CHECK_FALSE(sl_membership(ctx, eltE(1, 1, 0)).in_sl);

    // h_2(4) = E_{2,2}(4) - E_{3,3}(4)
    AlgebraElement h2 = eltE(2, 2, 4) + eltE(3, 3, 4, -1);
    CHECK(sl_membership(ctx, h2).in_sl);

    // split is exact: sl_part + complement == x
    AlgebraElement x = multiply(ctx, eltE(1, 1, -1), eltE(2, 2, 1)) + eltE(4, 4, 0);
    SlSplit split = sl_membership(ctx, x);
    CHECK(split.sl_part + split.complement == x);
    CHECK_FALSE(split.in_sl);

    // membership is preserved under truncation and sl-products
    AlgebraElement y = multiply(ctx, h2, eltE(2, 3, -2));
    CHECK(sl_membership(ctx, y).in_sl);
    CHECK(sl_membership(ctx, truncate_project(y, 2)).in_sl);
}
