#include "cdg/hochschild.hpp"
#include "helpers.hpp"

#include <random>

using namespace cdg;

namespace {
VarTableP line(long w = 1, Field f = Field::rationals()) {
    return make_vartable(f, {{"x", w, false}});
}
PolynomialBarAlgebra uncurved_line() {
    auto t = line();
    return PolynomialBarAlgebra(t, Poly::zero(t));
}
CurvedModule square_pair() {
    auto t = line();
    CurvedAlgebra alg{t, parse_poly(t, "x^2")};
    return koszul_curved(alg, {parse_poly(t, "x")}, {parse_poly(t, "x")});
}
} // namespace

TEST_CASE("integer-graded table collapses to functions and one-forms") {
    PolynomialBarAlgebra a = uncurved_line();
    BarZTable hkr = hochschild_z_window(a, 4, 0, 3);
    std::map<std::pair<long, long>, long> expect;
    for (long s = 0; s <= 3; ++s) expect[{0, s}] = 1;
    for (long s = 1; s <= 3; ++s) expect[{-1, s}] = 1;
    CHECK(hkr.dims == expect);
}

TEST_CASE("two-periodic table for the squared potential") {
    auto t = line();
    PolynomialBarAlgebra a(t, parse_poly(t, "x^2"));
    BarTable tab = hochschild_z2_window(a, 0, 4);
    CHECK(tab.stabilized);
    CHECK(tab.kappa_used == 3);
    CHECK(tab.gap_used == 1);
    CHECK(tab.dims == std::map<std::pair<long, long>, long>{{{1, 1}, 1}, {{1, 3}, 1}});
}

TEST_CASE("operators respect the slice key and flip parity") {
    auto t = line();
    PolynomialBarAlgebra a(t, parse_poly(t, "x^3"));
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 12; ++trial) {
        BarWord u = random_word(a, rng, 3, 3);
        CHECK(word_raw(a, u) == word_aux(a, u) + a.curvature_weight() * u.kappa);
        for (const auto& [v, c] : differential(a, u)) {
            CHECK(word_aux(a, v) == word_aux(a, u));
            CHECK(word_parity(a, v) == 1 - word_parity(a, u));
        }
        for (const auto& [v, c] : connes_b(a, u)) {
            CHECK(word_aux(a, v) == word_aux(a, u));
            CHECK(word_parity(a, v) == 1 - word_parity(a, u));
        }
    }
}

TEST_CASE("identity suite on seeded words, curved potential") {
    auto t = line();
    PolynomialBarAlgebra a(t, parse_poly(t, "x^3"));
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        BarWord u = random_word(a, rng, 3, 3);
        CHECK(check_d_squared(a, u));
        CHECK(check_b_squared(a, u));
        CHECK(check_chern_d(a, u));
        CHECK(check_chern_b(a, u));
    }
    BarWord any = random_word(a, rng, 2, 2);
    CHECK_ERROR_CODE(check_mixed(a, any), "CurvedMixedIdentity");
}

TEST_CASE("identity suite on seeded words, no potential") {
    PolynomialBarAlgebra a = uncurved_line();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        BarWord u = random_word(a, rng, 3, 3);
        CHECK(check_d_squared(a, u));
        CHECK(check_b_squared(a, u));
        CHECK(check_mixed(a, u));
        CHECK(check_chern_d(a, u));
        CHECK(check_chern_b(a, u));
    }
}

TEST_CASE("identity suite on endomorphism words") {
    EndDgaBarAlgebra e(square_pair());
    CHECK(e.curvature_weight() == 0);
    CHECK(e.gen_count() == 4);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        BarWord u = random_word(e, rng, 3, 2);
        CHECK(check_d_squared(e, u));
        CHECK(check_b_squared(e, u));
        CHECK(check_mixed(e, u));
    }
}

TEST_CASE("character of a short chain") {
    auto t = line();
    PolynomialBarAlgebra a(t, Poly::zero(t));
    BarChain c = make_chain(a, 0, {parse_poly(t, "x^2"), parse_poly(t, "x")});
    TwistedForm got = chern(a, c);
    TwistedForm expect;
    expect.emplace(0, wedge(poly_form(parse_poly(t, "x^2")), derham_d(poly_form(parse_poly(t, "x")))));
    CHECK(twisted_equal(got, expect));

    // constants die in the reduced slots
    CHECK(chain_is_zero(make_chain(a, 0, {parse_poly(t, "x"), parse_poly(t, "2")})));

    auto tp = line(1, Field::prime(3));
    PolynomialBarAlgebra ap(tp, Poly::zero(tp));
    Poly x = parse_poly(tp, "x");
    BarChain long_word = make_chain(ap, 0, {x, x, x, x});
    CHECK_ERROR_CODE(chern(ap, long_word), "CharacteristicTooSmall");
}

TEST_CASE("slice bases nest as prefixes across caps") {
    auto t = line();
    PolynomialBarAlgebra a(t, parse_poly(t, "x^2"));
    for (int parity = 0; parity <= 1; ++parity) {
        for (long s = 0; s <= 2; ++s) {
            auto small = slice_basis_z2(a, parity, s, 2);
            auto big = slice_basis_z2(a, parity, s, 3);
            REQUIRE(small.size() <= big.size());
            CHECK(std::equal(small.begin(), small.end(), big.begin()));
        }
    }
    PolynomialBarAlgebra a0 = uncurved_line();
    CHECK(slice_basis_z(a0, 1, 2).size() == 2);
    CHECK(slice_basis_z(a0, 2, 2).size() == 1);
}

TEST_CASE("mode and shape gates") {
    auto t = line();
    PolynomialBarAlgebra curved(t, parse_poly(t, "x^2"));
    PolynomialBarAlgebra flat = uncurved_line();
    CHECK_ERROR_CODE(hochschild_z_window(curved, 2, 0, 2), "CurvedIntegerMode");
    CHECK_ERROR_CODE(hochschild_z2_window(flat, 0, 2), "UncurvedPairMode");
    CHECK_ERROR_CODE(PolynomialBarAlgebra(t, parse_poly(t, "x + 1")), "CurvatureConstantTerm");
    auto t0 = make_vartable(Field::rationals(), {{"x", 0, false}});
    CHECK_ERROR_CODE(PolynomialBarAlgebra(t0, parse_poly(t0, "x")), "CurvatureWeight");
    auto tl = make_vartable(Field::rationals(), {{"x", 1, false}, {"t", 0, true}});
    CHECK_ERROR_CODE(PolynomialBarAlgebra(tl, Poly::zero(tl)), "LaurentVariablePresent");
    CHECK_ERROR_CODE(differential(curved, BarWord{0, {}}), "EmptyWord");
}

TEST_CASE("truncated slice guard names the blowup") {
    auto t = line();
    PolynomialBarAlgebra a(t, parse_poly(t, "x^3"));
    CHECK_ERROR_CODE(hochschild_z2_window(a, 2, 2, 4, 1, 1), "SliceTooLarge");
}
