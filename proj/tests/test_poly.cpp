#include "cdg/poly.hpp"
#include "helpers.hpp"

using namespace cdg;

namespace {
VarTableP qxy() {
    return make_vartable(Field::rationals(), {{"x", 1, false}, {"y", 1, false}});
}
} // namespace

TEST_CASE("parse and arithmetic") {
    auto t = qxy();
    Poly sq = parse_poly(t, "x^2 + 2*x*y + y^2");
    Poly lin = parse_poly(t, "x + y");
    CHECK(sq == lin.pow(2));
    CHECK(lin * lin == sq);
    CHECK((sq - sq).is_zero());
    CHECK(parse_poly(t, "x - x").is_zero());
    CHECK(parse_poly(t, "1/2*x + x/2") == parse_poly(t, "x"));
    CHECK(parse_poly(t, "(x + y)*(x - y)") == parse_poly(t, "x^2 - y^2"));
    CHECK(parse_poly(t, sq.str()) == sq);
    CHECK(sq.term_count() == 3);
    CHECK(parse_poly(t, "3").constant_term() == Scalar::from_int(t->field(), 3));
}

TEST_CASE("weights and homogeneity") {
    auto t2 = make_vartable(Field::rationals(), {{"x", 2, false}});
    CHECK(parse_poly(t2, "x^3").homogeneous_weight() == 6);
    Poly mixed = parse_poly(t2, "x + x^2");
    CHECK_FALSE(mixed.is_homogeneous());
    CHECK_FALSE(mixed.weight_if_homogeneous().has_value());
    CHECK_ERROR_CODE(mixed.homogeneous_weight(), "NonHomogeneous");
    auto t = qxy();
    CHECK(parse_poly(t, "x^2*y + y^3").homogeneous_weight() == 3);
}

TEST_CASE("derivatives follow the characteristic") {
    auto t = make_vartable(Field::rationals(), {{"x", 1, false}});
    CHECK(parse_poly(t, "x^3").derivative(0) == parse_poly(t, "3*x^2"));
    auto t3 = make_vartable(Field::prime(3), {{"x", 1, false}});
    CHECK(parse_poly(t3, "x^3").derivative(0).is_zero());
    CHECK(parse_poly(t3, "x^4").derivative(0) == parse_poly(t3, "x^3"));
}

TEST_CASE("substitution") {
    auto t = qxy();
    Poly f = parse_poly(t, "x^2 + y");
    Field q = t->field();
    std::vector<std::optional<Scalar>> partial{Scalar::from_int(q, 2), std::nullopt};
    CHECK(f.substitute(partial) == parse_poly(t, "4 + y"));
    std::vector<std::optional<Scalar>> full{Scalar::from_int(q, 2), Scalar::from_int(q, 1)};
    CHECK(f.substitute(full).constant_term() == Scalar::from_int(q, 5));
}

TEST_CASE("weight slices") {
    auto t = qxy();
    CHECK(monomials_of_weight(*t, 3).size() == 4);
    CHECK(monomials_of_weight(*t, 0).size() == 1);
    auto t2 = make_vartable(Field::rationals(), {{"x", 2, false}});
    CHECK(monomials_of_weight(*t2, 3).empty());
    CHECK(monomials_of_weight(*t2, 4).size() == 1);
    auto bad = make_vartable(Field::rationals(), {{"x", 0, false}});
    CHECK_ERROR_CODE(monomials_of_weight(*bad, 1), "InfiniteSlice");
}

TEST_CASE("Laurent variables") {
    auto t = make_vartable(Field::rationals(), {{"x", 1, false}, {"t", 0, true}});
    Poly p = parse_poly(t, "x^2*t^-1");
    CHECK(p.uses_laurent());
    CHECK(p.strip_laurent() == parse_poly(t, "x^2"));
    CHECK(p.homogeneous_weight() == 2);
    CHECK(parse_poly(t, p.str()) == p);
    CHECK_ERROR_CODE(parse_poly(t, "x^-1"), "NegativeExponent");
    CHECK_FALSE(parse_poly(t, "x").uses_laurent());
}

TEST_CASE("monomial orders") {
    auto t = qxy();
    Poly p = parse_poly(t, "x + y^2");
    auto [gm, gc] = p.leading_term(MonomialOrder::grevlex());
    CHECK(mono_str(*t, gm) == "y^2");
    auto [lm, lc] = p.leading_term(MonomialOrder::lex());
    CHECK(mono_str(*t, lm) == "x");
    CHECK_ERROR_CODE(Poly::zero(t).leading_term(MonomialOrder::grevlex()), "ZeroPolynomial");
}

TEST_CASE("table extension") {
    auto small = make_vartable(Field::rationals(), {{"x", 1, false}});
    auto big = qxy();
    Poly p = parse_poly(small, "x^2 + 1");
    CHECK(p.extend_to(big, {0}) == parse_poly(big, "x^2 + 1"));
}

TEST_CASE("field parameter in coefficients") {
    auto t = make_vartable(Field::rational_function(3), {{"x", 1, false}});
    Poly f = parse_poly(t, "x^3 - s");
    CHECK(f.term_count() == 2);
    CHECK(f.constant_term() == -Scalar::parameter(t->field()));
    CHECK(parse_poly(t, f.str()) == f);
}

TEST_CASE("bad input is rejected") {
    auto t = qxy();
    CHECK_ERROR_CODE(parse_poly(t, "x +"), "ParseError");
    CHECK_ERROR_CODE(parse_poly(t, "(x"), "ParseError");
    CHECK_ERROR_CODE(parse_poly(t, "z"), "ParseError");
    CHECK_ERROR_CODE(parse_poly(t, "x^"), "ParseError");
    CHECK_ERROR_CODE(
        make_vartable(Field::rational_function(3), {{"s", 1, false}}), "ReservedName");
    CHECK_ERROR_CODE(make_vartable(Field::rationals(), {{"x", 1, false}, {"x", 1, false}}),
                     "BadVariable");
    CHECK_ERROR_CODE(parse_poly(t, "x").pow(-1), "NegativeExponent");
}
