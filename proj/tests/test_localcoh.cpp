#include "cdg/localcoh.hpp"
#include "helpers.hpp"

using namespace cdg;

namespace {
using Dims = std::map<std::pair<long, long>, long>;
std::vector<std::string> gen_strings(const GroebnerBasis& gb) {
    std::vector<std::string> out;
    for (const auto& g : gb.gens) out.push_back(g.str());
    return out;
}
GroebnerBasis ideal_of(const VarTableP& t, const std::vector<std::string>& gens) {
    std::vector<Poly> ps;
    for (const auto& s : gens) ps.push_back(parse_poly(t, s));
    return buchberger(ps);
}
} // namespace

TEST_CASE("cyclic pieces of the form cohomology") {
    auto t = make_vartable(Field::rationals(), {{"x", 2, false}});
    GradedPresentation p = derham_presentation(t, parse_poly(t, "x^3"));
    REQUIRE(p.pieces.size() == 1);
    CHECK(p.pieces[0].parity == 1);
    CHECK(p.pieces[0].gen_weight == 0);
    CHECK(gen_strings(p.pieces[0].relations) == std::vector<std::string>{"x^2"});

    auto tp = make_vartable(Field::prime(3), {{"x", 1, false}});
    GradedPresentation frob = derham_presentation(tp, parse_poly(tp, "x^3"));
    REQUIRE(frob.pieces.size() == 2);
    CHECK(frob.pieces[0].parity == 0);
    CHECK(frob.pieces[0].gen_weight == 0);
    CHECK(frob.pieces[0].relations.is_zero_ideal());
    CHECK(frob.pieces[1].parity == 1);
    CHECK(frob.pieces[1].gen_weight == -1);

    auto t2 = make_vartable(Field::rationals(), {{"x", 1, false}, {"y", 1, false}});
    CHECK_ERROR_CODE(derham_presentation(t2, parse_poly(t2, "x^2*y^2")), "NotRegularSequence");
}

TEST_CASE("sections with support: nilpotent pieces are copied") {
    auto t = make_vartable(Field::rationals(), {{"x", 2, false}});
    GradedPresentation p = derham_presentation(t, parse_poly(t, "x^3"));
    RGammaResult r = rgamma_principal(p, parse_poly(t, "x^3"), -2, 4);
    CHECK(r.verdict == "computed");
    CHECK(r.generation == "finitely_generated");
    CHECK(r.table.dims == Dims{{{1, 0}, 1}, {{1, 2}, 1}});
    REQUIRE(r.notes.size() == 1);
    CHECK(r.notes[0] == "piece 0: vanishes away from the locus, copied");
    CHECK(r.certificate.empty());
}

TEST_CASE("sections with support: inverse power families") {
    auto t = make_vartable(Field::prime(3), {{"x", 1, false}});
    Poly f = parse_poly(t, "x^3");
    GradedPresentation p = derham_presentation(t, f);
    RGammaResult r = rgamma_principal(p, f, -4, 0);
    CHECK(r.verdict == "computed");
    CHECK(r.generation == "not_finitely_generated");
    CHECK(r.table.dims == Dims{{{0, -2}, 1},
                               {{0, -3}, 1},
                               {{0, -4}, 1},
                               {{1, -1}, 1},
                               {{1, -2}, 1},
                               {{1, -3}, 1},
                               {{1, -4}, 1}});
    REQUIRE(r.certificate.size() == 2);
    CHECK(r.certificate[0] ==
          "piece 0: inverse powers give one class at weight 0 - 1k for every k >= 1, parity 1");
    CHECK(r.certificate[1] ==
          "piece 1: inverse powers give one class at weight -1 - 1k for every k >= 1, parity 0");
}

TEST_CASE("covering complex shape") {
    auto t = make_vartable(Field::rationals(), {{"x", 1, false}});
    Complex c = cech_complex(t, {parse_poly(t, "x")}, 3);
    REQUIRE(c.length() == 2);
    CHECK(c.modules[0].gen_weights == std::vector<long>{0});
    CHECK(c.modules[1].gen_weights == std::vector<long>{-3});
    CHECK(c.maps[0].entries[0][0] == parse_poly(t, "-x^3"));
    check_complex(c);

    auto t2 = make_vartable(Field::rationals(), {{"x", 1, false}, {"y", 1, false}});
    Complex c2 = cech_complex(t2, {parse_poly(t2, "x"), parse_poly(t2, "y")}, 2);
    REQUIRE(c2.length() == 3);
    CHECK(c2.modules[0].rank() == 1);
    CHECK(c2.modules[1].rank() == 2);
    CHECK(c2.modules[2].rank() == 1);
    CHECK(c2.modules[2].gen_weights == std::vector<long>{-4});
    check_complex(c2);

    CHECK_ERROR_CODE(cech_complex(t, {}, 1), "ShapeMismatch");
    CHECK_ERROR_CODE(cech_complex(t2, {parse_poly(t2, "x + y^2")}, 1), "NonHomogeneous");
}

TEST_CASE("stabilized covering limit agrees with the direct formula") {
    auto t = make_vartable(Field::prime(3), {{"x", 1, false}});
    Poly f = parse_poly(t, "x^3");
    GradedPresentation p = derham_presentation(t, f);
    RGammaResult direct = rgamma_principal(p, f, -4, 0);
    RGammaResult limit = rgamma_koszul_limit(p, {parse_poly(t, "x")}, -4, 0);
    CHECK(limit.verdict == "computed");
    CHECK(limit.table.dims == direct.table.dims);
    CHECK(limit.generation == "unknown");
    REQUIRE(limit.notes.size() == 1);
    CHECK(limit.notes[0] == "stabilized at power 5");

    auto tq = make_vartable(Field::rationals(), {{"x", 2, false}});
    GradedPresentation q = derham_presentation(tq, parse_poly(tq, "x^3"));
    RGammaResult refused = rgamma_koszul_limit(q, {parse_poly(tq, "x")}, -2, 2);
    CHECK(refused.verdict == "undetermined");
    REQUIRE(refused.notes.size() == 1);
    CHECK(refused.notes[0] == "piece 0: relations present, approximation refused");
}

TEST_CASE("support membership over the visible factors") {
    auto ti = make_vartable(Field::rational_function(3), {{"x", 1, false}, {"y", 1, false}});
    GroebnerBasis rel = ideal_of(ti, {"x^3 - s"});
    SupportTest imp = not_supported_on_v(rel, parse_poly(ti, "x^3*y - s*y"));
    CHECK(imp.not_supported);
    CHECK(gen_strings(imp.saturation) == std::vector<std::string>{"x^3 + (2*s)"});

    auto t = make_vartable(Field::rationals(), {{"x", 1, false}});
    SupportTest dies = not_supported_on_v(ideal_of(t, {"x^2"}), parse_poly(t, "x"));
    CHECK_FALSE(dies.not_supported);
    CHECK(dies.saturation.is_unit_ideal());

    SupportTest unit = not_supported_on_v(ideal_of(t, {"1"}), parse_poly(t, "x"));
    CHECK_FALSE(unit.not_supported);

    CHECK_ERROR_CODE(not_supported_on_v(rel, Poly::zero(ti)), "ZeroDivisorInput");
}

TEST_CASE("smooth or singular, with division certificates") {
    auto t = make_vartable(Field::rationals(), {{"x", 2, false}});
    Poly f = parse_poly(t, "x^3");
    SmoothnessReport r = smoothness_check(t, f);
    CHECK(r.smooth);
    CHECK(gen_strings(r.jac) == std::vector<std::string>{"x^2"});
    CHECK(gen_strings(r.sat) == std::vector<std::string>{"1"});
    CHECK(gen_strings(r.final_basis) == std::vector<std::string>{"1"});
    REQUIRE(r.power.size() == r.sat.gens.size());
    REQUIRE(r.cofactors.size() == r.sat.gens.size());
    for (size_t i = 0; i < r.sat.gens.size(); ++i) {
        Poly lhs = r.sat.gens[i] * f.pow(r.power[i]);
        Poly rhs = Poly::zero(t);
        REQUIRE(r.cofactors[i].size() == r.jac.gens.size());
        for (size_t j = 0; j < r.jac.gens.size(); ++j) rhs = rhs + r.cofactors[i][j] * r.jac.gens[j];
        CHECK(lhs == rhs);
    }
    CHECK(r.power == std::vector<long>{1});

    auto t2 = make_vartable(Field::rationals(), {{"x", 1, false}, {"y", 1, false}});
    Poly g = parse_poly(t2, "x^2 + y^2");
    SmoothnessReport r2 = smoothness_check(t2, g);
    CHECK(r2.smooth);
    CHECK(gen_strings(r2.jac) == std::vector<std::string>{"y", "x"});
    for (size_t i = 0; i < r2.sat.gens.size(); ++i) {
        Poly lhs = r2.sat.gens[i] * g.pow(r2.power[i]);
        Poly rhs = Poly::zero(t2);
        for (size_t j = 0; j < r2.jac.gens.size(); ++j)
            rhs = rhs + r2.cofactors[i][j] * r2.jac.gens[j];
        CHECK(lhs == rhs);
    }

    auto tp = make_vartable(Field::prime(3), {{"x", 1, false}});
    SmoothnessReport rp = smoothness_check(tp, parse_poly(tp, "x^3"));
    CHECK_FALSE(rp.smooth);
    CHECK(rp.jac.gens.empty());
    CHECK(rp.sat.gens.empty());
    CHECK(gen_strings(rp.final_basis) == std::vector<std::string>{"x^3"});

    CHECK_ERROR_CODE(smoothness_check(t, Poly::zero(t)), "ShapeMismatch");
    CHECK_ERROR_CODE(smoothness_check(t, parse_poly(t, "3")), "UnitInput");
    auto ti = make_vartable(Field::rational_function(3), {{"x", 1, false}, {"y", 1, false}});
    CHECK_ERROR_CODE(smoothness_check(ti, parse_poly(ti, "x^3*y - s*y")), "ImperfectGroundField");
}
