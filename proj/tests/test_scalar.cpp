#include "cdg/scalar.hpp"
#include "helpers.hpp"

using namespace cdg;

TEST_CASE("rational arithmetic") {
    Field q = Field::rationals();
    Scalar a = Scalar::from_mpq(mpq_class(1, 3));
    Scalar b = Scalar::from_mpq(mpq_class(1, 6));
    CHECK((a + b) == Scalar::from_mpq(mpq_class(1, 2)));
    CHECK((a - a).is_zero());
    CHECK((a * Scalar::from_int(q, 3)).is_one());
    CHECK((a / b) == Scalar::from_int(q, 2));
    CHECK((-Scalar::from_int(q, 5)) == Scalar::from_int(q, -5));
    CHECK(Scalar::from_int(q, 7).inverse() == Scalar::from_mpq(mpq_class(1, 7)));
    CHECK(Scalar::from_mpq(mpq_class(-3, 2)).str() == "-3/2");
    CHECK(Scalar::from_mpq(mpq_class(4, 2)).str() == "2");
}

TEST_CASE("prime field arithmetic") {
    Field f7 = Field::prime(7);
    Scalar three = Scalar::from_int(f7, 3);
    Scalar five = Scalar::from_int(f7, 5);
    CHECK((three * five).is_one());
    CHECK(Scalar::from_int(f7, -1) == Scalar::from_int(f7, 6));
    CHECK(three.inverse() == five);
    CHECK((three + Scalar::from_int(f7, 4)).is_zero());
    CHECK(Scalar::from_int(f7, 10).str() == "3");
    CHECK_ERROR_CODE(Scalar::zero(f7).inverse(), "DivisionByZero");
    CHECK_ERROR_CODE(Field::prime(1), "BadField");
}

TEST_CASE("rational function field") {
    Field f5 = Field::rational_function(5);
    Scalar s = Scalar::parameter(f5);
    Scalar one = Scalar::one(f5);
    CHECK((s * s - one) / (s + one) == s - one);
    CHECK((s / s).is_one());
    CHECK((s - s).is_zero());
    CHECK((s + s + s + s + s).is_zero());
    CHECK(s.inverse() * s == one);
    CHECK_ERROR_CODE(Scalar::parameter(Field::rationals()), "BadField");
}

TEST_CASE("field attributes") {
    CHECK(Field::rationals().perfect());
    CHECK(Field::prime(3).perfect());
    CHECK_FALSE(Field::rational_function(3).perfect());
    CHECK(Field::rationals().characteristic() == 0);
    CHECK(Field::prime(7).characteristic() == 7);
    CHECK(Field::rational_function(3).characteristic() == 3);
    CHECK(Field::rationals() != Field::prime(3));
    CHECK(Field::prime(3) != Field::rational_function(3));
}

TEST_CASE("mixed fields rejected") {
    Scalar a = Scalar::one(Field::rationals());
    Scalar b = Scalar::one(Field::prime(3));
    CHECK_ERROR_CODE(a + b, "MixedCharacteristic");
    CHECK_ERROR_CODE(a * b, "MixedCharacteristic");
}
