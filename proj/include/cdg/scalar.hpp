#pragma once
// Exact field scalars: Q (GMP rationals), F_p, and the one-parameter function field F_p(s).

#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdg {

// Typed failure with a stable machine-readable code ("MixedCharacteristic", "InfiniteSlice", ...).
struct Error : std::runtime_error {
    std::string code;
    Error(std::string c, const std::string& msg) : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

enum class FieldKind { Rationals, Prime, RationalFunction };

struct Field {
    FieldKind kind = FieldKind::Rationals;
    long p = 0; // characteristic for Prime / RationalFunction

    static Field rationals() { return {FieldKind::Rationals, 0}; }
    static Field prime(long p);
    static Field rational_function(long p); // F_p(s)

    long characteristic() const { return kind == FieldKind::Rationals ? 0 : p; }
    bool perfect() const { return kind != FieldKind::RationalFunction; }
    bool operator==(const Field& o) const { return kind == o.kind && p == o.p; }
    bool operator!=(const Field& o) const { return !(*this == o); }
    std::string name() const;
};

// Dense univariate polynomial over F_p, used for numerators/denominators in F_p(s).
// Invariant: no trailing zero coefficients; empty vector means 0.
struct FpPoly {
    std::vector<long> c;
    bool is_zero() const { return c.empty(); }
    int deg() const { return static_cast<int>(c.size()) - 1; }
};

// One scalar value together with its field tag. Operations between scalars of
// different fields raise Error("MixedCharacteristic").
class Scalar {
public:
    Scalar() : field_(Field::rationals()), q_(0) {}
    static Scalar zero(const Field& f);
    static Scalar one(const Field& f);
    static Scalar from_int(const Field& f, long n);
    static Scalar from_mpq(mpq_class q);
    // parameter s of F_p(s)
    static Scalar parameter(const Field& f);

    const Field& field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inverse() const;
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // canonical text form: "3", "-3/2", "(s^2+1)/(s+2)"
    std::string str() const;

    // exposed for serialization/tests
    const mpq_class& rational() const { return q_; }
    long prime_value() const { return r_; }
    const FpPoly& numerator() const { return num_; }
    const FpPoly& denominator() const { return den_; }

private:
    Field field_;
    mpq_class q_;   // Rationals
    long r_ = 0;    // Prime, in [0, p)
    FpPoly num_, den_; // RationalFunction, den monic nonzero, gcd(num, den) = 1
    void check_same(const Scalar& o) const;
    void normalize();
};

} // namespace cdg
