#include "cdg/scalar.hpp"

#include <algorithm>

namespace cdg {

Field Field::prime(long p) {
    if (p < 2) throw Error("BadField", "prime characteristic must be >= 2");
    return {FieldKind::Prime, p};
}

Field Field::rational_function(long p) {
    if (p < 2) throw Error("BadField", "function-field characteristic must be >= 2");
    return {FieldKind::RationalFunction, p};
}

std::string Field::name() const {
    switch (kind) {
        case FieldKind::Rationals: return "Q";
        case FieldKind::Prime: return "F" + std::to_string(p);
        case FieldKind::RationalFunction: return "F" + std::to_string(p) + "(s)";
    }
    return "?";
}

namespace {

long mod_norm(long v, long p) {
    long r = v % p;
    return r < 0 ? r + p : r;
}

long mod_inv(long a, long p) {
    // extended Euclid; a nonzero mod p
    long t = 0, nt = 1, r = p, nr = mod_norm(a, p);
    while (nr != 0) {
        long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw Error("DivisionByZero", "no inverse mod p");
    return mod_norm(t, p);
}

void fp_trim(FpPoly& a) {
    while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
}

FpPoly fp_const(long v, long p) {
    FpPoly r;
    v = mod_norm(v, p);
    if (v != 0) r.c = {v};
    return r;
}

FpPoly fp_add(const FpPoly& a, const FpPoly& b, long p) {
    FpPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) {
        long v = 0;
        if (i < a.c.size()) v += a.c[i];
        if (i < b.c.size()) v += b.c[i];
        r.c[i] = mod_norm(v, p);
    }
    fp_trim(r);
    return r;
}

FpPoly fp_neg(const FpPoly& a, long p) {
    FpPoly r = a;
    for (auto& v : r.c) v = mod_norm(-v, p);
    return r;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, long p) {
    FpPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = mod_norm(r.c[i + j] + a.c[i] * b.c[j], p);
    fp_trim(r);
    return r;
}

// division with remainder; b nonzero
std::pair<FpPoly, FpPoly> fp_divmod(FpPoly a, const FpPoly& b, long p) {
    FpPoly q;
    long lead_inv = mod_inv(b.c.back(), p);
    while (!a.is_zero() && a.deg() >= b.deg()) {
        long k = a.deg() - b.deg();
        long coef = mod_norm(a.c.back() * lead_inv, p);
        if (static_cast<int>(q.c.size()) < k + 1) q.c.resize(k + 1, 0);
        q.c[k] = mod_norm(q.c[k] + coef, p);
        for (int i = 0; i <= b.deg(); ++i)
            a.c[i + k] = mod_norm(a.c[i + k] - coef * b.c[i], p);
        fp_trim(a);
    }
    fp_trim(q);
    return {q, a};
}

FpPoly fp_gcd(FpPoly a, FpPoly b, long p) {
    while (!b.is_zero()) {
        auto [q, r] = fp_divmod(a, b, p);
        a = b;
        b = r;
    }
    if (!a.is_zero()) {
        long inv = mod_inv(a.c.back(), p);
        for (auto& v : a.c) v = mod_norm(v * inv, p);
    }
    return a;
}

std::string fp_str(const FpPoly& a) {
    if (a.is_zero()) return "0";
    std::string out;
    for (int i = a.deg(); i >= 0; --i) {
        if (a.c[i] == 0) continue;
        if (!out.empty()) out += "+";
        if (i == 0) {
            out += std::to_string(a.c[i]);
        } else {
            if (a.c[i] != 1) out += std::to_string(a.c[i]) + "*";
            out += (i == 1) ? "s" : "s^" + std::to_string(i);
        }
    }
    return out;
}

} // namespace

Scalar Scalar::zero(const Field& f) {
    Scalar s;
    s.field_ = f;
    if (f.kind == FieldKind::RationalFunction) s.den_ = fp_const(1, f.p);
    return s;
}

Scalar Scalar::one(const Field& f) { return from_int(f, 1); }

Scalar Scalar::from_int(const Field& f, long n) {
    Scalar s = zero(f);
    switch (f.kind) {
        case FieldKind::Rationals: s.q_ = n; break;
        case FieldKind::Prime: s.r_ = mod_norm(n, f.p); break;
        case FieldKind::RationalFunction:
            s.num_ = fp_const(n, f.p);
            s.den_ = fp_const(1, f.p);
            break;
    }
    return s;
}

Scalar Scalar::from_mpq(mpq_class q) {
    Scalar s;
    s.field_ = Field::rationals();
    q.canonicalize();
    s.q_ = std::move(q);
    return s;
}

Scalar Scalar::parameter(const Field& f) {
    if (f.kind != FieldKind::RationalFunction)
        throw Error("BadField", "parameter s only exists in F_p(s)");
    Scalar s = zero(f);
    s.num_.c = {0, 1};
    s.den_ = fp_const(1, f.p);
    return s;
}

bool Scalar::is_zero() const {
    switch (field_.kind) {
        case FieldKind::Rationals: return q_ == 0;
        case FieldKind::Prime: return r_ == 0;
        case FieldKind::RationalFunction: return num_.is_zero();
    }
    return true;
}

bool Scalar::is_one() const {
    switch (field_.kind) {
        case FieldKind::Rationals: return q_ == 1;
        case FieldKind::Prime: return r_ == 1;
        case FieldKind::RationalFunction: return num_.deg() == 0 && num_.c[0] == 1 && den_.deg() == 0;
    }
    return false;
}

void Scalar::check_same(const Scalar& o) const {
    if (field_ != o.field_)
        throw Error("MixedCharacteristic",
                    "scalars from " + field_.name() + " and " + o.field_.name() + " cannot mix");
}

void Scalar::normalize() {
    if (field_.kind != FieldKind::RationalFunction) return;
    long p = field_.p;
    if (num_.is_zero()) {
        den_ = fp_const(1, p);
        return;
    }
    FpPoly g = fp_gcd(num_, den_, p);
    if (g.deg() > 0) {
        num_ = fp_divmod(num_, g, p).first;
        den_ = fp_divmod(den_, g, p).first;
    }
    long inv = mod_inv(den_.c.back(), p);
    if (inv != 1) {
        for (auto& v : num_.c) v = mod_norm(v * inv, p);
        for (auto& v : den_.c) v = mod_norm(v * inv, p);
    }
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same(o);
    Scalar r = *this;
    switch (field_.kind) {
        case FieldKind::Rationals: r.q_ += o.q_; break;
        case FieldKind::Prime: r.r_ = mod_norm(r_ + o.r_, field_.p); break;
        case FieldKind::RationalFunction: {
            long p = field_.p;
            r.num_ = fp_add(fp_mul(num_, o.den_, p), fp_mul(o.num_, den_, p), p);
            r.den_ = fp_mul(den_, o.den_, p);
            r.normalize();
            break;
        }
    }
    return r;
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    switch (field_.kind) {
        case FieldKind::Rationals: r.q_ = -q_; break;
        case FieldKind::Prime: r.r_ = mod_norm(-r_, field_.p); break;
        case FieldKind::RationalFunction: r.num_ = fp_neg(num_, field_.p); break;
    }
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    check_same(o);
    Scalar r = *this;
    switch (field_.kind) {
        case FieldKind::Rationals: r.q_ *= o.q_; break;
        case FieldKind::Prime: r.r_ = mod_norm(r_ * o.r_, field_.p); break;
        case FieldKind::RationalFunction: {
            long p = field_.p;
            r.num_ = fp_mul(num_, o.num_, p);
            r.den_ = fp_mul(den_, o.den_, p);
            r.normalize();
            break;
        }
    }
    return r;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw Error("DivisionByZero", "inverse of zero");
    Scalar r = *this;
    switch (field_.kind) {
        case FieldKind::Rationals: r.q_ = 1 / q_; break;
        case FieldKind::Prime: r.r_ = mod_inv(r_, field_.p); break;
        case FieldKind::RationalFunction:
            std::swap(r.num_, r.den_);
            r.normalize();
            break;
    }
    return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

bool Scalar::operator==(const Scalar& o) const {
    if (field_ != o.field_) return false;
    switch (field_.kind) {
        case FieldKind::Rationals: return q_ == o.q_;
        case FieldKind::Prime: return r_ == o.r_;
        case FieldKind::RationalFunction: return num_.c == o.num_.c && den_.c == o.den_.c;
    }
    return false;
}

std::string Scalar::str() const {
    switch (field_.kind) {
        case FieldKind::Rationals: return q_.get_str();
        case FieldKind::Prime: return std::to_string(r_);
        case FieldKind::RationalFunction: {
            bool nt = num_.deg() > 0, dt = den_.deg() > 0;
            std::string n = nt ? "(" + fp_str(num_) + ")" : fp_str(num_);
            if (!dt && den_.deg() == 0 && den_.c[0] == 1) return n;
            std::string d = dt ? "(" + fp_str(den_) + ")" : fp_str(den_);
            return n + "/" + d;
        }
    }
    return "?";
}

} // namespace cdg
