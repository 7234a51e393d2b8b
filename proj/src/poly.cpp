#include "cdg/poly.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace cdg {

VarTable::VarTable(Field field, std::vector<VarInfo> vars) : field_(field), vars_(std::move(vars)) {
    for (const auto& v : vars_) {
        if (v.name == "s")
            throw Error("ReservedName", "s is reserved for the field parameter");
        if (v.name.empty() || !std::isalpha(static_cast<unsigned char>(v.name[0])))
            throw Error("BadVariable", "variable names start with a letter: " + v.name);
    }
    for (size_t i = 0; i < vars_.size(); ++i)
        for (size_t j = i + 1; j < vars_.size(); ++j)
            if (vars_[i].name == vars_[j].name)
                throw Error("BadVariable", "duplicate variable " + vars_[i].name);
}

std::optional<size_t> VarTable::find(const std::string& name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return i;
    return std::nullopt;
}

bool VarTable::operator==(const VarTable& o) const {
    if (field_ != o.field_ || vars_.size() != o.vars_.size()) return false;
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name != o.vars_[i].name || vars_[i].weight != o.vars_[i].weight ||
            vars_[i].laurent != o.vars_[i].laurent)
            return false;
    return true;
}

VarTableP make_vartable(Field field, std::vector<VarInfo> vars) {
    return std::make_shared<const VarTable>(field, std::move(vars));
}

long mono_weight(const VarTable& t, const Monomial& m) {
    long w = 0;
    for (size_t i = 0; i < m.size(); ++i) w += static_cast<long>(m[i]) * t.var(i).weight;
    return w;
}

int mono_total_degree(const Monomial& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

bool mono_divides(const Monomial& a, const Monomial& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Monomial mono_div(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Monomial mono_lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

namespace {

// grevlex on a contiguous index range: higher total degree wins; on ties the
// monomial with the smaller exponent at the last differing position wins.
int grevlex_cmp(const Monomial& a, const Monomial& b, size_t lo, size_t hi) {
    int da = 0, db = 0;
    for (size_t i = lo; i < hi; ++i) {
        da += a[i];
        db += b[i];
    }
    if (da != db) return da < db ? -1 : 1;
    for (size_t i = hi; i-- > lo;) {
        if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
    }
    return 0;
}

int lex_cmp(const Monomial& a, const Monomial& b, size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

} // namespace

bool MonomialOrder::greater(const Monomial& a, const Monomial& b) const {
    size_t n = a.size();
    size_t block = static_cast<size_t>(std::min<long>(elim_block, static_cast<long>(n)));
    if (block > 0) {
        int c = kind == GrevLex ? grevlex_cmp(a, b, 0, block) : lex_cmp(a, b, 0, block);
        if (c != 0) return c > 0;
    }
    int c = kind == GrevLex ? grevlex_cmp(a, b, block, n) : lex_cmp(a, b, block, n);
    return c > 0;
}

Poly Poly::constant(VarTableP t, Scalar c) {
    Poly p(std::move(t));
    if (!c.is_zero()) p.terms_.emplace(Monomial(p.table_->size(), 0), std::move(c));
    return p;
}

Poly Poly::variable(VarTableP t, size_t index, int exp) {
    Poly p(t);
    if (exp < 0 && !t->var(index).laurent)
        throw Error("NegativeExponent", t->var(index).name + " is not a Laurent variable");
    if (exp != 0 || true) {
        Monomial m(t->size(), 0);
        m[index] = exp;
        p.terms_.emplace(std::move(m), Scalar::one(t->field()));
    }
    return p;
}

void Poly::check_table(const Poly& o) const {
    if (!table_ || !o.table_ || !(*table_ == *o.table_))
        throw Error("MixedAmbient", "polynomials live over different variable tables");
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    check_table(o);
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    check_table(o);
    Poly r(table_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
    return r;
}

Poly Poly::scaled(const Scalar& c) const {
    Poly r(table_);
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

Poly Poly::pow(int n) const {
    if (n < 0) throw Error("NegativeExponent", "polynomial powers are nonnegative");
    Poly r = Poly::constant(table_, Scalar::one(table_->field()));
    Poly base = *this;
    while (n > 0) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

bool Poly::operator==(const Poly& o) const {
    if (!table_ || !o.table_) return terms_.empty() && o.terms_.empty();
    if (!(*table_ == *o.table_)) return false;
    return terms_ == o.terms_;
}

std::optional<long> Poly::weight_if_homogeneous() const {
    std::optional<long> w;
    for (const auto& [m, c] : terms_) {
        long mw = mono_weight(*table_, m);
        if (!w)
            w = mw;
        else if (*w != mw)
            return std::nullopt;
    }
    return w;
}

bool Poly::is_homogeneous() const { return is_zero() || weight_if_homogeneous().has_value(); }

long Poly::homogeneous_weight() const {
    auto w = weight_if_homogeneous();
    if (!w) throw Error("NonHomogeneous", "polynomial is not weight-homogeneous: " + str());
    return *w;
}

bool Poly::uses_laurent() const {
    for (const auto& [m, c] : terms_)
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0 && table_->var(i).laurent) return true;
    return false;
}

Poly Poly::strip_laurent() const {
    Poly r(table_);
    for (const auto& [m, c] : terms_) {
        Monomial q = m;
        for (size_t i = 0; i < q.size(); ++i)
            if (table_->var(i).laurent) q[i] = 0;
        r.add_term(q, c);
    }
    return r;
}

Poly Poly::derivative(size_t vi) const {
    Poly r(table_);
    const Field& f = table_->field();
    for (const auto& [m, c] : terms_) {
        if (m[vi] == 0) continue;
        Monomial q = m;
        q[vi] -= 1;
        r.add_term(q, c * Scalar::from_int(f, m[vi]));
    }
    return r;
}

Poly Poly::substitute(const std::vector<std::optional<Scalar>>& values) const {
    Poly r(table_);
    for (const auto& [m, c] : terms_) {
        Scalar coef = c;
        Monomial q = m;
        for (size_t i = 0; i < q.size(); ++i) {
            if (!values[i] || q[i] == 0) continue;
            Scalar v = *values[i];
            int e = q[i];
            if (e < 0) {
                v = v.inverse();
                e = -e;
            }
            for (int k = 0; k < e; ++k) coef = coef * v;
            q[i] = 0;
        }
        r.add_term(q, coef);
    }
    return r;
}

Poly Poly::extend_to(const VarTableP& bigger, const std::vector<size_t>& index_map) const {
    Poly r(bigger);
    for (const auto& [m, c] : terms_) {
        Monomial q(bigger->size(), 0);
        for (size_t i = 0; i < m.size(); ++i) q[index_map[i]] = m[i];
        r.add_term(q, c);
    }
    return r;
}

std::pair<Monomial, Scalar> Poly::leading_term(const MonomialOrder& ord) const {
    if (terms_.empty()) throw Error("ZeroPolynomial", "leading term of zero");
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
        if (ord.greater(it->first, best->first)) best = it;
    return {best->first, best->second};
}

Scalar Poly::constant_term() const {
    Monomial zero(table_->size(), 0);
    auto it = terms_.find(zero);
    return it == terms_.end() ? Scalar::zero(table_->field()) : it->second;
}

std::string mono_str(const VarTable& t, const Monomial& m) {
    std::string out;
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += t.var(i).name;
        if (m[i] != 1) out += "^" + std::to_string(m[i]);
    }
    return out;
}

std::string Poly::str(const MonomialOrder& ord) const {
    if (terms_.empty()) return "0";
    std::vector<const std::pair<const Monomial, Scalar>*> sorted;
    sorted.reserve(terms_.size());
    for (const auto& t : terms_) sorted.push_back(&t);
    std::sort(sorted.begin(), sorted.end(),
              [&](auto* a, auto* b) { return ord.greater(a->first, b->first); });
    std::string out;
    for (auto* t : sorted) {
        std::string cs = t->second.str();
        bool neg = cs.size() > 1 && cs[0] == '-';
        if (out.empty()) {
            out += neg ? "-" : "";
        } else {
            out += neg ? " - " : " + ";
        }
        if (neg) cs = cs.substr(1);
        std::string ms = mono_str(*table_, t->first);
        if (ms.empty()) {
            out += cs;
        } else if (cs == "1") {
            out += ms;
        } else {
            out += cs + "*" + ms;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Parser {
    const VarTableP& table;
    const std::string& src;
    size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw Error("ParseError", what + " at offset " + std::to_string(pos) + " in \"" + src + "\"");
    }

    long read_int() {
        skip_ws();
        size_t start = pos;
        if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) ++pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(src[start]))))
            fail("expected integer");
        return std::stol(src.substr(start, pos - start));
    }

    Poly parse_primary() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input");
        char c = src[pos];
        const Field& f = table->field();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            std::string digits = src.substr(start, pos - start);
            Scalar v = f.kind == FieldKind::Rationals
                           ? Scalar::from_mpq(mpq_class(digits))
                           : Scalar::from_int(f, std::stol(digits));
            return Poly::constant(table, v);
        }
        if (c == '(') {
            ++pos;
            Poly inner = parse_expr();
            if (!eat(')')) fail("expected )");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
                    src[pos] == '\''))
                ++pos;
            std::string name = src.substr(start, pos - start);
            int exp = 1;
            if (eat('^')) exp = static_cast<int>(read_int());
            if (name == "s") {
                Scalar sv = Scalar::parameter(f); // errors unless F_p(s)
                Scalar v = Scalar::one(f);
                int e = exp;
                if (e < 0) {
                    sv = sv.inverse();
                    e = -e;
                }
                for (int k = 0; k < e; ++k) v = v * sv;
                return Poly::constant(table, v);
            }
            auto idx = table->find(name);
            if (!idx) fail("unknown variable " + name);
            return Poly::variable(table, *idx, exp);
        }
        fail("unexpected character");
    }

    Poly parse_term() {
        Poly acc = parse_primary();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos;
                acc = acc * parse_primary();
            } else if (c == '/') {
                ++pos;
                Poly d = parse_primary();
                if (d.term_count() != 1 || mono_total_degree(d.terms().begin()->first) != 0) {
                    // scalar-valued divisor only
                    if (d.term_count() == 0) fail("division by zero");
                    bool scalar = true;
                    for (const auto& [m, cc] : d.terms())
                        if (mono_total_degree(m) != 0) scalar = false;
                    if (!scalar) fail("division only by scalars");
                }
                Scalar dv = d.constant_term();
                if (dv.is_zero()) fail("division by zero");
                acc = acc.scaled(dv.inverse());
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '(') {
                // juxtaposition like "2x" is not in the grammar; require '*'
                fail("expected operator");
            } else {
                break;
            }
        }
        return acc;
    }

    Poly parse_expr() {
        bool neg = false;
        if (peek() == '-') {
            ++pos;
            neg = true;
        } else if (peek() == '+') {
            ++pos;
        }
        Poly acc = parse_term();
        if (neg) acc = -acc;
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos;
                acc = acc + parse_term();
            } else if (c == '-') {
                ++pos;
                acc = acc - parse_term();
            } else {
                break;
            }
        }
        return acc;
    }
};

} // namespace

Poly parse_poly(const VarTableP& table, const std::string& text) {
    Parser p{table, text};
    Poly r = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return r;
}

std::vector<Monomial> monomials_of_weight(const VarTable& t, long weight) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t.var(i).laurent) continue;
        if (t.var(i).weight <= 0)
            throw Error("InfiniteSlice",
                        "variable " + t.var(i).name + " has non-positive weight; slices are infinite");
        idx.push_back(i);
    }
    std::vector<Monomial> out;
    if (weight < 0) return out;
    Monomial cur(t.size(), 0);
    // lexicographic enumeration over the declared order
    std::function<void(size_t, long)> rec = [&](size_t k, long rem) {
        if (k == idx.size()) {
            if (rem == 0) out.push_back(cur);
            return;
        }
        long w = t.var(idx[k]).weight;
        for (long e = rem / w; e >= 0; --e) {
            cur[idx[k]] = static_cast<int>(e);
            rec(k + 1, rem - e * w);
        }
        cur[idx[k]] = 0;
    };
    rec(0, weight);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace cdg
