#pragma once
// Weighted multivariate polynomials over an exact scalar field, with optional
// Laurent variables (negative exponents allowed, excluded from Groebner work).

#include "cdg/scalar.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace cdg {

struct VarInfo {
    std::string name;
    long weight = 0;
    bool laurent = false;
};

class VarTable {
public:
    VarTable(Field field, std::vector<VarInfo> vars);
    const Field& field() const { return field_; }
    const std::vector<VarInfo>& vars() const { return vars_; }
    size_t size() const { return vars_.size(); }
    const VarInfo& var(size_t i) const { return vars_[i]; }
    std::optional<size_t> find(const std::string& name) const;
    bool operator==(const VarTable& o) const;

private:
    Field field_;
    std::vector<VarInfo> vars_;
};

using VarTableP = std::shared_ptr<const VarTable>;

VarTableP make_vartable(Field field, std::vector<VarInfo> vars);

// exponent vector, one slot per table variable; Laurent slots may go negative
using Monomial = std::vector<int>;

long mono_weight(const VarTable& t, const Monomial& m);
int mono_total_degree(const Monomial& m);
bool mono_divides(const Monomial& a, const Monomial& b); // a | b
Monomial mono_mul(const Monomial& a, const Monomial& b);
Monomial mono_div(const Monomial& a, const Monomial& b); // a / b, caller checks divisibility
Monomial mono_lcm(const Monomial& a, const Monomial& b);

struct MonomialOrder {
    enum Kind { GrevLex, Lex };
    Kind kind = GrevLex;
    // When positive, the first `elim_block` variables form an elimination block:
    // monomials are compared on the block first, so a Groebner basis intersected
    // with the block-free part generates the elimination ideal.
    int elim_block = 0;

    // true when a > b
    bool greater(const Monomial& a, const Monomial& b) const;
    static MonomialOrder grevlex() { return {GrevLex, 0}; }
    static MonomialOrder lex() { return {Lex, 0}; }
    static MonomialOrder eliminate(int block, Kind rest = GrevLex) { return {rest, block}; }
};

class Poly {
public:
    Poly() = default;
    explicit Poly(VarTableP t) : table_(std::move(t)) {}
    static Poly zero(VarTableP t) { return Poly(std::move(t)); }
    static Poly constant(VarTableP t, Scalar c);
    static Poly variable(VarTableP t, size_t index, int exp = 1);

    const VarTableP& table() const { return table_; }
    const std::map<Monomial, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    void add_term(const Monomial& m, const Scalar& c); // merges, drops zeros

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly scaled(const Scalar& c) const;
    Poly pow(int n) const;
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // weighted degree of a homogeneous polynomial; Error("NonHomogeneous") otherwise
    long homogeneous_weight() const;
    bool is_homogeneous() const;
    std::optional<long> weight_if_homogeneous() const;

    bool uses_laurent() const;              // any Laurent variable with nonzero exponent
    Poly strip_laurent() const;             // zero out Laurent exponents (divide by the t-part)
    Poly derivative(size_t var_index) const;
    Poly substitute(const std::vector<std::optional<Scalar>>& values) const; // partial evaluation
    Poly extend_to(const VarTableP& bigger,
                   const std::vector<size_t>& index_map) const; // relabel into a larger table

    std::pair<Monomial, Scalar> leading_term(const MonomialOrder& ord) const; // poly must be nonzero
    Scalar constant_term() const;

    std::string str(const MonomialOrder& ord = MonomialOrder::grevlex()) const;

private:
    VarTableP table_;
    std::map<Monomial, Scalar> terms_;
    void check_table(const Poly& o) const;
};

// grammar: terms joined by +/-, each a '*'-product of integer literals, integer
// fractions, variables with optional ^exponent (negative only for Laurent vars),
// the reserved field parameter s, and parenthesized subexpressions; '/' divides
// by a scalar-valued factor.
Poly parse_poly(const VarTableP& table, const std::string& text);

// exponent vectors of the non-Laurent monomials of the given weight.
// Requires every non-Laurent variable weight to be >= 1, else Error("InfiniteSlice").
std::vector<Monomial> monomials_of_weight(const VarTable& t, long weight);

std::string mono_str(const VarTable& t, const Monomial& m);

} // namespace cdg
