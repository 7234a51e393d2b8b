#pragma once
// Buchberger-based ideal arithmetic: reduced Groebner bases, normal forms with
// division certificates, staircase dimension counts, saturation, Jacobian ideals.

#include "cdg/poly.hpp"

namespace cdg {

struct GroebnerBasis {
    VarTableP table;
    MonomialOrder order;
    std::vector<Poly> gens; // reduced, monic, sorted by leading monomial ascending

    bool is_unit_ideal() const;
    bool is_zero_ideal() const { return gens.empty(); }
};

// Deterministic Buchberger: pairs selected by smallest lcm total degree, then
// lowest pair index; inputs may not involve Laurent variables.
GroebnerBasis buchberger(const std::vector<Poly>& gens,
                         const MonomialOrder& order = MonomialOrder::grevlex());

struct DivisionResult {
    Poly remainder;
    std::vector<Poly> quotients; // aligned with gb.gens: p = sum q_i g_i + remainder
};

Poly normal_form(const Poly& p, const GroebnerBasis& gb);
DivisionResult divide(const Poly& p, const GroebnerBasis& gb);
bool ideal_contains(const GroebnerBasis& gb, const Poly& p);

struct QuotientDimension {
    bool finite = false;
    long dimension = 0;                      // staircase count when finite
    std::vector<Monomial> basis;             // staircase monomials when finite
    std::map<long, long> hilbert;            // weight -> count, when finite
};

QuotientDimension quotient_dimension(const GroebnerBasis& gb);

// staircase monomial count of the quotient in a single weight
long quotient_dim_at_weight(const GroebnerBasis& gb, long weight);

// I : f^infinity via an auxiliary inverse variable and block elimination
GroebnerBasis saturate(const GroebnerBasis& ideal, const Poly& f);

// I ∩ J via u I + (1 - u) J and elimination of u; both over the same table
GroebnerBasis intersect_ideals(const GroebnerBasis& a, const GroebnerBasis& b);

// partial derivatives with respect to the listed variables (indices into the table)
std::vector<Poly> jacobian_ideal(const Poly& f, const std::vector<size_t>& vars);

} // namespace cdg
