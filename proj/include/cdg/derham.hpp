#pragma once
// Twisted differential forms: the complex (Omega, df ^ -), Jacobian quotients,
// exterior calculus on explicit forms, and critical-locus ideals.

#include "cdg/complex.hpp"
#include "cdg/curved.hpp"
#include "cdg/groebner.hpp"

#include <map>
#include <vector>

namespace cdg {

// Form complex on the variables of a Laurent-free table: position q holds the dx_I with
// |I| = q (masks ascending), generator weight sum_{i in I}(weight(x_i) - 2); the
// differential is df ^ - with shift weight(f) - 2.
Complex twisted_derham(const VarTableP& table, const Poly& f);

// Explicit differential form: component polynomial per dx-subset mask.
struct Form {
    VarTableP table;
    std::map<unsigned long, Poly> comps; // zero components omitted

    bool is_zero() const { return comps.empty(); }
    void add_comp(unsigned long mask, const Poly& p);
    Form add(const Form& other) const;
    Form negated() const;
    Form scaled(const Scalar& c) const;
    bool equals(const Form& other) const;
    std::string str() const;
};

Form zero_form(const VarTableP& table);
Form poly_form(const Poly& p); // 0-form

// Exterior derivative over the polynomial variables (Laurent variables are treated as
// constants from the base).
Form derham_d(const Form& w);

Form wedge(const Form& a, const Form& b);

// Jacobian quotient of f: basis and weight counts when finite.
struct MilnorData {
    GroebnerBasis gb;
    bool finite = false;
    long dimension = -1;
    std::map<long, long> hilbert;
};
MilnorData milnor(const VarTableP& table, const Poly& f);

// Cohomology of (Omega, df ^ -) folded to parities. When the partials form a regular
// sequence (finite Jacobian quotient) the answer is closed-form; otherwise dimensions
// come from a slicewise window computation.
struct TwistedCohomology {
    bool regular = false;
    CohTable table; // Z2 keyed
    MilnorData milnor;
};
TwistedCohomology twisted_cohomology(const VarTableP& table, const Poly& f, long win_lo,
                                     long win_hi);

// Contract an ideal along the inverted variables: each generator must have a single
// Laurent exponent pattern across its terms; those exponents are unit factors.
struct LaurentContraction {
    VarTableP table;          // Laurent-free
    std::vector<int> pos_map; // old index -> new index, -1 for dropped
    std::vector<Poly> gens;
};
LaurentContraction contract_laurent(const VarTableP& table, const std::vector<Poly>& gens);

// (f) + all partials of f, contracted along inverted variables.
GroebnerBasis sing_locus(const VarTableP& table, const Poly& f);

// Same ideal for a curvature w; requires a perfect ground field.
GroebnerBasis nonreg_locus(const VarTableP& table, const Poly& w);

// Base ring with one inverted variable t of weight 2 - weight(f) adjoined and
// curvature t f.
struct TildeAlgebra {
    CurvedAlgebra alg;
    size_t t_index = 0;
    VarTableP base;
    std::vector<size_t> pos_map; // base index -> tilde index
};
TildeAlgebra tilde_construction(const VarTableP& base, const Poly& f);

} // namespace cdg
