#pragma once
// Local cohomology with supports: direct formulas on cyclic pieces, Koszul-dual
// approximations with stabilization, support membership tests, and the
// smooth/singular decision with division certificates.

#include "cdg/complex.hpp"
#include "cdg/derham.hpp"
#include "cdg/groebner.hpp"

#include <string>
#include <vector>

namespace cdg {

// Graded module given as parity-placed cyclic pieces (Q/I)[gen_weight].
struct CyclicPiece {
    long parity = 0; // 0 or 1
    long gen_weight = 0;
    GroebnerBasis relations;
};

struct GradedPresentation {
    VarTableP table;
    std::vector<CyclicPiece> pieces;
};

// Cyclic pieces of the folded cohomology of (Omega, df ^ -): one Jacobian-quotient piece
// when the partials are a regular sequence, all free form pieces when df = 0, and
// Error("NotRegularSequence") otherwise.
GradedPresentation derham_presentation(const VarTableP& table, const Poly& f);

struct RGammaResult {
    std::string verdict; // "computed" or "undetermined"
    CohTable table;      // Z2 keyed, clipped to the requested window
    std::vector<std::string> notes;
    // whether the full (unclipped) answer is a finitely generated module:
    // "finitely_generated", "not_finitely_generated", or "unknown"; certificate
    // lines name the infinite families when not finitely generated
    std::string generation = "unknown";
    std::vector<std::string> certificate;
};

// Sections supported where f vanishes, one cyclic piece at a time:
//  (a) f nilpotent on the piece: the piece passes through unchanged;
//  (b) free univariate piece with f a positive power of the variable: one class per
//      weight gen_weight - k weight(x), k >= 1, at the flipped parity;
//  (c) anything else: verdict "undetermined" with per-piece diagnostics.
RGammaResult rgamma_principal(const GradedPresentation& m, const Poly& f, long win_lo,
                              long win_hi);

// Tensor of two-term complexes A -> A[e_i] with entries -g_i^l and top generator weights
// -l weight(g_i); positions 0..n.
Complex cech_complex(const VarTableP& table, const std::vector<Poly>& gens, long l);

// Same sections computed as the stabilized cohomology of cech_complex(gens, l) tensored
// against each free piece; pieces with relations are refused (verdict "undetermined").
RGammaResult rgamma_koszul_limit(const GradedPresentation& m, const std::vector<Poly>& gens,
                                 long win_lo, long win_hi, long l_max = 12);

// Does Q/relations die on the common zero locus of the visible factors of f?
// Each variable dividing every term of f is inverted separately (the residual
// factor too); the saturations are intersected. A nonunit intersection means
// sections survive some inversion, so the module is not supported there.
struct SupportTest {
    bool not_supported = false;
    GroebnerBasis saturation; // the certificate: intersection of the per-factor saturations
};
SupportTest not_supported_on_v(const GroebnerBasis& relations, const Poly& f);

// 1 in (J(f) : f^infty) + (f). Certificates: power[i] and cofactors[i] express
// sat.gens[i] * f^power[i] as a cofactor combination of jac.gens; final_basis is the
// reduced basis of sat + (f), whose unit test decides the verdict.
struct SmoothnessReport {
    bool smooth = false;
    GroebnerBasis jac;
    GroebnerBasis sat;
    GroebnerBasis final_basis;
    std::vector<long> power;
    std::vector<std::vector<Poly>> cofactors;
};
SmoothnessReport smoothness_check(const VarTableP& table, const Poly& f);

} // namespace cdg
