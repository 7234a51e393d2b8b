#pragma once
// Curved pairs (M, d) with d^2 = w id over a commutative graded base, Koszul-type
// generators, tensor and dual constructions, and support probes.

#include "cdg/complex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cdg {

struct CurvedAlgebra {
    VarTableP table;
    Poly w; // homogeneous of weight 2
    void validate() const;
};

// Two-periodic pair whose differential squares to w times the identity; maps carry shift 1.
struct CurvedModule {
    CurvedAlgebra alg;
    Complex pair; // Z2 mode
    void validate() const;
};

// Exterior-algebra module on e_1..e_n with d = contraction by the g_i plus wedge by the y_i;
// requires sum g_i y_i = w and weight(g_i) + weight(y_i) = 2. Generators are indexed by
// subset bitmasks listed in ascending order within each parity.
CurvedModule koszul_curved(const CurvedAlgebra& alg, const std::vector<Poly>& gs,
                           const std::vector<Poly>& ys);

// Tensor of curved pairs; curvatures add.
CurvedModule tensor_curved(const CurvedModule& a, const CurvedModule& b);

// Dual pair; curvature flips sign.
CurvedModule dual_curved(const CurvedModule& m);

// a (x) dual(b); curvature is w_a - w_b.
CurvedModule psi_tensor(const CurvedModule& a, const CurvedModule& b);

// Endomorphism complex with differential [d, -]; an honest two-periodic dg algebra.
Complex endomorphism_dga(const CurvedModule& m);

// Generator dictionary for endomorphism_dga: entry k of parity eps describes the matrix
// unit sending source generator (eps_src, src) to target generator (eps_tgt, tgt).
struct EndBasis {
    struct Gen {
        size_t eps_src, src, eps_tgt, tgt;
    };
    std::vector<Gen> even, odd;
};
EndBasis end_basis(const CurvedModule& m);

// Odd h with d h + h d = g^m id certifies that the pair dies after inverting g.
struct SupportCertificate {
    bool found = false;
    long m = 0;
    ModuleMap h0, h1; // valid only when found
};

// Tries m = 1..m_max; entry monomials bounded by degree_bound. A miss is inconclusive.
SupportCertificate support_exclude(const CurvedModule& mod, const Poly& g, long m_max,
                                   long degree_bound);

// Homology of the endomorphism complex evaluated at a point (one scalar per
// variable); nonzero dimensions certify the point lies in the support.
struct FiberDims {
    bool is_complex = false; // w vanishes at the point
    long even_dim = 0, odd_dim = 0;
};
FiberDims support_include(const CurvedModule& mod, const std::vector<Scalar>& point);

// Koszul pair on one generator g with w = g y, probed for a homotopy d h + h d = id.
// Applicable only when the nonregular locus of w is empty; w = 0 fails the precondition.
struct TrivialityReport {
    bool precondition_ok = false; // w != 0
    bool applicable = false;      // nonregular locus is the unit ideal
    std::vector<std::string> nonreg; // its reduced basis
    SupportCertificate cert;      // meaningful when applicable
};
TrivialityReport regular_triviality_probe(const CurvedAlgebra& alg, const Poly& g,
                                          const Poly& y, long degree_bound);

} // namespace cdg
