#pragma once
// Free graded modules, weight-homogeneous maps, finite complexes, slicewise cohomology.

#include "cdg/linalg.hpp"
#include "cdg/poly.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cdg {

enum class GradingMode { Z, Z2 };

// Finitely generated free module; element weight = coefficient weight + generator weight.
struct FreeModule {
    VarTableP table;
    std::vector<long> gen_weights;
    std::vector<std::string> gen_names; // empty or aligned with gen_weights

    size_t rank() const { return gen_weights.size(); }
    std::string name_of(size_t i) const;
};

FreeModule direct_sum(const FreeModule& a, const FreeModule& b);

// Weight slice of a free module: pairs (generator index, coefficient monomial).
struct SliceBasis {
    std::vector<std::pair<size_t, Monomial>> elems;
    size_t index_of(size_t gen, const Monomial& m) const;
    std::map<std::pair<size_t, Monomial>, size_t> index;
};

SliceBasis module_slice(const FreeModule& m, long weight);

// Map of free modules; nonzero entries satisfy
//   |entries[r][s]| = src weight(s) - tgt weight(r) + shift.
struct ModuleMap {
    FreeModule src, tgt;
    long shift = 0;
    std::vector<std::vector<Poly>> entries; // entries[r][s], r over tgt, s over src

    static ModuleMap zero(const FreeModule& src, const FreeModule& tgt, long shift);
    static ModuleMap identity(const FreeModule& m);
    static ModuleMap scaled_identity(const FreeModule& m, const Poly& g);

    void validate() const; // throws InhomogeneousEntry / ShapeMismatch
    bool is_zero() const;
    ModuleMap add(const ModuleMap& other) const;
    ModuleMap sub(const ModuleMap& other) const;
    ModuleMap negated() const;
    ModuleMap scaled(const Poly& g) const;
    ModuleMap with_shift(long s) const; // same entries, declared shift overridden
    bool equals(const ModuleMap& other) const;
};

// f after g
ModuleMap compose(const ModuleMap& f, const ModuleMap& g);

// Matrix of the map on the weight slice at src_weight (target slice sits at src_weight + shift).
ScalarMatrix slice_matrix(const ModuleMap& f, long src_weight,
                          const SliceBasis& src_slice, const SliceBasis& tgt_slice);

// Evaluate every entry at a point (one value per variable); entries must become constants.
ScalarMatrix evaluate_map(const ModuleMap& f, const std::vector<Scalar>& values);

// Finite complex. Z mode: modules[i] sits at position lo + i and maps[i] goes up one
// position (size len - 1). Z2 mode: two modules at positions 0, 1 and two maps,
// maps[0]: M0 -> M1, maps[1]: M1 -> M0.
struct Complex {
    GradingMode mode = GradingMode::Z;
    long lo = 0;
    std::vector<FreeModule> modules;
    std::vector<ModuleMap> maps;

    long position_of(size_t i) const { return mode == GradingMode::Z ? lo + (long)i : (long)i; }
    size_t length() const { return modules.size(); }
};

// Map and shape consistency plus d(d(x)) = 0; throws NotAComplex on failure.
void check_complex(const Complex& cx);

// Suspension by n: positions drop by n, generator weights drop by n, odd n negates maps.
Complex shift_complex(const Complex& cx, long n);

// Collapse a Z complex to Z2 by position parity (blocks ordered by ascending position).
Complex fold_z2(const Complex& cx);

// Tensor product of Z complexes; d(x ox y) = dx ox y + (-1)^p x ox dy.
Complex tensor_z(const Complex& x, const Complex& y);

// Tensor product of Z2 pairs (curved pairs allowed, nothing is validated here).
// Even part lists M0 ox N0 then M1 ox N1; odd part lists M1 ox N0 then M0 ox N1.
Complex tensor_z2(const Complex& x, const Complex& y);

// Hom complex; differential D(g) = d_Y g - (-1)^{|g|} g d_X with |g| the position.
Complex hom_complex(const Complex& x, const Complex& y);

// Degree-0 chain map between complexes of the same mode; parts aligned with positions
// (Z mode: part i maps src.modules[i], src.lo must equal tgt.lo and lengths match).
struct ChainMap {
    Complex src, tgt;
    std::vector<ModuleMap> parts;
    void validate() const; // shape, homogeneity, commutation with differentials
};

// Mapping cone: position p carries tgt_p (+) src_{p+1}; differential [[d_tgt, f], [0, -d_src]].
// Z2 mode: parity p carries tgt_p (+) src_{1-p}. Generator weights are kept as given, so the
// shifts of f and of both differentials must agree; weight reindexing is the caller's business.
Complex cone(const ChainMap& f);

// Cohomology dimensions per (position, weight) over a weight window.
struct CohTable {
    GradingMode mode = GradingMode::Z;
    std::map<std::pair<long, long>, long> dims; // (position, weight) -> dim, zeros omitted
};

CohTable cohomology_window(const Complex& cx, long weight_lo, long weight_hi);

std::string to_csv(const CohTable& table);

// All Laurent-allowed monomials of the given weight with total absolute degree at most
// degree_bound, sorted; finite by construction.
std::vector<Monomial> bounded_monomials(const VarTableP& table, long weight, long degree_bound);

// Odd h with d h + h d = tau for a Z2 pair d = (d0, d1), tau = (tau0, tau1) degree-0
// self-maps. Entry monomials are drawn from bounded_monomials with the given bound.
std::optional<std::pair<ModuleMap, ModuleMap>>
find_null_homotopy(const ModuleMap& d0, const ModuleMap& d1,
                   const ModuleMap& tau0, const ModuleMap& tau1, long degree_bound);

} // namespace cdg
