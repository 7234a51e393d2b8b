#pragma once
// Cyclic words over an algebra with product, internal differential, and an optional
// curvature element whose insertions are tracked by an invertible bookkeeping power
// kappa of auxiliary weight -curvature_weight. Provides the word differential, the
// cyclic operator, the character into differential forms, exact identity checks on
// free chains, and slicewise homology tables with cap stabilization.

#include "cdg/curved.hpp"
#include "cdg/derham.hpp"

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace cdg {

struct Atom {
    size_t gen = 0; // generator index; 0 for one-object algebras
    Monomial mono;
    auto operator<=>(const Atom&) const = default;
};
using AtomCombo = std::map<Atom, Scalar>;

// One cyclic word: slot 0 carries the invertible bookkeeping power kappa; the
// remaining slots are reduced-basis atoms of the algebra modulo constants.
struct BarWord {
    long kappa = 0;
    std::vector<Atom> slots; // never empty; slots[0] is the marked slot
    auto operator<=>(const BarWord&) const = default;
    size_t degree() const { return slots.size() - 1; }
};
using BarChain = std::map<BarWord, Scalar>;

class BarAlgebra {
public:
    virtual ~BarAlgebra() = default;
    const VarTableP& table() const { return table_; }
    const Field& field() const { return table_->field(); }

    virtual size_t gen_count() const = 0;
    virtual long curvature_weight() const = 0; // 0 when uncurved
    virtual const std::vector<std::pair<Atom, Scalar>>& curvature_atoms() const = 0;
    virtual int parity(const Atom&) const = 0;
    virtual long aux(const Atom&) const = 0;
    virtual AtomCombo mul(const Atom&, const Atom&) const = 0;
    virtual AtomCombo diff(const Atom&) const = 0;
    virtual AtomCombo unit() const = 0;
    // image of an atom in the chosen basis of A / k 1 (empty when it dies)
    virtual AtomCombo project_reduced(const Atom&) const = 0;
    virtual bool reduced_basis_atom(const Atom&) const = 0;
    virtual std::string atom_str(const Atom&) const = 0;

protected:
    explicit BarAlgebra(VarTableP t) : table_(std::move(t)) {}
    VarTableP table_;
};

// Commutative polynomial algebra (Laurent-free table), all atoms even, no internal
// differential; optional curvature potential f with no constant term, inserted with
// kappa going up by one per insertion.
class PolynomialBarAlgebra : public BarAlgebra {
public:
    PolynomialBarAlgebra(VarTableP table, Poly f);
    const Poly& potential() const { return f_; }

    size_t gen_count() const override { return 1; }
    long curvature_weight() const override { return fw_; }
    const std::vector<std::pair<Atom, Scalar>>& curvature_atoms() const override;
    int parity(const Atom&) const override { return 0; }
    long aux(const Atom&) const override;
    AtomCombo mul(const Atom&, const Atom&) const override;
    AtomCombo diff(const Atom&) const override { return {}; }
    AtomCombo unit() const override;
    AtomCombo project_reduced(const Atom&) const override;
    bool reduced_basis_atom(const Atom&) const override;
    std::string atom_str(const Atom&) const override;

private:
    Poly f_;
    long fw_ = 0;
    std::vector<std::pair<Atom, Scalar>> curv_;
};

// Endomorphism dg algebra of a curved pair: atoms are monomial multiples of matrix
// units, the differential is the commutator with d, and there is no curvature term.
// Differential entries must be Laurent-free.
class EndDgaBarAlgebra : public BarAlgebra {
public:
    explicit EndDgaBarAlgebra(const CurvedModule& k);
    const EndBasis& basis() const { return basis_; }

    size_t gen_count() const override { return gens_.size(); }
    long curvature_weight() const override { return 0; }
    const std::vector<std::pair<Atom, Scalar>>& curvature_atoms() const override;
    int parity(const Atom&) const override;
    long aux(const Atom&) const override;
    AtomCombo mul(const Atom&, const Atom&) const override;
    AtomCombo diff(const Atom&) const override;
    AtomCombo unit() const override;
    AtomCombo project_reduced(const Atom&) const override;
    bool reduced_basis_atom(const Atom&) const override;
    std::string atom_str(const Atom&) const override;

private:
    struct Gen { // matrix unit tgt <- src with global parities
        size_t eps_src, src, eps_tgt, tgt;
    };
    CurvedModule mod_;
    EndBasis basis_;
    std::vector<Gen> gens_; // global index order: even block then odd block
    std::vector<std::pair<Atom, Scalar>> none_;
};

long word_aux(const BarAlgebra& a, const BarWord& u);   // slice key s
int word_parity(const BarAlgebra& a, const BarWord& u); // slice parity
long word_raw(const BarAlgebra& a, const BarWord& u);   // s + curvature_weight * kappa
std::string word_str(const BarAlgebra& a, const BarWord& u);
bool chain_is_zero(const BarChain& c);

// word differential: slot merges with cyclic wrap, internal differential, and
// curvature insertions; exact on free chains, no truncation involved
BarChain differential(const BarAlgebra& a, const BarWord& u);
BarChain differential(const BarAlgebra& a, const BarChain& c);

// cyclic operator (degree +1)
BarChain connes_b(const BarAlgebra& a, const BarWord& u);
BarChain connes_b(const BarAlgebra& a, const BarChain& c);

// multilinear expansion of polynomial slots into basis words
BarChain make_chain(const PolynomialBarAlgebra& a, long kappa, const std::vector<Poly>& slots);

// character into forms, indexed by the bookkeeping power
using TwistedForm = std::map<long, Form>;
TwistedForm chern(const PolynomialBarAlgebra& a, const BarWord& u);
TwistedForm chern(const PolynomialBarAlgebra& a, const BarChain& c);
bool twisted_equal(const TwistedForm& a, const TwistedForm& b);
TwistedForm twisted_d(const TwistedForm& w);
// d(potential) ^ -, raising the bookkeeping power by one
TwistedForm twisted_wedge_df(const PolynomialBarAlgebra& a, const TwistedForm& w);

// exact identity checks on free chains
bool check_d_squared(const BarAlgebra& a, const BarWord& u);
bool check_b_squared(const BarAlgebra& a, const BarWord& u);
bool check_mixed(const BarAlgebra& a, const BarWord& u); // D B + B D = 0, uncurved only
bool check_chern_d(const PolynomialBarAlgebra& a, const BarWord& u);
bool check_chern_b(const PolynomialBarAlgebra& a, const BarWord& u);

BarWord random_word(const BarAlgebra& a, std::mt19937_64& rng, long max_len, long max_exp);

// basis of the (parity, s) slice of the quotient complex with kappa <= kappa_cap,
// sorted so that the cap-K basis is a prefix of every larger-cap basis
std::vector<BarWord> slice_basis_z2(const PolynomialBarAlgebra& a, int parity, long s,
                                    long kappa_cap);
// basis of the (length n, s) slice for uncurved algebras
std::vector<BarWord> slice_basis_z(const PolynomialBarAlgebra& a, long n, long s);

// Homology table keyed (parity, s). Words above a kappa cap form a subcomplex, so
// each cap gives an honest quotient complex; the reported dimension at cap K is the
// rank of the map induced on homology by the further quotient from cap K+gap, which
// removes classes created at the boundary. The table is periodic in s with period
// curvature_weight (relabeling kappa is an isomorphism of slice complexes), so one
// representative per residue is computed and caps grow until three rounds agree.
struct BarTable {
    std::map<std::pair<long, long>, long> dims;
    bool stabilized = false;
    long kappa_used = 0;
    long gap_used = 0;
};
BarTable hochschild_z2_window(const PolynomialBarAlgebra& a, long s_lo, long s_hi,
                              long kappa0 = 1, int rounds = 4, long gap = 1);

// integer-graded homology for uncurved commutative algebras, keyed (-n, s)
struct BarZTable {
    std::map<std::pair<long, long>, long> dims;
};
BarZTable hochschild_z_window(const PolynomialBarAlgebra& a, long n_max, long s_lo, long s_hi);

} // namespace cdg
