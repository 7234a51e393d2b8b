#include "cdg/hochschild.hpp"

#include "cdg/linalg.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>

namespace cdg {

namespace {

Scalar sign_scalar(const Field& f, long exponent) {
    long e = ((exponent % 2) + 2) % 2;
    return e ? Scalar::from_int(f, -1) : Scalar::one(f);
}

void add_word(BarChain& out, BarWord w, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = out.find(w);
    if (it == out.end()) {
        out.emplace(std::move(w), c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) out.erase(it);
    }
}

// expand the inner slots (positions >= 1) through the reduced basis of A / k 1
void normalize_rec(const BarAlgebra& a, BarChain& out, BarWord& w, size_t pos, const Scalar& c) {
    if (pos >= w.slots.size()) {
        add_word(out, w, c);
        return;
    }
    if (a.reduced_basis_atom(w.slots[pos])) {
        normalize_rec(a, out, w, pos + 1, c);
        return;
    }
    AtomCombo red = a.project_reduced(w.slots[pos]);
    Atom saved = w.slots[pos];
    for (const auto& [at, rc] : red) {
        w.slots[pos] = at;
        normalize_rec(a, out, w, pos + 1, c * rc);
    }
    w.slots[pos] = saved;
}

void add_normalized(const BarAlgebra& a, BarChain& out, const BarWord& w, const Scalar& c) {
    if (c.is_zero()) return;
    BarWord tmp = w;
    normalize_rec(a, out, tmp, 1, c);
}

BarChain chain_add(const BarChain& a, const BarChain& b) {
    BarChain out = a;
    for (const auto& [w, c] : b) add_word(out, w, c);
    return out;
}

Poly mono_poly(const VarTableP& t, const Monomial& m, const Scalar& c) {
    Poly p = Poly::zero(t);
    p.add_term(m, c);
    return p;
}

} // namespace

// ---------------------------------------------------------------- polynomial algebra

PolynomialBarAlgebra::PolynomialBarAlgebra(VarTableP table, Poly f)
    : BarAlgebra(std::move(table)), f_(std::move(f)) {
    for (const auto& v : table_->vars())
        if (v.laurent)
            throw Error("LaurentVariablePresent",
                        "cyclic word slots are taken over the polynomial part; the invertible "
                        "variable is tracked by the bookkeeping power instead");
    if (f_.table() == nullptr) f_ = Poly::zero(table_);
    if (!f_.is_zero()) {
        if (!(*f_.table() == *table_)) throw Error("MixedAmbient", "potential over a different table");
        if (!f_.constant_term().is_zero())
            throw Error("CurvatureConstantTerm", "potential must vanish at the origin");
        fw_ = f_.homogeneous_weight();
        if (fw_ < 1) throw Error("CurvatureWeight", "potential weight must be positive");
        for (const auto& [m, c] : f_.terms()) curv_.emplace_back(Atom{0, m}, c);
    }
}

const std::vector<std::pair<Atom, Scalar>>& PolynomialBarAlgebra::curvature_atoms() const {
    return curv_;
}

long PolynomialBarAlgebra::aux(const Atom& a) const { return mono_weight(*table_, a.mono); }

AtomCombo PolynomialBarAlgebra::mul(const Atom& a, const Atom& b) const {
    return {{Atom{0, mono_mul(a.mono, b.mono)}, Scalar::one(field())}};
}

AtomCombo PolynomialBarAlgebra::unit() const {
    return {{Atom{0, Monomial(table_->size(), 0)}, Scalar::one(field())}};
}

AtomCombo PolynomialBarAlgebra::project_reduced(const Atom& a) const {
    if (reduced_basis_atom(a)) return {{a, Scalar::one(field())}};
    return {};
}

bool PolynomialBarAlgebra::reduced_basis_atom(const Atom& a) const {
    for (int e : a.mono)
        if (e != 0) return true;
    return false;
}

std::string PolynomialBarAlgebra::atom_str(const Atom& a) const { return mono_str(*table_, a.mono); }

// ---------------------------------------------------------------- endomorphism algebra

EndDgaBarAlgebra::EndDgaBarAlgebra(const CurvedModule& k)
    : BarAlgebra(k.alg.table), mod_(k), basis_(end_basis(k)) {
    for (const auto& m : mod_.pair.maps)
        for (const auto& row : m.entries)
            for (const auto& e : row)
                if (e.uses_laurent())
                    throw Error("LaurentVariablePresent",
                                "endomorphism words need polynomial differential entries");
    for (const auto& g : basis_.even) gens_.push_back({g.eps_src, g.src, g.eps_tgt, g.tgt});
    for (const auto& g : basis_.odd) gens_.push_back({g.eps_src, g.src, g.eps_tgt, g.tgt});
    if (gens_.empty()) throw Error("EmptyModule", "endomorphism algebra of a rank zero pair");
}

const std::vector<std::pair<Atom, Scalar>>& EndDgaBarAlgebra::curvature_atoms() const {
    return none_;
}

int EndDgaBarAlgebra::parity(const Atom& a) const {
    const Gen& g = gens_.at(a.gen);
    return static_cast<int>((g.eps_src + g.eps_tgt) % 2);
}

long EndDgaBarAlgebra::aux(const Atom& a) const {
    const Gen& g = gens_.at(a.gen);
    return mono_weight(*table_, a.mono) + mod_.pair.modules[g.eps_tgt].gen_weights[g.tgt] -
           mod_.pair.modules[g.eps_src].gen_weights[g.src];
}

AtomCombo EndDgaBarAlgebra::mul(const Atom& a, const Atom& b) const {
    const Gen& ga = gens_.at(a.gen);
    const Gen& gb = gens_.at(b.gen);
    if (ga.eps_src != gb.eps_tgt || ga.src != gb.tgt) return {};
    for (size_t i = 0; i < gens_.size(); ++i) {
        const Gen& gc = gens_[i];
        if (gc.eps_src == gb.eps_src && gc.src == gb.src && gc.eps_tgt == ga.eps_tgt &&
            gc.tgt == ga.tgt)
            return {{Atom{i, mono_mul(a.mono, b.mono)}, Scalar::one(field())}};
    }
    throw Error("EndBasisGap", "matrix unit missing from the generator dictionary");
}

AtomCombo EndDgaBarAlgebra::diff(const Atom& a) const {
    const Gen& g = gens_.at(a.gen);
    AtomCombo out;
    auto accumulate = [&](size_t eps_src, size_t src, size_t eps_tgt, size_t tgt, const Poly& entry,
                          const Scalar& side) {
        if (entry.is_zero()) return;
        size_t idx = gens_.size();
        for (size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].eps_src == eps_src && gens_[i].src == src && gens_[i].eps_tgt == eps_tgt &&
                gens_[i].tgt == tgt) {
                idx = i;
                break;
            }
        if (idx == gens_.size()) throw Error("EndBasisGap", "matrix unit missing");
        for (const auto& [m, c] : entry.terms()) {
            Atom at{idx, mono_mul(a.mono, m)};
            Scalar v = side * c;
            auto it = out.find(at);
            if (it == out.end()) {
                out.emplace(at, v);
            } else {
                it->second = it->second + v;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    };
    // post-compose with d out of the target parity
    const ModuleMap& dt = mod_.pair.maps[g.eps_tgt];
    for (size_t r = 0; r < dt.tgt.rank(); ++r)
        accumulate(g.eps_src, g.src, 1 - g.eps_tgt, r, dt.entries[r][g.tgt], Scalar::one(field()));
    // pre-compose with d into the source parity, with the commutator sign
    const ModuleMap& ds = mod_.pair.maps[1 - g.eps_src];
    Scalar sg = sign_scalar(field(), parity(a) + 1);
    for (size_t s = 0; s < ds.src.rank(); ++s)
        accumulate(1 - g.eps_src, s, g.eps_tgt, g.tgt, ds.entries[g.src][s], sg);
    return out;
}

AtomCombo EndDgaBarAlgebra::unit() const {
    AtomCombo out;
    Monomial zero(table_->size(), 0);
    for (size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].eps_src == gens_[i].eps_tgt && gens_[i].src == gens_[i].tgt)
            out.emplace(Atom{i, zero}, Scalar::one(field()));
    return out;
}

AtomCombo EndDgaBarAlgebra::project_reduced(const Atom& a) const {
    if (reduced_basis_atom(a)) return {{a, Scalar::one(field())}};
    AtomCombo out;
    Monomial zero(table_->size(), 0);
    Scalar minus = Scalar::from_int(field(), -1);
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (i == a.gen) continue;
        if (gens_[i].eps_src == gens_[i].eps_tgt && gens_[i].src == gens_[i].tgt)
            out.emplace(Atom{i, zero}, minus);
    }
    return out;
}

bool EndDgaBarAlgebra::reduced_basis_atom(const Atom& a) const {
    // the dropped direction is the first diagonal unit with trivial coefficient
    for (int e : a.mono)
        if (e != 0) return true;
    for (size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].eps_src == gens_[i].eps_tgt && gens_[i].src == gens_[i].tgt)
            return i != a.gen;
    return true;
}

std::string EndDgaBarAlgebra::atom_str(const Atom& a) const {
    const Gen& g = gens_.at(a.gen);
    std::ostringstream os;
    bool triv = true;
    for (int e : a.mono)
        if (e != 0) triv = false;
    if (!triv) os << mono_str(*table_, a.mono) << "*";
    os << "E[" << mod_.pair.modules[g.eps_tgt].name_of(g.tgt) << "<-"
       << mod_.pair.modules[g.eps_src].name_of(g.src) << "]";
    return os.str();
}

// ---------------------------------------------------------------- word operations

long word_aux(const BarAlgebra& a, const BarWord& u) {
    long s = 0;
    for (const auto& at : u.slots) s += a.aux(at);
    return s - a.curvature_weight() * u.kappa;
}

int word_parity(const BarAlgebra& a, const BarWord& u) {
    long p = static_cast<long>(u.degree());
    for (const auto& at : u.slots) p += a.parity(at);
    return static_cast<int>(((p % 2) + 2) % 2);
}

long word_raw(const BarAlgebra& a, const BarWord& u) {
    return word_aux(a, u) + a.curvature_weight() * u.kappa;
}

std::string word_str(const BarAlgebra& a, const BarWord& u) {
    std::ostringstream os;
    if (u.kappa != 0) os << "t^" << u.kappa << " ";
    os << "(" << a.atom_str(u.slots[0]);
    for (size_t i = 1; i < u.slots.size(); ++i) os << (i == 1 ? "; " : ", ") << a.atom_str(u.slots[i]);
    os << ")";
    return os.str();
}

bool chain_is_zero(const BarChain& c) { return c.empty(); }

BarChain differential(const BarAlgebra& a, const BarWord& u) {
    const auto& sl = u.slots;
    if (sl.empty()) throw Error("EmptyWord", "a word needs a marked slot");
    const size_t n = sl.size() - 1;
    const Field& F = a.field();

    std::vector<long> P(sl.size());
    P[0] = a.parity(sl[0]) % 2;
    for (size_t i = 1; i <= n; ++i) P[i] = (P[i - 1] + a.parity(sl[i]) + 1) % 2;

    BarChain out;
    // adjacent merges
    for (size_t i = 0; i < n; ++i) {
        Scalar sg = sign_scalar(F, P[i]);
        AtomCombo prod = a.mul(sl[i], sl[i + 1]);
        for (const auto& [at, c] : prod) {
            BarWord w;
            w.kappa = u.kappa;
            w.slots.assign(sl.begin(), sl.begin() + static_cast<long>(i));
            w.slots.push_back(at);
            w.slots.insert(w.slots.end(), sl.begin() + static_cast<long>(i) + 2, sl.end());
            add_normalized(a, out, w, sg * c);
        }
    }
    // cyclic wrap of the last slot onto the marked one
    if (n >= 1) {
        Scalar sg = sign_scalar(F, 1 + (a.parity(sl[n]) + 1) * P[n - 1]);
        AtomCombo prod = a.mul(sl[n], sl[0]);
        for (const auto& [at, c] : prod) {
            BarWord w;
            w.kappa = u.kappa;
            w.slots.push_back(at);
            w.slots.insert(w.slots.end(), sl.begin() + 1, sl.end() - 1);
            add_normalized(a, out, w, sg * c);
        }
    }
    // internal differential
    for (size_t i = 0; i <= n; ++i) {
        AtomCombo da = a.diff(sl[i]);
        if (da.empty()) continue;
        // shifted slots carry s d s^{-1} = -d, slot 0 is unshifted
        Scalar sg = sign_scalar(F, i == 0 ? 0 : P[i - 1] + 1);
        for (const auto& [at, c] : da) {
            BarWord w = u;
            w.slots[i] = at;
            add_normalized(a, out, w, sg * c);
        }
    }
    // curvature insertions, one bookkeeping power each
    const auto& curv = a.curvature_atoms();
    if (!curv.empty()) {
        for (size_t i = 0; i <= n; ++i) {
            Scalar sg = sign_scalar(F, P[i]);
            for (const auto& [at, c] : curv) {
                BarWord w = u;
                w.kappa = u.kappa + 1;
                w.slots.insert(w.slots.begin() + static_cast<long>(i) + 1, at);
                add_normalized(a, out, w, sg * c);
            }
        }
    }
    return out;
}

BarChain differential(const BarAlgebra& a, const BarChain& c) {
    BarChain out;
    for (const auto& [w, v] : c)
        for (const auto& [w2, v2] : differential(a, w)) add_word(out, w2, v * v2);
    return out;
}

BarChain connes_b(const BarAlgebra& a, const BarWord& u) {
    const Field& F = a.field();
    const size_t m = u.slots.size();
    AtomCombo un = a.unit();
    BarChain out;

    std::vector<Atom> cur = u.slots;
    long curExp = 0;
    for (size_t l = 0; l < m; ++l) {
        for (const auto& [ua, uc] : un) {
            BarWord w;
            w.kappa = u.kappa;
            w.slots.reserve(m + 1);
            w.slots.push_back(ua);
            w.slots.insert(w.slots.end(), cur.begin(), cur.end());
            add_normalized(a, out, w, sign_scalar(F, curExp) * uc);
            // minus the inverse rotation, which moves the fresh unit slot to the end
            long ssum = 0;
            for (size_t j = 1; j < w.slots.size(); ++j) ssum += a.parity(w.slots[j]) + 1;
            long e2 = (a.parity(w.slots[0]) + 1) * ssum;
            BarWord w2;
            w2.kappa = u.kappa;
            w2.slots.assign(w.slots.begin() + 1, w.slots.end());
            w2.slots.push_back(w.slots[0]);
            add_normalized(a, out, w2, sign_scalar(F, curExp + e2 + 1) * uc);
        }
        if (l + 1 < m) {
            long ssum = 0;
            for (size_t j = 0; j + 1 < m; ++j) ssum += a.parity(cur[j]) + 1;
            curExp += (a.parity(cur[m - 1]) + 1) * ssum;
            Atom x = cur.back();
            cur.pop_back();
            cur.insert(cur.begin(), x);
        }
    }
    return out;
}

BarChain connes_b(const BarAlgebra& a, const BarChain& c) {
    BarChain out;
    for (const auto& [w, v] : c)
        for (const auto& [w2, v2] : connes_b(a, w)) add_word(out, w2, v * v2);
    return out;
}

BarChain make_chain(const PolynomialBarAlgebra& a, long kappa, const std::vector<Poly>& slots) {
    if (slots.empty()) throw Error("EmptyWord", "a word needs a marked slot");
    BarChain out;
    BarWord w;
    w.kappa = kappa;
    std::function<void(size_t, const Scalar&)> rec = [&](size_t i, const Scalar& c) {
        if (i == slots.size()) {
            add_normalized(a, out, w, c);
            return;
        }
        for (const auto& [m, v] : slots[i].terms()) {
            w.slots.push_back(Atom{0, m});
            rec(i + 1, c * v);
            w.slots.pop_back();
        }
    };
    rec(0, Scalar::one(a.field()));
    return out;
}

// ---------------------------------------------------------------- character

TwistedForm chern(const PolynomialBarAlgebra& a, const BarWord& u) {
    const size_t n = u.degree();
    long p = a.field().characteristic();
    if (p > 0 && static_cast<long>(n) >= p)
        throw Error("CharacteristicTooSmall", "word length factorial is not invertible");
    long fact = 1;
    for (size_t i = 2; i <= n; ++i) fact *= static_cast<long>(i);
    Scalar inv = Scalar::from_int(a.field(), fact).inverse();
    Form f = poly_form(mono_poly(a.table(), u.slots[0].mono, inv));
    for (size_t i = 1; i <= n; ++i)
        f = wedge(f, derham_d(poly_form(mono_poly(a.table(), u.slots[i].mono, Scalar::one(a.field())))));
    TwistedForm out;
    if (!f.is_zero()) out.emplace(u.kappa, f);
    return out;
}

TwistedForm chern(const PolynomialBarAlgebra& a, const BarChain& c) {
    TwistedForm out;
    for (const auto& [w, v] : c) {
        TwistedForm part = chern(a, w);
        for (auto& [k, f] : part) {
            auto it = out.find(k);
            if (it == out.end())
                out.emplace(k, f.scaled(v));
            else
                it->second = it->second.add(f.scaled(v));
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

bool twisted_equal(const TwistedForm& a, const TwistedForm& b) {
    for (const auto& [k, f] : a) {
        auto it = b.find(k);
        if (it == b.end()) {
            if (!f.is_zero()) return false;
        } else if (!f.equals(it->second)) {
            return false;
        }
    }
    for (const auto& [k, f] : b)
        if (a.find(k) == a.end() && !f.is_zero()) return false;
    return true;
}

TwistedForm twisted_d(const TwistedForm& w) {
    TwistedForm out;
    for (const auto& [k, f] : w) {
        Form df = derham_d(f);
        if (!df.is_zero()) out.emplace(k, df);
    }
    return out;
}

TwistedForm twisted_wedge_df(const PolynomialBarAlgebra& a, const TwistedForm& w) {
    TwistedForm out;
    if (a.potential().is_zero()) return out;
    Form df = derham_d(poly_form(a.potential()));
    for (const auto& [k, f] : w) {
        Form g = wedge(df, f);
        if (!g.is_zero()) out.emplace(k + 1, g);
    }
    return out;
}

// ---------------------------------------------------------------- identity checks

bool check_d_squared(const BarAlgebra& a, const BarWord& u) {
    return chain_is_zero(differential(a, differential(a, u)));
}

bool check_b_squared(const BarAlgebra& a, const BarWord& u) {
    return chain_is_zero(connes_b(a, connes_b(a, u)));
}

bool check_mixed(const BarAlgebra& a, const BarWord& u) {
    if (!a.curvature_atoms().empty())
        throw Error("CurvedMixedIdentity", "the mixed identity is only asserted without curvature");
    return chain_is_zero(chain_add(differential(a, connes_b(a, u)), connes_b(a, differential(a, u))));
}

bool check_chern_d(const PolynomialBarAlgebra& a, const BarWord& u) {
    return twisted_equal(chern(a, differential(a, u)), twisted_wedge_df(a, chern(a, u)));
}

bool check_chern_b(const PolynomialBarAlgebra& a, const BarWord& u) {
    return twisted_equal(chern(a, connes_b(a, u)), twisted_d(chern(a, u)));
}

BarWord random_word(const BarAlgebra& a, std::mt19937_64& rng, long max_len, long max_exp) {
    std::uniform_int_distribution<long> len_dist(0, max_len);
    std::uniform_int_distribution<long> exp_dist(0, max_exp);
    std::uniform_int_distribution<size_t> gen_dist(0, a.gen_count() - 1);
    std::uniform_int_distribution<long> kap_dist(-1, 1);
    auto rand_atom = [&]() {
        Atom at;
        at.gen = gen_dist(rng);
        at.mono.assign(a.table()->size(), 0);
        for (size_t v = 0; v < a.table()->size(); ++v)
            at.mono[v] = static_cast<int>(exp_dist(rng));
        return at;
    };
    BarWord w;
    w.kappa = a.curvature_weight() > 0 ? kap_dist(rng) : 0;
    long n = len_dist(rng);
    w.slots.push_back(rand_atom());
    for (long i = 0; i < n; ++i) {
        Atom at = rand_atom();
        for (int tries = 0; tries < 64 && !a.reduced_basis_atom(at); ++tries) at = rand_atom();
        if (!a.reduced_basis_atom(at)) at.mono[0] = 1;
        w.slots.push_back(at);
    }
    return w;
}

// ---------------------------------------------------------------- slice bases

std::vector<BarWord> slice_basis_z2(const PolynomialBarAlgebra& a, int parity, long s,
                                    long kappa_cap) {
    if (a.curvature_weight() == 0)
        throw Error("UncurvedPairMode", "the two-periodic table needs a curved algebra");
    const VarTable& T = *a.table();
    long fw = a.curvature_weight();
    std::vector<BarWord> out;

    auto emit_words = [&](long kappa, long total) {
        // slot 0 takes any weight, each inner slot at least one
        std::vector<Atom> slots;
        std::function<void(long)> inner = [&](long remaining) {
            long n = static_cast<long>(slots.size()) - 1;
            if (remaining == 0) {
                if (((n % 2) + 2) % 2 == parity) {
                    BarWord w;
                    w.kappa = kappa;
                    w.slots = slots;
                    out.push_back(std::move(w));
                }
                return;
            }
            for (long wt = 1; wt <= remaining; ++wt)
                for (const auto& m : monomials_of_weight(T, wt)) {
                    slots.push_back(Atom{0, m});
                    inner(remaining - wt);
                    slots.pop_back();
                }
        };
        for (long w0 = 0; w0 <= total; ++w0)
            for (const auto& m : monomials_of_weight(T, w0)) {
                slots.assign(1, Atom{0, m});
                inner(total - w0);
            }
    };

    // total slot weight s + fw*kappa must be nonnegative
    long kappa_min = s >= 0 ? -(s / fw) : (-s + fw - 1) / fw;
    for (long kappa = kappa_min; kappa <= kappa_cap; ++kappa) {
        long total = s + fw * kappa;
        if (total < 0) continue;
        emit_words(kappa, total);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<BarWord> slice_basis_z(const PolynomialBarAlgebra& a, long n, long s) {
    const VarTable& T = *a.table();
    std::vector<BarWord> out;
    if (n < 0 || s < 0) return out;
    std::vector<Atom> slots;
    std::function<void(long, long)> inner = [&](long k, long remaining) {
        if (k == 0) {
            if (remaining == 0) {
                BarWord w;
                w.slots = slots;
                out.push_back(std::move(w));
            }
            return;
        }
        for (long wt = 1; wt + (k - 1) <= remaining; ++wt)
            for (const auto& m : monomials_of_weight(T, wt)) {
                slots.push_back(Atom{0, m});
                inner(k - 1, remaining - wt);
                slots.pop_back();
            }
    };
    for (long w0 = 0; w0 + n <= s; ++w0)
        for (const auto& m : monomials_of_weight(T, w0)) {
            slots.assign(1, Atom{0, m});
            inner(n, s - w0);
        }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- slice homology

namespace {

// matrix of the differential between two bases of the same (parity flip, s) slice;
// images above the kappa cap land in the discarded subcomplex, anything else
// missing is an error
ScalarMatrix slice_matrix_bar(const BarAlgebra& a, const std::vector<BarWord>& src,
                              const std::vector<BarWord>& tgt, long kappa_cap) {
    if (tgt.size() * src.size() > 25'000'000)
        throw Error("SliceTooLarge",
                    "the truncated slice needs a " + std::to_string(tgt.size()) + " x " +
                        std::to_string(src.size()) +
                        " matrix; lower the caps or shrink the window");
    std::map<BarWord, size_t> index;
    for (size_t i = 0; i < tgt.size(); ++i) index.emplace(tgt[i], i);
    ScalarMatrix M(tgt.size(), src.size(), a.field());
    for (size_t j = 0; j < src.size(); ++j) {
        long s = word_aux(a, src[j]);
        BarChain d = differential(a, src[j]);
        for (const auto& [w, c] : d) {
            auto it = index.find(w);
            if (it == index.end()) {
                if (word_aux(a, w) != s) throw Error("SliceLeak", "differential changed the slice key");
                if (w.kappa <= kappa_cap)
                    throw Error("SliceLeak", "in-cap image missing from the basis");
                continue; // above the cap, projected away with the subcomplex
            }
            M.at(it->second, j) = c;
        }
    }
    return M;
}

// dim of ker(out) / (im(in) /\ ker(out)), safe when the truncation breaks exactness
long homology_dim(const ScalarMatrix& out_map, const ScalarMatrix& in_map) {
    if (out_map.cols() == 0) return 0;
    auto ker = kernel_basis(out_map);
    ScalarMatrix stacked(out_map.cols(), in_map.cols() + ker.size(), out_map.field());
    for (size_t c = 0; c < in_map.cols(); ++c)
        for (size_t r = 0; r < in_map.rows(); ++r) stacked.at(r, c) = in_map.at(r, c);
    for (size_t k = 0; k < ker.size(); ++k)
        for (size_t r = 0; r < ker[k].size(); ++r) stacked.at(r, in_map.cols() + k) = ker[k][r];
    return rank(stacked) - rank(in_map);
}

ScalarMatrix leading_block(const ScalarMatrix& M, size_t nrows, size_t ncols) {
    ScalarMatrix B(nrows, ncols, M.field());
    for (size_t r = 0; r < nrows; ++r)
        for (size_t c = 0; c < ncols; ++c) B.at(r, c) = M.at(r, c);
    return B;
}

} // namespace

BarTable hochschild_z2_window(const PolynomialBarAlgebra& a, long s_lo, long s_hi, long kappa0,
                              int rounds, long gap) {
    long fw = a.curvature_weight();
    if (fw == 0)
        throw Error("UncurvedPairMode", "the two-periodic table needs a curved algebra");
    if (kappa0 < 0) kappa0 = 0;
    if (rounds < 1) rounds = 1;
    if (gap < 1) gap = 1;

    BarTable table;
    table.gap_used = gap;
    if (s_lo > s_hi) {
        table.stabilized = true;
        return table;
    }

    // one representative per residue of s mod fw; relabeling kappa identifies the
    // other slices of the same residue with it
    std::map<long, long> reps;
    for (long s = s_lo; s <= s_hi; ++s) {
        long r = ((s % fw) + fw) % fw;
        reps.emplace(r, s);
    }

    const long top_cap = kappa0 + rounds - 1 + gap;
    std::map<long, std::map<long, long>> rep_dims; // residue -> parity -> dim
    bool all_stable = true;

    for (const auto& [res, srep] : reps) {
        std::vector<std::vector<BarWord>> basis(2);
        basis[0] = slice_basis_z2(a, 0, srep, top_cap);
        basis[1] = slice_basis_z2(a, 1, srep, top_cap);
        ScalarMatrix full01 = slice_matrix_bar(a, basis[0], basis[1], top_cap);
        ScalarMatrix full10 = slice_matrix_bar(a, basis[1], basis[0], top_cap);

        auto count_at = [&](int par, long cap) {
            const auto& b = basis[static_cast<size_t>(par)];
            size_t n = 0;
            while (n < b.size() && b[n].kappa <= cap) ++n;
            return n;
        };
        // rank of H(cap kappap+gap) -> H(cap kappap) for the given parity
        auto persistent = [&](int par, long cap) {
            const ScalarMatrix& fout = par == 0 ? full01 : full10;
            const ScalarMatrix& fin = par == 0 ? full10 : full01;
            size_t src_hi = count_at(par, cap + gap);
            size_t tgt_hi = count_at(1 - par, cap + gap);
            size_t src_lo = count_at(par, cap);
            size_t in_lo = count_at(1 - par, cap);
            if (src_lo == 0) return 0L;
            ScalarMatrix out_hi = leading_block(fout, tgt_hi, src_hi);
            auto cycles = kernel_basis(out_hi);
            ScalarMatrix in_map = leading_block(fin, src_lo, in_lo);
            ScalarMatrix stacked(src_lo, in_lo + cycles.size(), a.field());
            for (size_t c = 0; c < in_lo; ++c)
                for (size_t r = 0; r < src_lo; ++r) stacked.at(r, c) = in_map.at(r, c);
            for (size_t k = 0; k < cycles.size(); ++k)
                for (size_t r = 0; r < src_lo; ++r) stacked.at(r, in_lo + k) = cycles[k][r];
            return rank(stacked) - rank(in_map);
        };

        std::vector<std::map<long, long>> history;
        bool stable = false;
        for (int k = 0; k < rounds; ++k) {
            long cap = kappa0 + k;
            std::map<long, long> dims;
            dims[0] = persistent(0, cap);
            dims[1] = persistent(1, cap);
            history.push_back(std::move(dims));
            if (cap > table.kappa_used) table.kappa_used = cap;
            size_t h = history.size();
            if (h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3]) {
                stable = true;
                break;
            }
        }
        rep_dims[res] = history.back();
        all_stable = all_stable && stable;
    }

    for (long s = s_lo; s <= s_hi; ++s) {
        const auto& d = rep_dims.at(((s % fw) + fw) % fw);
        for (int par = 0; par < 2; ++par) {
            long v = d.at(par);
            if (v != 0) table.dims[{par, s}] = v;
        }
    }
    table.stabilized = all_stable;
    return table;
}

BarZTable hochschild_z_window(const PolynomialBarAlgebra& a, long n_max, long s_lo, long s_hi) {
    if (a.curvature_weight() != 0)
        throw Error("CurvedIntegerMode", "the integer-graded table needs an uncurved algebra");
    BarZTable out;
    for (long s = std::max<long>(s_lo, 0); s <= s_hi; ++s) {
        long top = std::min(n_max, s);
        std::vector<std::vector<BarWord>> bases;
        for (long n = 0; n <= top + 1; ++n) bases.push_back(slice_basis_z(a, n, s));
        for (long n = 0; n <= top; ++n) {
            const auto& here = bases[static_cast<size_t>(n)];
            if (here.empty()) continue;
            std::vector<BarWord> below =
                n >= 1 ? bases[static_cast<size_t>(n - 1)] : std::vector<BarWord>{};
            const auto& above = bases[static_cast<size_t>(n + 1)];
            ScalarMatrix out_map = slice_matrix_bar(a, here, below, 0);
            ScalarMatrix in_map = slice_matrix_bar(a, above, here, 0);
            long h = homology_dim(out_map, in_map);
            if (h != 0) out.dims[{-n, s}] = h;
        }
    }
    return out;
}

} // namespace cdg
