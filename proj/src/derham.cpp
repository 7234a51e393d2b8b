#include "cdg/derham.hpp"

#include <algorithm>
#include <sstream>

namespace cdg {

namespace {

void require(bool ok, const std::string& code, const std::string& msg) {
    if (!ok) throw Error(code, msg);
}

int popcount(unsigned long m) {
    int c = 0;
    while (m) {
        c += (int)(m & 1);
        m >>= 1;
    }
    return c;
}

int sign_below(unsigned long mask, size_t i) {
    return popcount(mask & ((1ul << i) - 1)) % 2 == 0 ? 1 : -1;
}

std::string dx_name(const VarTableP& table, unsigned long mask) {
    std::string name;
    for (size_t i = 0; i < table->size(); ++i)
        if (mask & (1ul << i)) {
            if (!name.empty()) name += "^";
            name += "d" + table->var(i).name;
        }
    return name.empty() ? "1" : name;
}

std::vector<size_t> all_vars(const VarTableP& table) {
    std::vector<size_t> v(table->size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
}

} // namespace

Complex twisted_derham(const VarTableP& table, const Poly& f) {
    size_t n = table->size();
    require(n >= 1 && n < 20, "ShapeMismatch", "need between 1 and 19 variables");
    for (size_t i = 0; i < n; ++i)
        require(!table->var(i).laurent, "LaurentVariablePresent",
                "form complex requires a Laurent-free table");
    require(!f.is_zero() && f.is_homogeneous(), "NonHomogeneous",
            "potential must be nonzero homogeneous");
    long fw = f.homogeneous_weight();

    std::vector<std::vector<unsigned long>> masks(n + 1);
    for (unsigned long m = 0; m < (1ul << n); ++m) masks[popcount(m)].push_back(m);

    Complex cx;
    cx.mode = GradingMode::Z;
    cx.lo = 0;
    std::vector<std::map<unsigned long, size_t>> index(n + 1);
    for (size_t q = 0; q <= n; ++q) {
        FreeModule mod{table, {}, {}};
        for (size_t k = 0; k < masks[q].size(); ++k) {
            unsigned long m = masks[q][k];
            index[q][m] = k;
            long w = 0;
            for (size_t i = 0; i < n; ++i)
                if (m & (1ul << i)) w += table->var(i).weight - 2;
            mod.gen_weights.push_back(w);
            mod.gen_names.push_back(dx_name(table, m));
        }
        cx.modules.push_back(std::move(mod));
    }
    std::vector<Poly> partials = jacobian_ideal(f, all_vars(table));
    for (size_t q = 0; q < n; ++q) {
        ModuleMap d = ModuleMap::zero(cx.modules[q], cx.modules[q + 1], fw - 2);
        for (size_t k = 0; k < masks[q].size(); ++k) {
            unsigned long m = masks[q][k];
            for (size_t i = 0; i < n; ++i) {
                if (m & (1ul << i)) continue;
                if (partials[i].is_zero()) continue;
                size_t tk = index[q + 1][m | (1ul << i)];
                Poly e = sign_below(m, i) > 0 ? partials[i] : -partials[i];
                d.entries[tk][k] = d.entries[tk][k] + e;
            }
        }
        cx.maps.push_back(std::move(d));
    }
    return cx;
}

void Form::add_comp(unsigned long mask, const Poly& p) {
    if (p.is_zero()) return;
    auto it = comps.find(mask);
    if (it == comps.end()) {
        comps[mask] = p;
    } else {
        it->second = it->second + p;
        if (it->second.is_zero()) comps.erase(it);
    }
}

Form Form::add(const Form& other) const {
    Form out = *this;
    for (const auto& [m, p] : other.comps) out.add_comp(m, p);
    return out;
}

Form Form::negated() const {
    Form out{table, {}};
    for (const auto& [m, p] : comps) out.comps[m] = -p;
    return out;
}

Form Form::scaled(const Scalar& c) const {
    Form out{table, {}};
    if (c.is_zero()) return out;
    for (const auto& [m, p] : comps) out.comps[m] = p.scaled(c);
    return out;
}

bool Form::equals(const Form& other) const {
    if (comps.size() != other.comps.size()) return false;
    for (const auto& [m, p] : comps) {
        auto it = other.comps.find(m);
        if (it == other.comps.end() || !(p == it->second)) return false;
    }
    return true;
}

std::string Form::str() const {
    if (comps.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, p] : comps) {
        if (!first) os << " + ";
        first = false;
        if (m == 0) {
            os << p.str();
        } else {
            os << "(" << p.str() << ")*" << dx_name(table, m);
        }
    }
    return os.str();
}

Form zero_form(const VarTableP& table) { return Form{table, {}}; }

Form poly_form(const Poly& p) {
    Form out{p.table(), {}};
    out.add_comp(0, p);
    return out;
}

Form derham_d(const Form& w) {
    Form out{w.table, {}};
    for (const auto& [mask, p] : w.comps) {
        for (size_t i = 0; i < w.table->size(); ++i) {
            if (w.table->var(i).laurent) continue;
            if (mask & (1ul << i)) continue;
            Poly dp = p.derivative(i);
            if (dp.is_zero()) continue;
            out.add_comp(mask | (1ul << i), sign_below(mask, i) > 0 ? dp : -dp);
        }
    }
    return out;
}

Form wedge(const Form& a, const Form& b) {
    require(*a.table == *b.table, "MixedAmbient", "wedge over different variable tables");
    Form out{a.table, {}};
    for (const auto& [ma, pa] : a.comps)
        for (const auto& [mb, pb] : b.comps) {
            if (ma & mb) continue;
            int inversions = 0;
            for (size_t i = 0; i < a.table->size(); ++i)
                if (ma & (1ul << i)) inversions += popcount(mb & ((1ul << i) - 1));
            Poly p = pa * pb;
            out.add_comp(ma | mb, inversions % 2 == 0 ? p : -p);
        }
    return out;
}

MilnorData milnor(const VarTableP& table, const Poly& f) {
    MilnorData out;
    out.gb = buchberger(jacobian_ideal(f, all_vars(table)));
    QuotientDimension q = quotient_dimension(out.gb);
    out.finite = q.finite;
    if (q.finite) {
        out.dimension = q.dimension;
        out.hilbert = q.hilbert;
    }
    return out;
}

TwistedCohomology twisted_cohomology(const VarTableP& table, const Poly& f, long win_lo,
                                     long win_hi) {
    TwistedCohomology out;
    out.milnor = milnor(table, f);
    out.table.mode = GradingMode::Z2;
    long n = (long)table->size();
    long top_shift = 0;
    for (size_t i = 0; i < table->size(); ++i) top_shift += table->var(i).weight - 2;
    if (out.milnor.finite) {
        out.regular = true;
        for (const auto& [w, c] : out.milnor.hilbert)
            if (c != 0) out.table.dims[{((n % 2) + 2) % 2, w + top_shift}] = c;
        return out;
    }
    out.regular = false;
    CohTable raw = cohomology_window(twisted_derham(table, f), win_lo, win_hi);
    for (const auto& [key, dim] : raw.dims) {
        auto folded = std::make_pair(((key.first % 2) + 2) % 2, key.second);
        out.table.dims[folded] += dim;
    }
    return out;
}

LaurentContraction contract_laurent(const VarTableP& table, const std::vector<Poly>& gens) {
    LaurentContraction out;
    std::vector<VarInfo> keep;
    out.pos_map.assign(table->size(), -1);
    for (size_t i = 0; i < table->size(); ++i) {
        if (table->var(i).laurent) continue;
        out.pos_map[i] = (int)keep.size();
        keep.push_back(table->var(i));
    }
    out.table = make_vartable(table->field(), keep);
    for (const Poly& g : gens) {
        if (g.is_zero()) continue;
        std::optional<std::vector<int>> laurent_part;
        Poly img = Poly::zero(out.table);
        for (const auto& [mono, c] : g.terms()) {
            std::vector<int> lpart;
            Monomial nm(keep.size(), 0);
            for (size_t i = 0; i < table->size(); ++i) {
                if (table->var(i).laurent)
                    lpart.push_back(mono[i]);
                else
                    nm[out.pos_map[i]] = mono[i];
            }
            if (!laurent_part)
                laurent_part = lpart;
            else
                require(*laurent_part == lpart, "NotLaurentHomogeneous",
                        "generator mixes distinct unit-variable exponents: " + g.str());
            img.add_term(nm, c);
        }
        out.gens.push_back(img);
    }
    return out;
}

GroebnerBasis sing_locus(const VarTableP& table, const Poly& f) {
    std::vector<Poly> gens = jacobian_ideal(f, all_vars(table));
    gens.insert(gens.begin(), f);
    LaurentContraction c = contract_laurent(table, gens);
    return buchberger(c.gens);
}

GroebnerBasis nonreg_locus(const VarTableP& table, const Poly& w) {
    require(table->field().perfect(), "ImperfectGroundField",
            "the critical-locus criterion requires a perfect ground field");
    return sing_locus(table, w);
}

TildeAlgebra tilde_construction(const VarTableP& base, const Poly& f) {
    require(!f.is_zero() && f.is_homogeneous(), "NonHomogeneous",
            "potential must be nonzero homogeneous");
    for (size_t i = 0; i < base->size(); ++i)
        require(!base->var(i).laurent, "LaurentVariablePresent",
                "the base of the construction must be Laurent-free");
    std::string tname = "t";
    while (base->find(tname)) tname += "_";
    std::vector<VarInfo> vars;
    for (size_t i = 0; i < base->size(); ++i) vars.push_back(base->var(i));
    vars.push_back(VarInfo{tname, 2 - f.homogeneous_weight(), true});

    TildeAlgebra out;
    out.base = base;
    out.t_index = base->size();
    out.pos_map.resize(base->size());
    for (size_t i = 0; i < base->size(); ++i) out.pos_map[i] = i;
    VarTableP big = make_vartable(base->field(), vars);
    Poly ft = f.extend_to(big, out.pos_map);
    Poly t = Poly::variable(big, out.t_index);
    out.alg = CurvedAlgebra{big, t * ft};
    out.alg.validate();
    return out;
}

} // namespace cdg
