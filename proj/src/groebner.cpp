#include "cdg/groebner.hpp"

#include <algorithm>
#include <functional>

namespace cdg {

namespace {

void reject_laurent(const Poly& p) {
    if (p.uses_laurent())
        throw Error("LaurentVariablePresent",
                    "Groebner computations require Laurent-free input: " + p.str());
}

// one full reduction of p against basis (leading terms only, repeatedly)
Poly reduce_full(Poly p, const std::vector<Poly>& basis, const MonomialOrder& ord,
                 std::vector<Poly>* quotients = nullptr) {
    Poly remainder(p.table());
    while (!p.is_zero()) {
        auto [lm, lc] = p.leading_term(ord);
        bool reduced = false;
        for (size_t i = 0; i < basis.size(); ++i) {
            auto [glm, glc] = basis[i].leading_term(ord);
            if (mono_divides(glm, lm)) {
                Poly factor(p.table());
                factor.add_term(mono_div(lm, glm), lc / glc);
                p = p - factor * basis[i];
                if (quotients) (*quotients)[i] = (*quotients)[i] + factor;
                reduced = true;
                break;
            }
        }
        if (!reduced) {
            Poly lt(p.table());
            lt.add_term(lm, lc);
            remainder = remainder + lt;
            p = p - lt;
        }
    }
    return remainder;
}

Poly s_polynomial(const Poly& f, const Poly& g, const MonomialOrder& ord) {
    auto [fl, fc] = f.leading_term(ord);
    auto [gl, gc] = g.leading_term(ord);
    Monomial l = mono_lcm(fl, gl);
    Poly mf(f.table()), mg(g.table());
    mf.add_term(mono_div(l, fl), Scalar::one(f.table()->field()) / fc);
    mg.add_term(mono_div(l, gl), Scalar::one(g.table()->field()) / gc);
    return mf * f - mg * g;
}

} // namespace

bool GroebnerBasis::is_unit_ideal() const {
    return gens.size() == 1 && gens[0].term_count() == 1 &&
           mono_total_degree(gens[0].terms().begin()->first) == 0;
}

GroebnerBasis buchberger(const std::vector<Poly>& input, const MonomialOrder& order) {
    VarTableP table;
    std::vector<Poly> basis;
    for (const auto& g : input) {
        if (!table && g.table()) table = g.table();
        reject_laurent(g);
        if (!g.is_zero()) basis.push_back(g);
    }
    if (!table) throw Error("MixedAmbient", "no ambient ring for Groebner input");

    struct Pair {
        size_t i, j;
        int lcm_degree;
    };
    auto add_pairs = [&](std::vector<Pair>& pairs, size_t j) {
        auto [jl, jc] = basis[j].leading_term(order);
        for (size_t i = 0; i < j; ++i) {
            auto [il, ic] = basis[i].leading_term(order);
            Monomial l = mono_lcm(il, jl);
            // product criterion: coprime leading monomials reduce to zero
            if (l == mono_mul(il, jl)) continue;
            pairs.push_back({i, j, mono_total_degree(l)});
        }
    };

    std::vector<Pair> pairs;
    for (size_t j = 0; j < basis.size(); ++j) add_pairs(pairs, j);

    while (!pairs.empty()) {
        size_t best = 0;
        for (size_t k = 1; k < pairs.size(); ++k) {
            const Pair &a = pairs[k], &b = pairs[best];
            if (a.lcm_degree != b.lcm_degree ? a.lcm_degree < b.lcm_degree
                                             : std::tie(a.i, a.j) < std::tie(b.i, b.j))
                best = k;
        }
        Pair p = pairs[best];
        pairs.erase(pairs.begin() + best);
        Poly s = reduce_full(s_polynomial(basis[p.i], basis[p.j], order), basis, order);
        if (!s.is_zero()) {
            basis.push_back(s);
            add_pairs(pairs, basis.size() - 1);
        }
    }

    // interreduce: drop redundant leading terms, fully reduce tails, make monic
    std::vector<Poly> reduced;
    for (size_t i = 0; i < basis.size(); ++i) {
        auto [lm, lc] = basis[i].leading_term(order);
        bool redundant = false;
        for (size_t j = 0; j < basis.size(); ++j) {
            if (i == j) continue;
            auto [ol, oc] = basis[j].leading_term(order);
            if (mono_divides(ol, lm) && !(ol == lm && j > i)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) reduced.push_back(basis[i]);
    }
    for (size_t i = 0; i < reduced.size(); ++i) {
        std::vector<Poly> others;
        for (size_t j = 0; j < reduced.size(); ++j)
            if (j != i) others.push_back(reduced[j]);
        Poly tail = reduce_full(reduced[i], others, order);
        if (!tail.is_zero()) {
            auto [lm, lc] = tail.leading_term(order);
            reduced[i] = tail.scaled(lc.inverse());
        } else {
            reduced[i] = tail; // fully redundant, dropped below
        }
    }
    reduced.erase(std::remove_if(reduced.begin(), reduced.end(),
                                 [](const Poly& q) { return q.is_zero(); }),
                  reduced.end());
    std::sort(reduced.begin(), reduced.end(), [&](const Poly& a, const Poly& b) {
        return order.greater(b.leading_term(order).first, a.leading_term(order).first);
    });
    return {table, order, std::move(reduced)};
}

Poly normal_form(const Poly& p, const GroebnerBasis& gb) {
    reject_laurent(p);
    return reduce_full(p, gb.gens, gb.order);
}

DivisionResult divide(const Poly& p, const GroebnerBasis& gb) {
    reject_laurent(p);
    DivisionResult r;
    r.quotients.assign(gb.gens.size(), Poly::zero(p.table()));
    r.remainder = reduce_full(p, gb.gens, gb.order, &r.quotients);
    return r;
}

bool ideal_contains(const GroebnerBasis& gb, const Poly& p) {
    return normal_form(p, gb).is_zero();
}

QuotientDimension quotient_dimension(const GroebnerBasis& gb) {
    QuotientDimension out;
    const VarTable& t = *gb.table;
    if (gb.is_unit_ideal()) {
        out.finite = true;
        return out;
    }
    std::vector<size_t> active; // non-Laurent variables
    for (size_t i = 0; i < t.size(); ++i)
        if (!t.var(i).laurent) active.push_back(i);

    std::vector<Monomial> lms;
    for (const auto& g : gb.gens) lms.push_back(g.leading_term(gb.order).first);

    // finite iff each variable has a pure power among the leading monomials
    std::vector<int> bound(t.size(), -1);
    for (size_t vi : active) {
        for (const auto& lm : lms) {
            bool pure = lm[vi] > 0;
            for (size_t j = 0; j < lm.size() && pure; ++j)
                if (j != vi && lm[j] != 0) pure = false;
            if (pure && (bound[vi] < 0 || lm[vi] < bound[vi])) bound[vi] = lm[vi];
        }
        if (bound[vi] < 0) {
            out.finite = false;
            return out;
        }
    }

    out.finite = true;
    Monomial cur(t.size(), 0);
    std::function<void(size_t)> rec = [&](size_t k) {
        if (k == active.size()) {
            for (const auto& lm : lms)
                if (mono_divides(lm, cur)) return;
            out.basis.push_back(cur);
            return;
        }
        for (int e = 0; e < bound[active[k]]; ++e) {
            cur[active[k]] = e;
            rec(k + 1);
        }
        cur[active[k]] = 0;
    };
    rec(0);
    std::sort(out.basis.begin(), out.basis.end());
    out.dimension = static_cast<long>(out.basis.size());
    for (const auto& m : out.basis) out.hilbert[mono_weight(t, m)] += 1;
    return out;
}

long quotient_dim_at_weight(const GroebnerBasis& gb, long weight) {
    if (gb.is_unit_ideal()) return 0;
    std::vector<Monomial> lms;
    for (const auto& g : gb.gens) lms.push_back(g.leading_term(gb.order).first);
    long count = 0;
    for (const Monomial& m : monomials_of_weight(*gb.table, weight)) {
        bool reducible = false;
        for (const auto& lm : lms)
            if (mono_divides(lm, m)) {
                reducible = true;
                break;
            }
        if (!reducible) ++count;
    }
    return count;
}

GroebnerBasis saturate(const GroebnerBasis& ideal, const Poly& f) {
    reject_laurent(f);
    const VarTable& t = *ideal.table;
    std::string aux = "zsat";
    while (t.find(aux)) aux += "_";
    std::vector<VarInfo> vars;
    vars.push_back({aux, 1, false});
    for (const auto& v : t.vars()) vars.push_back(v);
    VarTableP big = make_vartable(t.field(), vars);
    std::vector<size_t> imap(t.size());
    for (size_t i = 0; i < t.size(); ++i) imap[i] = i + 1;

    std::vector<Poly> gens;
    for (const auto& g : ideal.gens) gens.push_back(g.extend_to(big, imap));
    Poly zf = Poly::variable(big, 0) * f.extend_to(big, imap);
    gens.push_back(zf - Poly::constant(big, Scalar::one(t.field())));

    GroebnerBasis egb = buchberger(gens, MonomialOrder::eliminate(1, ideal.order.kind));

    std::vector<Poly> back;
    std::vector<size_t> down(big->size(), 0);
    for (size_t i = 0; i < t.size(); ++i) down[i + 1] = i;
    for (const auto& g : egb.gens) {
        bool has_aux = false;
        for (const auto& [m, c] : g.terms())
            if (m[0] != 0) has_aux = true;
        if (!has_aux) back.push_back(g.extend_to(ideal.table, down));
    }
    return buchberger(back.empty() ? std::vector<Poly>{Poly::zero(ideal.table)} : back, ideal.order);
}

GroebnerBasis intersect_ideals(const GroebnerBasis& a, const GroebnerBasis& b) {
    if (!(*a.table == *b.table))
        throw Error("MixedAmbient", "ideal intersection needs one ambient ring");
    const VarTable& t = *a.table;
    std::string aux = "zint";
    while (t.find(aux)) aux += "_";
    std::vector<VarInfo> vars;
    vars.push_back({aux, 1, false});
    for (const auto& v : t.vars()) vars.push_back(v);
    VarTableP big = make_vartable(t.field(), vars);
    std::vector<size_t> imap(t.size());
    for (size_t i = 0; i < t.size(); ++i) imap[i] = i + 1;

    Poly u = Poly::variable(big, 0);
    Poly cou = Poly::constant(big, Scalar::one(t.field())) - u;
    std::vector<Poly> gens;
    for (const auto& g : a.gens) gens.push_back(u * g.extend_to(big, imap));
    for (const auto& g : b.gens) gens.push_back(cou * g.extend_to(big, imap));

    GroebnerBasis egb = buchberger(gens, MonomialOrder::eliminate(1, a.order.kind));

    std::vector<Poly> back;
    std::vector<size_t> down(big->size(), 0);
    for (size_t i = 0; i < t.size(); ++i) down[i + 1] = i;
    for (const auto& g : egb.gens) {
        bool has_aux = false;
        for (const auto& [m, c] : g.terms())
            if (m[0] != 0) has_aux = true;
        if (!has_aux) back.push_back(g.extend_to(a.table, down));
    }
    return buchberger(back.empty() ? std::vector<Poly>{Poly::zero(a.table)} : back, a.order);
}

std::vector<Poly> jacobian_ideal(const Poly& f, const std::vector<size_t>& vars) {
    std::vector<Poly> out;
    for (size_t vi : vars) out.push_back(f.derivative(vi));
    return out;
}

} // namespace cdg
