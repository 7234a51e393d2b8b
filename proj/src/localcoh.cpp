#include "cdg/localcoh.hpp"

#include <algorithm>

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

GroebnerBasis zero_ideal(const VarTableP& table) {
    return buchberger({Poly::zero(table)});
}

// weights of all generators added by g; map shifts are untouched
Complex add_weight(const Complex& cx, long g) {
    Complex out = cx;
    for (FreeModule& m : out.modules)
        for (long& w : m.gen_weights) w += g;
    for (ModuleMap& f : out.maps) {
        for (long& w : f.src.gen_weights) w += g;
        for (long& w : f.tgt.gen_weights) w += g;
    }
    return out;
}

Complex swap_parity(const Complex& cx) {
    Complex out = cx;
    std::swap(out.modules[0], out.modules[1]);
    std::swap(out.maps[0], out.maps[1]);
    return out;
}

bool tables_equal(const CohTable& a, const CohTable& b) { return a.dims == b.dims; }

} // namespace

GradedPresentation derham_presentation(const VarTableP& table, const Poly& f) {
    MilnorData m = milnor(table, f);
    GradedPresentation out;
    out.table = table;
    long n = (long)table->size();
    long top_shift = 0;
    for (size_t i = 0; i < table->size(); ++i) top_shift += table->var(i).weight - 2;
    if (m.finite) {
        out.pieces.push_back(CyclicPiece{((n % 2) + 2) % 2, top_shift, m.gb});
        return out;
    }
    bool zero_differential = true;
    for (const Poly& p : jacobian_ideal(f, [&] {
             std::vector<size_t> v(table->size());
             for (size_t i = 0; i < v.size(); ++i) v[i] = i;
             return v;
         }()))
        if (!p.is_zero()) zero_differential = false;
    require(zero_differential, "NotRegularSequence",
            "partials are neither a regular sequence nor all zero");
    for (unsigned long mask = 0; mask < (1ul << table->size()); ++mask) {
        long w = 0;
        for (size_t i = 0; i < table->size(); ++i)
            if (mask & (1ul << i)) w += table->var(i).weight - 2;
        out.pieces.push_back(CyclicPiece{popcount(mask) % 2, w, zero_ideal(table)});
    }
    return out;
}

RGammaResult rgamma_principal(const GradedPresentation& m, const Poly& f, long win_lo,
                              long win_hi) {
    RGammaResult out;
    out.verdict = "computed";
    out.table.mode = GradingMode::Z2;
    bool any_infinite = false, any_unknown = false;
    for (size_t i = 0; i < m.pieces.size(); ++i) {
        const CyclicPiece& piece = m.pieces[i];
        std::string tag = "piece " + std::to_string(i) + ": ";
        GroebnerBasis sat = saturate(piece.relations, f);
        if (sat.is_unit_ideal()) {
            for (long w = win_lo; w <= win_hi; ++w) {
                long c = quotient_dim_at_weight(piece.relations, w - piece.gen_weight);
                if (c != 0) out.table.dims[{piece.parity, w}] += c;
            }
            if (!quotient_dimension(piece.relations).finite) {
                any_infinite = true;
                out.certificate.push_back(tag + "infinite staircase survives whole");
            }
            out.notes.push_back(tag + "vanishes away from the locus, copied");
            continue;
        }
        bool univariate_free = m.table->size() == 1 && !m.table->var(0).laurent &&
                               piece.relations.is_zero_ideal();
        bool f_power = false;
        long a = 0;
        if (univariate_free && f.term_count() == 1) {
            const auto& [mono, c] = *f.terms().begin();
            (void)c;
            a = mono[0];
            f_power = a >= 1;
        }
        if (univariate_free && f_power) {
            long xw = m.table->var(0).weight;
            for (long k = 1; piece.gen_weight - k * xw >= win_lo; ++k) {
                long w = piece.gen_weight - k * xw;
                if (w <= win_hi) out.table.dims[{1 - piece.parity, w}] += 1;
            }
            any_infinite = true;
            out.certificate.push_back(
                tag + "inverse powers give one class at weight " +
                std::to_string(piece.gen_weight) + " - " + std::to_string(xw) +
                "k for every k >= 1, parity " + std::to_string(1 - piece.parity));
            out.notes.push_back(tag + "free univariate piece, inverted the variable");
            continue;
        }
        out.verdict = "undetermined";
        any_unknown = true;
        out.notes.push_back(tag + "no direct formula applies (saturation is " +
                            (sat.is_zero_ideal() ? std::string("zero") : std::string("proper")) +
                            ", left undetermined)");
    }
    out.generation = any_infinite        ? "not_finitely_generated"
                     : any_unknown       ? "unknown"
                                         : "finitely_generated";
    return out;
}

Complex cech_complex(const VarTableP& table, const std::vector<Poly>& gens, long l) {
    require(!gens.empty() && l >= 1, "ShapeMismatch", "need generators and a positive power");
    std::optional<Complex> acc;
    for (size_t i = 0; i < gens.size(); ++i) {
        const Poly& g = gens[i];
        require(!g.is_zero() && g.is_homogeneous(), "NonHomogeneous",
                "support generators must be nonzero homogeneous");
        Poly p = g.pow(l);
        FreeModule bottom{table, {0}, {"1"}};
        FreeModule top{table, {-(long)l * g.homogeneous_weight()}, {"e" + std::to_string(i + 1)}};
        Complex factor;
        factor.mode = GradingMode::Z;
        factor.lo = 0;
        factor.modules = {bottom, top};
        ModuleMap d = ModuleMap::zero(bottom, top, 0);
        d.entries[0][0] = -p;
        factor.maps = {d};
        acc = acc ? tensor_z(*acc, factor) : factor;
    }
    return *acc;
}

RGammaResult rgamma_koszul_limit(const GradedPresentation& m, const std::vector<Poly>& gens,
                                 long win_lo, long win_hi, long l_max) {
    RGammaResult out;
    out.verdict = "undetermined";
    out.table.mode = GradingMode::Z2;
    std::vector<const CyclicPiece*> free_pieces;
    for (size_t i = 0; i < m.pieces.size(); ++i) {
        if (m.pieces[i].relations.is_zero_ideal()) {
            free_pieces.push_back(&m.pieces[i]);
        } else {
            out.notes.push_back("piece " + std::to_string(i) +
                                ": relations present, approximation refused");
            return out;
        }
    }
    std::optional<CohTable> prev;
    for (long l = 1; l <= l_max; ++l) {
        Complex cech = cech_complex(m.table, gens, l);
        CohTable acc;
        acc.mode = GradingMode::Z2;
        for (const CyclicPiece* piece : free_pieces) {
            Complex cx = fold_z2(add_weight(cech, piece->gen_weight));
            if (piece->parity == 1) cx = swap_parity(cx);
            CohTable t = cohomology_window(cx, win_lo, win_hi);
            for (const auto& [key, dim] : t.dims) acc.dims[key] += dim;
        }
        if (prev && tables_equal(*prev, acc)) {
            out.verdict = "computed";
            out.table = acc;
            out.notes.push_back("stabilized at power " + std::to_string(l));
            return out;
        }
        prev = acc;
    }
    out.table = *prev;
    out.notes.push_back("not stabilized within the power budget");
    return out;
}

SupportTest not_supported_on_v(const GroebnerBasis& relations, const Poly& f) {
    require(!f.is_zero(), "ZeroDivisorInput", "cannot invert zero");
    // Factors of f visible without factorization: variables dividing every term,
    // then the residual. Supported on V(f) means dying on the common locus of the
    // components, so each factor is inverted separately and the saturations meet.
    const VarTableP& t = f.table();
    Poly rest = f;
    std::vector<Poly> parts;
    for (size_t j = 0; j < t->size(); ++j) {
        if (t->var(j).laurent) continue;
        int d = rest.terms().begin()->first[j];
        for (const auto& [m, c] : rest.terms()) d = std::min(d, m[j]);
        if (d <= 0) continue;
        parts.push_back(Poly::variable(t, j));
        Monomial shift(t->size(), 0);
        shift[j] = d;
        Poly reduced(t);
        for (const auto& [m, c] : rest.terms()) reduced.add_term(mono_div(m, shift), c);
        rest = reduced;
    }
    if (!(rest.term_count() == 1 && mono_total_degree(rest.terms().begin()->first) == 0))
        parts.push_back(rest);

    SupportTest out;
    if (parts.empty()) {
        out.saturation = relations;
    } else {
        out.saturation = saturate(relations, parts[0]);
        for (size_t i = 1; i < parts.size(); ++i)
            out.saturation = intersect_ideals(out.saturation, saturate(relations, parts[i]));
    }
    out.not_supported = !out.saturation.is_unit_ideal();
    return out;
}

SmoothnessReport smoothness_check(const VarTableP& table, const Poly& f) {
    require(!f.is_zero(), "ShapeMismatch", "potential must be nonzero");
    require(f.constant_term().is_zero() || f.term_count() > 1, "UnitInput",
            "potential must be a nonunit");
    require(table->field().perfect(), "ImperfectGroundField",
            "the smoothness decision needs a perfect ground field");
    SmoothnessReport out;
    std::vector<size_t> vars(table->size());
    for (size_t i = 0; i < vars.size(); ++i) vars[i] = i;
    out.jac = buchberger(jacobian_ideal(f, vars));
    out.sat = saturate(out.jac, f);
    std::vector<Poly> final_gens = out.sat.gens;
    final_gens.push_back(f);
    out.final_basis = buchberger(final_gens);
    out.smooth = out.final_basis.is_unit_ideal();
    for (const Poly& s : out.sat.gens) {
        Poly p = s;
        long k = 0;
        while (!ideal_contains(out.jac, p)) {
            ++k;
            require(k <= 64, "SaturationWitness", "power witness exceeded the search bound");
            p = p * f;
        }
        out.power.push_back(k);
        out.cofactors.push_back(divide(p, out.jac).quotients);
    }
    return out;
}

} // namespace cdg
