#include "cdg/curved.hpp"

#include "cdg/derham.hpp"

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

} // namespace

void CurvedAlgebra::validate() const {
    if (w.is_zero()) return;
    require(w.is_homogeneous() && w.homogeneous_weight() == 2, "CurvatureWeight",
            "curvature must be homogeneous of weight 2");
}

void CurvedModule::validate() const {
    alg.validate();
    require(pair.mode == GradingMode::Z2 && pair.modules.size() == 2 && pair.maps.size() == 2,
            "ShapeMismatch", "curved pair needs two modules and two maps");
    require(pair.maps[0].shift == 1 && pair.maps[1].shift == 1, "ShiftMismatch",
            "curved differentials carry shift 1");
    pair.maps[0].validate();
    pair.maps[1].validate();
    ModuleMap sq0 = compose(pair.maps[1], pair.maps[0]);
    ModuleMap sq1 = compose(pair.maps[0], pair.maps[1]);
    require(sq0.equals(ModuleMap::scaled_identity(pair.modules[0], alg.w).with_shift(2)) &&
                sq1.equals(ModuleMap::scaled_identity(pair.modules[1], alg.w).with_shift(2)),
            "CurvatureMismatch", "differential squared differs from the declared curvature");
}

CurvedModule koszul_curved(const CurvedAlgebra& alg, const std::vector<Poly>& gs,
                           const std::vector<Poly>& ys) {
    alg.validate();
    size_t n = gs.size();
    require(ys.size() == n && n >= 1 && n < 20, "ShapeMismatch",
            "one cofactor per generator is required");
    const VarTableP& table = alg.table;
    Poly acc = Poly::zero(table);
    std::vector<long> e_weight(n);
    for (size_t i = 0; i < n; ++i) {
        require(!gs[i].is_zero() || !ys[i].is_zero(), "ShapeMismatch",
                "generator and cofactor cannot both vanish");
        if (!gs[i].is_zero()) {
            require(gs[i].is_homogeneous(), "NonHomogeneous", "generators must be homogeneous");
            e_weight[i] = gs[i].homogeneous_weight() - 1;
        } else {
            require(ys[i].is_homogeneous(), "NonHomogeneous", "cofactors must be homogeneous");
            e_weight[i] = 1 - ys[i].homogeneous_weight();
        }
        if (!gs[i].is_zero() && !ys[i].is_zero())
            require(gs[i].homogeneous_weight() + ys[i].homogeneous_weight() == 2,
                    "CurvatureWeight", "generator and cofactor weights must sum to 2");
        acc = acc + gs[i] * ys[i];
    }
    require(acc == alg.w, "CurvatureMismatch", "generators and cofactors do not realize w");

    // subset masks ascending within each parity
    std::vector<unsigned long> basis[2];
    for (unsigned long mask = 0; mask < (1ul << n); ++mask)
        basis[popcount(mask) % 2].push_back(mask);
    std::map<unsigned long, std::pair<size_t, size_t>> where;
    FreeModule mods[2];
    for (size_t eps = 0; eps < 2; ++eps) {
        mods[eps].table = table;
        for (size_t k = 0; k < basis[eps].size(); ++k) {
            unsigned long mask = basis[eps][k];
            where[mask] = {eps, k};
            long w = 0;
            std::string name;
            for (size_t i = 0; i < n; ++i)
                if (mask & (1ul << i)) {
                    w += e_weight[i];
                    name += "e" + std::to_string(i + 1);
                }
            if (name.empty()) name = "1";
            mods[eps].gen_weights.push_back(w);
            mods[eps].gen_names.push_back(name);
        }
    }

    ModuleMap d[2] = {ModuleMap::zero(mods[0], mods[1], 1), ModuleMap::zero(mods[1], mods[0], 1)};
    for (size_t eps = 0; eps < 2; ++eps) {
        for (size_t k = 0; k < basis[eps].size(); ++k) {
            unsigned long mask = basis[eps][k];
            for (size_t i = 0; i < n; ++i) {
                int below = popcount(mask & ((1ul << i) - 1));
                bool neg = below % 2 == 1;
                if (mask & (1ul << i)) { // contraction by g_i
                    if (gs[i].is_zero()) continue;
                    auto [teps, tk] = where[mask ^ (1ul << i)];
                    Poly e = neg ? -gs[i] : gs[i];
                    d[eps].entries[tk][k] = d[eps].entries[tk][k] + e;
                } else { // wedge by y_i
                    if (ys[i].is_zero()) continue;
                    auto [teps, tk] = where[mask | (1ul << i)];
                    Poly e = neg ? -ys[i] : ys[i];
                    d[eps].entries[tk][k] = d[eps].entries[tk][k] + e;
                }
            }
        }
    }

    CurvedModule out;
    out.alg = alg;
    out.pair.mode = GradingMode::Z2;
    out.pair.modules = {mods[0], mods[1]};
    out.pair.maps = {d[0], d[1]};
    out.validate();
    return out;
}

CurvedModule tensor_curved(const CurvedModule& a, const CurvedModule& b) {
    require(*a.alg.table == *b.alg.table, "MixedAmbient", "tensor over different variable tables");
    CurvedModule out;
    out.alg = CurvedAlgebra{a.alg.table, a.alg.w + b.alg.w};
    out.pair = tensor_z2(a.pair, b.pair);
    out.validate();
    return out;
}

CurvedModule dual_curved(const CurvedModule& m) {
    const VarTableP& table = m.alg.table;
    Complex unit;
    unit.mode = GradingMode::Z2;
    FreeModule ground{table, {0}, {"1"}};
    FreeModule none{table, {}, {}};
    unit.modules = {ground, none};
    unit.maps = {ModuleMap::zero(ground, none, 1), ModuleMap::zero(none, ground, 1)};
    CurvedModule out;
    out.alg = CurvedAlgebra{table, -m.alg.w};
    out.pair = hom_complex(m.pair, unit);
    out.validate();
    return out;
}

CurvedModule psi_tensor(const CurvedModule& a, const CurvedModule& b) {
    return tensor_curved(a, dual_curved(b));
}

Complex endomorphism_dga(const CurvedModule& m) {
    return hom_complex(m.pair, m.pair);
}

EndBasis end_basis(const CurvedModule& m) {
    EndBasis out;
    // mirrors hom_complex block order: even Hom(X0,Y0), Hom(X1,Y1); odd Hom(X0,Y1), Hom(X1,Y0)
    auto block = [&](std::vector<EndBasis::Gen>& dst, size_t eps_src, size_t eps_tgt) {
        for (size_t s = 0; s < m.pair.modules[eps_src].rank(); ++s)
            for (size_t r = 0; r < m.pair.modules[eps_tgt].rank(); ++r)
                dst.push_back({eps_src, s, eps_tgt, r});
    };
    block(out.even, 0, 0);
    block(out.even, 1, 1);
    block(out.odd, 0, 1);
    block(out.odd, 1, 0);
    return out;
}

SupportCertificate support_exclude(const CurvedModule& mod, const Poly& g, long m_max,
                                   long degree_bound) {
    require(!g.is_zero() && g.is_homogeneous(), "NonHomogeneous",
            "support probe needs a nonzero homogeneous element");
    const ModuleMap& d0 = mod.pair.maps[0];
    const ModuleMap& d1 = mod.pair.maps[1];
    Poly p = Poly::constant(mod.alg.table, Scalar::one(mod.alg.table->field()));
    for (long m = 1; m <= m_max; ++m) {
        p = p * g;
        ModuleMap tau0 = ModuleMap::scaled_identity(mod.pair.modules[0], p);
        ModuleMap tau1 = ModuleMap::scaled_identity(mod.pair.modules[1], p);
        auto h = find_null_homotopy(d0, d1, tau0, tau1, degree_bound);
        if (!h) continue;
        ModuleMap lhs0 = compose(d1, h->first).add(compose(h->second, d0));
        ModuleMap lhs1 = compose(d0, h->second).add(compose(h->first, d1));
        require(lhs0.equals(tau0.with_shift(lhs0.shift)) &&
                    lhs1.equals(tau1.with_shift(lhs1.shift)),
                "HomotopyCheck", "homotopy candidate fails re-verification");
        SupportCertificate cert;
        cert.found = true;
        cert.m = m;
        cert.h0 = h->first;
        cert.h1 = h->second;
        return cert;
    }
    return {};
}

FiberDims support_include(const CurvedModule& mod, const std::vector<Scalar>& point) {
    FiberDims out;
    std::vector<std::optional<Scalar>> vals(point.begin(), point.end());
    out.is_complex = mod.alg.w.substitute(vals).is_zero();
    if (mod.pair.modules[0].rank() + mod.pair.modules[1].rank() == 0) return out;
    // the endomorphism complex stays a complex at every point, curved or not
    Complex endcx = endomorphism_dga(mod);
    ScalarMatrix D0 = evaluate_map(endcx.maps[0], point);
    ScalarMatrix D1 = evaluate_map(endcx.maps[1], point);
    long r0 = rank(D0), r1 = rank(D1);
    out.even_dim = (long)D0.cols() - r0 - r1;
    out.odd_dim = (long)D1.cols() - r1 - r0;
    return out;
}

TrivialityReport regular_triviality_probe(const CurvedAlgebra& alg, const Poly& g,
                                          const Poly& y, long degree_bound) {
    TrivialityReport out;
    if (alg.w.is_zero()) return out; // nothing to probe without a curvature
    out.precondition_ok = true;
    GroebnerBasis nr = nonreg_locus(alg.table, alg.w);
    for (const auto& p : nr.gens) out.nonreg.push_back(p.str());
    out.applicable = nr.is_unit_ideal();
    if (!out.applicable) return out;
    CurvedModule k = koszul_curved(alg, {g}, {y});
    Poly one = Poly::constant(alg.table, Scalar::one(alg.table->field()));
    out.cert = support_exclude(k, one, 1, degree_bound);
    return out;
}

} // namespace cdg
