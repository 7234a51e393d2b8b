#include "cdg/workbench.hpp"

#include "cdg/curved.hpp"
#include "cdg/derham.hpp"
#include "cdg/hochschild.hpp"
#include "cdg/localcoh.hpp"

#include "json.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

namespace cdg {
namespace {

using nlohmann::json;

constexpr const char* kSchema = "cdgbench-report-1";
constexpr const char* kVersion = "cdgbench 0.1.0";

std::string error_message(const Error& e) {
    std::string w = e.what();
    std::string prefix = e.code + ": ";
    return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

json coh_rows(const CohTable& t) {
    json rows = json::array();
    for (const auto& [key, dim] : t.dims) rows.push_back({key.first, key.second, dim});
    return rows;
}

json dim_rows(const std::map<std::pair<long, long>, long>& dims) {
    json rows = json::array();
    for (const auto& [key, dim] : dims) rows.push_back({key.first, key.second, dim});
    return rows;
}

std::string dim_csv(const std::map<std::pair<long, long>, long>& dims, const char* k0,
                    const char* k1) {
    std::ostringstream out;
    out << k0 << "," << k1 << ",dim\n";
    for (const auto& [key, dim] : dims)
        out << key.first << "," << key.second << "," << dim << "\n";
    return out.str();
}

json poly_list(const std::vector<Poly>& ps) {
    json rows = json::array();
    for (const auto& p : ps) rows.push_back(p.str());
    return rows;
}

json map_entries(const ModuleMap& f) {
    json rows = json::array();
    for (const auto& row : f.entries) {
        json r = json::array();
        for (const auto& e : row) r.push_back(e.str());
        rows.push_back(r);
    }
    return rows;
}

std::vector<Poly> parse_list(const VarTableP& table, const std::vector<std::string>& texts,
                             const std::string& field) {
    std::vector<Poly> out;
    for (const auto& t : texts) {
        try {
            out.push_back(parse_poly(table, t));
        } catch (const Error& e) {
            throw Error("ValidationError", "field '" + field + "': " + error_message(e));
        }
    }
    return out;
}

std::vector<long> int_list(const TaskSpec& t, const std::string& key) {
    auto it = t.params.find(key);
    if (it == t.params.end())
        throw Error("ValidationError", "field '" + key + "': missing");
    if (const auto* v = std::get_if<std::vector<long>>(&it->second)) return *v;
    if (const auto* s = std::get_if<long>(&it->second)) return {*s};
    throw Error("ValidationError", "field '" + key + "': expected an integer list");
}

long resolve_seed(const TaskSpec& t, const Scenario& sc, const std::optional<long>& cli) {
    if (t.has("seed")) return t.get_int("seed");
    if (cli) return *cli;
    if (sc.seed) return *sc.seed;
    throw Error("ValidationError", "field 'seed': sampling task has no seed");
}

std::pair<long, long> window_or(const TaskSpec& t, long lo, long hi) {
    if (t.has("window")) return t.get_range("window");
    return {lo, hi};
}

// ---- task runners ------------------------------------------------------

json run_milnor(const Scenario& sc) {
    MilnorData m = milnor(sc.table(), sc.curvature());
    json hilbert = json::array();
    for (const auto& [w, d] : m.hilbert) hilbert.push_back({w, d});
    return {{"finite", m.finite},
            {"dimension", m.dimension},
            {"hilbert", hilbert},
            {"groebner", poly_list(m.gb.gens)}};
}

json run_derham(const Scenario& sc, const TaskSpec& t) {
    auto [lo, hi] = window_or(t, -10, 10);
    TwistedCohomology tc = twisted_cohomology(sc.table(), sc.curvature(), lo, hi);
    long odd = 0, even = 0;
    for (const auto& [key, dim] : tc.table.dims) (key.first == 1 ? odd : even) += dim;
    return {{"regular", tc.regular},
            {"window", {lo, hi}},
            {"table", coh_rows(tc.table)},
            {"csv", to_csv(tc.table)},
            {"odd_total", odd},
            {"even_total", even},
            {"milnor_finite", tc.milnor.finite},
            {"milnor_dimension", tc.milnor.dimension}};
}

json run_rgamma(const Scenario& sc, const TaskSpec& t) {
    auto [lo, hi] = window_or(t, -10, 10);
    std::string mode = t.has("mode") ? t.get_str("mode") : "principal";
    Poly f = sc.curvature();
    GradedPresentation pres = derham_presentation(sc.table(), f);
    RGammaResult r;
    if (mode == "principal") {
        r = rgamma_principal(pres, f, lo, hi);
    } else if (mode == "koszul") {
        r = rgamma_koszul_limit(pres, {f}, lo, hi, t.get_int_or("l_max", 12));
    } else {
        throw Error("ValidationError", "field 'mode': expected principal or koszul");
    }
    return {{"mode", mode},
            {"verdict", r.verdict},
            {"generation", r.generation},
            {"certificate", r.certificate},
            {"notes", r.notes},
            {"window", {lo, hi}},
            {"table", coh_rows(r.table)},
            {"csv", to_csv(r.table)}};
}

json run_smooth(const Scenario& sc) {
    SmoothnessReport rep = smoothness_check(sc.table(), sc.curvature());
    // replay the division certificates: sat_i * f^power_i must equal the cofactor
    // combination of the Jacobian generators
    Poly f = sc.curvature();
    for (size_t i = 0; i < rep.sat.gens.size(); ++i) {
        Poly lhs = rep.sat.gens[i] * f.pow(static_cast<int>(rep.power[i]));
        Poly rhs = Poly::zero(sc.table());
        for (size_t j = 0; j < rep.jac.gens.size(); ++j)
            rhs = rhs + rep.cofactors[i][j] * rep.jac.gens[j];
        if (!(lhs - rhs).is_zero())
            throw Error("CertificateMismatch", "division certificate " + std::to_string(i) +
                                                   " does not replay");
    }
    return {{"smooth", rep.smooth},
            {"jacobian", poly_list(rep.jac.gens)},
            {"saturation", poly_list(rep.sat.gens)},
            {"final_basis", poly_list(rep.final_basis.gens)},
            {"powers", rep.power},
            {"certified", true}};
}

CurvedModule task_koszul(const Scenario& sc, const TaskSpec& t) {
    CurvedAlgebra alg{sc.table(), sc.curvature()};
    alg.validate();
    std::vector<Poly> gs = parse_list(sc.table(), t.get_str_list("gens"), "gens");
    std::vector<Poly> ys = parse_list(sc.table(), t.get_str_list("ys"), "ys");
    CurvedModule mod = koszul_curved(alg, gs, ys);
    mod.validate();
    return mod;
}

json run_support(const Scenario& sc, const TaskSpec& t) {
    std::string mode = t.has("mode") ? t.get_str("mode") : "exclude";
    if (mode == "probe") {
        CurvedAlgebra alg{sc.table(), sc.curvature()};
        alg.validate();
        Poly g = parse_poly(sc.table(), t.get_str("g"));
        Poly y = parse_poly(sc.table(), t.get_str("y"));
        TrivialityReport rep =
            regular_triviality_probe(alg, g, y, t.get_int_or("degree_bound", 6));
        json out = {{"mode", mode},
                    {"precondition_ok", rep.precondition_ok},
                    {"applicable", rep.applicable},
                    {"nonreg", rep.nonreg},
                    {"found", rep.cert.found},
                    {"m", rep.cert.m}};
        if (rep.cert.found) {
            out["h_even"] = map_entries(rep.cert.h0);
            out["h_odd"] = map_entries(rep.cert.h1);
        }
        return out;
    }
    CurvedModule mod = task_koszul(sc, t);
    if (mode == "exclude") {
        Poly g = parse_poly(sc.table(), t.get_str("g"));
        SupportCertificate cert = support_exclude(mod, g, t.get_int_or("m_max", 4),
                                                  t.get_int_or("degree_bound", 6));
        json out = {{"mode", mode}, {"found", cert.found}, {"m", cert.m}};
        if (cert.found) {
            out["h_even"] = map_entries(cert.h0);
            out["h_odd"] = map_entries(cert.h1);
        }
        return out;
    }
    if (mode == "include") {
        std::vector<long> coords = int_list(t, "point");
        if (coords.size() != sc.table()->size())
            throw Error("ValidationError", "field 'point': expected one value per variable");
        std::vector<Scalar> point;
        for (long c : coords) point.push_back(Scalar::from_int(sc.field(), c));
        FiberDims fd = support_include(mod, point);
        return {{"mode", mode},
                {"is_complex", fd.is_complex},
                {"even_dim", fd.even_dim},
                {"odd_dim", fd.odd_dim}};
    }
    throw Error("ValidationError", "field 'mode': expected exclude, include, or probe");
}

json run_hochschild(const Scenario& sc, const TaskSpec& t) {
    Poly f = sc.curvature();
    std::string mode = t.has("mode") ? t.get_str("mode") : (f.is_zero() ? "integer" : "pair");
    PolynomialBarAlgebra bar(sc.table(), f);
    if (mode == "pair") {
        auto [lo, hi] = window_or(t, 0, 6);
        long kappa0 = 1, rounds = 4;
        if (t.has("caps")) {
            auto [c0, c1] = t.get_range("caps");
            kappa0 = c0;
            rounds = c1 - c0 + 1;
        }
        BarTable bt = hochschild_z2_window(bar, lo, hi, kappa0, static_cast<int>(rounds),
                                           t.get_int_or("gap", 1));
        return {{"mode", mode},
                {"window", {lo, hi}},
                {"table", dim_rows(bt.dims)},
                {"csv", dim_csv(bt.dims, "parity", "weight")},
                {"stabilized", bt.stabilized},
                {"kappa_used", bt.kappa_used},
                {"gap_used", bt.gap_used}};
    }
    if (mode == "integer") {
        auto [lo, hi] = window_or(t, 0, 6);
        long n_max = t.get_int_or("n_max", 4);
        BarZTable zt = hochschild_z_window(bar, n_max, lo, hi);
        return {{"mode", mode},
                {"window", {lo, hi}},
                {"n_max", n_max},
                {"table", dim_rows(zt.dims)},
                {"csv", dim_csv(zt.dims, "position", "weight")}};
    }
    throw Error("ValidationError", "field 'mode': expected pair or integer");
}

json run_chern(const Scenario& sc, const TaskSpec& t, const std::optional<long>& cli_seed) {
    long seed = resolve_seed(t, sc, cli_seed);
    long samples = t.get_int_or("samples", 25);
    long max_len = t.get_int_or("max_len", 4);
    long max_exp = t.get_int_or("max_exp", 3);
    PolynomialBarAlgebra bar(sc.table(), sc.curvature());
    bool curved = bar.curvature_weight() != 0 || !sc.curvature().is_zero();
    std::mt19937_64 rng(static_cast<unsigned long long>(seed));
    json checks = {{"d_squared", 0}, {"b_squared", 0}, {"chern_d", 0}, {"chern_b", 0}};
    if (!curved) checks["mixed"] = 0;
    auto tally = [&](const char* name, bool ok, const BarWord& u) {
        if (!ok)
            throw Error("IdentityFailure",
                        std::string(name) + " failed on " + word_str(bar, u));
        checks[name] = checks[name].get<long>() + 1;
    };
    for (long k = 0; k < samples; ++k) {
        BarWord u = random_word(bar, rng, max_len, max_exp);
        tally("d_squared", check_d_squared(bar, u), u);
        tally("b_squared", check_b_squared(bar, u), u);
        if (!curved) tally("mixed", check_mixed(bar, u), u);
        tally("chern_d", check_chern_d(bar, u), u);
        tally("chern_b", check_chern_b(bar, u), u);
    }
    return {{"seed", seed},
            {"samples", samples},
            {"curved", curved},
            {"checks", checks},
            {"failures", 0}};
}

json run_appendix_koszul(const Scenario& sc, const TaskSpec& t) {
    CurvedModule mod = task_koszul(sc, t);
    const FreeModule& ev = mod.pair.modules[0];
    const FreeModule& od = mod.pair.modules[1];
    CurvedModule psi = psi_tensor(mod, mod);
    check_complex(psi.pair); // curvatures cancel, so the square must vanish
    return {{"even_rank", static_cast<long>(ev.rank())},
            {"odd_rank", static_cast<long>(od.rank())},
            {"even_weights", ev.gen_weights},
            {"odd_weights", od.gen_weights},
            {"curvature", mod.alg.w.str()},
            {"valid", true},
            {"psi_square_zero", true}};
}

// strip one variable (substituted to 1) out of a polynomial's table
Poly drop_var(const Poly& p, const VarTableP& base, size_t idx) {
    Poly out(base);
    for (const auto& [mono, c] : p.terms()) {
        Monomial m;
        for (size_t i = 0; i < mono.size(); ++i)
            if (i != idx) m.push_back(mono[i]);
        out.add_term(m, c);
    }
    return out;
}

json run_verify_main(const Scenario& sc, const TaskSpec& t,
                     const std::optional<long>& cli_seed) {
    VarTableP table = sc.table();
    // exactly one inverted variable carries the deformation parameter
    std::optional<size_t> t_idx;
    for (size_t i = 0; i < table->size(); ++i) {
        if (!table->var(i).laurent) continue;
        if (t_idx) throw Error("TildeShape", "expected exactly one inverted variable");
        t_idx = i;
    }
    if (!t_idx) throw Error("TildeShape", "expected exactly one inverted variable");

    Poly w = sc.curvature();
    if (w.is_zero()) throw Error("TildeShape", "curvature must be nonzero");
    for (const auto& [mono, c] : w.terms())
        if (mono.size() <= *t_idx || mono[*t_idx] != 1)
            throw Error("TildeShape",
                        "curvature must be linear in the inverted variable");

    std::vector<VarInfo> base_vars;
    for (size_t i = 0; i < table->size(); ++i)
        if (i != *t_idx) base_vars.push_back(table->var(i));
    VarTableP base = make_vartable(table->field(), base_vars);
    Poly f = drop_var(w, base, *t_idx); // w = t f with t set to 1
    long fw = f.homogeneous_weight();

    // the declared generator, validated exactly over the full ring
    CurvedAlgebra alg{table, w};
    alg.validate();
    std::vector<Poly> gs = parse_list(table, t.get_str_list("gens"), "gens");
    std::vector<Poly> ys = parse_list(table, t.get_str_list("ys"), "ys");
    CurvedModule mod = koszul_curved(alg, gs, ys);
    mod.validate();

    // specialize t = 1; stays weight homogeneous only when t sits in weight 0
    CurvedModule spec{CurvedAlgebra{base, f}, Complex{}};
    spec.alg.validate();
    spec.pair.mode = GradingMode::Z2;
    for (const auto& m : mod.pair.modules)
        spec.pair.modules.push_back(FreeModule{base, m.gen_weights, m.gen_names});
    for (size_t k = 0; k < mod.pair.maps.size(); ++k) {
        const ModuleMap& mp = mod.pair.maps[k];
        ModuleMap nm = ModuleMap::zero(spec.pair.modules[k], spec.pair.modules[1 - k], 1);
        for (size_t r = 0; r < mp.entries.size(); ++r)
            for (size_t s = 0; s < mp.entries[r].size(); ++s)
                nm.entries[r][s] = drop_var(mp.entries[r][s], base, *t_idx);
        spec.pair.maps.push_back(nm);
    }
    spec.validate();

    long seed = resolve_seed(t, sc, cli_seed);
    long samples = t.get_int_or("samples", 20);
    std::mt19937_64 rng(static_cast<unsigned long long>(seed));

    // identity suite on the endomorphism ring of the specialized generator
    EndDgaBarAlgebra endod(spec);
    for (long k = 0; k < samples; ++k) {
        BarWord u = random_word(endod, rng, 4, 2);
        if (!check_d_squared(endod, u))
            throw Error("IdentityFailure", "d_squared failed on " + word_str(endod, u));
        if (!check_b_squared(endod, u))
            throw Error("IdentityFailure", "b_squared failed on " + word_str(endod, u));
        if (!check_mixed(endod, u))
            throw Error("IdentityFailure", "mixed failed on " + word_str(endod, u));
    }

    // identity suite plus character identities on the one-object model
    PolynomialBarAlgebra bar(base, f);
    for (long k = 0; k < samples; ++k) {
        BarWord u = random_word(bar, rng, 4, 3);
        if (!check_d_squared(bar, u))
            throw Error("IdentityFailure", "d_squared failed on " + word_str(bar, u));
        if (!check_b_squared(bar, u))
            throw Error("IdentityFailure", "b_squared failed on " + word_str(bar, u));
        if (!check_chern_d(bar, u))
            throw Error("IdentityFailure", "chern_d failed on " + word_str(bar, u));
        if (!check_chern_b(bar, u))
            throw Error("IdentityFailure", "chern_b failed on " + word_str(bar, u));
    }

    // closed side: twisted forms over the honest weight range of the Jacobian quotient
    MilnorData md = milnor(base, f);
    if (!md.finite)
        throw Error("NotRegular", "the comparison needs a finite Jacobian quotient");
    long shift = 0;
    for (const auto& v : base_vars) shift += v.weight - 2;
    long m_lo = md.hilbert.begin()->first + shift;
    long m_hi = md.hilbert.rbegin()->first + shift;
    TwistedCohomology tc = twisted_cohomology(base, f, m_lo, m_hi);
    long odd = 0, even = 0;
    for (const auto& [key, dim] : tc.table.dims) (key.first == 1 ? odd : even) += dim;

    // open side: the pair-graded window of the one-object model
    auto [wlo, whi] = window_or(t, 0, 2 * fw);
    long kappa0 = 1, rounds = 4;
    if (t.has("caps")) {
        auto [c0, c1] = t.get_range("caps");
        kappa0 = c0;
        rounds = c1 - c0 + 1;
    }
    BarTable bt = hochschild_z2_window(bar, wlo, whi, kappa0, static_cast<int>(rounds),
                                       t.get_int_or("gap", 1));

    // a closed class at weight m recurs at every pair weight s with
    // s = m + 2 #variables (mod weight f), same parity
    long nv = static_cast<long>(base->size());
    std::map<std::pair<long, long>, long> expected;
    for (const auto& [key, dim] : tc.table.dims)
        for (long s = wlo; s <= whi; ++s)
            if (((s - key.second - 2 * nv) % fw + fw) % fw == 0)
                expected[{key.first, s}] += dim;

    bool agreement = tc.regular && bt.stabilized && bt.dims == expected;
    return {{"generator",
             {{"gens", t.get_str_list("gens")},
              {"ys", t.get_str_list("ys")},
              {"even_rank", static_cast<long>(mod.pair.modules[0].rank())},
              {"odd_rank", static_cast<long>(mod.pair.modules[1].rank())}}},
            {"seed", seed},
            {"identity_samples", samples},
            {"closed",
             {{"regular", tc.regular},
              {"milnor_dimension", md.dimension},
              {"table", coh_rows(tc.table)},
              {"odd_total", odd},
              {"even_total", even}}},
            {"pair",
             {{"window", {wlo, whi}},
              {"stabilized", bt.stabilized},
              {"kappa_used", bt.kappa_used},
              {"table", dim_rows(bt.dims)}}},
            {"expected", dim_rows(expected)},
            {"agreement", agreement}};
}

json run_task(const Scenario& sc, const TaskSpec& t, const std::optional<long>& cli_seed) {
    switch (t.kind) {
    case TaskKind::Derham: return run_derham(sc, t);
    case TaskKind::Milnor: return run_milnor(sc);
    case TaskKind::RGamma: return run_rgamma(sc, t);
    case TaskKind::SmoothCheck: return run_smooth(sc);
    case TaskKind::Support: return run_support(sc, t);
    case TaskKind::Hochschild: return run_hochschild(sc, t);
    case TaskKind::ChernCheck: return run_chern(sc, t, cli_seed);
    case TaskKind::AppendixKoszul: return run_appendix_koszul(sc, t);
    case TaskKind::VerifyMain: return run_verify_main(sc, t, cli_seed);
    }
    throw Error("ValidationError", "field 'kind': unknown task kind");
}

void diff_json(const json& a, const json& b, const std::string& path,
               std::vector<std::string>& out) {
    if (a.is_object() && b.is_object()) {
        std::vector<std::string> keys;
        for (auto it = a.begin(); it != a.end(); ++it) keys.push_back(it.key());
        for (auto it = b.begin(); it != b.end(); ++it)
            if (!a.contains(it.key())) keys.push_back(it.key());
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (const auto& k : keys) {
            std::string p = path.empty() ? k : path + "." + k;
            if (!a.contains(k))
                out.push_back(p + ": only in golden");
            else if (!b.contains(k))
                out.push_back(p + ": only in report");
            else
                diff_json(a.at(k), b.at(k), p, out);
        }
        return;
    }
    if (a.is_array() && b.is_array()) {
        if (a.size() != b.size())
            out.push_back(path + ": length " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
        size_t n = std::min(a.size(), b.size());
        for (size_t i = 0; i < n; ++i)
            diff_json(a[i], b[i], path + "[" + std::to_string(i) + "]", out);
        return;
    }
    if (a != b) out.push_back(path + ": report " + a.dump() + ", golden " + b.dump());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("FileError", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

RunResult run_scenario(const Scenario& sc, std::optional<long> seed_override) {
    auto t_start = std::chrono::steady_clock::now();
    json variables = json::array();
    for (const auto& v : sc.variables)
        variables.push_back(v.name + ":" + std::to_string(v.weight) +
                            (v.laurent ? ":laurent" : ""));
    json report = {
        {"schema", kSchema},
        {"version", kVersion},
        {"scenario",
         {{"name", sc.name},
          {"field", sc.field_text},
          {"variables", variables},
          {"curvature", sc.curvature_text},
          {"seed", sc.seed ? json(*sc.seed) : json(nullptr)}}},
    };
    json tasks = json::array();
    json task_ms = json::array();
    bool all_ok = true;
    for (const auto& t : sc.tasks) {
        auto t0 = std::chrono::steady_clock::now();
        json entry = {{"kind", task_kind_name(t.kind)}};
        try {
            entry["status"] = "ok";
            entry["result"] = run_task(sc, t, seed_override);
        } catch (const Error& e) {
            all_ok = false;
            entry["status"] = "error";
            entry["error"] = {{"code", e.code}, {"message", error_message(e)}};
            entry.erase("result");
        }
        auto t1 = std::chrono::steady_clock::now();
        task_ms.push_back(
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
        tasks.push_back(entry);
    }
    report["tasks"] = tasks;
    report["ok"] = all_ok;
    auto t_end = std::chrono::steady_clock::now();
    report["timing"] = {
        {"total_ms",
         std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_start).count()},
        {"task_ms", task_ms}};
    return RunResult{report.dump(2) + "\n", all_ok};
}

RunResult run_scenario_file(const std::string& path, std::optional<long> seed_override) {
    return run_scenario(load_scenario(path), seed_override);
}

std::vector<std::string> compare_golden(const std::string& report_json,
                                        const std::string& golden_json) {
    json a, b;
    try {
        a = json::parse(report_json);
    } catch (const json::parse_error& e) {
        throw Error("ParseError", std::string("report: ") + e.what());
    }
    try {
        b = json::parse(golden_json);
    } catch (const json::parse_error& e) {
        throw Error("ParseError", std::string("golden: ") + e.what());
    }
    for (const char* key : {"timing", "version"}) {
        if (a.is_object()) a.erase(key);
        if (b.is_object()) b.erase(key);
    }
    std::vector<std::string> out;
    diff_json(a, b, "", out);
    return out;
}

std::vector<std::string> compare_golden_files(const std::string& report_path,
                                              const std::string& golden_path) {
    return compare_golden(read_file(report_path), read_file(golden_path));
}

} // namespace cdg
