// Python bindings: string-in, JSON-out wrappers over the scenario runner plus a
// handful of direct computations for notebook use.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cdg/derham.hpp"
#include "cdg/hochschild.hpp"
#include "cdg/localcoh.hpp"
#include "cdg/scenario.hpp"
#include "cdg/workbench.hpp"

#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace cdg;

namespace {

// assemble an inline scenario so field/variable parsing lives in one place
Scenario inline_scenario(const std::string& field, const std::vector<std::string>& variables,
                         const std::string& curvature) {
    std::ostringstream text;
    auto safe = [](const std::string& s) {
        if (s.find('"') != std::string::npos || s.find('\n') != std::string::npos)
            throw Error("ValidationError", "field 'inline': quotes and newlines not allowed");
        return s;
    };
    text << "name = \"inline\"\n";
    text << "field = \"" << safe(field) << "\"\n";
    text << "variables = [";
    for (size_t i = 0; i < variables.size(); ++i)
        text << (i ? ", " : "") << "\"" << safe(variables[i]) << "\"";
    text << "]\n";
    if (!curvature.empty()) text << "curvature = \"" << safe(curvature) << "\"\n";
    return parse_scenario(text.str());
}

py::list coh_list(const CohTable& t) {
    py::list rows;
    for (const auto& [key, dim] : t.dims)
        rows.append(py::make_tuple(key.first, key.second, dim));
    return rows;
}

py::list dim_list(const std::map<std::pair<long, long>, long>& dims) {
    py::list rows;
    for (const auto& [key, dim] : dims)
        rows.append(py::make_tuple(key.first, key.second, dim));
    return rows;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact-arithmetic workbench core";

    m.def(
        "run_text",
        [](const std::string& text, std::optional<long> seed) {
            RunResult r = run_scenario(parse_scenario(text), seed);
            return py::make_tuple(r.report_json, r.all_ok);
        },
        py::arg("text"), py::arg("seed") = std::nullopt,
        "run a scenario given as text; returns (report_json, all_ok)");

    m.def(
        "run_file",
        [](const std::string& path, std::optional<long> seed) {
            RunResult r = run_scenario_file(path, seed);
            return py::make_tuple(r.report_json, r.all_ok);
        },
        py::arg("path"), py::arg("seed") = std::nullopt,
        "run a scenario file; returns (report_json, all_ok)");

    m.def(
        "compare_golden",
        [](const std::string& report_json, const std::string& golden_json) {
            return compare_golden(report_json, golden_json);
        },
        py::arg("report_json"), py::arg("golden_json"),
        "structural diff ignoring timing and version; empty list means match");

    m.def(
        "milnor",
        [](const std::string& field, const std::vector<std::string>& variables,
           const std::string& f) {
            Scenario sc = inline_scenario(field, variables, f);
            MilnorData md = cdg::milnor(sc.table(), sc.curvature());
            py::dict out;
            out["finite"] = md.finite;
            out["dimension"] = md.dimension;
            py::dict hilbert;
            for (const auto& [w, d] : md.hilbert) hilbert[py::int_(w)] = d;
            out["hilbert"] = hilbert;
            return out;
        },
        py::arg("field"), py::arg("variables"), py::arg("f"),
        "Jacobian quotient dimensions of a potential");

    m.def(
        "twisted_cohomology",
        [](const std::string& field, const std::vector<std::string>& variables,
           const std::string& f, long lo, long hi) {
            Scenario sc = inline_scenario(field, variables, f);
            TwistedCohomology tc = cdg::twisted_cohomology(sc.table(), sc.curvature(), lo, hi);
            py::dict out;
            out["regular"] = tc.regular;
            out["table"] = coh_list(tc.table);
            return out;
        },
        py::arg("field"), py::arg("variables"), py::arg("f"), py::arg("lo"), py::arg("hi"),
        "parity-graded cohomology of (forms, df ^ -) over a weight window");

    m.def(
        "smoothness_check",
        [](const std::string& field, const std::vector<std::string>& variables,
           const std::string& f) {
            Scenario sc = inline_scenario(field, variables, f);
            SmoothnessReport rep = cdg::smoothness_check(sc.table(), sc.curvature());
            py::dict out;
            out["smooth"] = rep.smooth;
            py::list basis;
            for (const auto& g : rep.final_basis.gens) basis.append(g.str());
            out["final_basis"] = basis;
            return out;
        },
        py::arg("field"), py::arg("variables"), py::arg("f"),
        "decide 1 in (J(f) : f^inf) + (f) with division certificates");

    m.def(
        "hochschild_pair",
        [](const std::string& field, const std::vector<std::string>& variables,
           const std::string& f, long s_lo, long s_hi, long kappa0, int rounds, long gap) {
            Scenario sc = inline_scenario(field, variables, f);
            PolynomialBarAlgebra bar(sc.table(), sc.curvature());
            BarTable bt = hochschild_z2_window(bar, s_lo, s_hi, kappa0, rounds, gap);
            py::dict out;
            out["stabilized"] = bt.stabilized;
            out["kappa_used"] = bt.kappa_used;
            out["table"] = dim_list(bt.dims);
            return out;
        },
        py::arg("field"), py::arg("variables"), py::arg("f"), py::arg("s_lo"),
        py::arg("s_hi"), py::arg("kappa0") = 1, py::arg("rounds") = 4, py::arg("gap") = 1,
        "pair-graded cyclic-word homology over a weight window");

    m.def(
        "hochschild_integer",
        [](const std::string& field, const std::vector<std::string>& variables, long n_max,
           long s_lo, long s_hi) {
            Scenario sc = inline_scenario(field, variables, "");
            PolynomialBarAlgebra bar(sc.table(), Poly::zero(sc.table()));
            BarZTable zt = hochschild_z_window(bar, n_max, s_lo, s_hi);
            py::dict out;
            out["table"] = dim_list(zt.dims);
            return out;
        },
        py::arg("field"), py::arg("variables"), py::arg("n_max"), py::arg("s_lo"),
        py::arg("s_hi"), "integer-graded homology of the uncurved polynomial algebra");

    m.attr("__version__") = "0.1.0";
}
