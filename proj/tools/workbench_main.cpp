// workbench: run scenario files and compare reports against frozen golden copies.
// Exit codes: 0 all tasks ok (and golden diff empty when requested), 1 task or
// usage error, 2 golden mismatch.

#include "cdg/workbench.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic workbench for curved algebra scenarios"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, golden_path;
    long seed = 0;
    bool seed_set = false;
    int jobs = 1;

    CLI::App* run = app.add_subcommand("run", "run a scenario file and emit a JSON report");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--out", out_path, "write the report here instead of stdout");
    run->add_option("--seed", seed, "override the scenario seed for sampling tasks")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--jobs", jobs, "worker count (tasks currently run sequentially)")
        ->check(CLI::PositiveNumber);
    run->add_option("--golden", golden_path, "compare the fresh report against this file");

    std::string report_path, golden_path2;
    CLI::App* golden = app.add_subcommand("golden", "diff a report against a golden copy");
    golden->add_option("report", report_path, "report file")->required();
    golden->add_option("golden", golden_path2, "golden file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            std::optional<long> seed_override;
            if (seed_set) seed_override = seed;
            cdg::RunResult res = cdg::run_scenario_file(scenario_path, seed_override);
            if (out_path.empty()) {
                std::cout << res.report_json;
            } else {
                std::ofstream out(out_path, std::ios::binary);
                if (!out) {
                    std::cerr << "error: cannot write " << out_path << "\n";
                    return 1;
                }
                out << res.report_json;
            }
            if (!golden_path.empty()) {
                std::vector<std::string> diffs =
                    cdg::compare_golden(res.report_json,
                                        [&] {
                                            std::ifstream in(golden_path, std::ios::binary);
                                            if (!in)
                                                throw cdg::Error("FileError",
                                                                 "cannot read " + golden_path);
                                            return std::string(
                                                std::istreambuf_iterator<char>(in), {});
                                        }());
                for (const auto& d : diffs) std::cerr << d << "\n";
                if (!diffs.empty()) return 2;
            }
            return res.all_ok ? 0 : 1;
        }
        std::vector<std::string> diffs =
            cdg::compare_golden_files(report_path, golden_path2);
        for (const auto& d : diffs) std::cout << d << "\n";
        return diffs.empty() ? 0 : 2;
    } catch (const cdg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
