#pragma once
// Task orchestration: runs a scenario's tasks in order, embedding task-level errors
// without aborting later tasks, and emits a deterministic JSON report. Golden
// comparison is a structural diff that ignores timing and version metadata.

#include "cdg/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cdg {

struct RunResult {
    std::string report_json; // deterministic given (scenario, seed)
    bool all_ok = false;     // every task finished without an embedded error
};

// seed_override replaces the scenario header seed (per-task seeds still win)
RunResult run_scenario(const Scenario& sc, std::optional<long> seed_override = std::nullopt);
RunResult run_scenario_file(const std::string& path,
                            std::optional<long> seed_override = std::nullopt);

// one line per difference, empty when the reports agree structurally
std::vector<std::string> compare_golden(const std::string& report_json,
                                        const std::string& golden_json);
std::vector<std::string> compare_golden_files(const std::string& report_path,
                                              const std::string& golden_path);

} // namespace cdg
