#pragma once
// Declarative scenario files: a flat header (field, variables, curvature, seed)
// followed by [[task]] sections. Parsing reports line/column; validation names the
// offending field and leaves task execution to the workbench.

#include "cdg/poly.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cdg {

using ParamValue = std::variant<long, std::string, std::vector<std::string>, std::vector<long>>;

enum class TaskKind {
    Derham,
    Milnor,
    RGamma,
    SmoothCheck,
    Support,
    Hochschild,
    ChernCheck,
    AppendixKoszul,
    VerifyMain,
};

std::string task_kind_name(TaskKind k);

struct TaskSpec {
    TaskKind kind;
    std::map<std::string, ParamValue> params;
    long line = 0; // [[task]] header line, for error reporting

    bool has(const std::string& key) const { return params.count(key) != 0; }
    long get_int(const std::string& key) const;
    long get_int_or(const std::string& key, long fallback) const;
    std::string get_str(const std::string& key) const;
    std::vector<std::string> get_str_list(const std::string& key) const;
    // "a..b" with a <= b
    std::pair<long, long> get_range(const std::string& key) const;
};

struct Scenario {
    std::string name;
    std::string field_text; // "Q", "F3", "F3(s)"
    std::vector<VarInfo> variables;
    std::string curvature_text; // empty when absent
    std::optional<long> seed;
    std::vector<TaskSpec> tasks;

    // assembled by validate()
    Field field() const;
    VarTableP table() const;
    // zero polynomial when no curvature was declared
    Poly curvature() const;
};

// Errors: Error("ParseError", "line L, column C: ...") for malformed text,
// Error("ValidationError", "field ...") for well-formed text with bad contents.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

} // namespace cdg
