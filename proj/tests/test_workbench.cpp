#include "cdg/workbench.hpp"
#include "helpers.hpp"
#include "json.hpp"

#include <fstream>
#include <functional>

using namespace cdg;
using nlohmann::json;

namespace {
const char* kSmallScenario = R"(# weighted cubic on a line
name = "unit-small"
field = "Q"
variables = ["x:2"]
curvature = "x^3"

[[task]]
kind = "milnor"

[[task]]
kind = "derham"
window = "-2..4"
)";

std::string error_text(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}
} // namespace

TEST_CASE("scenario text parses into header and tasks") {
    Scenario sc = parse_scenario(R"(
name = "parse-me" # trailing comment
field = "F3(s)"
variables = ["x:1", "t:0:laurent"]
curvature = "x^2*t"
seed = 5

[[task]]
kind = "rgamma"
window = "-3..3"
mode = "principal"

[[task]]
kind = "support"
gens = ["x"]
ys = ["x*t"]
m_max = 2
)");
    CHECK(sc.name == "parse-me");
    CHECK(sc.field().characteristic() == 3);
    CHECK_FALSE(sc.field().perfect());
    REQUIRE(sc.variables.size() == 2);
    CHECK(sc.variables[1].laurent);
    CHECK(sc.variables[1].weight == 0);
    CHECK(sc.curvature() == parse_poly(sc.table(), "x^2*t"));
    CHECK(sc.seed == 5);
    REQUIRE(sc.tasks.size() == 2);
    CHECK(sc.tasks[0].kind == TaskKind::RGamma);
    CHECK(sc.tasks[0].get_range("window") == std::pair<long, long>{-3, 3});
    CHECK(sc.tasks[1].get_str_list("gens") == std::vector<std::string>{"x"});
    CHECK(sc.tasks[1].get_int_or("m_max", 4) == 2);
    CHECK(sc.tasks[1].get_int_or("degree_bound", 6) == 6);
}

TEST_CASE("malformed text reports the position") {
    CHECK_ERROR_CODE(parse_scenario("name = \"a\"\nfield \"Q\"\n"), "ParseError");
    std::string msg = error_text([] { parse_scenario("name = \"a\"\nfield \"Q\"\n"); });
    CHECK(msg.find("line 2") != std::string::npos);

    std::string arr = error_text([] { parse_scenario("variables = [\"x:1\", 3]\n"); });
    CHECK(arr.find("mixed array element types") != std::string::npos);

    CHECK_ERROR_CODE(parse_scenario("name = \"a\"\n[[job]]\n"), "ParseError");
    CHECK_ERROR_CODE(parse_scenario("name = \"a\"\nseed = 1 2\n"), "ParseError");
}

TEST_CASE("well-formed text with bad contents names the field") {
    auto field_of = [](const std::string& text) {
        return error_text([&] { parse_scenario(text); });
    };
    CHECK(field_of("name = \"a\"\nfield = \"R\"\nvariables = [\"x:1\"]\n")
              .find("field 'field'") != std::string::npos);
    CHECK(field_of("name = \"a\"\nfield = \"Q\"\nvariables = [\"x:0\"]\n")
              .find("field 'variables'") != std::string::npos);
    CHECK(field_of("name = \"a\"\nfield = \"Q\"\nvariables = [\"x:1\"]\n[[task]]\nkind = \"bogus\"\n")
              .find("field 'kind'") != std::string::npos);
    CHECK(field_of("name = \"a\"\nfield = \"Q\"\nvariables = [\"x:1\"]\n[[task]]\nkind = "
                   "\"milnor\"\nwindow = \"0..1\"\n")
              .find("field 'window'") != std::string::npos);
    CHECK(field_of("name = \"a\"\nfield = \"Q\"\nvariables = [\"x:1\"]\n[[task]]\nkind = "
                   "\"chern_check\"\n")
              .find("field 'seed'") != std::string::npos);
    CHECK(field_of("name = \"a\"\nfield = \"Q\"\nvariables = [\"x:1\"]\ncolor = \"red\"\n")
              .find("field 'color'") != std::string::npos);
}

TEST_CASE("identical runs give identical reports") {
    Scenario sc = parse_scenario(kSmallScenario);
    RunResult a = run_scenario(sc);
    RunResult b = run_scenario(sc);
    CHECK(a.all_ok);
    CHECK(compare_golden(a.report_json, b.report_json).empty());
    json ja = json::parse(a.report_json);
    json jb = json::parse(b.report_json);
    ja.erase("timing");
    jb.erase("timing");
    CHECK(ja.dump() == jb.dump());
    CHECK(ja["schema"] == "cdgbench-report-1");
    CHECK(ja["scenario"]["name"] == "unit-small");
    CHECK(ja["tasks"][0]["result"]["dimension"] == 2);
}

TEST_CASE("seed resolution order") {
    const char* header = R"(
name = "seeded"
field = "Q"
variables = ["x:1"]
seed = 3

[[task]]
kind = "chern_check"
samples = 2
max_len = 2
)";
    Scenario sc = parse_scenario(header);
    json r = json::parse(run_scenario(sc).report_json);
    CHECK(r["tasks"][0]["result"]["seed"] == 3);
    json r9 = json::parse(run_scenario(sc, 9).report_json);
    CHECK(r9["tasks"][0]["result"]["seed"] == 9);

    Scenario task_seed = parse_scenario(std::string(header) + "seed = 5\n");
    json r5 = json::parse(run_scenario(task_seed, 9).report_json);
    CHECK(r5["tasks"][0]["result"]["seed"] == 5);
}

TEST_CASE("a failing task is embedded and the rest still run") {
    Scenario sc = parse_scenario(R"(
name = "half-broken"
field = "Q"
variables = ["x:2"]
curvature = "x^3"

[[task]]
kind = "rgamma"
mode = "bogus"

[[task]]
kind = "milnor"
)");
    RunResult r = run_scenario(sc);
    CHECK_FALSE(r.all_ok);
    json j = json::parse(r.report_json);
    CHECK(j["ok"] == false);
    CHECK(j["tasks"][0]["status"] == "error");
    CHECK(j["tasks"][0]["error"]["code"] == "ValidationError");
    std::string msg = j["tasks"][0]["error"]["message"];
    CHECK(msg.find("field 'mode'") != std::string::npos);
    CHECK_FALSE(j["tasks"][0].contains("result"));
    CHECK(j["tasks"][1]["status"] == "ok");
    CHECK(j["tasks"][1]["result"]["dimension"] == 2);
}

TEST_CASE("golden comparison ignores timing and version only") {
    Scenario sc = parse_scenario(kSmallScenario);
    std::string report = run_scenario(sc).report_json;
    json tweaked = json::parse(report);
    tweaked["timing"]["total_ms"] = 999999;
    tweaked["version"] = "cdgbench 9.9.9";
    CHECK(compare_golden(report, tweaked.dump()).empty());

    json wrong = json::parse(report);
    wrong["tasks"][0]["result"]["dimension"] = 3;
    auto diffs = compare_golden(report, wrong.dump());
    REQUIRE(diffs.size() == 1);
    CHECK(diffs[0].find("tasks[0].result.dimension") != std::string::npos);

    json extra = json::parse(report);
    extra["bonus"] = 1;
    auto extra_diffs = compare_golden(report, extra.dump());
    REQUIRE(extra_diffs.size() == 1);
    CHECK(extra_diffs[0].find("only in golden") != std::string::npos);

    json shorter = json::parse(report);
    shorter["tasks"].erase(1);
    auto len_diffs = compare_golden(report, shorter.dump());
    CHECK_FALSE(len_diffs.empty());
    CHECK(len_diffs[0].find("length") != std::string::npos);

    CHECK_ERROR_CODE(compare_golden(report, "{ not json"), "ParseError");
}

TEST_CASE("scenario files load from disk") {
    const std::string path = "unit_scratch_scenario.toml";
    {
        std::ofstream out(path);
        out << kSmallScenario;
    }
    RunResult r = run_scenario_file(path);
    CHECK(r.all_ok);
    CHECK(json::parse(r.report_json)["scenario"]["name"] == "unit-small");
    CHECK_ERROR_CODE(run_scenario_file("no_such_scenario.toml"), "ParseError");
    CHECK_ERROR_CODE(compare_golden_files("no_such_report.json", path), "FileError");
}
