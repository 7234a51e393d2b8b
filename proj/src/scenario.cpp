#include "cdg/scenario.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace cdg {

namespace {

[[noreturn]] void parse_fail(long line, long col, const std::string& msg) {
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": " << msg;
    throw Error("ParseError", os.str());
}

[[noreturn]] void invalid(const std::string& field, const std::string& msg) {
    throw Error("ValidationError", "field '" + field + "': " + msg);
}

struct Cursor {
    const std::string& s;
    long line;
    size_t i = 0;

    bool done() const { return i >= s.size(); }
    char peek() const { return s[i]; }
    long col() const { return static_cast<long>(i) + 1; }
    void skip_space() {
        while (!done() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
};

std::string read_quoted(Cursor& c) {
    if (c.done() || c.peek() != '"') parse_fail(c.line, c.col(), "expected a quoted string");
    ++c.i;
    std::string out;
    while (!c.done() && c.peek() != '"') out.push_back(c.s[c.i++]);
    if (c.done()) parse_fail(c.line, c.col(), "unterminated string");
    ++c.i;
    return out;
}

long read_int(Cursor& c) {
    size_t start = c.i;
    if (!c.done() && (c.peek() == '-' || c.peek() == '+')) ++c.i;
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) ++c.i;
    if (c.i == start || (c.i == start + 1 && !std::isdigit(static_cast<unsigned char>(c.s[start]))))
        parse_fail(c.line, static_cast<long>(start) + 1, "expected an integer");
    return std::stol(c.s.substr(start, c.i - start));
}

ParamValue read_value(Cursor& c) {
    c.skip_space();
    if (c.done()) parse_fail(c.line, c.col(), "expected a value");
    if (c.peek() == '"') return read_quoted(c);
    if (c.peek() == '[') {
        ++c.i;
        std::vector<std::string> strs;
        std::vector<long> ints;
        bool want_str = false, want_int = false, first = true;
        for (;;) {
            c.skip_space();
            if (c.done()) parse_fail(c.line, c.col(), "unterminated array");
            if (c.peek() == ']') {
                ++c.i;
                break;
            }
            if (!first) {
                if (c.peek() != ',') parse_fail(c.line, c.col(), "expected ',' or ']'");
                ++c.i;
                c.skip_space();
            }
            if (c.done()) parse_fail(c.line, c.col(), "unterminated array");
            if (c.peek() == ']') {
                ++c.i;
                break;
            }
            if (c.peek() == '"') {
                if (want_int) parse_fail(c.line, c.col(), "mixed array element types");
                want_str = true;
                strs.push_back(read_quoted(c));
            } else {
                if (want_str) parse_fail(c.line, c.col(), "mixed array element types");
                want_int = true;
                ints.push_back(read_int(c));
            }
            first = false;
        }
        if (want_str) return strs;
        return ints;
    }
    return read_int(c);
}

std::string strip_comment(const std::string& raw, long line) {
    std::string out;
    bool in_str = false;
    for (size_t i = 0; i < raw.size(); ++i) {
        char ch = raw[i];
        if (ch == '"') in_str = !in_str;
        if (ch == '#' && !in_str) break;
        out.push_back(ch);
    }
    if (in_str) parse_fail(line, static_cast<long>(out.size()) + 1, "unterminated string");
    // trim trailing whitespace/CR
    while (!out.empty() && (out.back() == ' ' || out.back() == '\t' || out.back() == '\r'))
        out.pop_back();
    return out;
}

const std::map<std::string, TaskKind>& kind_names() {
    static const std::map<std::string, TaskKind> m = {
        {"derham", TaskKind::Derham},
        {"milnor", TaskKind::Milnor},
        {"rgamma", TaskKind::RGamma},
        {"smooth_check", TaskKind::SmoothCheck},
        {"support", TaskKind::Support},
        {"hochschild", TaskKind::Hochschild},
        {"chern_check", TaskKind::ChernCheck},
        {"appendix_koszul", TaskKind::AppendixKoszul},
        {"verify_main", TaskKind::VerifyMain},
    };
    return m;
}

VarInfo parse_varinfo(const std::string& text) {
    // name:weight or name:weight:laurent
    size_t a = text.find(':');
    if (a == std::string::npos) invalid("variables", "'" + text + "' is not name:weight");
    std::string name = text.substr(0, a);
    size_t b = text.find(':', a + 1);
    std::string weight_s = b == std::string::npos ? text.substr(a + 1) : text.substr(a + 1, b - a - 1);
    std::string tag = b == std::string::npos ? "" : text.substr(b + 1);
    if (name.empty()) invalid("variables", "empty variable name in '" + text + "'");
    long weight = 0;
    try {
        size_t used = 0;
        weight = std::stol(weight_s, &used);
        if (used != weight_s.size()) throw std::invalid_argument("");
    } catch (...) {
        invalid("variables", "bad weight in '" + text + "'");
    }
    bool laurent = false;
    if (tag == "laurent")
        laurent = true;
    else if (!tag.empty())
        invalid("variables", "unknown tag '" + tag + "' in '" + text + "'");
    return VarInfo{name, weight, laurent};
}

void validate(Scenario& sc) {
    if (sc.name.empty()) invalid("name", "missing");
    sc.field(); // throws on a bad descriptor
    if (sc.variables.empty()) invalid("variables", "missing or empty");
    for (const auto& v : sc.variables)
        if (!v.laurent && v.weight < 1)
            invalid("variables", "non-invertible variable '" + v.name + "' needs weight >= 1");
    VarTableP t = sc.table();
    if (!sc.curvature_text.empty()) {
        Poly w;
        try {
            w = parse_poly(t, sc.curvature_text);
        } catch (const Error& e) {
            invalid("curvature", e.what());
        }
    }
    static const std::map<TaskKind, std::vector<std::string>> allowed = {
        {TaskKind::Derham, {"window"}},
        {TaskKind::Milnor, {}},
        {TaskKind::RGamma, {"window", "mode", "l_max"}},
        {TaskKind::SmoothCheck, {}},
        {TaskKind::Support, {"gens", "ys", "mode", "g", "y", "m_max", "degree_bound", "point"}},
        {TaskKind::Hochschild, {"mode", "window", "caps", "gap", "n_max"}},
        {TaskKind::ChernCheck, {"samples", "max_len", "max_exp", "seed"}},
        {TaskKind::AppendixKoszul, {"gens", "ys"}},
        {TaskKind::VerifyMain, {"gens", "ys", "window", "caps", "gap", "samples", "seed"}},
    };
    for (const auto& task : sc.tasks) {
        const auto& keys = allowed.at(task.kind);
        for (const auto& [k, v] : task.params) {
            bool ok = false;
            for (const auto& a : keys) ok = ok || a == k;
            if (!ok)
                invalid(k, "not a parameter of task '" + task_kind_name(task.kind) + "'");
        }
        bool samples = task.kind == TaskKind::ChernCheck || task.kind == TaskKind::VerifyMain;
        if (samples && !task.has("seed") && !sc.seed)
            invalid("seed", "task '" + task_kind_name(task.kind) + "' samples but no seed is declared");
    }
}

} // namespace

std::string task_kind_name(TaskKind k) {
    for (const auto& [name, kind] : kind_names())
        if (kind == k) return name;
    return "?";
}

long TaskSpec::get_int(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) invalid(key, "missing");
    if (const long* v = std::get_if<long>(&it->second)) return *v;
    invalid(key, "expected an integer");
}

long TaskSpec::get_int_or(const std::string& key, long fallback) const {
    return params.count(key) ? get_int(key) : fallback;
}

std::string TaskSpec::get_str(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) invalid(key, "missing");
    if (const std::string* v = std::get_if<std::string>(&it->second)) return *v;
    invalid(key, "expected a string");
}

std::vector<std::string> TaskSpec::get_str_list(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) invalid(key, "missing");
    if (const auto* v = std::get_if<std::vector<std::string>>(&it->second)) return *v;
    invalid(key, "expected an array of strings");
}

std::pair<long, long> TaskSpec::get_range(const std::string& key) const {
    std::string text = get_str(key);
    size_t dots = text.find("..");
    if (dots == std::string::npos) invalid(key, "'" + text + "' is not a range a..b");
    long lo = 0, hi = 0;
    try {
        size_t used = 0;
        lo = std::stol(text.substr(0, dots), &used);
        if (used != dots) throw std::invalid_argument("");
        std::string rest = text.substr(dots + 2);
        hi = std::stol(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("");
    } catch (const Error&) {
        throw;
    } catch (...) {
        invalid(key, "'" + text + "' is not a range a..b");
    }
    if (lo > hi) invalid(key, "empty range '" + text + "'");
    return {lo, hi};
}

Field Scenario::field() const {
    if (field_text == "Q") return Field::rationals();
    if (field_text.size() >= 2 && field_text[0] == 'F') {
        std::string rest = field_text.substr(1);
        bool func = false;
        if (rest.size() > 3 && rest.substr(rest.size() - 3) == "(s)") {
            func = true;
            rest = rest.substr(0, rest.size() - 3);
        }
        bool digits = !rest.empty();
        for (char ch : rest) digits = digits && std::isdigit(static_cast<unsigned char>(ch));
        if (digits) {
            long p = std::stol(rest);
            return func ? Field::rational_function(p) : Field::prime(p);
        }
    }
    invalid("field", "unknown descriptor '" + field_text + "' (use \"Q\", \"F5\", \"F5(s)\")");
}

VarTableP Scenario::table() const { return make_vartable(field(), variables); }

Poly Scenario::curvature() const {
    VarTableP t = table();
    if (curvature_text.empty()) return Poly::zero(t);
    return parse_poly(t, curvature_text);
}

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    TaskSpec* current = nullptr;
    std::istringstream in(text);
    std::string raw;
    long line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = strip_comment(raw, line);
        Cursor c{s, line};
        c.skip_space();
        if (c.done()) continue;
        if (c.peek() == '[') {
            if (s.substr(c.i) != "[[task]]")
                parse_fail(line, c.col(), "expected [[task]]");
            sc.tasks.push_back(TaskSpec{TaskKind::Milnor, {}, line});
            current = &sc.tasks.back();
            current->params.emplace("kind", std::string());
            continue;
        }
        // key = value
        size_t key_start = c.i;
        while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_'))
            ++c.i;
        std::string key = s.substr(key_start, c.i - key_start);
        if (key.empty()) parse_fail(line, c.col(), "expected a key");
        c.skip_space();
        if (c.done() || c.peek() != '=') parse_fail(line, c.col(), "expected '='");
        ++c.i;
        ParamValue value = read_value(c);
        c.skip_space();
        if (!c.done()) parse_fail(line, c.col(), "trailing text after value");

        if (current) {
            if (key == "kind") {
                if (!current->params.count("kind")) invalid("kind", "duplicate key");
                const std::string* name = std::get_if<std::string>(&value);
                if (!name || !kind_names().count(*name))
                    invalid("kind", name ? "unknown task kind '" + *name + "'"
                                         : "expected a quoted task kind");
                current->kind = kind_names().at(*name);
                current->params.erase("kind");
                continue;
            }
            if (current->params.count("kind"))
                invalid("kind", "task at line " + std::to_string(current->line) +
                                    " must declare its kind first");
            if (current->params.count(key)) invalid(key, "duplicate key");
            current->params.emplace(key, std::move(value));
        } else if (key == "name") {
            const std::string* v = std::get_if<std::string>(&value);
            if (!v) invalid("name", "expected a quoted string");
            sc.name = *v;
        } else if (key == "field") {
            const std::string* v = std::get_if<std::string>(&value);
            if (!v) invalid("field", "expected a quoted string");
            sc.field_text = *v;
        } else if (key == "variables") {
            const auto* v = std::get_if<std::vector<std::string>>(&value);
            if (!v) invalid("variables", "expected an array of \"name:weight\" strings");
            for (const auto& s2 : *v) sc.variables.push_back(parse_varinfo(s2));
        } else if (key == "curvature") {
            const std::string* v = std::get_if<std::string>(&value);
            if (!v) invalid("curvature", "expected a quoted string");
            sc.curvature_text = *v;
        } else if (key == "seed") {
            const long* v = std::get_if<long>(&value);
            if (!v) invalid("seed", "expected an integer");
            sc.seed = *v;
        } else {
            invalid(key, "unknown header key");
        }
    }
    for (auto& t : sc.tasks)
        if (t.params.count("kind"))
            invalid("kind", "task at line " + std::to_string(t.line) + " never declared its kind");
    validate(sc);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("ParseError", "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

} // namespace cdg
