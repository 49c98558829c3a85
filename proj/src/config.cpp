#include "hvl/config.hpp"

#include "hvl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace hvl {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& key)
{
    static const std::regex re(R"([A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z0-9_]+)*)");
    return std::regex_match(key, re);
}

std::optional<double> parse_number(const std::string& s)
{
    if (s.empty()) {
        return std::nullopt;
    }
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size()) {
        return std::nullopt;
    }
    // strtod also takes hex and nan; the format only allows decimals and +-inf.
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower.find("nan") != std::string::npos || lower.find("0x") != std::string::npos) {
        return std::nullopt;
    }
    return v;
}

// Splits on commas outside double quotes.
std::vector<std::string> split_list(const std::string& value, int line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : value) {
        if (c == '"') {
            quoted = !quoted;
            cur += c;
        } else if (c == ',' && !quoted) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) {
        config_error("line " + std::to_string(line) + ": unterminated string");
    }
    out.push_back(trim(cur));
    return out;
}

ordered_json scalar_value(const std::string& token, int line)
{
    if (token.empty()) {
        config_error("line " + std::to_string(line) + ": empty value");
    }
    if (token.front() == '"') {
        if (token.size() < 2 || token.back() != '"') {
            config_error("line " + std::to_string(line) + ": unterminated string");
        }
        return token.substr(1, token.size() - 2);
    }
    if (token == "true") {
        return true;
    }
    if (token == "false") {
        return false;
    }
    if (auto v = parse_number(token)) {
        return *v;
    }
    return token;
}

// Strips a trailing comment that is not inside quotes.
std::string strip_comment(const std::string& line)
{
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

void flatten_into(const ordered_json& node, const std::string& prefix, ordered_json& out)
{
    auto put = [&](const std::string& key, const ordered_json& value) {
        if (out.contains(key)) {
            config_error("duplicate key '" + key + "'");
        }
        out[key] = value;
    };
    if (node.is_object()) {
        for (auto it = node.begin(); it != node.end(); ++it) {
            flatten_into(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
        return;
    }
    if (prefix.empty()) {
        config_error("JSON config must be an object");
    }
    if (node.is_array() && !node.empty() && node.front().is_object()) {
        for (std::size_t i = 0; i < node.size(); ++i) {
            if (!node[i].is_object()) {
                config_error("'" + prefix + "' mixes objects and scalars");
            }
            flatten_into(node[i], prefix + "." + std::to_string(i), out);
        }
        return;
    }
    if (node.is_array()) {
        for (const auto& v : node) {
            if (v.is_object() || v.is_array()) {
                config_error("'" + prefix + "' must be a list of scalars");
            }
        }
    }
    if (node.is_null()) {
        config_error("'" + prefix + "' is null");
    }
    put(prefix, node);
}

// ---------------------------------------------------------------------------
// Typed access over the flat key map.

enum class Type { Number, Integer, String, Bool, NumberList, IntegerList, StringList, NumberOrInf };

struct KeyRule {
    std::string pattern;
    Type type;
    std::vector<std::string> choices;
};

const std::vector<KeyRule>& schema()
{
    static const std::vector<std::string> equations{"schroedinger", "kg_one_body", "kg_two_body"};
    static const std::vector<KeyRule> rules{
        {"problem.equation", Type::String, equations},
        {"problem.mass", Type::Number, {}},
        {"problem.l", Type::Integer, {}},
        {"potential.#.kind", Type::String, {"coulomb", "power_law", "inverse_square"}},
        {"potential.#.alpha", Type::Number, {}},
        {"potential.#.sign", Type::String, {"attractive", "repulsive"}},
        {"potential.#.V0", Type::Number, {}},
        {"potential.#.n", Type::Number, {}},
        {"potential.#.omega", Type::Number, {}},
        {"bc.kind", Type::String, {"auto", "regular", "singular", "singular_log", "standard_only"}},
        {"bc.tau", Type::NumberOrInf, {}},
        {"bc.kappa", Type::Number, {}},
        {"bc.P", Type::Number, {}},
        {"solver.nodes", Type::Integer, {}},
        {"solver.mode", Type::String, {"bound", "massless"}},
        {"solver.massless_window", Type::Number, {}},
        {"solver.r_min", Type::Number, {}},
        {"solver.switch_radius", Type::Number, {}},
        {"solver.r_max", Type::Number, {}},
        {"solver.r_max_cap", Type::Number, {}},
        {"solver.n_inner", Type::Integer, {}},
        {"solver.n_outer", Type::Integer, {}},
        {"solver.tail_decay", Type::Number, {}},
        {"solver.eig_tol", Type::Number, {}},
        {"solver.max_iterations", Type::Integer, {}},
        {"solver.bracket", Type::NumberList, {}},
        {"checks.tags", Type::StringList, {}},
        {"checks.q", Type::NumberList, {}},
        {"checks.s", Type::IntegerList, {}},
        {"checks.tolerance.*", Type::Number, {}},
        {"fh.parameter", Type::String, {"m", "alpha", "V0", "omega", "l"}},
        {"fh.term", Type::Integer, {}},
        {"fh.rel_step", Type::Number, {}},
        {"fh.richardson_tol", Type::Number, {}},
        {"fh.tolerance", Type::Number, {}},
        {"scan.parameter", Type::String, {"tau", "alpha", "V0", "m"}},
        {"scan.term", Type::Integer, {}},
        {"scan.from", Type::Number, {}},
        {"scan.to", Type::Number, {}},
        {"scan.steps", Type::Integer, {}},
        {"scan.checks", Type::StringList, {}},
        {"oracle.kind", Type::String, {"hydrogen", "oscillator", "inverse_square", "massless_kg"}},
        {"oracle.n", Type::Integer, {}},
        {"oracle.nr", Type::Integer, {}},
        {"oracle.l", Type::Integer, {}},
        {"oracle.m", Type::Number, {}},
        {"oracle.alpha", Type::Number, {}},
        {"oracle.omega", Type::Number, {}},
        {"oracle.P", Type::Number, {}},
        {"oracle.kappa", Type::Number, {}},
        {"oracle.sign", Type::String, {"attractive", "repulsive"}},
        {"output.format", Type::String, {"json", "csv"}},
        {"output.path", Type::String, {}},
        {"output.samples", Type::Integer, {}},
    };
    return rules;
}

bool segment_match(const std::string& pattern, const std::string& key)
{
    std::istringstream ps(pattern), ks(key);
    std::string p, k;
    while (true) {
        const bool hp = static_cast<bool>(std::getline(ps, p, '.'));
        const bool hk = static_cast<bool>(std::getline(ks, k, '.'));
        if (!hp || !hk) {
            return hp == hk;
        }
        if (p == "#") {
            if (k.empty() || !std::all_of(k.begin(), k.end(), [](unsigned char c) { return std::isdigit(c); })) {
                return false;
            }
        } else if (p != "*" && p != k) {
            return false;
        }
    }
}

const KeyRule& rule_for(const std::string& key)
{
    for (const auto& r : schema()) {
        if (segment_match(r.pattern, key)) {
            return r;
        }
    }
    config_error("unknown key '" + key + "'");
}

bool is_integral(const json& v)
{
    if (v.is_number_integer()) {
        return true;
    }
    if (!v.is_number()) {
        return false;
    }
    const double d = v.get<double>();
    return std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e9;
}

json typed_value(const std::string& key, const json& raw, const KeyRule& rule)
{
    auto wrong = [&](const char* expected) -> json {
        config_error("key '" + key + "' expects " + expected + ", got " + raw.dump());
    };
    auto as_list = [&]() { return raw.is_array() ? raw : json::array({raw}); };
    switch (rule.type) {
    case Type::Number:
        if (!raw.is_number() || !std::isfinite(raw.get<double>())) {
            return wrong("a finite number");
        }
        return raw.get<double>();
    case Type::NumberOrInf:
        if (raw.is_number()) {
            return raw.get<double>();
        }
        if (raw.is_string()) {
            const std::string s = raw.get<std::string>();
            if (s == "inf" || s == "+inf") {
                return std::numeric_limits<double>::infinity();
            }
            if (s == "-inf") {
                return -std::numeric_limits<double>::infinity();
            }
        }
        return wrong("a number or inf");
    case Type::Integer:
        if (!is_integral(raw)) {
            return wrong("an integer");
        }
        return static_cast<long long>(raw.get<double>());
    case Type::Bool:
        if (!raw.is_boolean()) {
            return wrong("true or false");
        }
        return raw;
    case Type::String: {
        if (!raw.is_string()) {
            return wrong("a string");
        }
        const std::string s = raw.get<std::string>();
        if (!rule.choices.empty() && std::find(rule.choices.begin(), rule.choices.end(), s) == rule.choices.end()) {
            std::string list;
            for (const auto& c : rule.choices) {
                list += (list.empty() ? "" : "|") + c;
            }
            config_error("key '" + key + "' must be one of " + list + ", got '" + s + "'");
        }
        return s;
    }
    case Type::NumberList: {
        json out = json::array();
        for (const auto& v : as_list()) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) {
                return wrong("a list of finite numbers");
            }
            out.push_back(v.get<double>());
        }
        return out;
    }
    case Type::IntegerList: {
        json out = json::array();
        for (const auto& v : as_list()) {
            if (!is_integral(v)) {
                return wrong("a list of integers");
            }
            out.push_back(static_cast<long long>(v.get<double>()));
        }
        return out;
    }
    case Type::StringList: {
        json out = json::array();
        for (const auto& v : as_list()) {
            if (!v.is_string()) {
                return wrong("a list of strings");
            }
            if (!v.get<std::string>().empty()) {
                out.push_back(v);
            }
        }
        return out;
    }
    }
    return raw;
}

class Keys {
public:
    explicit Keys(std::map<std::string, json> values) : values_(std::move(values)) {}

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    double number(const std::string& key, double fallback) const
    {
        return has(key) ? values_.at(key).get<double>() : fallback;
    }
    int integer(const std::string& key, int fallback) const
    {
        return has(key) ? static_cast<int>(values_.at(key).get<long long>()) : fallback;
    }
    std::string string(const std::string& key, const std::string& fallback) const
    {
        return has(key) ? values_.at(key).get<std::string>() : fallback;
    }
    const json& raw(const std::string& key) const { return values_.at(key); }

    double positive(const std::string& key, double fallback) const
    {
        const double v = number(key, fallback);
        if (!(v > 0.0)) {
            config_error("key '" + key + "' must be > 0");
        }
        return v;
    }
    int non_negative(const std::string& key, int fallback) const
    {
        const int v = integer(key, fallback);
        if (v < 0) {
            config_error("key '" + key + "' must be >= 0");
        }
        return v;
    }

    std::set<std::size_t> potential_indices() const
    {
        std::set<std::size_t> out;
        for (const auto& [k, v] : values_) {
            if (k.rfind("potential.", 0) == 0) {
                out.insert(static_cast<std::size_t>(std::stoul(k.substr(10, k.find('.', 10) - 10))));
            }
        }
        return out;
    }

private:
    std::map<std::string, json> values_;
};

PotentialSpec build_term(const Keys& k, std::size_t i, double m)
{
    const std::string p = "potential." + std::to_string(i) + ".";
    if (!k.has(p + "kind")) {
        config_error("potential term " + std::to_string(i) + " has no kind");
    }
    const std::string kind = k.string(p + "kind", "");
    std::set<std::string> allowed;
    PotentialSpec out;
    if (kind == "coulomb") {
        allowed = {"kind", "alpha", "sign"};
        const double alpha = k.positive(p + "alpha", 1.0);
        out = PotentialSpec::coulomb(alpha, k.string(p + "sign", "attractive") == "attractive"
                                                ? CoulombSign::Attractive
                                                : CoulombSign::Repulsive);
    } else if (kind == "power_law") {
        allowed = {"kind", "V0", "n", "omega"};
        if (k.has(p + "omega")) {
            if (k.has(p + "V0") || (k.has(p + "n") && k.number(p + "n", 2.0) != 2.0)) {
                config_error("'" + p + "omega' fixes V0 = m omega^2 / 2 and n = 2");
            }
            const double omega = k.positive(p + "omega", 1.0);
            out = PotentialSpec::power_law(0.5 * m * omega * omega, 2.0);
        } else {
            if (!k.has(p + "V0") || !k.has(p + "n")) {
                config_error("power_law term " + std::to_string(i) + " needs V0 and n (or omega)");
            }
            out = PotentialSpec::power_law(k.number(p + "V0", 0.0), k.number(p + "n", 0.0));
        }
    } else {
        allowed = {"kind", "V0"};
        out = PotentialSpec::inverse_square(k.positive(p + "V0", 0.0));
    }
    for (const char* field : {"alpha", "sign", "V0", "n", "omega"}) {
        if (k.has(p + field) && !allowed.count(field)) {
            config_error("key '" + p + field + "' does not apply to a " + kind + " term");
        }
    }
    return out;
}

} // namespace

ordered_json parse_flat_config(const std::string& text)
{
    ordered_json out = ordered_json::object();
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) {
            continue;
        }
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (body.front() == '[') {
            if (body.back() != ']') {
                config_error(where + "malformed section header");
            }
            section = trim(body.substr(1, body.size() - 2));
            if (!section.empty() && !valid_key(section)) {
                config_error(where + "malformed section name '" + section + "'");
            }
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            config_error(where + "expected 'key = value'");
        }
        const std::string local = trim(body.substr(0, eq));
        if (!valid_key(local)) {
            config_error(where + "malformed key '" + local + "'");
        }
        const std::string key = section.empty() ? local : section + "." + local;
        if (out.contains(key)) {
            config_error(where + "duplicate key '" + key + "'");
        }
        const std::string value = trim(body.substr(eq + 1));
        const auto parts = split_list(value, lineno);
        if (parts.size() == 1) {
            out[key] = scalar_value(parts.front(), lineno);
        } else {
            ordered_json arr = ordered_json::array();
            for (const auto& p : parts) {
                arr.push_back(scalar_value(p, lineno));
            }
            out[key] = arr;
        }
    }
    return out;
}

ordered_json flatten_json_config(const ordered_json& document)
{
    ordered_json out = ordered_json::object();
    flatten_into(document, "", out);
    return out;
}

ordered_json parse_config_text(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        ordered_json doc;
        try {
            doc = ordered_json::parse(text);
        } catch (const ordered_json::parse_error& e) {
            config_error(std::string("JSON config: ") + e.what());
        }
        return flatten_json_config(doc);
    }
    return parse_flat_config(text);
}

const std::vector<std::string>& known_check_tags()
{
    static const std::vector<std::string> tags{
        "virial",     "hypervirial", "hypervirial_power", "kramers",      "oscillator_recurrence",
        "recurrence", "origin",      "kg_virial",         "kg_massless", "inverse_square_level",
    };
    return tags;
}

RunConfig build_run_config(const ordered_json& keys)
{
    if (!keys.is_object()) {
        config_error("config must be a key map");
    }
    RunConfig c;
    std::map<std::string, json> typed;
    ordered_json echo = ordered_json::object();
    for (auto it = keys.begin(); it != keys.end(); ++it) {
        const KeyRule& rule = rule_for(it.key());
        json v = typed_value(it.key(), json(it.value()), rule);
        echo[it.key()] = v;
        typed.emplace(it.key(), std::move(v));
    }
    c.keys = std::move(echo);
    const Keys k(std::move(typed));

    // problem
    const std::string eq = k.string("problem.equation", "schroedinger");
    const double m = k.positive("problem.mass", 1.0);
    c.problem.equation = eq == "schroedinger" ? EquationKind::schroedinger(m)
                         : eq == "kg_one_body" ? EquationKind::kg_one_body(m)
                                               : EquationKind::kg_two_body(m);
    c.problem.l = k.non_negative("problem.l", 0);
    std::vector<PotentialSpec> terms;
    std::size_t expected = 0;
    for (std::size_t i : k.potential_indices()) {
        if (i != expected++) {
            config_error("potential terms must be numbered 0, 1, 2, ... without gaps");
        }
        terms.push_back(build_term(k, i, m));
    }
    if (terms.empty() && !k.has("oracle.kind")) {
        config_error("no potential terms (potential.0.kind is required)");
    }
    if (terms.size() == 1) {
        c.problem.potential = terms.front();
    } else {
        c.problem.potential = PotentialSpec::sum(std::move(terms));
    }

    // bc
    c.bc_kind = k.string("bc.kind", "auto");
    c.tau = k.number("bc.tau", 0.0);
    if (k.has("bc.kappa")) {
        if (k.has("bc.tau")) {
            config_error("bc.tau and bc.kappa are mutually exclusive");
        }
        c.tau_kappa = k.positive("bc.kappa", 1.0);
    }
    if (k.has("bc.P")) {
        c.P = k.number("bc.P", 0.0);
        if (!(*c.P >= 0.0)) {
            config_error("key 'bc.P' must be >= 0");
        }
    }
    if ((c.bc_kind == "regular" || c.bc_kind == "standard_only") && (k.has("bc.tau") || k.has("bc.kappa"))) {
        config_error("a " + c.bc_kind + " boundary condition takes no tau");
    }

    // solver
    GridSpec& g = c.solver.grid;
    g.r_min = k.positive("solver.r_min", g.r_min);
    g.switch_radius = k.positive("solver.switch_radius", g.switch_radius);
    g.r_max = k.number("solver.r_max", g.r_max);
    g.r_max_cap = k.positive("solver.r_max_cap", g.r_max_cap);
    g.n_inner = k.integer("solver.n_inner", g.n_inner);
    g.n_outer = k.integer("solver.n_outer", g.n_outer);
    g.tail_decay = k.positive("solver.tail_decay", g.tail_decay);
    c.solver.eig_tol = k.positive("solver.eig_tol", c.solver.eig_tol);
    c.solver.max_iterations = k.integer("solver.max_iterations", c.solver.max_iterations);
    if (k.has("solver.bracket")) {
        const json& b = k.raw("solver.bracket");
        if (b.size() != 2 || !(b[0].get<double>() < b[1].get<double>())) {
            config_error("key 'solver.bracket' must be two increasing numbers");
        }
        c.solver.bracket = std::make_pair(b[0].get<double>(), b[1].get<double>());
    }
    try {
        c.solver.validate();
    } catch (const Error& e) {
        config_error(std::string("solver block: ") + e.what());
    }
    c.nodes = k.non_negative("solver.nodes", 0);
    c.mode = k.string("solver.mode", "bound");
    c.massless_window = k.number("solver.massless_window", 0.0);
    if (c.massless_window < 0.0) {
        config_error("key 'solver.massless_window' must be >= 0");
    }
    if (c.mode == "massless" && eq != "kg_two_body") {
        config_error("solver.mode = massless needs problem.equation = kg_two_body");
    }

    // checks
    c.checks_given = k.has("checks.tags");
    std::set<std::string> seen;
    if (c.checks_given) {
        for (const auto& t : k.raw("checks.tags")) {
            const std::string tag = t.get<std::string>();
            const auto& known = known_check_tags();
            if (std::find(known.begin(), known.end(), tag) == known.end()) {
                config_error("unknown check tag '" + tag + "'");
            }
            if (!seen.insert(tag).second) {
                config_error("check tag '" + tag + "' listed twice");
            }
            c.checks.push_back({tag, std::nullopt});
        }
    }
    for (const auto& [key, v] : c.keys.items()) {
        if (key.rfind("checks.tolerance.", 0) == 0) {
            const std::string tag = key.substr(17);
            if (!seen.count(tag)) {
                config_error("key '" + key + "' names a check that is not in checks.tags");
            }
            const double tol = v.get<double>();
            if (!(tol > 0.0)) {
                config_error("key '" + key + "' must be > 0");
            }
            for (auto& cs : c.checks) {
                if (cs.tag == tag) {
                    cs.tolerance = tol;
                }
            }
        }
    }
    if (k.has("checks.q")) {
        c.check_q = k.raw("checks.q").get<std::vector<double>>();
    }
    if (k.has("checks.s")) {
        c.check_s = k.raw("checks.s").get<std::vector<int>>();
    }

    // fh
    c.fh_parameter = k.string("fh.parameter", "");
    c.fh_term = static_cast<std::size_t>(k.non_negative("fh.term", 0));
    c.fh.rel_step = k.number("fh.rel_step", c.fh.rel_step);
    c.fh.richardson_tol = k.number("fh.richardson_tol", c.fh.richardson_tol);
    c.fh.tolerance = k.number("fh.tolerance", c.fh.tolerance);
    c.fh.solver = c.solver;
    try {
        c.fh.validate();
    } catch (const Error& e) {
        config_error(std::string("fh block: ") + e.what());
    }

    // scan
    c.scan_parameter = k.string("scan.parameter", "");
    c.scan_term = static_cast<std::size_t>(k.non_negative("scan.term", 0));
    c.scan_from = k.number("scan.from", 0.0);
    c.scan_to = k.number("scan.to", c.scan_from);
    c.scan_steps = k.integer("scan.steps", 1);
    if (c.scan_steps < 1) {
        config_error("key 'scan.steps' must be >= 1");
    }
    if (k.has("scan.checks")) {
        for (const auto& t : k.raw("scan.checks")) {
            const std::string tag = t.get<std::string>();
            const auto& known = known_check_tags();
            if (std::find(known.begin(), known.end(), tag) == known.end()) {
                config_error("unknown check tag '" + tag + "' in scan.checks");
            }
            c.scan_checks.push_back(tag);
        }
    }

    // oracle
    c.oracle_kind = k.string("oracle.kind", "");
    c.oracle_n = k.integer("oracle.n", 1);
    c.oracle_nr = k.non_negative("oracle.nr", 0);
    c.oracle_l = k.non_negative("oracle.l", 0);
    c.oracle_m = k.positive("oracle.m", 1.0);
    c.oracle_alpha = k.positive("oracle.alpha", 1.0);
    c.oracle_omega = k.positive("oracle.omega", 1.0);
    c.oracle_P = k.number("oracle.P", 0.2);
    c.oracle_kappa = k.positive("oracle.kappa", 1.0);
    c.oracle_sign = k.string("oracle.sign", "attractive") == "attractive" ? CoulombSign::Attractive
                                                                          : CoulombSign::Repulsive;

    // output
    c.format = k.string("output.format", "json");
    c.path = k.string("output.path", "");
    c.samples = k.integer("output.samples", 201);
    if (c.samples < 2) {
        config_error("key 'output.samples' must be >= 2");
    }
    return c;
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        config_error("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return build_run_config(parse_config_text(ss.str()));
}

BoundaryCondition resolve_boundary_condition(const RunConfig& config, const RadialProblem& problem)
{
    const SingularityClass cls = classify_singularity(problem);
    if (config.P && cls.kind != SingularityClass::Kind::Supercritical &&
        std::abs(*config.P - cls.P) > 1e-9 * std::max(1.0, cls.P)) {
        std::ostringstream os;
        os.precision(17);
        os << "bc.P = " << *config.P << " does not match the problem's P = " << cls.P;
        config_error(os.str());
    }
    double tau = config.tau;
    if (config.tau_kappa) {
        if (cls.kind != SingularityClass::Kind::Singular) {
            config_error("bc.kappa needs a singular problem with 0 < P < 1/2");
        }
        tau = kp_matching_tau(cls.P, *config.tau_kappa);
    }
    BoundaryCondition bc;
    if (config.bc_kind == "auto") {
        bc = default_boundary_condition(cls, problem.l, tau);
    } else if (config.bc_kind == "regular") {
        bc = BoundaryCondition::regular(problem.l);
    } else if (config.bc_kind == "singular") {
        bc = BoundaryCondition::singular(cls.P, tau);
    } else if (config.bc_kind == "singular_log") {
        bc = BoundaryCondition::singular_log(tau);
    } else {
        bc = BoundaryCondition::standard_only(cls.P);
    }
    if (config.bc_kind == "auto" && !bc.has_additional() && tau != 0.0 &&
        (bc.kind == BoundaryCondition::Kind::Regular || bc.kind == BoundaryCondition::Kind::StandardOnly)) {
        config_error("bc.tau is set but the problem classifies as " + to_string(cls.kind) +
                     ", which admits a single branch");
    }
    check_compatible(bc, cls, problem.l);
    return bc;
}

ParameterHandle parameter_handle(const std::string& name, std::size_t term, const RadialProblem& problem)
{
    if (name == "m") {
        return ParameterHandle::mass();
    }
    if (name == "l") {
        return ParameterHandle::angular();
    }
    const auto leaves = problem.potential.leaves();
    if (term >= leaves.size()) {
        config_error("parameter term " + std::to_string(term) + " is out of range (" +
                     std::to_string(leaves.size()) + " potential terms)");
    }
    const PotentialSpec& leaf = leaves[term];
    if (name == "alpha") {
        if (leaf.kind != PotentialSpec::Kind::Coulomb) {
            config_error("alpha needs a coulomb term at index " + std::to_string(term));
        }
        return ParameterHandle::coupling(term);
    }
    if (name == "V0") {
        if (leaf.kind == PotentialSpec::Kind::Coulomb) {
            config_error("V0 needs a power_law or inverse_square term at index " + std::to_string(term));
        }
        return ParameterHandle::coupling(term);
    }
    if (name == "omega") {
        if (leaf.kind != PotentialSpec::Kind::PowerLaw || leaf.n != 2.0) {
            config_error("omega needs an n = 2 power_law term at index " + std::to_string(term));
        }
        return ParameterHandle::frequency(term);
    }
    config_error("unknown parameter '" + name + "'");
}

} // namespace hvl
