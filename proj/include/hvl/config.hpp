#pragma once

#include "hvl/fh.hpp"
#include "hvl/local.hpp"
#include "hvl/model.hpp"
#include "hvl/solver.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hvl {

/// Parses the flat key-tree format into a map of dotted keys.
///
///     # comment
///     problem.equation = schroedinger
///     [solver]
///     nodes = 1
///     bracket = -1, -0.1
///
/// A "[section]" line prefixes the keys that follow it. Values are numbers,
/// true/false, quoted or bare strings, or comma-separated lists of those.
/// Throws Config on syntax errors and duplicate keys.
nlohmann::ordered_json parse_flat_config(const std::string& text);

/// Nested JSON objects become dotted keys; arrays of objects are indexed
/// ("potential.0.kind"), arrays of scalars stay as values.
nlohmann::ordered_json flatten_json_config(const nlohmann::ordered_json& document);

/// JSON when the first non-blank character is '{', the flat format otherwise.
nlohmann::ordered_json parse_config_text(const std::string& text);

struct CheckSpec {
    std::string tag;
    std::optional<double> tolerance;
};

struct RunConfig {
    /// Validated dotted keys in file order, echoed into reports.
    nlohmann::ordered_json keys;

    RadialProblem problem;
    /// auto | regular | singular | singular_log | standard_only
    std::string bc_kind = "auto";
    double tau = 0.0;
    /// tau chosen so the level has decay constant kappa (K_P form).
    std::optional<double> tau_kappa;
    std::optional<double> P;

    SolverOptions solver;
    int nodes = 0;
    /// bound | massless
    std::string mode = "bound";
    double massless_window = 0.0;

    std::vector<CheckSpec> checks;
    bool checks_given = false;
    std::vector<double> check_q{1.0};
    std::vector<int> check_s{0, 1, 2, 3};

    std::string fh_parameter;
    std::size_t fh_term = 0;
    FhOptions fh;

    std::string scan_parameter;
    std::size_t scan_term = 0;
    double scan_from = 0.0;
    double scan_to = 0.0;
    int scan_steps = 1;
    std::vector<std::string> scan_checks;

    std::string oracle_kind;
    int oracle_n = 1;
    int oracle_nr = 0;
    int oracle_l = 0;
    double oracle_m = 1.0;
    double oracle_alpha = 1.0;
    double oracle_omega = 1.0;
    double oracle_P = 0.2;
    double oracle_kappa = 1.0;
    CoulombSign oracle_sign = CoulombSign::Attractive;

    /// json | csv
    std::string format = "json";
    std::string path;
    int samples = 201;
};

/// Schema check and conversion. Unknown keys, wrong types and out-of-range
/// values throw Config naming the key.
RunConfig build_run_config(const nlohmann::ordered_json& keys);

RunConfig load_run_config(const std::string& path);

/// Identity tags accepted in checks.tags and scan.checks.
const std::vector<std::string>& known_check_tags();

/// Boundary condition for the given problem from the bc block (kind "auto"
/// follows the classification).
BoundaryCondition resolve_boundary_condition(const RunConfig& config, const RadialProblem& problem);

/// fh.parameter / scan.parameter name to a handle ("m", "alpha", "V0", "omega", "l").
ParameterHandle parameter_handle(const std::string& name, std::size_t term, const RadialProblem& problem);

} // namespace hvl
