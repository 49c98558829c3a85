#include "hvl/commands.hpp"

#include "hvl/errors.hpp"
#include "hvl/identities.hpp"
#include "hvl/observables.hpp"
#include "hvl/oracles.hpp"
#include "hvl/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <thread>

namespace hvl {

using nlohmann::ordered_json;

namespace {

ordered_json document_header(const std::string& command, const RunConfig& config, const CommandOptions& options)
{
    ordered_json doc;
    doc["schema"] = kReportSchema;
    doc["command"] = command;
    ordered_json cfg = config.keys;
    if (options.tolerance) {
        cfg["--tolerance"] = *options.tolerance;
    }
    if (options.disable_extra_term) {
        cfg["--disable-extra-term"] = true;
    }
    doc["config"] = cfg;
    return doc;
}

void require_potential(const RunConfig& config)
{
    if (config.problem.potential.kind == PotentialSpec::Kind::Sum && config.problem.potential.terms.empty()) {
        throw Error(ErrorKind::Config, "config defines no potential terms");
    }
}

Eigenstate obtain_state(const RunConfig& config, const RadialProblem& problem, const BoundaryCondition& bc)
{
    if (config.mode == "massless") {
        return solve_kg_masslessness(problem, bc.tau, config.solver, config.massless_window).state;
    }
    return solve_bound_state(problem, bc, config.nodes, config.solver);
}

double default_tolerance(const std::string& tag)
{
    static const std::map<std::string, double> defaults{
        {"virial", 1e-6},   {"hypervirial", 1e-6}, {"hypervirial_power", 1e-6}, {"kramers", 1e-5},
        {"oscillator_recurrence", 1e-5}, {"recurrence", 1e-5}, {"origin", 1e-4}, {"kg_virial", 1e-3},
        {"kg_massless", 1e-3}, {"inverse_square_level", 1e-3},
    };
    return defaults.at(tag);
}

IdentityReport tagged_recurrence(const Eigenstate& st, double q, double tol, const std::string& want)
{
    IdentityReport rep = recurrence_check(st, q, tol);
    if (rep.tag != want) {
        throw Error(ErrorKind::Precondition, want + " needs a " +
                                                 (want == "kramers" ? "Coulomb" : "n = 2 power-law") +
                                                 " potential, got " + rep.tag);
    }
    return rep;
}

/// Runs one check tag. Tags with parameter lists produce several reports.
std::vector<IdentityReport> run_check(const Eigenstate& st, const std::string& tag, double tol,
                                      const RunConfig& config, bool include_extra)
{
    std::vector<IdentityReport> out;
    if (tag == "virial") {
        out.push_back(virial(st, tol, include_extra));
    } else if (tag == "hypervirial") {
        for (double q : config.check_q) {
            out.push_back(hypervirial_general(st, ProbeFunction::power(q), tol));
        }
    } else if (tag == "hypervirial_power") {
        for (double q : config.check_q) {
            out.push_back(hypervirial_power(st, q, tol));
        }
    } else if (tag == "kramers" || tag == "oscillator_recurrence") {
        for (int s : config.check_s) {
            out.push_back(tagged_recurrence(st, s + 1.0, tol, tag));
        }
    } else if (tag == "recurrence") {
        for (double q : config.check_q) {
            out.push_back(recurrence_check(st, q, tol));
        }
    } else if (tag == "origin") {
        out = origin_relations(st, tol);
    } else if (tag == "kg_virial") {
        out.push_back(kg_virial(st, tol));
    } else if (tag == "kg_massless") {
        out.push_back(kg_massless(st, tol));
    } else if (tag == "inverse_square_level") {
        out.push_back(inverse_square_level(st, tol));
    } else {
        throw Error(ErrorKind::Config, "unknown check tag '" + tag + "'");
    }
    return out;
}

ordered_json check_error_entry(const std::string& tag, const Error& e)
{
    ordered_json j;
    j["tag"] = tag;
    j["error"] = error_to_json(e);
    return j;
}

std::string scalar_comment(const std::string& key, const ordered_json& v)
{
    std::string text = v.is_string() ? v.get<std::string>() : dump_report_json(v, 0);
    if (!text.empty() && text.back() == '\n') {
        text.pop_back();
    }
    return "# " + key + " = " + text + "\n";
}

CommandResult finish(ordered_json doc, const std::string& format, int code, const Table* table,
                     const ordered_json* scalars)
{
    CommandResult r;
    r.exit_code = code;
    r.format = format;
    if (format == "csv" && table) {
        std::string text;
        if (scalars) {
            for (auto it = scalars->begin(); it != scalars->end(); ++it) {
                text += scalar_comment(it.key(), it.value());
            }
        }
        r.document = text + table->to_csv();
    } else {
        r.document = dump_report_json(doc);
    }
    return r;
}

Table identity_table(const std::vector<IdentityReport>& reports)
{
    Table t;
    t.columns = {"tag", "lhs", "rhs", "scale", "residual", "tolerance", "pass"};
    for (const auto& r : reports) {
        t.rows.push_back({r.tag, r.lhs, r.rhs, r.scale, r.residual, r.tolerance, r.pass ? "true" : "false"});
    }
    return t;
}

Table state_table(const Eigenstate& st, int samples)
{
    Table t;
    t.columns = {"r", "R", "u"};
    for (std::size_t i : sample_indices(st.grid.size(), samples)) {
        t.rows.push_back({st.grid.r(i), st.R[i], st.u[i]});
    }
    return t;
}

ordered_json state_scalars(const Eigenstate& st)
{
    ordered_json s;
    s["provenance"] = st.provenance;
    s["classification"] = to_string(st.cls.kind);
    s["bc"] = to_string(st.bc.kind);
    s["tau"] = st.bc.tau;
    s["eigenvalue"] = st.eigenvalue;
    s["nodes"] = st.nodes;
    s["norm_check"] = st.norm_check;
    s["a_st"] = st.origin.a_st;
    s["a_add"] = st.origin.a_add;
    return s;
}

// ---------------------------------------------------------------------------

CommandResult cmd_solve(const RunConfig& config, const CommandOptions& options, ordered_json doc)
{
    require_potential(config);
    const BoundaryCondition bc = resolve_boundary_condition(config, config.problem);
    const Eigenstate st = obtain_state(config, config.problem, bc);
    doc["state"] = state_to_json(st, config.samples);
    const Table t = state_table(st, config.samples);
    const ordered_json scalars = state_scalars(st);
    return finish(doc, options.format.value_or(config.format), kExitPass, &t, &scalars);
}

CommandResult cmd_check(const RunConfig& config, const CommandOptions& options, ordered_json doc)
{
    if (!config.checks_given || config.checks.empty()) {
        throw Error(ErrorKind::Config, "check needs at least one tag in checks.tags");
    }
    require_potential(config);
    const BoundaryCondition bc = resolve_boundary_condition(config, config.problem);
    const Eigenstate st = obtain_state(config, config.problem, bc);

    ordered_json reports = ordered_json::array();
    std::vector<IdentityReport> all;
    bool errored = false;
    bool failed = false;
    for (const auto& spec : config.checks) {
        const double tol = options.tolerance.value_or(spec.tolerance.value_or(default_tolerance(spec.tag)));
        try {
            for (auto& rep : run_check(st, spec.tag, tol, config, !options.disable_extra_term)) {
                failed = failed || !rep.pass;
                reports.push_back(identity_to_json(rep));
                all.push_back(std::move(rep));
            }
        } catch (const Error& e) {
            errored = true;
            reports.push_back(check_error_entry(spec.tag, e));
        }
    }
    ordered_json summary;
    summary["eigenvalue"] = st.eigenvalue;
    summary["nodes"] = st.nodes;
    summary["classification"] = to_string(st.cls.kind);
    summary["all_pass"] = !failed && !errored;
    doc["state"] = summary;
    doc["reports"] = reports;
    const int code = errored ? kExitSolver : failed ? kExitIdentity : kExitPass;
    const Table t = identity_table(all);
    return finish(doc, options.format.value_or(config.format), code, &t, &summary);
}

struct ScanRow {
    double value = 0.0;
    std::string status = "ok";
    std::string message;
    std::string classification;
    double P = NAN;
    double tau = NAN;
    double eigenvalue = NAN;
    int nodes = -1;
    double norm_check = NAN;
    double a_st = NAN;
    double a_add = NAN;
    double b_term = NAN;
    std::vector<double> residuals;
};

ScanRow scan_row(const RunConfig& config, double value, const CommandOptions& options)
{
    ScanRow row;
    row.value = value;
    row.residuals.assign(config.scan_checks.size(), NAN);
    try {
        RadialProblem problem = config.problem;
        RunConfig rc = config;
        if (config.scan_parameter == "tau") {
            rc.tau = value;
        } else {
            problem = with_parameter(problem, parameter_handle(config.scan_parameter, config.scan_term, problem),
                                     value);
        }
        const SingularityClass cls = classify_singularity(problem);
        row.classification = to_string(cls.kind);
        row.P = cls.P;
        const BoundaryCondition bc = resolve_boundary_condition(rc, problem);
        row.tau = bc.tau;
        const Eigenstate st = obtain_state(rc, problem, bc);
        row.eigenvalue = st.eigenvalue;
        row.nodes = st.nodes;
        row.norm_check = st.norm_check;
        row.a_st = st.exact_a_st.value_or(st.origin.a_st);
        row.a_add = st.exact_a_add.value_or(st.origin.a_add);
        if (problem.equation.type != EquationKind::Type::KleinGordonOneBody) {
            row.b_term = virial_boundary_term(st);
        }
        for (std::size_t k = 0; k < config.scan_checks.size(); ++k) {
            const std::string& tag = config.scan_checks[k];
            const double tol = options.tolerance.value_or(default_tolerance(tag));
            double worst = 0.0;
            try {
                for (const auto& rep : run_check(st, tag, tol, config, !options.disable_extra_term)) {
                    worst = std::max(worst, rep.residual);
                }
                row.residuals[k] = worst;
            } catch (const Error&) {
                row.residuals[k] = NAN;
            }
        }
    } catch (const Error& e) {
        row.status = std::string(to_string(e.kind()));
        row.message = e.what();
    }
    return row;
}

CommandResult cmd_scan(const RunConfig& config, const CommandOptions& options, ordered_json doc)
{
    if (config.scan_parameter.empty()) {
        throw Error(ErrorKind::Config, "scan needs scan.parameter");
    }
    if (config.scan_parameter == "tau" && config.tau_kappa) {
        throw Error(ErrorKind::Config, "a tau scan cannot be combined with bc.kappa");
    }
    require_potential(config);
    if (config.scan_parameter != "tau") {
        parameter_handle(config.scan_parameter, config.scan_term, config.problem);
    }
    const int n = config.scan_steps;
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        values[k] = n == 1 ? config.scan_from
                           : config.scan_from + (config.scan_to - config.scan_from) * k / (n - 1.0);
    }
    std::vector<ScanRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            rows[i] = scan_row(config, values[i], options);
        }
    };
    const int threads = std::min<int>(scan_thread_count(), n);
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }

    Table t;
    t.columns = {config.scan_parameter, "status", "classification", "P", "bc_tau", "eigenvalue", "nodes",
                 "norm_check", "a_st", "a_add", "b_term"};
    for (const auto& tag : config.scan_checks) {
        t.columns.push_back("residual_" + tag);
    }
    t.columns.push_back("message");
    int failures = 0;
    for (const auto& r : rows) {
        std::vector<ordered_json> cells{r.value, r.status, r.classification, r.P, r.tau, r.eigenvalue};
        cells.push_back(r.nodes >= 0 ? ordered_json(r.nodes) : ordered_json(nullptr));
        for (double v : {r.norm_check, r.a_st, r.a_add, r.b_term}) {
            cells.push_back(v);
        }
        for (double v : r.residuals) {
            cells.push_back(v);
        }
        cells.push_back(r.message);
        failures += r.status != "ok";
        t.rows.push_back(std::move(cells));
    }
    doc["table"] = t.to_json();
    doc["failed_rows"] = failures;
    return finish(doc, options.format.value_or(config.format), kExitPass, &t, nullptr);
}

CommandResult cmd_fh(const RunConfig& config, const CommandOptions& options, ordered_json doc)
{
    if (config.fh_parameter.empty()) {
        throw Error(ErrorKind::Config, "fh needs fh.parameter");
    }
    require_potential(config);
    if (config.problem.equation.type == EquationKind::Type::KleinGordonTwoBody) {
        throw Error(ErrorKind::Config, "fh is defined for the Schroedinger and one-body Klein-Gordon equations");
    }
    const ParameterHandle handle = parameter_handle(config.fh_parameter, config.fh_term, config.problem);
    const BoundaryCondition bc = resolve_boundary_condition(config, config.problem);
    FhOptions fo = config.fh;
    if (options.tolerance) {
        fo.tolerance = *options.tolerance;
    }
    ordered_json param;
    param["name"] = handle.name(config.problem);
    if (handle.kind != ParameterHandle::Kind::Angular) {
        param["value"] = parameter_value(config.problem, handle);
    } else {
        param["value"] = config.problem.l;
    }
    param["rel_step"] = fo.rel_step;
    param["richardson_tol"] = fo.richardson_tol;
    doc["parameter"] = param;

    IdentityReport rep;
    using BK = BoundaryCondition::Kind;
    if (config.problem.equation.type == EquationKind::Type::KleinGordonOneBody) {
        rep = fh_kg_onebody(config.problem, bc, config.nodes, handle, fo);
    } else if (bc.kind == BK::Regular || bc.kind == BK::StandardOnly) {
        check_fh_refusal(config.problem, bc, handle);
        const Eigenstate st = solve_bound_state(config.problem, bc, config.nodes, fo.solver);
        rep = fh_regular(st, handle, fo);
    } else {
        rep = fh_singular_schroedinger(config.problem, bc, config.nodes, handle, fo);
    }
    doc["report"] = identity_to_json(rep);
    const Table t = identity_table({rep});
    return finish(doc, options.format.value_or(config.format), rep.pass ? kExitPass : kExitIdentity, &t, nullptr);
}

CommandResult cmd_oracle(const RunConfig& config, const CommandOptions& options, ordered_json doc)
{
    const GridSpec& g = config.solver.grid;
    OracleState st;
    if (config.oracle_kind == "hydrogen") {
        st = hydrogen_state(config.oracle_n, config.oracle_l, config.oracle_m, config.oracle_alpha, g);
    } else if (config.oracle_kind == "oscillator") {
        st = oscillator_state(config.oracle_nr, config.oracle_l, config.oracle_m, config.oracle_omega, g);
    } else if (config.oracle_kind == "inverse_square") {
        st = inverse_square_state(config.oracle_P, config.oracle_kappa, config.oracle_m, config.oracle_l, g);
    } else if (config.oracle_kind == "massless_kg") {
        st = massless_kg_state(config.oracle_P, config.oracle_m, config.oracle_l, config.oracle_sign, g);
    } else {
        throw Error(ErrorKind::Config, "oracle needs oracle.kind");
    }
    doc["state"] = state_to_json(st, config.samples);
    const Table t = state_table(st, config.samples);
    const ordered_json scalars = state_scalars(st);
    return finish(doc, options.format.value_or(config.format), kExitPass, &t, &scalars);
}

CommandResult error_result(ordered_json doc, const Error& e, const std::string& format)
{
    doc["error"] = error_to_json(e);
    Table t;
    t.columns = {"error_kind", "message"};
    t.rows.push_back({std::string(to_string(e.kind())), std::string(e.what())});
    return finish(doc, format, exit_code_for(e.kind()), &t, nullptr);
}

} // namespace

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Io:
        return kExitConfig;
    case ErrorKind::Refusal:
        return kExitRefusal;
    default:
        return kExitSolver;
    }
}

int scan_thread_count()
{
    if (const char* env = std::getenv("HVL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) {
            return static_cast<int>(std::min<long>(v, 1024));
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

CommandResult execute_command(const std::string& command, const RunConfig& config, const CommandOptions& options)
{
    const std::string format = options.format.value_or(config.format);
    ordered_json doc = document_header(command, config, options);
    try {
        if (command == "solve") {
            return cmd_solve(config, options, doc);
        }
        if (command == "check") {
            return cmd_check(config, options, doc);
        }
        if (command == "scan") {
            return cmd_scan(config, options, doc);
        }
        if (command == "fh") {
            return cmd_fh(config, options, doc);
        }
        if (command == "oracle") {
            return cmd_oracle(config, options, doc);
        }
        throw Error(ErrorKind::Config, "unknown command '" + command + "'");
    } catch (const Error& e) {
        return error_result(doc, e, format);
    }
}

int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    if (options.format && *options.format != "json" && *options.format != "csv") {
        err << dump_report_json(error_to_json(Error(ErrorKind::Config, "--format must be json or csv")), 0);
        return kExitConfig;
    }
    if (options.tolerance && !(*options.tolerance > 0.0)) {
        err << dump_report_json(error_to_json(Error(ErrorKind::Config, "--tolerance must be > 0")), 0);
        return kExitConfig;
    }
    CommandResult result;
    std::string path = options.out.value_or("");
    try {
        const RunConfig config = load_run_config(options.config_path);
        if (path.empty()) {
            path = config.path;
        }
        result = execute_command(options.command, config, options);
    } catch (const Error& e) {
        ordered_json doc;
        doc["schema"] = kReportSchema;
        doc["command"] = options.command;
        result = error_result(doc, e, options.format.value_or("json"));
    }
    if (result.exit_code == kExitConfig || result.exit_code == kExitSolver || result.exit_code == kExitRefusal) {
        // One-line error object for scripts reading stderr.
        const auto parsed = nlohmann::ordered_json::parse(result.format == "json" ? result.document : "{}");
        if (parsed.contains("error")) {
            err << dump_report_json(parsed["error"], 0);
        } else if (result.format == "csv") {
            err << result.document;
        }
    }
    if (path.empty()) {
        out << result.document;
        return result.exit_code;
    }
    try {
        write_file_atomic(path, result.document);
    } catch (const Error& e) {
        err << dump_report_json(error_to_json(e), 0);
        return kExitConfig;
    }
    return result.exit_code;
}

} // namespace hvl
