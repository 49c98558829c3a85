#include "hvl/commands.hpp"
#include "hvl/config.hpp"
#include "hvl/report.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace hvl;
using nlohmann::ordered_json;
using hvl::test::throws_kind;

namespace fs = std::filesystem;

namespace {

RunConfig config_from(const std::string& text) { return build_run_config(parse_config_text(text)); }

std::string config_path(const std::string& name) { return std::string(HVL_CONFIG_DIR) + "/" + name; }

CommandResult run(const std::string& command, const std::string& file, CommandOptions o = {})
{
    o.command = command;
    o.config_path = config_path(file);
    return execute_command(command, load_run_config(o.config_path), o);
}

ordered_json doc_of(const CommandResult& r) { return ordered_json::parse(r.document); }

std::string read_file(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

#ifdef HVL_BINARY
int shell(const std::string& args)
{
    const std::string cmd = std::string(HVL_BINARY) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

#endif

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("hvl_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("flat config parsing")
{
    const ordered_json k = parse_flat_config("# comment\n"
                                             "problem.equation = schroedinger\n"
                                             "[solver]\n"
                                             "nodes = 1   # trailing\n"
                                             "bracket = -1, -0.1\n"
                                             "[bc]\n"
                                             "tau = inf\n"
                                             "kind = \"singular\"\n");
    CHECK(k["problem.equation"] == "schroedinger");
    CHECK(k["solver.nodes"] == 1);
    CHECK(k["solver.bracket"].size() == 2);
    CHECK(k["solver.bracket"][1].get<double>() == -0.1);
    CHECK(std::isinf(k["bc.tau"].get<double>()));
    CHECK(k["bc.kind"] == "singular");
    auto it = k.begin();
    CHECK(it.key() == "problem.equation");

    CHECK(throws_kind([] { parse_flat_config("a = 1\na = 2\n"); }, ErrorKind::Config));
    CHECK(throws_kind([] { parse_flat_config("just words\n"); }, ErrorKind::Config));
    CHECK(throws_kind([] { parse_flat_config("[unclosed\n"); }, ErrorKind::Config));
}

TEST_CASE("JSON configs flatten to the same keys")
{
    const ordered_json j = parse_config_text(R"({"problem": {"mass": 2}, "potential": [{"kind": "coulomb", "alpha": 0.5}],
                                                 "solver": {"bracket": [-1, -0.1]}})");
    CHECK(j["problem.mass"] == 2);
    CHECK(j["potential.0.kind"] == "coulomb");
    CHECK(j["potential.0.alpha"] == 0.5);
    CHECK(j["solver.bracket"].is_array());
    const RunConfig c = build_run_config(j);
    CHECK(c.problem.equation.m == 2.0);
}

TEST_CASE("schema validation")
{
    CHECK(throws_kind([] { config_from("potential.0.kind = coulomb\nsolver.nodez = 1\n"); }, ErrorKind::Config));
    CHECK(throws_kind([] { config_from("potential.0.kind = yukawa\n"); }, ErrorKind::Config));
    CHECK(throws_kind([] { config_from("potential.0.kind = coulomb\nsolver.nodes = two\n"); }, ErrorKind::Config));
    CHECK(throws_kind([] { config_from("potential.0.kind = coulomb\nchecks.tags = virial, nonsense\n"); },
                      ErrorKind::Config));
    CHECK(throws_kind([] { config_from("problem.equation = schroedinger\n"); }, ErrorKind::Config));
    try {
        config_from("potential.0.kind = coulomb\nsolver.nodez = 1\n");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("solver.nodez") != std::string::npos);
    }
    const RunConfig c = config_from("potential.0.kind = power_law\npotential.0.omega = 2\nproblem.mass = 0.5\n");
    CHECK(c.problem.potential.value(1.0) == doctest::Approx(1.0));
    CHECK(resolve_boundary_condition(c, c.problem).kind == BoundaryCondition::Kind::Regular);
}

TEST_CASE("number formatting")
{
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-0.5) == "-0.5");
    CHECK(format_double(INFINITY) == "inf");
    ordered_json j;
    j["x"] = INFINITY;
    j["y"] = 0.1;
    CHECK(dump_report_json(j, 0) == "{\"x\":\"inf\",\"y\":0.10000000000000001}\n");
    CHECK(sample_indices(10, 4) == std::vector<std::size_t>{0, 3, 6, 9});
}

TEST_CASE("solve and check commands")
{
    const CommandResult s = run("solve", "hydrogen_1s.conf");
    CHECK(s.exit_code == kExitPass);
    const ordered_json d = doc_of(s);
    CHECK(d["schema"] == kReportSchema);
    CHECK(d["command"] == "solve");
    CHECK(std::abs(d["state"]["eigenvalue"].get<double>() + 0.5) < 1e-8);
    CHECK(d["state"]["samples"]["r"].size() == 201);

    for (const char* file : {"hydrogen_1s.conf", "hydrogen_2p.conf", "oscillator.conf", "inverse_square_kp.conf",
                             "massless_kg.conf"}) {
        CAPTURE(file);
        const CommandResult c = run("check", file);
        CHECK(c.exit_code == kExitPass);
        const ordered_json cd = doc_of(c);
        for (const auto& rep : cd["reports"]) {
            CHECK(rep["pass"] == true);
        }
    }
}

TEST_CASE("check failure and solver errors")
{
    CommandOptions o;
    o.disable_extra_term = true;
    const CommandResult c = run("check", "inverse_square_kp.conf", o);
    CHECK(c.exit_code == kExitIdentity);

    const CommandResult sup = run("solve", "kg_supercritical.conf");
    CHECK(sup.exit_code == kExitSolver);
    CHECK(doc_of(sup)["error"]["kind"] == "supercritical");

    const CommandResult ref = run("fh", "fh_refusal_V0.conf");
    CHECK(ref.exit_code == kExitRefusal);
    CHECK(doc_of(ref)["error"]["kind"] == "refusal");
}

TEST_CASE("fh command")
{
    for (const char* file : {"fh_hydrogen_alpha.conf", "fh_singular_mu.conf", "fh_kg_mass.conf"}) {
        CAPTURE(file);
        const CommandResult r = run("fh", file);
        CHECK(r.exit_code == kExitPass);
        CHECK(doc_of(r)["report"]["pass"] == true);
    }
}

TEST_CASE("oracle command")
{
    const CommandResult r = run("oracle", "oracle_kp.json");
    CHECK(r.exit_code == kExitPass);
    CHECK(std::abs(doc_of(r)["state"]["eigenvalue"].get<double>() + 0.5) < 1e-14);
}

TEST_CASE("scan output is deterministic across thread counts")
{
    ::setenv("HVL_THREADS", "1", 1);
    CHECK(scan_thread_count() == 1);
    const CommandResult one = run("scan", "inverse_square_tau_scan.conf");
    ::setenv("HVL_THREADS", "3", 1);
    CHECK(scan_thread_count() == 3);
    const CommandResult three = run("scan", "inverse_square_tau_scan.conf");
    ::unsetenv("HVL_THREADS");
    CHECK(one.exit_code == kExitPass);
    CHECK(one.document == three.document);
    CHECK(one.format == "csv");

    CommandOptions o;
    o.format = "json";
    const ordered_json d = doc_of(run("scan", "kg_two_body_alpha_scan.conf", o));
    const auto& rows = d["table"]["rows"];
    CHECK(rows.size() == 7);
    CHECK(rows[0][2] == "standard_only");
    CHECK(rows[6][1] == "supercritical");
    CHECK(d["failed_rows"].size() == 1);
}

TEST_CASE("tau scan energies decrease on each branch")
{
    CommandOptions o;
    o.format = "json";
    const ordered_json d = doc_of(run("scan", "inverse_square_tau_scan.conf", o));
    std::vector<std::pair<double, double>> neg, pos;
    for (const auto& row : d["table"]["rows"]) {
        const double tau = row[0].get<double>();
        const double E = row[5].get<double>();
        (tau < 0 ? neg : pos).emplace_back(tau, E);
    }
    for (const auto* branch : {&neg, &pos}) {
        for (std::size_t i = 1; i < branch->size(); ++i) {
            CHECK((*branch)[i].second < (*branch)[i - 1].second);
        }
    }
}

TEST_CASE("repeated runs are byte-identical")
{
    CHECK(run("check", "hydrogen_2p.conf").document == run("check", "hydrogen_2p.conf").document);
    CommandOptions o;
    o.format = "csv";
    const CommandResult csv = run("solve", "hydrogen_1s.conf", o);
    CHECK(csv.document.rfind("# ", 0) == 0);
    CHECK(csv.document.find("r,R,u\n") != std::string::npos);
}

#ifdef HVL_BINARY
TEST_CASE("hvl binary exit codes and output files")
{
    TempDir tmp;
    const std::string out = (tmp.path / "report.json").string();
    CHECK(shell("check --config " + config_path("hydrogen_1s.conf") + " --out " + out) == 0);
    const ordered_json d = ordered_json::parse(read_file(out));
    CHECK(d["command"] == "check");
    for (const auto& e : fs::directory_iterator(tmp.path)) {
        CHECK(e.path().filename() == "report.json");
    }

    const fs::path bad = tmp.path / "bad.conf";
    std::ofstream(bad) << "potential.0.kind = coulomb\nsolver.bogus = 1\n";
    CHECK(shell("solve --config " + bad.string()) == 1);
    CHECK(shell("solve --config " + (tmp.path / "missing.conf").string()) == 1);
    CHECK(shell("solve") == 1);
    CHECK(shell("solve --config " + config_path("kg_supercritical.conf")) == 2);
    CHECK(shell("check --disable-extra-term --config " + config_path("inverse_square_kp.conf")) == 3);
    CHECK(shell("fh --config " + config_path("fh_refusal_V0.conf")) == 4);
    CHECK(shell("check --config " + config_path("hydrogen_1s.conf") + " --out /nonexistent/dir/x.json") == 1);
}
#endif
