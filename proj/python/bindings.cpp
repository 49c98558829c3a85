#include "hvl/commands.hpp"
#include "hvl/config.hpp"
#include "hvl/errors.hpp"
#include "hvl/fh.hpp"
#include "hvl/identities.hpp"
#include "hvl/observables.hpp"
#include "hvl/oracles.hpp"
#include "hvl/solver.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hvl;

namespace {

py::dict report_dict(const IdentityReport& r)
{
    py::dict d;
    d["tag"] = r.tag;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["scale"] = r.scale;
    d["residual"] = r.residual;
    d["tolerance"] = r.tolerance;
    d["passed"] = r.pass;
    d["inputs"] = r.inputs;
    py::dict details;
    for (const auto& [k, v] : r.details) {
        details[py::str(k)] = v;
    }
    d["details"] = details;
    return d;
}

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

std::vector<double> grid_points(const Grid& g)
{
    std::vector<double> r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        r[i] = g.r(i);
    }
    return r;
}

EquationKind equation_of(const std::string& name, double m)
{
    if (name == "schroedinger") {
        return EquationKind::schroedinger(m);
    }
    if (name == "kg_one_body") {
        return EquationKind::kg_one_body(m);
    }
    if (name == "kg_two_body") {
        return EquationKind::kg_two_body(m);
    }
    throw Error(ErrorKind::Config, "unknown equation '" + name + "'");
}

ParameterHandle handle_of(const std::string& name, std::size_t term)
{
    if (name == "m") {
        return ParameterHandle::mass();
    }
    if (name == "omega") {
        return ParameterHandle::frequency(term);
    }
    if (name == "l") {
        return ParameterHandle::angular();
    }
    if (name == "alpha" || name == "V0") {
        return ParameterHandle::coupling(term);
    }
    throw Error(ErrorKind::Config, "unknown parameter '" + name + "'");
}

} // namespace

PYBIND11_MODULE(_hvl, m)
{
    m.doc() = "Radial bound states, hypervirial and Feynman-Hellmann checks.";

    // Lives for the interpreter's lifetime; instances carry the error kind in .kind.
    static PyObject* error_type = PyErr_NewException("hvl._hvl.HvlError", PyExc_RuntimeError, nullptr);
    m.attr("HvlError") = py::handle(error_type);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("kind") = py::str(std::string(to_string(e.kind())));
            PyErr_SetObject(error_type, exc.ptr());
        }
    });

    py::enum_<CoulombSign>(m, "CoulombSign")
        .value("attractive", CoulombSign::Attractive)
        .value("repulsive", CoulombSign::Repulsive);

    py::class_<PotentialSpec>(m, "Potential")
        .def_static("coulomb", &PotentialSpec::coulomb, py::arg("alpha"), py::arg("sign") = CoulombSign::Attractive)
        .def_static("power_law", &PotentialSpec::power_law, py::arg("V0"), py::arg("n"))
        .def_static("inverse_square", &PotentialSpec::inverse_square, py::arg("V0"))
        .def_static("sum", &PotentialSpec::sum, py::arg("terms"))
        .def("__call__", &PotentialSpec::value, py::arg("r"))
        .def("derivative", &PotentialSpec::derivative, py::arg("r"))
        .def("__repr__", &PotentialSpec::describe);

    py::class_<RadialProblem>(m, "Problem")
        .def(py::init([](const PotentialSpec& v, int l, double mass, const std::string& equation) {
                 RadialProblem p{equation_of(equation, mass), v, l};
                 p.validate();
                 return p;
             }),
             py::arg("potential"), py::arg("l") = 0, py::arg("m") = 1.0, py::arg("equation") = "schroedinger")
        .def_property_readonly("l", [](const RadialProblem& p) { return p.l; })
        .def_property_readonly("m", [](const RadialProblem& p) { return p.equation.m; })
        .def_property_readonly("equation", [](const RadialProblem& p) { return to_string(p.equation.type); });

    py::class_<BoundaryCondition>(m, "BoundaryCondition")
        .def_static("regular", &BoundaryCondition::regular, py::arg("s"))
        .def_static("singular", &BoundaryCondition::singular, py::arg("P"), py::arg("tau"))
        .def_static("singular_log", &BoundaryCondition::singular_log, py::arg("tau"))
        .def_static("standard_only", &BoundaryCondition::standard_only, py::arg("P"))
        .def_property_readonly("kind", [](const BoundaryCondition& b) { return to_string(b.kind); })
        .def_readonly("P", &BoundaryCondition::P)
        .def_readonly("tau", &BoundaryCondition::tau);

    py::class_<Eigenstate>(m, "Eigenstate")
        .def_readonly("eigenvalue", &Eigenstate::eigenvalue)
        .def_readonly("nodes", &Eigenstate::nodes)
        .def_readonly("l", &Eigenstate::l)
        .def_readonly("norm_check", &Eigenstate::norm_check)
        .def_readonly("provenance", &Eigenstate::provenance)
        .def_property_readonly("classification", [](const Eigenstate& s) { return to_string(s.cls.kind); })
        .def_property_readonly("P", [](const Eigenstate& s) { return s.cls.P; })
        .def_property_readonly("a_st", [](const Eigenstate& s) { return s.origin.a_st; })
        .def_property_readonly("a_add", [](const Eigenstate& s) { return s.origin.a_add; })
        .def_property_readonly("r", [](const Eigenstate& s) { return as_array(grid_points(s.grid)); })
        .def_property_readonly("R", [](const Eigenstate& s) { return as_array(s.R); })
        .def_property_readonly("u", [](const Eigenstate& s) { return as_array(s.u); });

    m.def(
        "classify",
        [](const RadialProblem& p) {
            const SingularityClass c = classify_singularity(p);
            return py::make_tuple(to_string(c.kind), c.P);
        },
        py::arg("problem"), "Classification name and singularity index P.");

    m.def(
        "default_boundary_condition",
        [](const RadialProblem& p, double tau) { return default_boundary_condition(classify_singularity(p), p.l, tau); },
        py::arg("problem"), py::arg("tau") = 0.0);

    m.def(
        "solve",
        [](const RadialProblem& p, const BoundaryCondition& bc, int nodes, std::optional<std::pair<double, double>> bracket,
           double grid_factor) {
            SolverOptions o;
            o.bracket = bracket;
            o.grid.n_inner = static_cast<int>(o.grid.n_inner * grid_factor);
            o.grid.n_outer = static_cast<int>(o.grid.n_outer * grid_factor);
            py::gil_scoped_release release;
            return solve_bound_state(p, bc, nodes, o);
        },
        py::arg("problem"), py::arg("bc"), py::arg("nodes") = 0, py::arg("bracket") = py::none(),
        py::arg("grid_factor") = 1.0);

    m.def(
        "massless_state",
        [](const RadialProblem& p, double tau) {
            const MasslessResult r = solve_kg_masslessness(p, tau);
            return py::make_tuple(r.M, r.state);
        },
        py::arg("problem"), py::arg("tau"), "Two-body Klein-Gordon: (M, state) with M = 0.");

    m.def(
        "expectation", [](const Eigenstate& s, double power) { return expectation(s, PowerLogSeries::monomial(1.0, power)); },
        py::arg("state"), py::arg("power"), "<r^power>.");
    m.def("derivative_at_origin", &derivative_at_origin, py::arg("state"));
    m.def("kp_matching_tau", &kp_matching_tau, py::arg("P"), py::arg("kappa"));

    m.def("hydrogen_state", [](int n, int l, double mass, double alpha) -> Eigenstate { return hydrogen_state(n, l, mass, alpha); },
          py::arg("n"), py::arg("l") = 0, py::arg("m") = 1.0, py::arg("alpha") = 1.0);
    m.def("oscillator_state",
          [](int nr, int l, double mass, double omega) -> Eigenstate { return oscillator_state(nr, l, mass, omega); },
          py::arg("nr"), py::arg("l") = 0, py::arg("m") = 1.0, py::arg("omega") = 1.0);
    m.def("inverse_square_state",
          [](double P, double kappa, double mass, int l) -> Eigenstate { return inverse_square_state(P, kappa, mass, l); },
          py::arg("P"), py::arg("kappa") = 1.0, py::arg("m") = 1.0, py::arg("l") = 0);

    m.def(
        "virial", [](const Eigenstate& s, double tol, bool extra) { return report_dict(virial(s, tol, extra)); },
        py::arg("state"), py::arg("tolerance") = 1e-6, py::arg("include_extra") = true);
    m.def(
        "hypervirial_power", [](const Eigenstate& s, double q, double tol) { return report_dict(hypervirial_power(s, q, tol)); },
        py::arg("state"), py::arg("q"), py::arg("tolerance") = 1e-6);
    m.def(
        "recurrence", [](const Eigenstate& s, double q, double tol) { return report_dict(recurrence_check(s, q, tol)); },
        py::arg("state"), py::arg("q"), py::arg("tolerance") = 1e-5);
    m.def(
        "kg_massless", [](const Eigenstate& s, double tol) { return report_dict(kg_massless(s, tol)); }, py::arg("state"),
        py::arg("tolerance") = 1e-3);

    m.def(
        "fh",
        [](const RadialProblem& p, const BoundaryCondition& bc, int nodes, const std::string& parameter,
           std::size_t term, double tolerance, double rel_step) {
            FhOptions o;
            o.tolerance = tolerance;
            o.rel_step = rel_step;
            const ParameterHandle h = handle_of(parameter, term);
            if (p.equation.type == EquationKind::Type::KleinGordonOneBody) {
                return report_dict(fh_kg_onebody(p, bc, nodes, h, o));
            }
            if (bc.kind == BoundaryCondition::Kind::Singular || bc.kind == BoundaryCondition::Kind::SingularLog) {
                return report_dict(fh_singular_schroedinger(p, bc, nodes, h, o));
            }
            check_fh_refusal(p, bc, h);
            return report_dict(fh_regular(solve_bound_state(p, bc, nodes, o.solver), h, o));
        },
        py::arg("problem"), py::arg("bc"), py::arg("nodes") = 0, py::arg("parameter") = "alpha", py::arg("term") = 0,
        py::arg("tolerance") = 1e-5, py::arg("rel_step") = 1e-4,
        "Feynman-Hellmann check for parameter m, alpha, V0 or omega of potential term `term`.");

    m.def(
        "run",
        [](const std::string& command, const std::string& config_path) {
            CommandOptions o;
            o.command = command;
            o.config_path = config_path;
            const CommandResult r = execute_command(command, load_run_config(config_path), o);
            return py::make_tuple(r.exit_code, r.document);
        },
        py::arg("command"), py::arg("config"), "Runs a CLI command in-process: (exit code, report text).");
}
