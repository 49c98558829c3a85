#include "hvl/fh.hpp"

#include "hvl/errors.hpp"
#include "hvl/observables.hpp"

#include <cmath>
#include <sstream>

namespace hvl {

namespace {

using BK = BoundaryCondition::Kind;
using PK = ParameterHandle::Kind;

const PotentialSpec& leaf_at(const std::vector<PotentialSpec>& leaves, std::size_t term)
{
    if (term >= leaves.size()) {
        throw Error(ErrorKind::Precondition, "parameter refers to potential term " + std::to_string(term) +
                                                 " but the potential has " + std::to_string(leaves.size()));
    }
    return leaves[term];
}

const PotentialSpec& oscillator_leaf(const std::vector<PotentialSpec>& leaves, std::size_t term)
{
    const PotentialSpec& leaf = leaf_at(leaves, term);
    if (leaf.kind != PotentialSpec::Kind::PowerLaw || std::abs(leaf.n - 2.0) > 1e-12 || !(leaf.V0 > 0.0)) {
        throw Error(ErrorKind::Precondition, "frequency needs a confining n = 2 power-law term");
    }
    return leaf;
}

bool two_branch_singular(const BoundaryCondition& bc)
{
    return (bc.kind == BK::Singular || bc.kind == BK::SingularLog) && bc.tau != 0.0;
}

BoundaryCondition shifted_bc(const BoundaryCondition& bc, const RadialProblem& shifted)
{
    if (bc.kind == BK::Regular) {
        return bc;
    }
    SingularityClass cls;
    try {
        cls = classify_singularity(shifted);
    } catch (const Error& e) {
        throw Error(ErrorKind::StepTooLarge, std::string("shifted problem does not classify: ") + e.what());
    }
    BoundaryCondition out = bc;
    if (bc.kind == BK::Singular || bc.kind == BK::StandardOnly) {
        out.P = cls.P;
    }
    try {
        check_compatible(out, cls, shifted.l);
    } catch (const Error& e) {
        throw Error(ErrorKind::StepTooLarge, std::string("boundary condition changes kind under the step: ") +
                                                 e.what());
    }
    return out;
}

Eigenstate shifted_solve(const Eigenstate& center, const ParameterHandle& handle, double value,
                         const FhOptions& options)
{
    const RadialProblem p = with_parameter(center.problem, handle, value);
    const BoundaryCondition bc = shifted_bc(center.bc, p);
    SolverOptions so = options.solver;
    so.fixed_grid = center.grid;
    so.bracket.reset();
    Eigenstate st;
    try {
        st = solve_bound_state(p, bc, center.nodes, so);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NodeCount || e.kind() == ErrorKind::NoEigenvalue) {
            throw Error(ErrorKind::StepTooLarge, std::string("shifted solve failed: ") + e.what());
        }
        throw;
    }
    if (st.nodes != center.nodes) {
        throw Error(ErrorKind::StepTooLarge, "node count changes across the finite-difference step");
    }
    return st;
}

std::pair<double, double> coefficients(const Eigenstate& st)
{
    if (st.exact_a_st && st.exact_a_add) {
        return {*st.exact_a_st, *st.exact_a_add};
    }
    return {st.origin.a_st, st.origin.a_add};
}

// du/dr at grid point i from a five-point stencil in x.
double grid_derivative(const Grid& g, const std::vector<double>& u, std::size_t i)
{
    const double dx = (-u[i + 2] + 8.0 * u[i + 1] - 8.0 * u[i - 1] + u[i - 2]) / (12.0 * g.step());
    return dx / g.jacobian(i);
}

double dH_average(const Eigenstate& st, const ParameterHandle& handle)
{
    if (handle.kind == PK::Mass) {
        const double V = expectation(st, st.problem.potential.series());
        return -(st.eigenvalue - V) / st.problem.equation.m;
    }
    return expectation(st, potential_derivative(st.problem, handle));
}

std::string fh_inputs(const Eigenstate& st, const ParameterHandle& handle, const NumericDerivative& nd)
{
    std::ostringstream os;
    os.precision(17);
    os << st.provenance << "; " << to_string(st.problem.equation.type) << " m=" << st.problem.equation.m
       << "; V=" << st.problem.potential.describe() << "; l=" << st.l << "; nodes=" << st.nodes
       << "; bc=" << to_string(st.bc.kind);
    if (st.bc.kind == BK::Singular || st.bc.kind == BK::SingularLog) {
        os << "(P=" << st.bc.P << ",tau=" << st.bc.tau << ")";
    }
    os << "; lambda=" << handle.name(st.problem) << "=" << nd.lambda << "; h=" << nd.h;
    return os.str();
}

void add_numeric_details(IdentityReport& rep, const NumericDerivative& nd)
{
    rep.details.emplace_back("lambda", nd.lambda);
    rep.details.emplace_back("h", nd.h);
    rep.details.emplace_back("d_h", nd.d_h);
    rep.details.emplace_back("d_h2", nd.d_h2);
    rep.details.emplace_back("eigenvalue", nd.center.eigenvalue);
}

} // namespace

void check_fh_refusal(const RadialProblem& problem, const BoundaryCondition& bc, const ParameterHandle& handle)
{
    if (handle.kind == PK::Angular) {
        if (bc.kind != BK::Regular) {
            throw Error(ErrorKind::Refusal,
                        "dE/dl on a singular problem: the origin term diverges, no finite derivative theorem");
        }
        throw Error(ErrorKind::Precondition, "l is discrete and cannot be differentiated");
    }
    if (two_branch_singular(bc) && affects_P(problem, handle)) {
        throw Error(ErrorKind::Refusal, "parameter '" + handle.name(problem) +
                                            "' moves P while both origin branches are present: "
                                            "the origin term diverges");
    }
    // A Schroedinger level on either singular branch has no finite origin term
    // once P moves, so these are refused even for a single-branch state.
    const bool singular_bc = bc.kind == BK::Singular || bc.kind == BK::SingularLog;
    if (problem.equation.type == EquationKind::Type::Schroedinger && singular_bc && affects_P(problem, handle)) {
        throw Error(ErrorKind::Refusal, "parameter '" + handle.name(problem) +
                                            "' moves P on a singular problem: the origin term diverges");
    }
}

std::string ParameterHandle::name(const RadialProblem& problem) const
{
    switch (kind) {
    case PK::Mass:
        return "m";
    case PK::Angular:
        return "l";
    case PK::Frequency:
        return "omega[" + std::to_string(term) + "]";
    case PK::Coupling: {
        const auto leaves = problem.potential.leaves();
        const std::string base =
            term < leaves.size() && leaves[term].kind == PotentialSpec::Kind::Coulomb ? "alpha" : "V0";
        return leaves.size() > 1 ? base + "[" + std::to_string(term) + "]" : base;
    }
    }
    return "?";
}

double parameter_value(const RadialProblem& problem, const ParameterHandle& handle)
{
    switch (handle.kind) {
    case PK::Mass:
        return problem.equation.m;
    case PK::Angular:
        return problem.l;
    case PK::Frequency: {
        const auto leaves = problem.potential.leaves();
        const PotentialSpec& leaf = oscillator_leaf(leaves, handle.term);
        return std::sqrt(2.0 * leaf.V0 / problem.equation.m);
    }
    case PK::Coupling: {
        const auto leaves = problem.potential.leaves();
        const PotentialSpec& leaf = leaf_at(leaves, handle.term);
        return leaf.kind == PotentialSpec::Kind::Coulomb ? leaf.alpha : leaf.V0;
    }
    }
    return 0.0;
}

RadialProblem with_parameter(const RadialProblem& problem, const ParameterHandle& handle, double value)
{
    RadialProblem out = problem;
    if (handle.kind == PK::Mass) {
        out.equation.m = value;
        return out;
    }
    if (handle.kind == PK::Angular) {
        throw Error(ErrorKind::Precondition, "l is discrete and cannot be shifted");
    }
    auto leaves = problem.potential.leaves();
    if (handle.kind == PK::Frequency) {
        oscillator_leaf(leaves, handle.term);
        leaves[handle.term].V0 = 0.5 * problem.equation.m * value * value;
    } else {
        leaf_at(leaves, handle.term);
        PotentialSpec& leaf = leaves[handle.term];
        (leaf.kind == PotentialSpec::Kind::Coulomb ? leaf.alpha : leaf.V0) = value;
    }
    out.potential = leaves.size() == 1 ? leaves.front() : PotentialSpec::sum(std::move(leaves));
    return out;
}

PowerLogSeries potential_derivative(const RadialProblem& problem, const ParameterHandle& handle)
{
    switch (handle.kind) {
    case PK::Mass:
        return {};
    case PK::Angular:
        throw Error(ErrorKind::Precondition, "l is discrete and cannot be differentiated");
    case PK::Frequency: {
        const double omega = parameter_value(problem, handle);
        return PowerLogSeries::monomial(problem.equation.m * omega, 2.0);
    }
    case PK::Coupling: {
        const auto leaves = problem.potential.leaves();
        PotentialSpec unit = leaf_at(leaves, handle.term);
        (unit.kind == PotentialSpec::Kind::Coulomb ? unit.alpha : unit.V0) = 1.0;
        return unit.series();
    }
    }
    return {};
}

bool affects_P(const RadialProblem& problem, const ParameterHandle& handle)
{
    if (handle.kind == PK::Angular) {
        return true;
    }
    const double value = parameter_value(problem, handle);
    const double shifted = value == 0.0 ? 1e-3 : value * (1.0 + 1e-3);
    const SingularityClass a = classify_singularity(problem);
    SingularityClass b;
    try {
        b = classify_singularity(with_parameter(problem, handle, shifted));
    } catch (const Error&) {
        return true;
    }
    return a.kind != b.kind || std::abs(a.c - b.c) > 1e-12 * std::max(1.0, std::abs(a.c));
}

void FhOptions::validate() const
{
    if (!(rel_step > 0.0 && rel_step < 0.1)) {
        throw Error(ErrorKind::Config, "fh step must lie in (0, 0.1)");
    }
    if (!(richardson_tol > 0.0) || !(tolerance > 0.0)) {
        throw Error(ErrorKind::Config, "fh tolerances must be positive");
    }
    solver.validate();
}

NumericDerivative dE_dlambda_numeric(const Eigenstate& center, const ParameterHandle& handle,
                                     const FhOptions& options)
{
    options.validate();
    check_fh_refusal(center.problem, center.bc, handle);
    NumericDerivative nd;
    nd.lambda = parameter_value(center.problem, handle);
    nd.h = nd.lambda == 0.0 ? options.rel_step : options.rel_step * std::abs(nd.lambda);
    nd.center = center;
    const Eigenstate m1 = shifted_solve(center, handle, nd.lambda - nd.h, options);
    const Eigenstate p1 = shifted_solve(center, handle, nd.lambda + nd.h, options);
    nd.minus = shifted_solve(center, handle, nd.lambda - 0.5 * nd.h, options);
    nd.plus = shifted_solve(center, handle, nd.lambda + 0.5 * nd.h, options);
    nd.d_h = (p1.eigenvalue - m1.eigenvalue) / (2.0 * nd.h);
    nd.d_h2 = (nd.plus.eigenvalue - nd.minus.eigenvalue) / nd.h;
    nd.value = (4.0 * nd.d_h2 - nd.d_h) / 3.0;
    const double natural = nd.lambda == 0.0 ? std::abs(center.eigenvalue)
                                            : std::abs(center.eigenvalue / nd.lambda);
    const double scale = std::max(std::abs(nd.d_h2), 1e-3 * natural);
    if (std::abs(nd.d_h - nd.d_h2) > options.richardson_tol * scale) {
        std::ostringstream os;
        os.precision(10);
        os << "central differences disagree: " << nd.d_h << " (h) vs " << nd.d_h2 << " (h/2)";
        throw Error(ErrorKind::StepTooLarge, os.str());
    }
    return nd;
}

NumericDerivative dE_dlambda_numeric(const RadialProblem& problem, const BoundaryCondition& bc, int nodes,
                                     const ParameterHandle& handle, const FhOptions& options)
{
    options.validate();
    check_fh_refusal(problem, bc, handle);
    const Eigenstate center = solve_bound_state(problem, bc, nodes, options.solver);
    return dE_dlambda_numeric(center, handle, options);
}

BoundaryCorrection fh_boundary_correction(const Eigenstate& center, const Eigenstate& minus,
                                          const Eigenstate& plus, double h, const ParameterHandle& handle)
{
    check_fh_refusal(center.problem, center.bc, handle);
    BoundaryCorrection out;
    if (center.bc.kind != BK::Singular && center.bc.kind != BK::SingularLog) {
        return out;
    }
    if (minus.grid.size() != center.grid.size() || plus.grid.size() != center.grid.size()) {
        throw Error(ErrorKind::Precondition, "boundary correction needs states on one grid");
    }
    auto bracket_of = [&](std::pair<double, double> c, std::pair<double, double> lo, std::pair<double, double> hi) {
        const double d_st = (hi.first - lo.first) / h;
        const double d_add = (hi.second - lo.second) / h;
        return c.first * d_add - c.second * d_st;
    };
    out.bracket = bracket_of(coefficients(center), coefficients(minus), coefficients(plus));
    out.bracket_fit = bracket_of({center.origin.a_st, center.origin.a_add}, {minus.origin.a_st, minus.origin.a_add},
                                 {plus.origin.a_st, plus.origin.a_add});
    out.B = center.bc.kind == BK::Singular ? -2.0 * center.cls.P * out.bracket : out.bracket;

    const Grid& g = center.grid;
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 2; i + 2 < g.size(); ++i) {
        const double r = g.r(i);
        if (r < center.origin.r_lo) {
            continue;
        }
        if (r > center.origin.r_hi) {
            break;
        }
        std::vector<double> du(5);
        for (std::size_t k = 0; k < 5; ++k) {
            du[k] = (plus.u[i + k - 2] - minus.u[i + k - 2]) / h;
        }
        const double udot = du[2];
        const double udot1 = (-du[4] + 8.0 * du[3] - 8.0 * du[1] + du[0]) / (12.0 * g.step() * g.jacobian(i));
        sum += center.u[i] * udot1 - udot * grid_derivative(g, center.u, i);
        ++count;
    }
    out.direct = count > 0 ? sum / count : 0.0;
    return out;
}

IdentityReport fh_regular(const Eigenstate& state, const ParameterHandle& handle, const FhOptions& options)
{
    if (state.problem.equation.type != EquationKind::Type::Schroedinger) {
        throw Error(ErrorKind::Precondition, "fh_regular applies to the Schroedinger equation; use fh_kg_onebody");
    }
    if (two_branch_singular(state.bc) && !std::isinf(state.bc.tau)) {
        throw Error(ErrorKind::Precondition, "fh_regular needs a single-branch state; use fh_singular");
    }
    if (handle.kind != ParameterHandle::Kind::Angular) {
        check_fh_refusal(state.problem, state.bc, handle);
    }
    const NumericDerivative nd = dE_dlambda_numeric(state, handle, options);
    const double rhs = dH_average(state, handle);
    IdentityReport rep = make_report("fh_regular", nd.value, rhs, {nd.value, rhs}, options.tolerance,
                                     fh_inputs(state, handle, nd));
    add_numeric_details(rep, nd);
    return rep;
}

IdentityReport fh_singular_schroedinger(const RadialProblem& problem, const BoundaryCondition& bc, int nodes,
                                        const ParameterHandle& handle, const FhOptions& options)
{
    if (problem.equation.type != EquationKind::Type::Schroedinger) {
        throw Error(ErrorKind::Precondition, "fh_singular applies to the Schroedinger equation");
    }
    if (bc.kind != BK::Singular && bc.kind != BK::SingularLog) {
        throw Error(ErrorKind::Precondition, "fh_singular needs a Singular or SingularLog boundary condition");
    }
    const NumericDerivative nd = dE_dlambda_numeric(problem, bc, nodes, handle, options);
    const Eigenstate& st = nd.center;
    const BoundaryCorrection bcorr = fh_boundary_correction(st, nd.minus, nd.plus, nd.h, handle);
    const double m = problem.equation.m;
    const double avg = dH_average(st, handle);
    const double corr = bc.kind == BK::Singular ? st.cls.P / m * bcorr.bracket : bcorr.bracket / (2.0 * m);
    const double rhs = avg + corr;
    IdentityReport rep = make_report("fh_singular", nd.value, rhs, {nd.value, avg, corr}, options.tolerance,
                                     fh_inputs(st, handle, nd));
    add_numeric_details(rep, nd);
    rep.details.emplace_back("average", avg);
    rep.details.emplace_back("bracket", bcorr.bracket);
    rep.details.emplace_back("bracket_fit", bcorr.bracket_fit);
    rep.details.emplace_back("B", bcorr.B);
    rep.details.emplace_back("B_direct", bcorr.direct);
    rep.details.emplace_back("rhs_wronskian", avg + bcorr.direct / (2.0 * m));
    return rep;
}

IdentityReport fh_kg_onebody(const RadialProblem& problem, const BoundaryCondition& bc, int nodes,
                             const ParameterHandle& handle, const FhOptions& options)
{
    if (problem.equation.type != EquationKind::Type::KleinGordonOneBody) {
        throw Error(ErrorKind::Precondition, "fh_kg applies to the one-body Klein-Gordon equation");
    }
    const NumericDerivative nd = dE_dlambda_numeric(problem, bc, nodes, handle, options);
    const Eigenstate& st = nd.center;
    const double E = st.eigenvalue;
    const PowerLogSeries V = problem.potential.series();
    const double denom = E - expectation(st, V);
    if (std::abs(denom) < 1e-10) {
        throw Error(ErrorKind::DegenerateDenominator, "E - <V> vanishes");
    }
    const BoundaryCorrection bcorr = fh_boundary_correction(st, nd.minus, nd.plus, nd.h, handle);
    double rhs = 0.0;
    double top = 0.0;
    if (handle.kind == PK::Mass) {
        const double P = bc.kind == BK::Singular ? st.cls.P : 0.0;
        top = problem.equation.m;
        rhs = top / denom + P * bcorr.bracket;
    } else {
        const PowerLogSeries dV = potential_derivative(problem, handle);
        top = expectation(st, (PowerLogSeries::constant(E) - V) * dV);
        rhs = (top - 0.5 * bcorr.B) / denom;
    }
    IdentityReport rep = make_report("fh_kg", nd.value, rhs, {nd.value, rhs, top / denom}, options.tolerance,
                                     fh_inputs(st, handle, nd));
    add_numeric_details(rep, nd);
    rep.details.emplace_back("denominator", denom);
    rep.details.emplace_back("bracket", bcorr.bracket);
    rep.details.emplace_back("B", bcorr.B);
    rep.details.emplace_back("B_direct", bcorr.direct);
    return rep;
}

} // namespace hvl
