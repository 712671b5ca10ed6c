#include "esfem/simulation.hpp"

#include "esfem/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace esfem {

int step_count(double t_end, double tau)
{
    if (!(tau > 0.0)) throw ConfigError("time step must be positive");
    if (!(t_end >= 0.0)) throw ConfigError("final time must be non-negative");
    const double ratio = t_end / tau;
    const double steps = std::round(ratio);
    if (std::abs(ratio - steps) > 1e-8 * std::max(1.0, ratio))
        throw ConfigError("final time must be an integer multiple of the time step");
    return static_cast<int>(steps);
}

namespace {

int node_substeps(const SimulationOptions& o)
{
    if (o.node_step <= 0.0) return 1;
    if (o.node_step > o.tau * (1.0 + 1e-12)) throw ConfigError("node step must not exceed the time step");
    const double ratio = o.tau / o.node_step;
    const double k = std::round(ratio);
    if (std::abs(ratio - k) > 1e-8 * ratio) throw ConfigError("time step must be a multiple of the node step");
    return static_cast<int>(k);
}

void validate(const SimulationOptions& o)
{
    if (o.bdf_order < 1 || o.bdf_order > 5) throw ConfigError("BDF order must be between 1 and 5");
    if (o.mesh_level < 0 || o.mesh_level > 8) throw ConfigError("mesh level must be between 0 and 8");
    if (!(o.solver_tolerance > 0.0)) throw ConfigError("solver tolerance must be positive");
}

Vector solve_w(const Assembler& assembler, const CsrMatrix& mass, const CsrMatrix& stiffness,
               const ProblemSpec& problem, const Vector& u, const Vector& theta)
{
    const double eps = problem.epsilon;
    const Vector rhs = eps * (stiffness * u) + assembler.nonlinear_load(u, problem.g) / eps + theta;
    SpdOptions options;
    options.tolerance = 1e-13;
    return solve_spd(mass, rhs, options);
}

}  // namespace

RunResult simulate(const Scenario& scenario, const SimulationOptions& options, const StepObserver& observer)
{
    validate(options);
    const ProblemSpec& problem = scenario.problem;
    problem.validate();
    const LevelSetSurface& surface = scenario.surface;
    const int n_steps = step_count(options.t_end, options.tau);
    const int substeps = node_substeps(options);
    const auto clock_start = std::chrono::steady_clock::now();

    StartMode start = options.start;
    if (start == StartMode::automatic) start = problem.exact_u ? StartMode::exact : StartMode::cascade;
    if (start == StartMode::exact && !problem.exact_u) throw ConfigError("exact starting values need an exact solution");

    SurfaceMesh mesh = icosphere(options.mesh_level, scenario.shape.radius, surface, 0.0);
    Assembler assembler(mesh);
    CsrMatrix mass = assembler.mass();
    CsrMatrix stiffness = assembler.stiffness();

    RunResult result;
    result.num_nodes = static_cast<int>(mesh.num_nodes());
    result.h = mesh_quality(mesh).max_h;

    const InitialData init = initial_state(assembler, surface, problem);
    result.theta = init.theta;
    result.initial = init.state;
    const bool track_errors = options.track_errors && problem.exact_u && problem.exact_w;

    auto record = [&](int step, const StatePair& state) {
        result.times.push_back(state.t);
        result.mass.push_back(total_mass(mass, state.u));
        if (options.track_energy)
            result.energy.push_back(gl_energy(assembler, state.u, problem.epsilon, options.energy_convention));
        if (track_errors) {
            const ErrorRecord e = error_norms(assembler, surface, state, problem);
            result.errors.push_back(e);
            result.max_errors.l2_u = std::max(result.max_errors.l2_u, e.l2_u);
            result.max_errors.h1_u = std::max(result.max_errors.h1_u, e.h1_u);
            result.max_errors.l2_w = std::max(result.max_errors.l2_w, e.l2_w);
            result.max_errors.h1_w = std::max(result.max_errors.h1_w, e.h1_w);
            result.max_errors.t = state.t;
        }
        if (observer) observer({step, mesh, state});
    };
    record(0, init.state);
    const double mass0 = result.mass.front();
    const double mass_scale = std::max(std::abs(mass0), total_mass(mass, init.state.u.cwiseAbs()));

    std::vector<BdfScheme> schemes;
    for (int s = 1; s <= options.bdf_order; ++s) schemes.push_back(bdf_coefficients(s));
    HistoryRing history(options.bdf_order);
    history.push(0.0, init.state.u, mass * init.state.u);
    BlockSolver solver(options.solver, options.solver_tolerance);

    StatePair state = init.state;
    for (int n = 1; n <= n_steps; ++n) {
        const double t = n * options.tau;
        mesh = evolve_mesh(mesh, surface, t, substeps);
        assembler.bind(mesh);
        mass = assembler.mass();
        stiffness = assembler.stiffness();

        Vector mass_u;
        if (n < options.bdf_order && start == StartMode::exact) {
            // same projection as the initial datum; w from u would carry the discrete
            // Laplacian of an interpolant, which loses L2 accuracy once the mesh deforms
            const bool ritz = problem.initial_mode == InitialMode::ritz;
            auto project = [&](const AmbientField& f) {
                return ritz ? ritz_map(assembler, surface, f, t) : interpolate(mesh, f, t);
            };
            state.t = t;
            state.u = project(*problem.exact_u);
            state.w = problem.exact_w ? project(*problem.exact_w)
                                      : solve_w(assembler, mass, stiffness, problem, state.u, init.theta);
            mass_u = mass * state.u;
        } else {
            const BdfScheme& scheme = schemes[std::min(n, options.bdf_order) - 1];
            StepResult step = bdf_step(assembler, mass, stiffness, scheme, history, problem, init.theta,
                                       options.tau, solver);
            result.step_residuals.push_back(step.solve.max_residual());
            result.max_block_residual = std::max(result.max_block_residual, step.solve.max_residual());
            state = std::move(step.state);
            mass_u = std::move(step.mass_u);
        }
        history.push(t, state.u, std::move(mass_u));
        record(n, state);
        if (mass_scale > 0.0)
            result.mass_drift = std::max(result.mass_drift, std::abs(result.mass.back() - mass0) / mass_scale);
        ++result.steps;
    }
    result.final_state = state;
    result.solver_stats = solver.stats();
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
    return result;
}

}  // namespace esfem
