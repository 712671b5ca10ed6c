#include "esfem/chsystem.hpp"

#include "esfem/errors.hpp"
#include "esfem/geometry.hpp"
#include "esfem/parallel.hpp"

namespace esfem {

namespace {

Vector solve_mass(const CsrMatrix& m, const Vector& rhs)
{
    SpdOptions options;
    options.tolerance = 1e-13;
    return solve_spd(m, rhs, options);
}

}  // namespace

Vector interpolate(const SurfaceMesh& mesh, const AmbientField& field, double t)
{
    Vector v(static_cast<Eigen::Index>(mesh.num_nodes()));
    parallel_for(mesh.num_nodes(), [&](std::size_t i) { v[static_cast<Eigen::Index>(i)] = field.value(mesh.nodes[i], t); });
    return v;
}

Vector ritz_map(const Assembler& assembler, const LevelSetSurface& surface, const AmbientField& field, double t,
                SolveReport* report)
{
    const Vector r = assembler.weak_load([&](std::size_t, const Vec3& x) {
        const Vec3 y = project_to_surface(surface, x, t);
        return WeakIntegrand{field.value(y, t), surface_gradient(field, surface, y, t)};
    });
    const CsrMatrix k = linear_combination(1.0, assembler.mass(), 1.0, assembler.stiffness());
    SpdOptions options;
    options.method = SpdOptions::Method::direct;
    Vector z = solve_spd(k, r, options, report);
    // One refinement step keeps the residual at the 1e-12 level for large meshes.
    z += solve_spd(k, Vector(r - k * z), options);
    if (report) report->residual = r.norm() > 0.0 ? (k * z - r).norm() / r.norm() : 0.0;
    return z;
}

Vector compute_wbar0(const Assembler& assembler, const ProblemSpec& problem, const Vector& u0)
{
    const double eps = problem.epsilon;
    const Vector rhs = eps * (assembler.stiffness() * u0) + assembler.nonlinear_load(u0, problem.g) / eps;
    return solve_mass(assembler.mass(), rhs);
}

Vector compute_theta(const Assembler& assembler, const LevelSetSurface& surface, const ProblemSpec& problem,
                     const Vector& u0)
{
    const auto n = static_cast<Eigen::Index>(assembler.num_nodes());
    if (problem.resolved_theta_mode() == ThetaMode::without_theta) return Vector::Zero(n);
    const Vector w_star = ritz_map(assembler, surface, problem.initial_w_field(), assembler.mesh().time);
    const Vector wbar = compute_wbar0(assembler, problem, u0);
    return assembler.mass() * Vector(w_star - wbar);
}

InitialData initial_state(const Assembler& assembler, const LevelSetSurface& surface, const ProblemSpec& problem)
{
    problem.validate();
    const double t0 = assembler.mesh().time;
    const AmbientField& u_init = problem.initial_field();
    InitialData data;
    data.state.t = t0;
    data.state.u = problem.initial_mode == InitialMode::ritz ? ritz_map(assembler, surface, u_init, t0)
                                                             : interpolate(assembler.mesh(), u_init, t0);
    data.theta = compute_theta(assembler, surface, problem, data.state.u);
    const double eps = problem.epsilon;
    const Vector rhs = eps * (assembler.stiffness() * data.state.u) +
                       assembler.nonlinear_load(data.state.u, problem.g) / eps + data.theta;
    data.state.w = solve_mass(assembler.mass(), rhs);
    return data;
}

RhsVectors rhs_vectors(const Assembler& assembler, const ProblemSpec& problem, const Vector& u, double t)
{
    if (!u.allFinite()) throw BlowUpError("non-finite state entering the right-hand side");
    RhsVectors out;
    const auto n = static_cast<Eigen::Index>(assembler.num_nodes());
    out.f = problem.f.is_zero() ? Vector::Zero(n) : assembler.nonlinear_load(u, problem.f);
    if (problem.source) out.f += assembler.source_load(problem.source, t);
    out.g = problem.g.is_zero() ? Vector::Zero(n) : Vector(assembler.nonlinear_load(u, problem.g) / problem.epsilon);
    return out;
}

}  // namespace esfem
