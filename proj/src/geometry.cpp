#include "esfem/geometry.hpp"

#include "esfem/errors.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace esfem {

namespace {

constexpr double kDegenerateGradient = 1e-12;

Vec3 checked_gradient(const LevelSetSurface& surface, const Vec3& x, double t, double* norm)
{
    const Vec3 g = surface.gradient(x, t);
    const double n = g.norm();
    if (!(n >= kDegenerateGradient)) {
        std::ostringstream msg;
        msg << "degenerate level set gradient |grad d| = " << n << " at (" << x.transpose() << "), t = " << t;
        throw GeometryError(msg.str());
    }
    *norm = n;
    return g;
}

Mat3 tangential_projector(const Vec3& nu) { return Mat3::Identity() - nu * nu.transpose(); }

/// Lap_G of a field given by its ambient gradient and Hessian at x.
double laplace_beltrami_from_derivatives(const Vec3& grad, const Mat3& hess, const Vec3& nu, double curvature)
{
    return hess.trace() - nu.dot(hess * nu) - curvature * nu.dot(grad);
}

}  // namespace

Vec3 normal(const LevelSetSurface& surface, const Vec3& x, double t)
{
    double n = 0.0;
    const Vec3 g = checked_gradient(surface, x, t, &n);
    return g / n;
}

double normal_velocity(const LevelSetSurface& surface, const Vec3& x, double t)
{
    double n = 0.0;
    checked_gradient(surface, x, t, &n);
    return -surface.time_derivative(x, t) / n;
}

Vec3 velocity(const LevelSetSurface& surface, const Vec3& x, double t)
{
    double n = 0.0;
    const Vec3 g = checked_gradient(surface, x, t, &n);
    return (-surface.time_derivative(x, t) / (n * n)) * g;
}

double mean_curvature(const LevelSetSurface& surface, const Vec3& x, double t)
{
    double n = 0.0;
    const Vec3 g = checked_gradient(surface, x, t, &n);
    const Vec3 nu = g / n;
    const Mat3 h = surface.hessian(x, t);
    return (h.trace() - nu.dot(h * nu)) / n;
}

Vec3 project_to_surface(const LevelSetSurface& surface, const Vec3& x, double t, ProjectionOptions options)
{
    Vec3 y = x;
    double residual = surface.value(y, t);
    for (int it = 0; it < options.max_iterations && std::abs(residual) > options.tolerance; ++it) {
        double n = 0.0;
        const Vec3 g = checked_gradient(surface, y, t, &n);
        y -= (residual / (n * n)) * g;
        residual = surface.value(y, t);
    }
    if (!(std::abs(residual) <= options.tolerance)) {
        std::ostringstream msg;
        msg << "projection onto surface did not converge: |d| = " << std::abs(residual) << " after "
            << options.max_iterations << " iterations from (" << x.transpose() << "), t = " << t;
        throw GeometryError(msg.str());
    }
    return y;
}

Vec3 surface_gradient(const AmbientField& field, const LevelSetSurface& surface, const Vec3& x, double t)
{
    const Vec3 nu = normal(surface, x, t);
    const Vec3 g = field.gradient(x, t);
    return g - g.dot(nu) * nu;
}

double surface_laplacian(const AmbientField& field, const LevelSetSurface& surface, const Vec3& x, double t)
{
    const Vec3 nu = normal(surface, x, t);
    return laplace_beltrami_from_derivatives(field.gradient(x, t), field.hessian(x, t), nu,
                                             mean_curvature(surface, x, t));
}

double material_derivative(const AmbientField& field, const LevelSetSurface& surface, const Vec3& x, double t)
{
    return field.time_derivative(x, t) + velocity(surface, x, t).dot(field.gradient(x, t));
}

double surface_divergence_of_velocity(const LevelSetSurface& surface, const Vec3& x, double t)
{
    double n = 0.0;
    const Vec3 g = checked_gradient(surface, x, t, &n);
    const double n2 = n * n;
    const double dt = surface.time_derivative(x, t);
    const Mat3 h = surface.hessian(x, t);
    const Vec3 dt_grad = surface.time_gradient(x, t);
    // v = -d_t d grad d / |grad d|^2, differentiated column by column.
    const Mat3 dv = -(g * dt_grad.transpose()) / n2 - (dt / n2) * h + (2.0 * dt / (n2 * n2)) * g * (h * g).transpose();
    return (tangential_projector(g / n) * dv).trace();
}

double chemical_potential(const ProblemSpec& problem, const LevelSetSurface& surface, const Vec3& x, double t)
{
    if (!problem.exact_u) throw ConfigError("chemical potential requires an exact solution u");
    const AmbientField& u = *problem.exact_u;
    const double eps = problem.epsilon;
    const double value = u.value(x, t);
    return problem.g(value, surface_gradient(u, surface, x, t)) / eps - eps * surface_laplacian(u, surface, x, t);
}

double manufactured_source(const ProblemSpec& problem, const LevelSetSurface& surface, const Vec3& x, double t)
{
    if (!problem.exact_u) throw ConfigError("manufactured source requires an exact solution u");
    if (problem.g.gradient_dependent || problem.f.gradient_dependent)
        throw ConfigError("manufactured source does not support gradient-dependent nonlinearities");
    const AmbientField& u = *problem.exact_u;

    // Second derivatives of the extension w(x) by central differences.
    const double s = surface.fd_step();
    auto w = [&](const Vec3& y) { return chemical_potential(problem, surface, y, t); };
    const double w0 = w(x);
    Vec3 grad_w;
    Mat3 hess_w;
    for (int i = 0; i < 3; ++i) {
        Vec3 ei = Vec3::Zero();
        ei[i] = s;
        const double wp = w(x + ei);
        const double wm = w(x - ei);
        grad_w[i] = (wp - wm) / (2.0 * s);
        hess_w(i, i) = (wp - 2.0 * w0 + wm) / (s * s);
        for (int j = i + 1; j < 3; ++j) {
            Vec3 ej = Vec3::Zero();
            ej[j] = s;
            hess_w(i, j) = (w(x + ei + ej) - w(x + ei - ej) - w(x - ei + ej) + w(x - ei - ej)) / (4.0 * s * s);
            hess_w(j, i) = hess_w(i, j);
        }
    }
    const Vec3 nu = normal(surface, x, t);
    const double lap_w = laplace_beltrami_from_derivatives(grad_w, hess_w, nu, mean_curvature(surface, x, t));
    const double value = u.value(x, t);
    const double f = problem.f(value, surface_gradient(u, surface, x, t));
    // The f(u) term is carried by the discrete load, so b only closes the remainder.
    return material_derivative(u, surface, x, t) - lap_w + value * surface_divergence_of_velocity(surface, x, t) - f;
}

void attach_manufactured_fields(ProblemSpec& problem, const LevelSetSurface& surface)
{
    if (!problem.exact_u) throw ConfigError("manufactured fields require an exact solution u");
    // Copies keep the closures valid independently of the caller's objects.
    auto snapshot = std::make_shared<ProblemSpec>(problem);
    snapshot->source = nullptr;
    snapshot->exact_w.reset();
    auto geometry = std::make_shared<LevelSetSurface>(surface);
    if (!problem.exact_w) {
        problem.exact_w = AmbientField(
                              [snapshot, geometry](const Vec3& x, double t) {
                                  return chemical_potential(*snapshot, *geometry, x, t);
                              },
                              surface.fd_step())
                              .named("manufactured_w");
    }
    if (!problem.source) {
        problem.source = [snapshot, geometry](const Vec3& x, double t) {
            return manufactured_source(*snapshot, *geometry, x, t);
        };
    }
}

}  // namespace esfem
