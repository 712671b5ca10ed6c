#pragma once

#include "esfem/fields.hpp"
#include "esfem/problem.hpp"
#include "esfem/types.hpp"

namespace esfem {

/// Unit normal grad d / |grad d|. Throws GeometryError when |grad d| < 1e-12.
Vec3 normal(const LevelSetSurface& surface, const Vec3& x, double t);

/// V = -d_t d / |grad d|.
double normal_velocity(const LevelSetSurface& surface, const Vec3& x, double t);

/// v = V nu; purely normal.
Vec3 velocity(const LevelSetSurface& surface, const Vec3& x, double t);

/// Sum of principal curvatures, tr(P D^2 d) / |grad d|.
double mean_curvature(const LevelSetSurface& surface, const Vec3& x, double t);

struct ProjectionOptions {
    double tolerance = 1e-12;
    int max_iterations = 20;
};

/// Newton iteration along the gradient direction onto {d(., t) = 0}.
Vec3 project_to_surface(const LevelSetSurface& surface, const Vec3& x, double t, ProjectionOptions options = {});

Vec3 surface_gradient(const AmbientField& field, const LevelSetSurface& surface, const Vec3& x, double t);

/// Laplace-Beltrami operator through the ambient identity
///   Lap_G u = Lap u - nu^T D^2 u nu - H nu . grad u.
double surface_laplacian(const AmbientField& field, const LevelSetSurface& surface, const Vec3& x, double t);

/// d_t u + v . grad u.
double material_derivative(const AmbientField& field, const LevelSetSurface& surface, const Vec3& x, double t);

/// tr((I - nu nu^T) D v).
double surface_divergence_of_velocity(const LevelSetSurface& surface, const Vec3& x, double t);

/// Off-surface extension of the chemical potential of the exact solution,
/// w = g(u) / eps - eps Lap_G u, with the level-set formula evaluated at x.
double chemical_potential(const ProblemSpec& problem, const LevelSetSurface& surface, const Vec3& x, double t);

/// b = (material du) - Lap_G w + u div_G v for the exact pair (u, w).
/// Requires problem.exact_u and a gradient-independent g.
double manufactured_source(const ProblemSpec& problem, const LevelSetSurface& surface, const Vec3& x, double t);

/// Fills problem.exact_w and problem.source from problem.exact_u with the
/// generic finite-difference route, leaving already supplied entries untouched.
void attach_manufactured_fields(ProblemSpec& problem, const LevelSetSurface& surface);

}  // namespace esfem
