#pragma once

#include "esfem/fields.hpp"
#include "esfem/problem.hpp"

#include <string>

namespace esfem {

/// A moving surface together with a problem posed on it.
struct Scenario {
    std::string name;
    EllipsoidShape shape;
    LevelSetSurface surface;
    ProblemSpec problem;
};

/// How the manufactured w and b are evaluated.
enum class ManufacturedRoute { closed_form, generic };

namespace presets {

/// a(t) = 1 + 0.25 sin(2 pi t), unit sphere at t = 0.
EllipsoidShape manufactured_shape();
/// a(t) = 1 + 0.25 sin(10 pi t), period 0.2.
EllipsoidShape energy_shape();
/// a(t) = 1 + 0.5 sin(2 pi t / 5), sphere of radius 5 at t = 0.
EllipsoidShape theta_shape();

/// Exact solution u = exp(-rate t) x1 x2 with g(u) = u^3 - u, f = 0 and the
/// matching source. The closed-form route uses generated evaluators for w and b;
/// the generic route differentiates numerically.
Scenario product_decay(const EllipsoidShape& shape, double epsilon = 0.5, double rate = 6.0,
                       ManufacturedRoute route = ManufacturedRoute::closed_form);

/// u0 = amplitude cos(2 pi x1) cos(2 pi x2) cos(2 pi x3), b = 0, f = 0.
Scenario cosine_mixture(const EllipsoidShape& shape, double epsilon = 0.1, double amplitude = 0.1);

/// u0 = (225 / 56693)(x1 + x1^2 x2^2 x3), b = 0, f = 0; w(., 0) from the second
/// equation so the theta correction can be formed.
Scenario polynomial_datum(const EllipsoidShape& shape, double epsilon = 0.5);

}  // namespace presets

}  // namespace esfem
