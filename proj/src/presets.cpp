#include "esfem/presets.hpp"

#include "esfem/closed_form.hpp"
#include "esfem/geometry.hpp"

#include <memory>
#include <numbers>

namespace esfem::presets {

EllipsoidShape manufactured_shape() { return {1.0, 0.25, 2.0 * std::numbers::pi}; }

EllipsoidShape energy_shape() { return {1.0, 0.25, 10.0 * std::numbers::pi}; }

EllipsoidShape theta_shape() { return {5.0, 0.5, 2.0 * std::numbers::pi / 5.0}; }

Scenario product_decay(const EllipsoidShape& shape, double epsilon, double rate, ManufacturedRoute route)
{
    Scenario s;
    s.name = "product_decay";
    s.shape = shape;
    s.surface = surfaces::evolving_ellipsoid(shape);
    s.problem.epsilon = epsilon;
    s.problem.exact_u = AmbientField::from_expression(
        [rate](const auto& x, const auto& t) {
            using std::exp;
            return exp(-rate * t) * x[0] * x[1];
        },
        "product_decay_u");
    if (route == ManufacturedRoute::closed_form) {
        s.problem.exact_w = AmbientField([shape, epsilon, rate](const Vec3& x, double t) {
                                return closed_form::product_decay_w(x, t, shape, epsilon, rate);
                            }).with_gradient([shape, epsilon, rate](const Vec3& x, double t) {
                                  return closed_form::product_decay_w_gradient(x, t, shape, epsilon, rate);
                              });
        s.problem.exact_w->named("product_decay_w");
        s.problem.source = [shape, epsilon, rate](const Vec3& x, double t) {
            return closed_form::product_decay_source(x, t, shape, epsilon, rate);
        };
    } else {
        attach_manufactured_fields(s.problem, s.surface);
    }
    return s;
}

Scenario cosine_mixture(const EllipsoidShape& shape, double epsilon, double amplitude)
{
    Scenario s;
    s.name = "cosine_mixture";
    s.shape = shape;
    s.surface = surfaces::evolving_ellipsoid(shape);
    s.problem.epsilon = epsilon;
    s.problem.initial_u = AmbientField::from_expression(
        [amplitude](const auto& x, const auto&) {
            using std::cos;
            constexpr double k = 2.0 * std::numbers::pi;
            return amplitude * cos(k * x[0]) * cos(k * x[1]) * cos(k * x[2]);
        },
        "cosine_mixture_u0");
    return s;
}

Scenario polynomial_datum(const EllipsoidShape& shape, double epsilon)
{
    Scenario s;
    s.name = "polynomial_datum";
    s.shape = shape;
    s.surface = surfaces::evolving_ellipsoid(shape);
    s.problem.epsilon = epsilon;
    s.problem.initial_u = AmbientField::from_expression(
        [](const auto& x, const auto&) {
            constexpr double c = 225.0 / 56693.0;
            return c * (x[0] + x[0] * x[0] * x[1] * x[1] * x[2]);
        },
        "polynomial_datum_u0");

    // w(., 0) = g(u0) / eps - eps Lap u0, frozen at t = 0.
    auto frozen = std::make_shared<ProblemSpec>(s.problem);
    frozen->exact_u = frozen->initial_u;
    auto geometry = std::make_shared<LevelSetSurface>(s.surface);
    s.problem.initial_w = AmbientField(
                              [frozen, geometry](const Vec3& x, double) {
                                  return chemical_potential(*frozen, *geometry, x, 0.0);
                              },
                              s.surface.fd_step())
                              .named("polynomial_datum_w0");
    return s;
}

}  // namespace esfem::presets
