#include "support.hpp"

#include "esfem/chsystem.hpp"
#include "esfem/closed_form.hpp"
#include "esfem/geometry.hpp"
#include "esfem/presets.hpp"

#include <doctest.h>

#include <random>

using namespace esfem;

namespace {

std::vector<std::pair<Vec3, double>> surface_samples(const LevelSetSurface& s, double radius, int n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> time(0.0, 1.0);
    std::vector<std::pair<Vec3, double>> out;
    for (int i = 0; i < n; ++i) {
        const double t = time(rng);
        const Vec3 x = radius * Vec3(g(rng), g(rng), g(rng)).normalized();
        out.emplace_back(project_to_surface(s, x, t), t);
    }
    return out;
}

}  // namespace

TEST_CASE("closed-form and generic manufactured routes agree")
{
    const EllipsoidShape shape = presets::manufactured_shape();
    const Scenario closed = presets::product_decay(shape, 0.5, 6.0, ManufacturedRoute::closed_form);
    const Scenario generic = presets::product_decay(shape, 0.5, 6.0, ManufacturedRoute::generic);
    for (const auto& [x, t] : surface_samples(closed.surface, 1.0, 30, 21)) {
        const double w = closed.problem.exact_w->value(x, t);
        CHECK(w == doctest::Approx(generic.problem.exact_w->value(x, t)).epsilon(1e-6).scale(1.0));
        CHECK(w == doctest::Approx(chemical_potential(closed.problem, closed.surface, x, t)).epsilon(1e-10).scale(1.0));
        CHECK(closed.problem.source(x, t) ==
              doctest::Approx(generic.problem.source(x, t)).epsilon(1e-4).scale(1.0));
        const Vec3 gw = closed.problem.exact_w->gradient(x, t);
        CHECK((gw - closed_form::product_decay_w_gradient(x, t, shape, 0.5, 6.0)).norm() < 1e-14);
    }
}

TEST_CASE("manufactured source satisfies the strong equation on the static sphere")
{
    // On the unit sphere with u = e^{-rt} x1 x2: Lap u = -6 u, w = g(u)/eps + 6 eps u.
    const EllipsoidShape sphere{1.0, 0.0, 0.0};
    const double eps = 0.5, rate = 6.0;
    for (const auto& [x, t] : surface_samples(surfaces::sphere(1.0), 1.0, 10, 22)) {
        const double u = std::exp(-rate * t) * x[0] * x[1];
        const double w = (u * u * u - u) / eps + 6.0 * eps * u;
        CHECK(closed_form::product_decay_w(x, t, sphere, eps, rate) == doctest::Approx(w).epsilon(1e-12));
    }
}

TEST_CASE("preset shapes")
{
    const EllipsoidShape m = presets::manufactured_shape();
    CHECK(m.axis_factor(0.25) == doctest::Approx(1.25));
    const EllipsoidShape e = presets::energy_shape();
    CHECK(e.axis_factor(0.05) == doctest::Approx(1.25));
    CHECK(e.axis_factor(0.2) == doctest::Approx(1.0));
    const EllipsoidShape th = presets::theta_shape();
    CHECK(th.radius == 5.0);
    CHECK(th.axis_factor(1.25) == doctest::Approx(1.5));
}

TEST_CASE("maximum of the polynomial datum on the radius-5 sphere")
{
    // Independent search: dense spherical grid followed by coordinate refinement.
    const double c = 225.0 / 56693.0;
    auto u0 = [c](double th, double ph) {
        const Vec3 x = 5.0 * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
        return c * (x[0] + x[0] * x[0] * x[1] * x[1] * x[2]);
    };
    double best = -1.0, bt = 0.0, bp = 0.0;
    const int n = 400;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j < 2 * n; ++j) {
            const double th = std::numbers::pi * i / n, ph = std::numbers::pi * j / n;
            for (double sign : {1.0, -1.0})
                if (sign * u0(th, ph) > best) best = sign * u0(th, ph), bt = th, bp = ph;
        }
    for (double step = 1e-2; step > 1e-10; step *= 0.5)
        for (bool improved = true; improved;) {
            improved = false;
            for (auto [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
                const double v = std::abs(u0(bt + dt, bp + dp));
                if (v > best) best = v, bt += dt, bp += dp, improved = true;
            }
        }
    CHECK(best == doctest::Approx(0.9000017).epsilon(1e-6));
    CHECK(best < 1.0);

    // the preset evaluates the same datum
    const Scenario sc = presets::polynomial_datum(presets::theta_shape());
    const Vec3 x = 5.0 * Vec3(std::sin(bt) * std::cos(bp), std::sin(bt) * std::sin(bp), std::cos(bt));
    CHECK(std::abs(sc.problem.initial_u->value(x, 0.0)) == doctest::Approx(best).epsilon(1e-14));
}

TEST_CASE("polynomial datum provides w(0) for the theta correction")
{
    const Scenario sc = presets::polynomial_datum(presets::theta_shape());
    CHECK(sc.problem.resolved_theta_mode() == ThetaMode::with_theta);
    const Vec3 x(3.0, 0.0, 4.0);
    ProblemSpec frozen = sc.problem;
    frozen.exact_u = frozen.initial_u;
    CHECK(sc.problem.initial_w_field().value(x, 0.0) ==
          doctest::Approx(chemical_potential(frozen, sc.surface, x, 0.0)).epsilon(1e-14));
}
