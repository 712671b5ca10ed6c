#include "support.hpp"

#include "esfem/dual.hpp"
#include "esfem/errors.hpp"
#include "esfem/geometry.hpp"

#include <doctest.h>

#include <random>

using namespace esfem;

namespace {

std::vector<Vec3> random_unit_points(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) pts.push_back(Vec3(g(rng), g(rng), g(rng)).normalized());
    return pts;
}

// Same ellipsoid as surfaces::evolving_ellipsoid, differentiated by dual numbers.
LevelSetSurface ellipsoid_by_ad(const EllipsoidShape& s)
{
    return LevelSetSurface::from_expression(
        [s](const auto& x, const auto& t) {
            using std::sin;
            const auto a = 1.0 + s.amplitude * sin(s.omega * t);
            return x[0] * x[0] / a + x[1] * x[1] + x[2] * x[2] - s.radius * s.radius;
        },
        2.0 * s.radius);
}

}  // namespace

TEST_CASE("sphere normal and mean curvature")
{
    const double r = 2.5;
    const LevelSetSurface s = surfaces::sphere(r);
    for (const Vec3& p : random_unit_points(20, 1)) {
        const Vec3 x = r * p;
        CHECK((normal(s, x, 0.0) - p).norm() < 1e-14);
        CHECK(mean_curvature(s, x, 0.0) == doctest::Approx(2.0 / r).epsilon(1e-12));
        CHECK(normal_velocity(s, x, 0.3) == doctest::Approx(0.0));
    }
}

TEST_CASE("expanding sphere kinematics")
{
    const double rate = 0.7, t = 0.4;
    const LevelSetSurface s = surfaces::expanding_sphere(1.5, rate);
    const double radius = 1.5 * std::exp(rate * t);
    for (const Vec3& p : random_unit_points(10, 2)) {
        const Vec3 x = radius * p;
        CHECK(normal_velocity(s, x, t) == doctest::Approx(rate * radius).epsilon(1e-12));
        CHECK((velocity(s, x, t) - rate * x).norm() < 1e-12);
        CHECK(surface_divergence_of_velocity(s, x, t) == doctest::Approx(2.0 * rate).epsilon(1e-6));
    }
}

TEST_CASE("scale-invariant field has zero material derivative on an expanding sphere")
{
    const LevelSetSurface s = surfaces::expanding_sphere(1.0, 0.5);
    const AmbientField u = AmbientField::from_expression([](const auto& x, const auto&) {
        using std::sqrt;
        return x[0] / sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    });
    const double t = 0.3, radius = std::exp(0.5 * t);
    for (const Vec3& p : random_unit_points(10, 3))
        CHECK(std::abs(material_derivative(u, s, radius * p, t)) < 1e-12);
}

TEST_CASE("ellipsoid closed forms agree with dual-number differentiation")
{
    const EllipsoidShape shape{1.3, 0.25, 2.0 * std::numbers::pi};
    const LevelSetSurface exact = surfaces::evolving_ellipsoid(shape);
    const LevelSetSurface ad = ellipsoid_by_ad(shape);
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> uni(-1.5, 1.5), time(0.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        const Vec3 x(uni(rng), uni(rng), uni(rng));
        const double t = time(rng);
        CHECK(exact.value(x, t) == doctest::Approx(ad.value(x, t)).epsilon(1e-13));
        CHECK((exact.gradient(x, t) - ad.gradient(x, t)).norm() < 1e-12);
        CHECK(exact.time_derivative(x, t) == doctest::Approx(ad.time_derivative(x, t)).epsilon(1e-12));
        CHECK((exact.hessian(x, t) - ad.hessian(x, t)).norm() < 1e-12);
        CHECK((exact.time_gradient(x, t) - ad.time_gradient(x, t)).norm() < 1e-11);
    }
}

TEST_CASE("projection onto the sphere is radial")
{
    const LevelSetSurface s = surfaces::sphere(1.0);
    CHECK((project_to_surface(s, Vec3(2, 0, 0), 0.0) - Vec3(1, 0, 0)).norm() < 1e-12);
    for (const Vec3& p : random_unit_points(10, 7)) CHECK((project_to_surface(s, 1.3 * p, 0.0) - p).norm() < 1e-12);
}

TEST_CASE("projection onto the ellipsoid: residual, idempotence and normal offset")
{
    const EllipsoidShape shape{1.0, 0.25, 2.0 * std::numbers::pi};
    const LevelSetSurface s = surfaces::evolving_ellipsoid(shape);
    const double t = 0.1;
    for (const Vec3& p : random_unit_points(20, 5)) {
        for (double offset : {1e-2, 1e-3}) {
            const Vec3 y0 = project_to_surface(s, p, t);
            const Vec3 x = y0 + offset * normal(s, y0, t);
            const Vec3 y = project_to_surface(s, x, t);
            CHECK(std::abs(s.value(y, t)) <= 1e-12);
            CHECK((project_to_surface(s, y, t) - y).norm() <= 1e-12);
            // gradient-direction Newton: the tangential defect is second order in the offset
            CHECK((y - y0).norm() <= 2.0 * offset * offset);
        }
    }
}

TEST_CASE("surface gradient of x1 x2 at a pole of the unit sphere")
{
    const Vec3 g = surface_gradient(test::product_field(), surfaces::sphere(1.0), Vec3(1, 0, 0), 0.0);
    CHECK((g - Vec3(0, 1, 0)).norm() < 1e-15);
}

TEST_CASE("tangential calculus of x1 x2 on a sphere")
{
    const double r = 1.7;
    const LevelSetSurface s = surfaces::sphere(r);
    const AmbientField hand = test::product_field();
    const AmbientField fd([](const Vec3& x, double) { return x[0] * x[1]; });
    for (const Vec3& p : random_unit_points(15, 6)) {
        const Vec3 x = r * p;
        // P grad(x1 x2) = (x2, x1, 0) - 2 x1 x2 x / r^2
        const Vec3 expected = Vec3(x[1], x[0], 0.0) - 2.0 * x[0] * x[1] * x / (r * r);
        CHECK((surface_gradient(hand, s, x, 0.0) - expected).norm() < 1e-13);
        CHECK((surface_gradient(fd, s, x, 0.0) - expected).norm() < 1e-7);
        // degree-2 spherical harmonic: eigenvalue 6 / r^2
        CHECK(surface_laplacian(hand, s, x, 0.0) == doctest::Approx(-6.0 * x[0] * x[1] / (r * r)).epsilon(1e-11));
        CHECK(surface_laplacian(fd, s, x, 0.0) == doctest::Approx(-6.0 * x[0] * x[1] / (r * r)).epsilon(1e-5));
    }
}

TEST_CASE("dual-number derivatives match hand derivatives")
{
    auto f = [](const auto& x, const auto& t) {
        using std::exp;
        using std::sin;
        return exp(-2.0 * t) * sin(x[0]) * x[1] * x[1] + x[2] / (1.0 + t);
    };
    const Point<double> x{0.3, -0.8, 1.1};
    const double t = 0.6;
    const auto g = ad_gradient<double>(f, x, t);
    CHECK(g[0] == doctest::Approx(std::exp(-2.0 * t) * std::cos(x[0]) * x[1] * x[1]));
    CHECK(g[1] == doctest::Approx(2.0 * std::exp(-2.0 * t) * std::sin(x[0]) * x[1]));
    CHECK(g[2] == doctest::Approx(1.0 / (1.0 + t)));
    CHECK(ad_time_derivative<double>(f, x, t) ==
          doctest::Approx(-2.0 * std::exp(-2.0 * t) * std::sin(x[0]) * x[1] * x[1] - x[2] / ((1 + t) * (1 + t))));
    CHECK(ad_second_derivative<double>(f, x, t, 0, 1) == doctest::Approx(2.0 * std::exp(-2.0 * t) * std::cos(x[0]) * x[1]));
}

TEST_CASE("normal of a singular level set is a geometry error")
{
    const LevelSetSurface s = surfaces::sphere(1.0);
    CHECK_THROWS_AS(normal(s, Vec3::Zero(), 0.0), GeometryError);
}
