#include "support.hpp"

#include "esfem/errors.hpp"
#include "esfem/geometry.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

using namespace esfem;

TEST_CASE("icosphere node and element counts with Euler characteristic 2")
{
    for (int level = 0; level <= 4; ++level) {
        const SurfaceMesh m = test::unit_sphere_mesh(level);
        const std::size_t p = std::size_t(1) << (2 * level);
        CHECK(m.num_nodes() == 10 * p + 2);
        CHECK(m.num_elements() == 20 * p);
        std::set<std::pair<int, int>> edges;
        for (const auto& e : m.elements)
            for (int k = 0; k < 3; ++k) edges.insert(std::minmax(e[k], e[(k + 1) % 3]));
        CHECK(static_cast<long>(m.num_nodes()) - static_cast<long>(edges.size()) + static_cast<long>(m.num_elements()) == 2);
        CHECK(is_closed_manifold(m));
    }
}

TEST_CASE("icosphere triangles are oriented outward and nodes lie on the surface")
{
    const SurfaceMesh m = test::unit_sphere_mesh(3);
    double volume = 0.0;
    for (const auto& e : m.elements) {
        const Vec3& a = m.nodes[e[0]];
        const Vec3& b = m.nodes[e[1]];
        const Vec3& c = m.nodes[e[2]];
        const Vec3 n = (b - a).cross(c - a);
        CHECK(n.dot(a + b + c) > 0.0);
        volume += a.dot(b.cross(c)) / 6.0;
    }
    CHECK(volume == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(0.01));
    CHECK(max_level_set_residual(m, surfaces::sphere(1.0)) < 1e-14);
}

TEST_CASE("area deficit of the inscribed icosphere decreases like h^2")
{
    std::vector<double> deficit, h;
    for (int level = 2; level <= 5; ++level) {
        const SurfaceMesh m = test::unit_sphere_mesh(level);
        deficit.push_back(4.0 * std::numbers::pi - discrete_area(m));
        h.push_back(mesh_quality(m).max_h);
        CHECK(deficit.back() > 0.0);
    }
    for (std::size_t i = 1; i < h.size(); ++i)
        CHECK(test::slope(deficit[i - 1], deficit[i], h[i - 1], h[i]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("mesh quality stays bounded under refinement")
{
    for (int level = 1; level <= 5; ++level) {
        const MeshQualityReport q = mesh_quality(test::unit_sphere_mesh(level));
        CHECK(q.min_angle > 50.0);
        CHECK(q.quasi_uniformity < 1.3);
        CHECK(q.min_h <= q.max_h);
    }
}

TEST_CASE("node evolution follows the exact trajectories of an expanding sphere")
{
    const double rate = 0.8;
    const LevelSetSurface s = surfaces::expanding_sphere(1.0, rate);
    const SurfaceMesh m0 = icosphere(2, 1.0, s, 0.0);
    SurfaceMesh m = m0;
    for (int n = 1; n <= 10; ++n) m = evolve_mesh(m, s, 0.05 * n, 2);
    CHECK(m.time == doctest::Approx(0.5));
    REQUIRE(m.has_velocity());
    const double scale = std::exp(rate * 0.5);
    for (std::size_t i = 0; i < m.num_nodes(); ++i) {
        CHECK((m.nodes[i] - scale * m0.nodes[i]).norm() < 1e-12);
        CHECK((m.node_velocity[i] - rate * m.nodes[i]).norm() < 1e-12);
    }
}

TEST_CASE("node evolution on the ellipsoid converges with fourth order and stays on the surface")
{
    const EllipsoidShape shape{1.0, 0.25, 2.0 * std::numbers::pi};
    const LevelSetSurface s = surfaces::evolving_ellipsoid(shape);
    const SurfaceMesh m0 = icosphere(1, 1.0, s, 0.0);
    auto run = [&](int substeps) {
        SurfaceMesh m = m0;
        for (int n = 1; n <= 4; ++n) m = evolve_mesh(m, s, 0.1 * n, substeps);
        return m;
    };
    const SurfaceMesh ref = run(64), a = run(2), b = run(4);
    double ea = 0.0, eb = 0.0;
    for (std::size_t i = 0; i < m0.num_nodes(); ++i) {
        ea = std::max(ea, (a.nodes[i] - ref.nodes[i]).norm());
        eb = std::max(eb, (b.nodes[i] - ref.nodes[i]).norm());
    }
    CHECK(std::log2(ea / eb) > 3.5);
    CHECK(max_level_set_residual(b, s) < 1e-12);
}

TEST_CASE("VTK snapshot layout")
{
    const SurfaceMesh m = test::unit_sphere_mesh(1);
    const Vector u = Vector::LinSpaced(static_cast<Eigen::Index>(m.num_nodes()), 0.0, 1.0);
    const auto path = std::filesystem::temp_directory_path() / "esfem_test_snapshot.vtk";
    write_vtk(path.string(), m, {{"u", &u}});
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    CHECK(text.rfind("# vtk DataFile Version 3.0", 0) == 0);
    CHECK(text.find("POINTS 42 double") != std::string::npos);
    CHECK(text.find("POLYGONS 80 320") != std::string::npos);
    CHECK(text.find("SCALARS u double 1") != std::string::npos);
    CHECK(text.find("TIME 1 1 double") != std::string::npos);
    std::filesystem::remove(path);

    const Vector wrong(3);
    CHECK_THROWS_AS(write_vtk(path.string(), m, {{"w", &wrong}}), IoError);
    CHECK_THROWS_AS(write_vtk("/nonexistent-dir/x.vtk", m, {}), IoError);
}
