#include "esfem/mesh.hpp"

#include "esfem/errors.hpp"
#include "esfem/geometry.hpp"
#include "esfem/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

namespace esfem {

namespace {

void icosahedron(std::vector<Vec3>& nodes, std::vector<Triangle>& elements)
{
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    nodes = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
             {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& p : nodes) p.normalize();
    elements = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
                {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
}

void subdivide(std::vector<Vec3>& nodes, std::vector<Triangle>& elements)
{
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int id = static_cast<int>(nodes.size());
        nodes.push_back((nodes[a] + nodes[b]).normalized());
        midpoint.emplace(key, id);
        return id;
    };
    std::vector<Triangle> refined;
    refined.reserve(4 * elements.size());
    for (const auto& e : elements) {
        const int ab = mid(e[0], e[1]);
        const int bc = mid(e[1], e[2]);
        const int ca = mid(e[2], e[0]);
        refined.push_back({e[0], ab, ca});
        refined.push_back({e[1], bc, ab});
        refined.push_back({e[2], ca, bc});
        refined.push_back({ab, bc, ca});
    }
    elements = std::move(refined);
}

}  // namespace

SurfaceMesh icosphere(int level, double radius, const LevelSetSurface& surface, double t0)
{
    if (level < 0 || level > 8) throw ConfigError("icosphere level must be in [0, 8]");
    SurfaceMesh mesh;
    icosahedron(mesh.nodes, mesh.elements);
    for (int l = 0; l < level; ++l) subdivide(mesh.nodes, mesh.elements);
    mesh.time = t0;
    parallel_for(mesh.nodes.size(), [&](std::size_t i) {
        mesh.nodes[i] = project_to_surface(surface, radius * mesh.nodes[i], t0);
    });
    update_velocity(mesh, surface);
    return mesh;
}

void update_velocity(SurfaceMesh& mesh, const LevelSetSurface& surface)
{
    mesh.node_velocity.resize(mesh.nodes.size());
    parallel_for(mesh.nodes.size(), [&](std::size_t i) {
        mesh.node_velocity[i] = velocity(surface, mesh.nodes[i], mesh.time);
    });
}

SurfaceMesh evolve_mesh(const SurfaceMesh& mesh, const LevelSetSurface& surface, double t_target, int substeps)
{
    if (t_target < mesh.time) throw ConfigError("evolve_mesh cannot integrate backwards in time");
    if (substeps < 1) throw ConfigError("evolve_mesh needs at least one substep");
    SurfaceMesh next = mesh;
    next.time = t_target;
    if (t_target == mesh.time || surface.is_static()) {
        if (t_target != mesh.time) update_velocity(next, surface);
        return next;
    }
    const double t0 = mesh.time;
    const double h = (t_target - t0) / substeps;
    parallel_for(mesh.nodes.size(), [&](std::size_t i) {
        Vec3 x = mesh.nodes[i];
        for (int s = 0; s < substeps; ++s) {
            const double t = t0 + s * h;
            const Vec3 k1 = velocity(surface, x, t);
            const Vec3 k2 = velocity(surface, x + 0.5 * h * k1, t + 0.5 * h);
            const Vec3 k3 = velocity(surface, x + 0.5 * h * k2, t + 0.5 * h);
            const Vec3 k4 = velocity(surface, x + h * k3, t + h);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        next.nodes[i] = project_to_surface(surface, x, t_target);
        next.node_velocity[i] = velocity(surface, next.nodes[i], t_target);
    });
    return next;
}

MeshQualityReport mesh_quality(const SurfaceMesh& mesh)
{
    MeshQualityReport r;
    r.min_h = std::numeric_limits<double>::infinity();
    r.min_angle = 180.0;
    r.min_area = std::numeric_limits<double>::infinity();
    for (const auto& e : mesh.elements) {
        for (int k = 0; k < 3; ++k) {
            const Vec3& p = mesh.nodes[e[k]];
            const Vec3 a = mesh.nodes[e[(k + 1) % 3]] - p;
            const Vec3 b = mesh.nodes[e[(k + 2) % 3]] - p;
            const double len = a.norm();
            r.max_h = std::max(r.max_h, len);
            r.min_h = std::min(r.min_h, len);
            const double angle = std::atan2(a.cross(b).norm(), a.dot(b)) * 180.0 / std::numbers::pi;
            r.min_angle = std::min(r.min_angle, angle);
        }
        const Vec3& p0 = mesh.nodes[e[0]];
        r.min_area = std::min(r.min_area, 0.5 * (mesh.nodes[e[1]] - p0).cross(mesh.nodes[e[2]] - p0).norm());
    }
    r.quasi_uniformity = r.max_h / r.min_h;
    return r;
}

bool is_closed_manifold(const SurfaceMesh& mesh)
{
    std::map<std::pair<int, int>, int> directed;
    for (const auto& e : mesh.elements) {
        for (int k = 0; k < 3; ++k) {
            if (++directed[{e[k], e[(k + 1) % 3]}] > 1) return false;
        }
    }
    for (const auto& [edge, count] : directed) {
        if (directed.find({edge.second, edge.first}) == directed.end()) return false;
    }
    return true;
}

double discrete_area(const SurfaceMesh& mesh)
{
    double area = 0.0;
    for (const auto& e : mesh.elements) {
        const Vec3& p0 = mesh.nodes[e[0]];
        area += 0.5 * (mesh.nodes[e[1]] - p0).cross(mesh.nodes[e[2]] - p0).norm();
    }
    return area;
}

double max_level_set_residual(const SurfaceMesh& mesh, const LevelSetSurface& surface)
{
    double r = 0.0;
    for (const auto& p : mesh.nodes) r = std::max(r, std::abs(surface.value(p, mesh.time)));
    return r;
}

}  // namespace esfem
