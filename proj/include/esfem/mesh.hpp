#pragma once

#include "esfem/fields.hpp"
#include "esfem/types.hpp"

#include <string>
#include <vector>

namespace esfem {

/// Piecewise linear interpolation surface Gamma_h(t). Connectivity is fixed for
/// the lifetime of a simulation; only node positions and velocities change.
struct SurfaceMesh {
    std::vector<Vec3> nodes;
    std::vector<Triangle> elements;
    double time = 0.0;
    /// v(node, time), the nodal values of the discrete velocity V_h.
    std::vector<Vec3> node_velocity;

    std::size_t num_nodes() const { return nodes.size(); }
    std::size_t num_elements() const { return elements.size(); }
    bool has_velocity() const { return node_velocity.size() == nodes.size(); }
};

struct MeshQualityReport {
    double max_h = 0.0;
    double min_h = 0.0;
    double min_angle = 0.0;  // degrees
    double quasi_uniformity = 0.0;  // max_h / min_h
    double min_area = 0.0;
};

/// Icosahedron refined `level` times by edge midpoints; every node is placed on the
/// sphere of the given radius and then projected onto Gamma(t0).
/// Produces 10 * 4^level + 2 nodes with outward counterclockwise triangles.
SurfaceMesh icosphere(int level, double radius, const LevelSetSurface& surface, double t0);

/// Advances every node along x' = v(x, t) with classical RK4 using `substeps`
/// equal steps, projects the result onto Gamma(t_target) and stores v there.
SurfaceMesh evolve_mesh(const SurfaceMesh& mesh, const LevelSetSurface& surface, double t_target, int substeps);

/// Sets node_velocity = v(node, mesh.time).
void update_velocity(SurfaceMesh& mesh, const LevelSetSurface& surface);

MeshQualityReport mesh_quality(const SurfaceMesh& mesh);

/// Every undirected edge is shared by exactly two triangles, with opposite orientation.
bool is_closed_manifold(const SurfaceMesh& mesh);

double discrete_area(const SurfaceMesh& mesh);

/// Largest |d(node, time)| over all nodes.
double max_level_set_residual(const SurfaceMesh& mesh, const LevelSetSurface& surface);

/// Point data written alongside a mesh snapshot.
struct NodalField {
    std::string name;
    const Vector* values = nullptr;
};

/// Legacy ASCII VTK POLYDATA with triangle polygons, a TIME field and scalar point data.
/// Throws IoError when the file cannot be written.
void write_vtk(const std::string& path, const SurfaceMesh& mesh, const std::vector<NodalField>& fields);

}  // namespace esfem
