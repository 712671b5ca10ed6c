#pragma once

#include "esfem/fields.hpp"
#include "esfem/mesh.hpp"
#include "esfem/problem.hpp"
#include "esfem/sparse.hpp"
#include "esfem/types.hpp"

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace esfem {

/// Triangle rule in barycentric coordinates; weights refer to the reference
/// triangle and sum to 1/2.
struct QuadratureRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }

    /// Symmetric 6-point rule, exact for polynomials of degree 4.
    static const QuadratureRule& degree4();
};

/// Flat P1 element of the discrete surface.
struct ElementGeometry {
    std::array<Vec3, 3> vertices;
    /// Constant tangential gradients of the three hat functions.
    std::array<Vec3, 3> grad;
    Vec3 unit_normal;
    double area = 0.0;
    /// Element-wise divergence of the interpolated velocity; zero without velocities.
    double velocity_divergence = 0.0;

    /// Physical point at barycentric coordinates.
    Vec3 point(const std::array<double, 3>& bary) const
    {
        return bary[0] * vertices[0] + bary[1] * vertices[1] + bary[2] * vertices[2];
    }
};

/// Throws GeometryError for a degenerate triangle.
ElementGeometry element_geometry(const SurfaceMesh& mesh, std::size_t element);

/// Integrand of a weak load: value paired with phi_k plus flux paired with grad phi_k.
struct WeakIntegrand {
    double value = 0.0;
    Vec3 flux = Vec3::Zero();
};

/// Assembles matrices and loads on snapshots of one mesh connectivity. The CSR
/// pattern and element-to-slot scatter map are built once; element work runs
/// through parallel_for and is scattered serially in element order, so results
/// are identical for every thread count.
class Assembler {
public:
    explicit Assembler(const SurfaceMesh& mesh);

    /// Rebinds to a new snapshot with the same connectivity.
    void bind(const SurfaceMesh& mesh);

    const SurfaceMesh& mesh() const { return *mesh_; }
    const std::vector<ElementGeometry>& elements() const { return geometry_; }
    const std::shared_ptr<const SparsityPattern>& pattern() const { return pattern_; }
    const QuadratureRule& rule() const { return QuadratureRule::degree4(); }
    std::size_t num_nodes() const { return mesh_->num_nodes(); }

    CsrMatrix mass() const;
    CsrMatrix stiffness() const;
    /// Time derivative of the mass matrix; requires node velocities.
    CsrMatrix mdot() const;

    /// k-th entry: integral of psi(u_h, grad u_h) phi_k. Throws BlowUpError on non-finite values.
    Vector nonlinear_load(const Vector& u, const Nonlinearity& psi) const;
    /// k-th entry: integral of b(x, t) phi_k with b evaluated on the discrete surface.
    Vector source_load(const ScalarFn& b, double t) const;
    /// Generic weak load; the integrand receives the element index and the quadrature point.
    Vector weak_load(const std::function<WeakIntegrand(std::size_t, const Vec3&)>& integrand) const;

private:
    CsrMatrix scatter(const std::vector<std::array<double, 9>>& local) const;
    Vector scatter(const std::vector<std::array<double, 3>>& local) const;

    const SurfaceMesh* mesh_ = nullptr;
    std::vector<Triangle> connectivity_;
    std::shared_ptr<const SparsityPattern> pattern_;
    std::vector<std::array<int, 9>> slots_;
    std::vector<ElementGeometry> geometry_;
};

CsrMatrix assemble_mass(const SurfaceMesh& mesh);
CsrMatrix assemble_stiffness(const SurfaceMesh& mesh);
CsrMatrix assemble_mdot(const SurfaceMesh& mesh);
Vector assemble_nonlinear_load(const SurfaceMesh& mesh, const Vector& u, const Nonlinearity& psi);
Vector assemble_source_load(const SurfaceMesh& mesh, const ScalarFn& b, double t);

}  // namespace esfem
