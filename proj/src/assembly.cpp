#include "esfem/assembly.hpp"

#include "esfem/errors.hpp"
#include "esfem/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace esfem {

const QuadratureRule& QuadratureRule::degree4()
{
    static const QuadratureRule rule = [] {
        constexpr double a1 = 0.44594849091596488632;
        constexpr double w1 = 0.22338158967801146570;
        constexpr double a2 = 0.09157621350977074346;
        constexpr double w2 = 0.10995174365532186764;
        QuadratureRule r;
        for (const auto& [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
            const double b = 1.0 - 2.0 * a;
            r.points.push_back({a, a, b});
            r.points.push_back({a, b, a});
            r.points.push_back({b, a, a});
            for (int k = 0; k < 3; ++k) r.weights.push_back(0.5 * w);
        }
        return r;
    }();
    return rule;
}

ElementGeometry element_geometry(const SurfaceMesh& mesh, std::size_t element)
{
    const Triangle& tri = mesh.elements[element];
    ElementGeometry g;
    for (int k = 0; k < 3; ++k) g.vertices[k] = mesh.nodes[tri[k]];
    const Vec3 n = (g.vertices[1] - g.vertices[0]).cross(g.vertices[2] - g.vertices[0]);
    const double twice_area = n.norm();
    const double scale = std::max({(g.vertices[1] - g.vertices[0]).squaredNorm(),
                                   (g.vertices[2] - g.vertices[1]).squaredNorm(),
                                   (g.vertices[0] - g.vertices[2]).squaredNorm()});
    if (!(twice_area > 1e-14 * scale)) {
        std::ostringstream msg;
        msg << "degenerate triangle " << element << " with area " << 0.5 * twice_area;
        throw GeometryError(msg.str());
    }
    g.area = 0.5 * twice_area;
    g.unit_normal = n / twice_area;
    for (int k = 0; k < 3; ++k)
        g.grad[k] = g.unit_normal.cross(g.vertices[(k + 2) % 3] - g.vertices[(k + 1) % 3]) / twice_area;
    if (mesh.has_velocity()) {
        double div = 0.0;
        for (int k = 0; k < 3; ++k) div += mesh.node_velocity[tri[k]].dot(g.grad[k]);
        g.velocity_divergence = div;
    }
    return g;
}

Assembler::Assembler(const SurfaceMesh& mesh) : connectivity_(mesh.elements)
{
    const int n = static_cast<int>(mesh.num_nodes());
    std::vector<std::vector<int>> adjacency(n);
    for (const auto& e : mesh.elements) {
        for (int a = 0; a < 3; ++a) {
            if (e[a] < 0 || e[a] >= n) throw GeometryError("element references a missing node");
            for (int b = 0; b < 3; ++b) adjacency[e[a]].push_back(e[b]);
        }
    }
    auto pattern = std::make_shared<SparsityPattern>();
    pattern->rows = pattern->cols = n;
    pattern->row_ptr.push_back(0);
    for (auto& row : adjacency) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        pattern->col_idx.insert(pattern->col_idx.end(), row.begin(), row.end());
        pattern->row_ptr.push_back(pattern->nnz());
    }
    slots_.resize(mesh.num_elements());
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const Triangle& tri = mesh.elements[e];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) slots_[e][3 * a + b] = pattern->find(tri[a], tri[b]);
    }
    pattern_ = std::move(pattern);
    bind(mesh);
}

void Assembler::bind(const SurfaceMesh& mesh)
{
    if (mesh.elements != connectivity_) throw GeometryError("assembler bound to a mesh with different connectivity");
    mesh_ = &mesh;
    geometry_.resize(mesh.num_elements());
    parallel_for(mesh.num_elements(), [&](std::size_t e) { geometry_[e] = element_geometry(mesh, e); });
}

CsrMatrix Assembler::scatter(const std::vector<std::array<double, 9>>& local) const
{
    CsrMatrix m(pattern_);
    auto values = m.values();
    for (std::size_t e = 0; e < local.size(); ++e)
        for (int k = 0; k < 9; ++k) values[slots_[e][k]] += local[e][k];
    return m;
}

Vector Assembler::scatter(const std::vector<std::array<double, 3>>& local) const
{
    Vector v = Vector::Zero(static_cast<Eigen::Index>(num_nodes()));
    for (std::size_t e = 0; e < local.size(); ++e)
        for (int k = 0; k < 3; ++k) v[connectivity_[e][k]] += local[e][k];
    return v;
}

CsrMatrix Assembler::mass() const
{
    std::vector<std::array<double, 9>> local(geometry_.size());
    parallel_for(geometry_.size(), [&](std::size_t e) {
        const double a = geometry_[e].area / 12.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) local[e][3 * i + j] = i == j ? 2.0 * a : a;
    });
    return scatter(local);
}

CsrMatrix Assembler::stiffness() const
{
    std::vector<std::array<double, 9>> local(geometry_.size());
    parallel_for(geometry_.size(), [&](std::size_t e) {
        const ElementGeometry& g = geometry_[e];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) local[e][3 * i + j] = g.area * g.grad[i].dot(g.grad[j]);
    });
    return scatter(local);
}

CsrMatrix Assembler::mdot() const
{
    if (!mesh_->has_velocity()) throw GeometryError("mdot requires node velocities");
    std::vector<std::array<double, 9>> local(geometry_.size());
    parallel_for(geometry_.size(), [&](std::size_t e) {
        const double a = geometry_[e].velocity_divergence * geometry_[e].area / 12.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) local[e][3 * i + j] = i == j ? 2.0 * a : a;
    });
    return scatter(local);
}

Vector Assembler::nonlinear_load(const Vector& u, const Nonlinearity& psi) const
{
    if (u.size() != static_cast<Eigen::Index>(num_nodes())) throw ConfigError("nonlinear load: vector size mismatch");
    const QuadratureRule& q = rule();
    std::vector<std::array<double, 3>> local(geometry_.size());
    parallel_for(geometry_.size(), [&](std::size_t e) {
        const ElementGeometry& g = geometry_[e];
        const Triangle& tri = connectivity_[e];
        const std::array<double, 3> un{u[tri[0]], u[tri[1]], u[tri[2]]};
        const Vec3 grad = un[0] * g.grad[0] + un[1] * g.grad[1] + un[2] * g.grad[2];
        std::array<double, 3> acc{0.0, 0.0, 0.0};
        for (std::size_t p = 0; p < q.size(); ++p) {
            const auto& l = q.points[p];
            const double value = psi(l[0] * un[0] + l[1] * un[1] + l[2] * un[2], grad);
            const double wv = 2.0 * g.area * q.weights[p] * value;
            for (int k = 0; k < 3; ++k) acc[k] += wv * l[k];
        }
        local[e] = acc;
    });
    Vector out = scatter(local);
    if (!out.allFinite()) throw BlowUpError("non-finite value in the nonlinear load '" + psi.name + "'");
    return out;
}

Vector Assembler::source_load(const ScalarFn& b, double t) const
{
    if (!b) return Vector::Zero(static_cast<Eigen::Index>(num_nodes()));
    const QuadratureRule& q = rule();
    std::vector<std::array<double, 3>> local(geometry_.size());
    parallel_for(geometry_.size(), [&](std::size_t e) {
        const ElementGeometry& g = geometry_[e];
        std::array<double, 3> acc{0.0, 0.0, 0.0};
        for (std::size_t p = 0; p < q.size(); ++p) {
            const auto& l = q.points[p];
            const double wv = 2.0 * g.area * q.weights[p] * b(g.point(l), t);
            for (int k = 0; k < 3; ++k) acc[k] += wv * l[k];
        }
        local[e] = acc;
    });
    Vector out = scatter(local);
    if (!out.allFinite()) throw BlowUpError("non-finite value in the source load");
    return out;
}

Vector Assembler::weak_load(const std::function<WeakIntegrand(std::size_t, const Vec3&)>& integrand) const
{
    const QuadratureRule& q = rule();
    std::vector<std::array<double, 3>> local(geometry_.size());
    parallel_for(geometry_.size(), [&](std::size_t e) {
        const ElementGeometry& g = geometry_[e];
        std::array<double, 3> acc{0.0, 0.0, 0.0};
        for (std::size_t p = 0; p < q.size(); ++p) {
            const auto& l = q.points[p];
            const WeakIntegrand w = integrand(e, g.point(l));
            const double weight = 2.0 * g.area * q.weights[p];
            for (int k = 0; k < 3; ++k) acc[k] += weight * (w.value * l[k] + w.flux.dot(g.grad[k]));
        }
        local[e] = acc;
    });
    Vector out = scatter(local);
    if (!out.allFinite()) throw BlowUpError("non-finite value in a weak load");
    return out;
}

CsrMatrix assemble_mass(const SurfaceMesh& mesh) { return Assembler(mesh).mass(); }
CsrMatrix assemble_stiffness(const SurfaceMesh& mesh) { return Assembler(mesh).stiffness(); }
CsrMatrix assemble_mdot(const SurfaceMesh& mesh) { return Assembler(mesh).mdot(); }

Vector assemble_nonlinear_load(const SurfaceMesh& mesh, const Vector& u, const Nonlinearity& psi)
{
    return Assembler(mesh).nonlinear_load(u, psi);
}

Vector assemble_source_load(const SurfaceMesh& mesh, const ScalarFn& b, double t)
{
    return Assembler(mesh).source_load(b, t);
}

}  // namespace esfem
