#include "esfem/diagnostics.hpp"

#include "esfem/errors.hpp"
#include "esfem/geometry.hpp"
#include "esfem/parallel.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

namespace esfem {

NormPair field_error(const Assembler& assembler, const LevelSetSurface& surface, const Vector& uh,
                     const AmbientField& exact, double t)
{
    const QuadratureRule& q = assembler.rule();
    const auto& elements = assembler.elements();
    const auto& tris = assembler.mesh().elements;
    std::vector<std::array<double, 2>> local(elements.size());
    parallel_for(elements.size(), [&](std::size_t e) {
        const ElementGeometry& g = elements[e];
        const Triangle& tri = tris[e];
        const std::array<double, 3> un{uh[tri[0]], uh[tri[1]], uh[tri[2]]};
        const Vec3 grad_h = un[0] * g.grad[0] + un[1] * g.grad[1] + un[2] * g.grad[2];
        double l2 = 0.0;
        double semi = 0.0;
        for (std::size_t p = 0; p < q.size(); ++p) {
            const auto& l = q.points[p];
            const Vec3 y = project_to_surface(surface, g.point(l), t);
            const Vec3 nu = normal(surface, y, t);
            const double diff = l[0] * un[0] + l[1] * un[1] + l[2] * un[2] - exact.value(y, t);
            const Vec3 lifted = grad_h - grad_h.dot(nu) * nu;
            const Vec3 gdiff = lifted - surface_gradient(exact, surface, y, t);
            const double weight = 2.0 * g.area * q.weights[p];
            l2 += weight * diff * diff;
            semi += weight * gdiff.squaredNorm();
        }
        local[e] = {l2, semi};
    });
    double l2 = 0.0;
    double semi = 0.0;
    for (const auto& v : local) {
        l2 += v[0];
        semi += v[1];
    }
    return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

ErrorRecord error_norms(const Assembler& assembler, const LevelSetSurface& surface, const StatePair& state,
                        const ProblemSpec& problem)
{
    if (!problem.exact_u || !problem.exact_w) throw ConfigError("error norms need exact u and w");
    const NormPair eu = field_error(assembler, surface, state.u, *problem.exact_u, state.t);
    const NormPair ew = field_error(assembler, surface, state.w, *problem.exact_w, state.t);
    return {state.t, eu.l2, eu.h1, ew.l2, ew.h1};
}

double gl_energy(const Assembler& assembler, const Vector& u, double epsilon, EnergyConvention convention)
{
    if (!(epsilon > 0.0)) throw ConfigError("energy needs epsilon > 0");
    if (!u.allFinite()) throw BlowUpError("non-finite state in the energy");
    const double gradient_weight = convention == EnergyConvention::scaled ? 0.5 * epsilon : 0.5;
    const double potential_weight = convention == EnergyConvention::scaled ? 1.0 / epsilon : 1.0;
    const QuadratureRule& q = assembler.rule();
    const auto& elements = assembler.elements();
    const auto& tris = assembler.mesh().elements;
    std::vector<double> local(elements.size());
    parallel_for(elements.size(), [&](std::size_t e) {
        const ElementGeometry& g = elements[e];
        const Triangle& tri = tris[e];
        const std::array<double, 3> un{u[tri[0]], u[tri[1]], u[tri[2]]};
        const Vec3 grad = un[0] * g.grad[0] + un[1] * g.grad[1] + un[2] * g.grad[2];
        double potential = 0.0;
        for (std::size_t p = 0; p < q.size(); ++p) {
            const auto& l = q.points[p];
            potential += 2.0 * q.weights[p] * double_well_potential(l[0] * un[0] + l[1] * un[1] + l[2] * un[2]);
        }
        local[e] = g.area * (gradient_weight * grad.squaredNorm() + potential_weight * potential);
    });
    double energy = 0.0;
    for (double v : local) energy += v;
    return energy;
}

double total_mass(const CsrMatrix& mass, const Vector& u) { return (mass * u).sum(); }

std::vector<double> EocTable::orders() const
{
    std::vector<double> out;
    for (const auto& r : rows)
        if (r.eoc) out.push_back(*r.eoc);
    return out;
}

EocTable eoc(std::span<const double> errors, std::span<const double> steps)
{
    if (errors.size() != steps.size()) throw ConfigError("eoc: errors and steps differ in length");
    if (errors.size() < 2) throw ConfigError("eoc needs at least two rows");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0.0)) throw ConfigError("eoc: steps must be positive");
        if (!(errors[i] >= 0.0)) throw ConfigError("eoc: errors must be non-negative");
        if (i > 0 && !(steps[i] < steps[i - 1])) throw ConfigError("eoc: steps must decrease strictly");
    }
    EocTable table;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        EocRow row{steps[i], errors[i], std::nullopt, errors[i] == 0.0};
        if (i > 0 && errors[i] > 0.0 && errors[i - 1] > 0.0)
            row.eoc = std::log(errors[i - 1] / errors[i]) / std::log(steps[i - 1] / steps[i]);
        table.rows.push_back(row);
    }
    return table;
}

namespace {

std::ofstream open_csv(const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << std::setprecision(12);
    return out;
}

}  // namespace

void write_error_csv(const std::string& path, std::span<const ErrorRecord> records)
{
    auto out = open_csv(path);
    out << "t,l2_u,h1_u,l2_w,h1_w\n";
    for (const auto& r : records) out << r.t << ',' << r.l2_u << ',' << r.h1_u << ',' << r.l2_w << ',' << r.h1_w << '\n';
    if (!out) throw IoError("failed writing '" + path + "'");
}

void write_eoc_csv(const std::string& path, const EocTable& table, const std::string& step_label)
{
    auto out = open_csv(path);
    out << step_label << ",error,eoc\n";
    for (const auto& r : table.rows) {
        out << r.step << ',' << r.error << ',';
        if (r.eoc) out << *r.eoc;
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace esfem
