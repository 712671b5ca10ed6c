#pragma once

#include "esfem/assembly.hpp"
#include "esfem/chsystem.hpp"
#include "esfem/fields.hpp"
#include "esfem/problem.hpp"
#include "esfem/sparse.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace esfem {

struct ErrorRecord {
    double t = 0.0;
    double l2_u = 0.0;
    double h1_u = 0.0;
    double l2_w = 0.0;
    double h1_w = 0.0;
};

struct NormPair {
    double l2 = 0.0;
    double h1 = 0.0;
};

/// L2 and full H1 error of a P1 function against an exact field. The exact value
/// and surface gradient are taken at the projection y of each quadrature point,
/// and the discrete gradient is compared through P(y) grad_h u_h.
NormPair field_error(const Assembler& assembler, const LevelSetSurface& surface, const Vector& uh,
                     const AmbientField& exact, double t);

/// Errors of both components; requires problem.exact_u and problem.exact_w.
ErrorRecord error_norms(const Assembler& assembler, const LevelSetSurface& surface, const StatePair& state,
                        const ProblemSpec& problem);

enum class EnergyConvention {
    /// int eps/2 |grad u|^2 + F(u) / eps
    scaled,
    /// int 1/2 |grad u|^2 + F(u)
    unscaled,
};

double gl_energy(const Assembler& assembler, const Vector& u, double epsilon,
                 EnergyConvention convention = EnergyConvention::scaled);

/// 1^T M u
double total_mass(const CsrMatrix& mass, const Vector& u);

struct EocRow {
    double step = 0.0;
    double error = 0.0;
    /// log(e_{i-1} / e_i) / log(h_{i-1} / h_i); empty in the first row and when an error is zero.
    std::optional<double> eoc;
    bool saturated = false;
};

struct EocTable {
    std::vector<EocRow> rows;

    std::vector<double> orders() const;
};

/// Throws ConfigError for mismatched lengths, fewer than two rows,
/// non-positive steps or a non-monotone step sequence.
EocTable eoc(std::span<const double> errors, std::span<const double> steps);

/// Columns t,l2_u,h1_u,l2_w,h1_w. Throws IoError.
void write_error_csv(const std::string& path, std::span<const ErrorRecord> records);
/// Columns <step_label>,error,eoc. Throws IoError.
void write_eoc_csv(const std::string& path, const EocTable& table, const std::string& step_label = "h");

}  // namespace esfem
