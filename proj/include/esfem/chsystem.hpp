#pragma once

#include "esfem/assembly.hpp"
#include "esfem/fields.hpp"
#include "esfem/linsolve.hpp"
#include "esfem/problem.hpp"
#include "esfem/types.hpp"

namespace esfem {

struct StatePair {
    Vector u;
    Vector w;
    double t = 0.0;
};

/// Nodal values field(node, t).
Vector interpolate(const SurfaceMesh& mesh, const AmbientField& field, double t);

/// Generalized Ritz map: solves (M + A) z = r with
///   r_k = int_{Gamma_h} grad_G u(y) . grad phi_k + u(y) phi_k,
/// y the projection of the quadrature point onto Gamma(t).
Vector ritz_map(const Assembler& assembler, const LevelSetSurface& surface, const AmbientField& field, double t,
                SolveReport* report = nullptr);

/// Solves M wbar = eps A u0 + g(u0) / eps.
Vector compute_wbar0(const Assembler& assembler, const ProblemSpec& problem, const Vector& u0);

/// theta = M (Ritz(w(., 0)) - wbar); the zero vector without the correction.
/// Throws ConfigError when the correction is requested but w(., 0) is unknown.
Vector compute_theta(const Assembler& assembler, const LevelSetSurface& surface, const ProblemSpec& problem,
                     const Vector& u0);

struct InitialData {
    StatePair state;
    Vector theta;
};

/// u0 by interpolation or Ritz map of the initial field; w0 from the modified
/// elliptic problem M w0 = eps A u0 + g(u0) / eps + theta.
InitialData initial_state(const Assembler& assembler, const LevelSetSurface& surface, const ProblemSpec& problem);

struct RhsVectors {
    /// Load of f(u, grad u) plus the source b(., t).
    Vector f;
    /// Load of g(u, grad u), scaled by 1 / eps.
    Vector g;
};

RhsVectors rhs_vectors(const Assembler& assembler, const ProblemSpec& problem, const Vector& u, double t);

}  // namespace esfem
