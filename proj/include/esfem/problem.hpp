#pragma once

#include "esfem/fields.hpp"
#include "esfem/types.hpp"

#include <functional>
#include <optional>
#include <string>

namespace esfem {

/// Pointwise nonlinearity psi(u, grad_Gamma u).
struct Nonlinearity {
    std::function<double(double, const Vec3&)> eval;
    bool gradient_dependent = false;
    std::string name;

    double operator()(double u, const Vec3& grad) const { return eval(u, grad); }
    bool is_zero() const { return name == "zero"; }

    static Nonlinearity zero();
    /// g(u) = u^3 - u, the derivative of the double-well potential.
    static Nonlinearity double_well();
};

/// F(u) = (u^2 - 1)^2 / 4.
double double_well_potential(double u);

enum class ThetaMode { automatic, with_theta, without_theta };
enum class InitialMode { interpolation, ritz };

/// Cahn-Hilliard type problem
///   du/dt (material) - Lap w = f(u, grad u) - u div v + b,
///   w + eps Lap u = g(u, grad u) / eps
/// on a moving surface. eps = 1 recovers the unscaled system.
struct ProblemSpec {
    double epsilon = 1.0;
    Nonlinearity f = Nonlinearity::zero();
    Nonlinearity g = Nonlinearity::double_well();
    std::function<double(double)> potential = double_well_potential;

    /// Source term b(x, t); empty means b = 0.
    ScalarFn source;
    std::optional<AmbientField> exact_u;
    std::optional<AmbientField> exact_w;
    /// Initial datum u(., 0) when no exact solution is known.
    std::optional<AmbientField> initial_u;
    /// w(., 0) when no exact w is known for t > 0; only used by the theta correction.
    std::optional<AmbientField> initial_w;

    ThetaMode theta_mode = ThetaMode::automatic;
    InitialMode initial_mode = InitialMode::interpolation;

    /// with_theta when w(., 0) is available and the mode is automatic.
    ThetaMode resolved_theta_mode() const;
    /// exact_w if present, otherwise initial_w; throws ConfigError when neither is set.
    const AmbientField& initial_w_field() const;
    /// The field providing u(., 0): exact_u if present, otherwise initial_u.
    const AmbientField& initial_field() const;
    bool is_double_well() const { return g.name == "double_well"; }

    /// Throws ConfigError on inconsistent settings.
    void validate() const;
};

}  // namespace esfem
