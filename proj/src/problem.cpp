#include "esfem/problem.hpp"

#include "esfem/errors.hpp"

#include <cmath>

namespace esfem {

Nonlinearity Nonlinearity::zero()
{
    return {[](double, const Vec3&) { return 0.0; }, false, "zero"};
}

Nonlinearity Nonlinearity::double_well()
{
    return {[](double u, const Vec3&) { return u * u * u - u; }, false, "double_well"};
}

double double_well_potential(double u)
{
    const double s = u * u - 1.0;
    return 0.25 * s * s;
}

ThetaMode ProblemSpec::resolved_theta_mode() const
{
    if (theta_mode != ThetaMode::automatic) return theta_mode;
    return exact_w || initial_w ? ThetaMode::with_theta : ThetaMode::without_theta;
}

const AmbientField& ProblemSpec::initial_w_field() const
{
    if (exact_w) return *exact_w;
    if (initial_w) return *initial_w;
    throw ConfigError("theta correction requires the chemical potential w at t = 0");
}

const AmbientField& ProblemSpec::initial_field() const
{
    if (exact_u) return *exact_u;
    if (initial_u) return *initial_u;
    throw ConfigError("problem has neither an exact solution nor an initial datum");
}

void ProblemSpec::validate() const
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
    if (!f.eval || !g.eval) throw ConfigError("nonlinearities f and g must be set");
    if (!exact_u && !initial_u) throw ConfigError("problem has neither an exact solution nor an initial datum");
    if (theta_mode == ThetaMode::with_theta && !exact_w && !initial_w)
        throw ConfigError("theta correction requires the chemical potential w at t = 0");
    if (is_double_well() && !potential) throw ConfigError("double-well problems need the potential F");
}

}  // namespace esfem
