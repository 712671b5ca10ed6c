#pragma once

#include "esfem/bdf.hpp"
#include "esfem/chsystem.hpp"
#include "esfem/diagnostics.hpp"
#include "esfem/linsolve.hpp"
#include "esfem/mesh.hpp"
#include "esfem/presets.hpp"

#include <functional>
#include <vector>

namespace esfem {

enum class StartMode {
    /// exact when the problem has an exact solution, cascade otherwise
    automatic,
    /// nodal interpolants of the exact solution
    exact,
    /// each starting value from the method one order lower
    cascade,
};

struct SimulationOptions {
    int mesh_level = 3;
    int bdf_order = 2;
    double tau = 0.0;
    double t_end = 1.0;
    /// Step of the RK4 node integrator; 0 means tau. tau must be a multiple of it.
    double node_step = 0.0;
    StartMode start = StartMode::automatic;
    BlockMethod solver = BlockMethod::factorized;
    double solver_tolerance = 1e-10;
    bool track_errors = true;
    bool track_energy = true;
    EnergyConvention energy_convention = EnergyConvention::scaled;
};

/// Called after the initial state and after every accepted time level.
struct StepView {
    int step;
    const SurfaceMesh& mesh;
    const StatePair& state;
};
using StepObserver = std::function<void(const StepView&)>;

struct RunResult {
    int num_nodes = 0;
    /// Largest edge length of the initial mesh.
    double h = 0.0;
    int steps = 0;
    std::vector<double> times;
    std::vector<ErrorRecord> errors;
    /// Component-wise maxima over all time levels, t = 0 included.
    ErrorRecord max_errors;
    std::vector<double> mass;
    std::vector<double> energy;
    /// max_n |m_n - m_0| / max(|m_0|, int |u_0|)
    double mass_drift = 0.0;
    /// Largest block residual over all steps; one entry per step in step_residuals.
    double max_block_residual = 0.0;
    std::vector<double> step_residuals;
    BlockSolverStats solver_stats;
    Vector theta;
    StatePair initial;
    StatePair final_state;
    double wall_seconds = 0.0;
};

/// Runs one simulation. Throws ConfigError, SolverError, BlowUpError or GeometryError.
RunResult simulate(const Scenario& scenario, const SimulationOptions& options, const StepObserver& observer = {});

/// Number of uniform steps covering [0, t_end]; throws ConfigError if t_end is not a multiple of tau.
int step_count(double t_end, double tau);

}  // namespace esfem
