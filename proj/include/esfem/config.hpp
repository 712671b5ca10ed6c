#pragma once

#include "esfem/diagnostics.hpp"
#include "esfem/linsolve.hpp"
#include "esfem/presets.hpp"
#include "esfem/problem.hpp"
#include "esfem/simulation.hpp"

#include <string>
#include <vector>

namespace esfem {

/// Experiment description read from YAML. Sections and keys:
///
///   surface:        radius, amplitude, period (0 = static)
///   problem:        preset (product_decay | cosine_mixture | polynomial_datum),
///                   epsilon, decay_rate, amplitude, route (closed_form | generic),
///                   theta_mode (automatic | with_theta | without_theta),
///                   initial_mode (interpolation | ritz)
///   discretization: mesh_levels, bdf_orders, time_steps, final_time, node_step,
///                   start (automatic | exact | cascade), solver (factorized | direct_lu | gmres),
///                   solver_tolerance, sweep (tables | full)
///   output:         directory, vtk_every, snapshot_times, energy_convention (scaled | unscaled)
struct ExperimentConfig {
    struct Surface {
        double radius = 1.0;
        double amplitude = 0.25;
        /// a(t) = 1 + amplitude sin(2 pi t / period)
        double period = 1.0;
    } surface;

    struct Problem {
        std::string preset = "product_decay";
        double epsilon = 0.5;
        double decay_rate = 6.0;
        double amplitude = 0.1;
        ManufacturedRoute route = ManufacturedRoute::closed_form;
        ThetaMode theta_mode = ThetaMode::automatic;
        InitialMode initial_mode = InitialMode::interpolation;
    } problem;

    struct Discretization {
        std::vector<int> mesh_levels{3};
        std::vector<int> bdf_orders{2};
        std::vector<double> time_steps{0.025};
        double final_time = 1.0;
        /// 0: the smallest entry of time_steps when all steps are multiples of it, else each run's own step.
        double node_step = 0.0;
        StartMode start = StartMode::automatic;
        BlockMethod solver = BlockMethod::factorized;
        double solver_tolerance = 1e-10;
        /// tables: finest tau over all levels plus finest level over all tau; full: cross product.
        std::string sweep = "tables";
    } discretization;

    struct Output {
        std::string directory = ".";
        int vtk_every = 0;
        std::vector<double> snapshot_times;
        EnergyConvention energy_convention = EnergyConvention::scaled;
    } output;
};

/// Parses YAML text; throws ConfigError listing every problem found.
ExperimentConfig parse_config(const std::string& text);
/// Throws IoError if the file cannot be read, ConfigError if it is invalid.
ExperimentConfig load_config(const std::string& path);
/// Canonical YAML form; parse_config(to_yaml(c)) reproduces c.
std::string to_yaml(const ExperimentConfig& config);
/// All validation messages; empty when the configuration is usable.
std::vector<std::string> validation_errors(const ExperimentConfig& config);

/// FNV-1a 64-bit hash of the canonical form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

EllipsoidShape make_shape(const ExperimentConfig& config);
Scenario make_scenario(const ExperimentConfig& config);
SimulationOptions make_options(const ExperimentConfig& config, int level, int order, double tau);

const char* to_string(ThetaMode mode);
const char* to_string(InitialMode mode);
const char* to_string(StartMode mode);
const char* to_string(BlockMethod method);
const char* to_string(ManufacturedRoute route);
const char* to_string(EnergyConvention convention);

}  // namespace esfem
