#pragma once

#include "esfem/config.hpp"
#include "esfem/diagnostics.hpp"
#include "esfem/simulation.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace esfem {

struct CommandOptions {
    /// Overrides output.directory when non-empty.
    std::string output_dir;
    /// Overrides output.vtk_every when >= 0.
    int vtk_every = -1;
    bool quiet = false;
    std::function<void(const std::string&)> log;
};

struct RunSpec {
    int level = 0;
    int order = 1;
    double tau = 0.0;
};

/// Members of a convergence sweep in execution order.
std::vector<RunSpec> sweep_runs(const ExperimentConfig& config);

struct SweepResult {
    std::vector<RunSpec> specs;
    std::vector<RunResult> results;
    /// Set when a member run failed; results then hold the completed prefix.
    std::string failure;
    bool complete() const { return failure.empty(); }
};

struct EocReport {
    std::string kind;  // spatial | temporal
    std::string norm;  // l2 | h1
    int order = 0;
    /// Fixed parameter of the table: tau for spatial, mesh level for temporal.
    double fixed = 0.0;
    EocTable table;
};

/// L-infinity-in-time errors of u plus w: max_n |u - u_h|_{L2} + max_n |w - w_h|_{L2}, and the H1 analogue.
double combined_l2_error(const RunResult& r);
double combined_h1_error(const RunResult& r);

SweepResult run_sweep(const ExperimentConfig& config, const CommandOptions& options);
std::vector<EocReport> eoc_reports(const ExperimentConfig& config, const SweepResult& sweep);

struct ThetaComparison {
    RunResult without_theta;
    RunResult with_theta;
    /// |w(0) - Ritz(w(., 0))|_M / |Ritz(w(., 0))|_M for the corrected branch.
    double identity_error = 0.0;
    double theta_norm = 0.0;
};

ThetaComparison run_theta_comparison(const ExperimentConfig& config, const CommandOptions& options);

/// Subcommands. Each writes its CSV and VTK files plus summary.json to the output
/// directory and returns the summary. Errors propagate as esfem exceptions.
nlohmann::json cmd_run(const ExperimentConfig& config, const CommandOptions& options);
nlohmann::json cmd_converge(const ExperimentConfig& config, const CommandOptions& options);
nlohmann::json cmd_energy(const ExperimentConfig& config, const CommandOptions& options);
nlohmann::json cmd_theta(const ExperimentConfig& config, const CommandOptions& options);
nlohmann::json cmd_mesh_info(const ExperimentConfig& config, const CommandOptions& options);

constexpr int kSummarySchemaVersion = 1;

/// Summary skeleton: schema_version, command, config echo, config hash and build commit.
nlohmann::json summary_header(const std::string& command, const ExperimentConfig& config);
nlohmann::json to_json(const RunSpec& spec, const RunResult& result);
nlohmann::json to_json(const EocTable& table);

}  // namespace esfem
