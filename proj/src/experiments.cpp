#include "esfem/experiments.hpp"

#include "esfem/errors.hpp"
#include "esfem/geometry.hpp"
#include "esfem/kernels.hpp"
#include "esfem/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#ifndef ESFEM_GIT_COMMIT
#define ESFEM_GIT_COMMIT "unknown"
#endif

namespace esfem {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string output_dir(const ExperimentConfig& config, const CommandOptions& options)
{
    const std::string dir = options.output_dir.empty() ? config.output.directory : options.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return dir;
}

int vtk_every(const ExperimentConfig& config, const CommandOptions& options)
{
    return options.vtk_every >= 0 ? options.vtk_every : config.output.vtk_every;
}

void log(const CommandOptions& options, const std::string& message)
{
    if (options.quiet) return;
    if (options.log) options.log(message);
}

std::string run_tag(const RunSpec& s)
{
    std::ostringstream tag;
    tag << "L" << s.level << "_bdf" << s.order << "_tau" << s.tau;
    return tag.str();
}

void write_json(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing '" + path + "'");
}

void write_trace_csv(const std::string& path, const RunResult& r)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << std::setprecision(15) << "t,energy,mass\n";
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        out << r.times[i] << ',';
        if (i < r.energy.size()) out << r.energy[i];
        out << ',' << r.mass[i] << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

/// Writes VTK frames every `every` steps and at the requested times.
StepObserver vtk_observer(const std::string& prefix, int every, std::vector<double> times, double tau)
{
    if (every <= 0 && times.empty()) return {};
    return [prefix, every, times = std::move(times), tau](const StepView& v) {
        bool at_time = false;
        for (double t : times) at_time = at_time || std::abs(v.state.t - t) < 0.5 * tau;
        if (!at_time && !(every > 0 && v.step % every == 0)) return;
        std::ostringstream name;
        name << prefix << "_" << std::setw(6) << std::setfill('0') << v.step << ".vtk";
        write_vtk(name.str(), v.mesh, {{"u", &v.state.u}, {"w", &v.state.w}});
    };
}

json errors_json(const ErrorRecord& e)
{
    return {{"l2_u", e.l2_u}, {"h1_u", e.h1_u}, {"l2_w", e.l2_w}, {"h1_w", e.h1_w}};
}

}  // namespace

json summary_header(const std::string& command, const ExperimentConfig& config)
{
    return {{"schema_version", kSummarySchemaVersion},
            {"command", command},
            {"config", to_yaml(config)},
            {"config_hash", config_hash(config)},
            {"commit", ESFEM_GIT_COMMIT},
            {"threads", thread_count()},
            {"simd", kernels::active().name}};
}

json to_json(const RunSpec& spec, const RunResult& r)
{
    json j{{"mesh_level", spec.level},
           {"num_nodes", r.num_nodes},
           {"h", r.h},
           {"bdf_order", spec.order},
           {"tau", spec.tau},
           {"steps", r.steps},
           {"mass_drift", r.mass_drift},
           {"initial_mass", r.mass.empty() ? 0.0 : r.mass.front()},
           {"max_block_residual", r.max_block_residual},
           {"step_residuals", r.step_residuals},
           {"solver",
            {{"solves", r.solver_stats.solves},
             {"factorizations", r.solver_stats.factorizations},
             {"krylov_iterations", r.solver_stats.krylov_iterations}}},
           {"theta_norm", r.theta.size() ? r.theta.norm() : 0.0},
           {"wall_seconds", r.wall_seconds}};
    if (!r.energy.empty()) j["final_energy"] = r.energy.back();
    if (!r.errors.empty()) {
        j["max_errors"] = errors_json(r.max_errors);
        j["combined_l2"] = combined_l2_error(r);
        j["combined_h1"] = combined_h1_error(r);
    }
    return j;
}

json to_json(const EocTable& table)
{
    json rows = json::array();
    for (const auto& r : table.rows) {
        json row{{"step", r.step}, {"error", r.error}, {"saturated", r.saturated}};
        row["eoc"] = r.eoc ? json(*r.eoc) : json(nullptr);
        rows.push_back(row);
    }
    return rows;
}

double combined_l2_error(const RunResult& r) { return r.max_errors.l2_u + r.max_errors.l2_w; }
double combined_h1_error(const RunResult& r) { return r.max_errors.h1_u + r.max_errors.h1_w; }

std::vector<RunSpec> sweep_runs(const ExperimentConfig& config)
{
    const auto& d = config.discretization;
    std::vector<RunSpec> runs;
    auto add = [&](RunSpec s) {
        for (const auto& r : runs)
            if (r.level == s.level && r.order == s.order && r.tau == s.tau) return;
        runs.push_back(s);
    };
    const double finest_tau = d.time_steps.back();
    const int finest_level = d.mesh_levels.back();
    for (int order : d.bdf_orders) {
        if (d.sweep == "full") {
            for (int level : d.mesh_levels)
                for (double tau : d.time_steps) add({level, order, tau});
            continue;
        }
        for (int level : d.mesh_levels) add({level, order, finest_tau});
        for (double tau : d.time_steps) add({finest_level, order, tau});
    }
    return runs;
}

SweepResult run_sweep(const ExperimentConfig& config, const CommandOptions& options)
{
    SweepResult sweep;
    const Scenario scenario = make_scenario(config);
    for (const RunSpec& spec : sweep_runs(config)) {
        log(options, "run " + run_tag(spec));
        try {
            RunResult r = simulate(scenario, make_options(config, spec.level, spec.order, spec.tau));
            sweep.specs.push_back(spec);
            sweep.results.push_back(std::move(r));
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            sweep.failure = run_tag(spec) + ": " + e.what();
            break;
        }
    }
    return sweep;
}

std::vector<EocReport> eoc_reports(const ExperimentConfig& config, const SweepResult& sweep)
{
    std::vector<EocReport> reports;
    const auto& d = config.discretization;
    const double finest_tau = d.time_steps.back();
    const int finest_level = d.mesh_levels.back();
    // rows keyed by step, coarse first; tables-mode runs do not arrive in that order
    using Rows = std::map<double, std::pair<double, double>, std::greater<>>;
    auto split = [](const Rows& rows, std::vector<double>& step, std::vector<double>& l2, std::vector<double>& h1) {
        for (const auto& [x, e] : rows) {
            step.push_back(x);
            l2.push_back(e.first);
            h1.push_back(e.second);
        }
    };
    for (int order : d.bdf_orders) {
        Rows space, time;
        for (std::size_t i = 0; i < sweep.specs.size(); ++i) {
            const RunSpec& s = sweep.specs[i];
            const RunResult& r = sweep.results[i];
            if (s.order != order || r.errors.empty()) continue;
            if (s.tau == finest_tau) space[r.h] = {combined_l2_error(r), combined_h1_error(r)};
            if (s.level == finest_level) time[s.tau] = {combined_l2_error(r), combined_h1_error(r)};
        }
        std::vector<double> h, tau, l2_space, h1_space, l2_time, h1_time;
        split(space, h, l2_space, h1_space);
        split(time, tau, l2_time, h1_time);
        if (h.size() >= 2) {
            reports.push_back({"spatial", "l2", order, finest_tau, eoc(l2_space, h)});
            reports.push_back({"spatial", "h1", order, finest_tau, eoc(h1_space, h)});
        }
        if (tau.size() >= 2) {
            reports.push_back({"temporal", "l2", order, static_cast<double>(finest_level), eoc(l2_time, tau)});
            reports.push_back({"temporal", "h1", order, static_cast<double>(finest_level), eoc(h1_time, tau)});
        }
    }
    return reports;
}

ThetaComparison run_theta_comparison(const ExperimentConfig& config, const CommandOptions& options)
{
    const std::string dir = output_dir(config, options);
    const int level = config.discretization.mesh_levels.front();
    const int order = config.discretization.bdf_orders.front();
    const double tau = config.discretization.time_steps.front();
    const int every = vtk_every(config, options);

    ThetaComparison out;
    ExperimentConfig off = config;
    off.problem.theta_mode = ThetaMode::without_theta;
    off.problem.initial_mode = InitialMode::interpolation;
    log(options, "theta comparison: uncorrected branch");
    out.without_theta = simulate(make_scenario(off), make_options(off, level, order, tau),
                                 vtk_observer(dir + "/theta_off", every, config.output.snapshot_times, tau));

    ExperimentConfig on = config;
    on.problem.theta_mode = ThetaMode::with_theta;
    on.problem.initial_mode = InitialMode::ritz;
    log(options, "theta comparison: corrected branch");
    const Scenario scenario = make_scenario(on);
    out.with_theta = simulate(scenario, make_options(on, level, order, tau),
                              vtk_observer(dir + "/theta_on", every, config.output.snapshot_times, tau));

    const SurfaceMesh mesh0 = icosphere(level, scenario.shape.radius, scenario.surface, 0.0);
    const Assembler assembler(mesh0);
    const CsrMatrix mass = assembler.mass();
    const Vector ritz = ritz_map(assembler, scenario.surface, scenario.problem.initial_w_field(), 0.0);
    const Vector diff = out.with_theta.initial.w - ritz;
    const double ritz_norm = std::sqrt(ritz.dot(mass * ritz));
    out.identity_error = std::sqrt(diff.dot(mass * diff)) / (ritz_norm > 0.0 ? ritz_norm : 1.0);
    out.theta_norm = out.with_theta.theta.norm();
    return out;
}

json cmd_run(const ExperimentConfig& config, const CommandOptions& options)
{
    const std::string dir = output_dir(config, options);
    const RunSpec spec{config.discretization.mesh_levels.front(), config.discretization.bdf_orders.front(),
                       config.discretization.time_steps.front()};
    log(options, "run " + run_tag(spec));
    const RunResult r = simulate(make_scenario(config), make_options(config, spec.level, spec.order, spec.tau),
                                 vtk_observer(dir + "/run", vtk_every(config, options), config.output.snapshot_times,
                                              spec.tau));
    if (!r.errors.empty()) write_error_csv(dir + "/errors.csv", r.errors);
    write_trace_csv(dir + "/trace.csv", r);
    json summary = summary_header("run", config);
    summary["runs"] = json::array({to_json(spec, r)});
    summary["status"] = "ok";
    summary["wall_seconds"] = r.wall_seconds;
    write_json(dir + "/summary.json", summary);
    return summary;
}

json cmd_converge(const ExperimentConfig& config, const CommandOptions& options)
{
    const auto& d = config.discretization;
    if (d.mesh_levels.size() < 2 && d.time_steps.size() < 2)
        throw ConfigError("converge needs at least two mesh levels or two time steps");
    if (config.problem.preset != "product_decay")
        throw ConfigError("converge needs an exact solution (problem.preset product_decay)");
    const std::string dir = output_dir(config, options);
    const auto start = std::chrono::steady_clock::now();
    const SweepResult sweep = run_sweep(config, options);

    json summary = summary_header("converge", config);
    summary["runs"] = json::array();
    for (std::size_t i = 0; i < sweep.specs.size(); ++i) {
        summary["runs"].push_back(to_json(sweep.specs[i], sweep.results[i]));
        write_error_csv(dir + "/errors_" + run_tag(sweep.specs[i]) + ".csv", sweep.results[i].errors);
    }
    summary["eoc"] = json::array();
    for (const auto& rep : eoc_reports(config, sweep)) {
        std::ostringstream name;
        name << dir << "/eoc_" << rep.kind << "_bdf" << rep.order << "_" << rep.norm << ".csv";
        write_eoc_csv(name.str(), rep.table, rep.kind == "temporal" ? "tau" : "h");
        summary["eoc"].push_back({{"kind", rep.kind},
                                  {"norm", rep.norm},
                                  {"bdf_order", rep.order},
                                  {"fixed", rep.fixed},
                                  {"rows", to_json(rep.table)}});
    }
    summary["status"] = sweep.complete() ? "ok" : "partial";
    if (!sweep.complete()) summary["failure"] = sweep.failure;
    summary["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(dir + "/summary.json", summary);
    if (!sweep.complete()) throw SolverError("sweep aborted: " + sweep.failure);
    return summary;
}

json cmd_energy(const ExperimentConfig& config, const CommandOptions& options)
{
    const std::string dir = output_dir(config, options);
    const auto start = std::chrono::steady_clock::now();
    const Scenario scenario = make_scenario(config);
    const int order = config.discretization.bdf_orders.front();
    const double tau = config.discretization.time_steps.front();
    json summary = summary_header("energy", config);
    summary["runs"] = json::array();
    for (int level : config.discretization.mesh_levels) {
        const RunSpec spec{level, order, tau};
        log(options, "energy " + run_tag(spec));
        SimulationOptions o = make_options(config, level, order, tau);
        o.track_errors = false;
        o.track_energy = true;
        const RunResult r = simulate(scenario, o,
                                     vtk_observer(dir + "/energy_L" + std::to_string(level),
                                                  vtk_every(config, options), config.output.snapshot_times, tau));
        write_trace_csv(dir + "/energy_L" + std::to_string(level) + ".csv", r);
        json j = to_json(spec, r);
        j["energy_min"] = *std::min_element(r.energy.begin(), r.energy.end());
        j["energy_max"] = *std::max_element(r.energy.begin(), r.energy.end());
        j["energy_convention"] = to_string(config.output.energy_convention);
        summary["runs"].push_back(j);
    }
    summary["status"] = "ok";
    summary["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(dir + "/summary.json", summary);
    return summary;
}

json cmd_theta(const ExperimentConfig& config, const CommandOptions& options)
{
    const std::string dir = output_dir(config, options);
    const ThetaComparison c = run_theta_comparison(config, options);
    const RunSpec spec{config.discretization.mesh_levels.front(), config.discretization.bdf_orders.front(),
                       config.discretization.time_steps.front()};
    write_trace_csv(dir + "/theta_off.csv", c.without_theta);
    write_trace_csv(dir + "/theta_on.csv", c.with_theta);
    json summary = summary_header("theta", config);
    json off = to_json(spec, c.without_theta);
    off["theta_mode"] = "without_theta";
    off["initial_mode"] = "interpolation";
    json on = to_json(spec, c.with_theta);
    on["theta_mode"] = "with_theta";
    on["initial_mode"] = "ritz";
    on["w0_ritz_identity_error"] = c.identity_error;
    summary["runs"] = json::array({off, on});
    summary["snapshot_times"] = config.output.snapshot_times;
    summary["status"] = "ok";
    summary["wall_seconds"] = c.without_theta.wall_seconds + c.with_theta.wall_seconds;
    write_json(dir + "/summary.json", summary);
    return summary;
}

json cmd_mesh_info(const ExperimentConfig& config, const CommandOptions& options)
{
    const std::string dir = output_dir(config, options);
    const Scenario scenario = make_scenario(config);
    json summary = summary_header("mesh-info", config);
    summary["meshes"] = json::array();
    for (int level : config.discretization.mesh_levels) {
        const SurfaceMesh mesh = icosphere(level, scenario.shape.radius, scenario.surface, 0.0);
        const MeshQualityReport q = mesh_quality(mesh);
        summary["meshes"].push_back({{"mesh_level", level},
                                     {"num_nodes", mesh.num_nodes()},
                                     {"num_elements", mesh.num_elements()},
                                     {"max_h", q.max_h},
                                     {"min_h", q.min_h},
                                     {"min_angle_deg", q.min_angle},
                                     {"quasi_uniformity", q.quasi_uniformity},
                                     {"min_area", q.min_area},
                                     {"area", discrete_area(mesh)},
                                     {"closed_manifold", is_closed_manifold(mesh)},
                                     {"max_level_set_residual", max_level_set_residual(mesh, scenario.surface)}});
        log(options, "level " + std::to_string(level) + ": " + std::to_string(mesh.num_nodes()) + " nodes");
    }
    summary["status"] = "ok";
    write_json(dir + "/summary.json", summary);
    return summary;
}

}  // namespace esfem
