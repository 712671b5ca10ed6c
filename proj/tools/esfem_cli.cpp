#include "esfem/config.hpp"
#include "esfem/errors.hpp"
#include "esfem/experiments.hpp"
#include "esfem/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cahn-Hilliard solver on evolving surfaces"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    esfem::CommandOptions options;
    int threads = 1;
    app.add_option("--config", config_path, "experiment YAML file")->required()->check(CLI::ExistingFile);
    app.add_option("--output", options.output_dir, "output directory (overrides output.directory)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--vtk-every", options.vtk_every, "write a VTK frame every K steps (0: snapshots only)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--quiet", options.quiet, "suppress progress messages");

    using Command = nlohmann::json (*)(const esfem::ExperimentConfig&, const esfem::CommandOptions&);
    Command command = nullptr;
    auto add = [&](const char* name, const char* help, Command fn) {
        app.add_subcommand(name, help)->callback([&command, fn] { command = fn; });
    };
    add("run", "single simulation", esfem::cmd_run);
    add("converge", "convergence sweep with EOC tables", esfem::cmd_converge);
    add("energy", "Ginzburg-Landau energy traces", esfem::cmd_energy);
    add("theta", "runs with and without the theta correction", esfem::cmd_theta);
    add("mesh-info", "mesh statistics for the configured levels", esfem::cmd_mesh_info);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    options.log = [](const std::string& message) { std::cerr << message << '\n'; };
    try {
        esfem::set_thread_count(threads);
        const esfem::ExperimentConfig config = esfem::load_config(config_path);
        const nlohmann::json summary = command(config, options);
        if (!options.quiet) std::cout << summary.dump(2) << '\n';
        return kOk;
    } catch (const esfem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const esfem::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const esfem::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
}
