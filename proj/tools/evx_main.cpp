#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "evx/harness.hpp"
#include "evx/io.hpp"

namespace {

constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

void print_summary(const evx::ExperimentReport& report) {
    std::cout << "model=" << report.config.model.describe() << " n=" << report.config.n
              << " R=" << report.config.replications << " theta=" << report.theta_true
              << " rho=" << report.rho << " rho_hat=" << report.rho_hat
              << " censored=" << report.censored_count << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Replicated threshold-exceedance experiments: simulate stationary paths, "
                 "measure hitting times and inter-exceedance gaps, compare them with the "
                 "asymptotic laws, and write CSV/JSON reports"};

    std::string config_path;
    std::string out_dir;
    std::string format_text = "both";
    std::int64_t seed_override = -1;
    std::size_t threads = 1;

    app.add_option("--config", config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--seed", seed_override, "override the config seed");
    app.add_option("--out", out_dir, "override the config output_dir");
    app.add_option("--format", format_text, "csv|json|both (default both)");
    app.add_option("--threads", threads, "worker threads for replications (default 1)");

    CLI11_PARSE(app, argc, argv);

    evx::ExperimentConfig config;
    evx::OutputFormat format;
    try {
        config = evx::load_config_file(config_path);
        format = evx::parse_output_format(format_text);
        if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
        if (!out_dir.empty()) config.output_dir = out_dir;
        if (threads < 1) threads = 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        if (!config.n_grid.empty()) {
            const evx::ConvergenceStudy study = evx::convergence_study(config, threads);
            for (const evx::ExperimentReport& report : study.reports) {
                print_summary(report);
                for (const std::string& warning : report.warnings)
                    std::cerr << "warning: n=" << report.config.n << ": " << warning << "\n";
            }
            const auto written = evx::emit_convergence_study(study, format, config.output_dir);
            for (const auto& path : written) std::cout << "wrote " << path.string() << "\n";
        } else {
            const evx::ExperimentReport report = evx::run_experiment(config, threads);
            print_summary(report);
            for (const std::string& warning : report.warnings)
                std::cerr << "warning: " << warning << "\n";
            const auto written = evx::emit_report(report, format, config.output_dir);
            for (const auto& path : written) std::cout << "wrote " << path.string() << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return 0;
}
