#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mildsim/config.hpp"
#include "mildsim/errors.hpp"
#include "mildsim/experiments.hpp"
#include "mildsim/parallel.hpp"
#include "mildsim/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mildsim: Monte Carlo simulation and periodicity certification for "
                 "semilinear stochastic evolution equations"};
    app.set_version_flag("--version", std::string("mildsim ") + mildsim::kVersion);

    std::string config_path;
    std::string out_dir_override;
    std::int64_t seed_override = -1;
    int threads = 0;
    bool require_verdict = false;
    bool validate_only = false;

    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--out", out_dir_override, "output directory (overrides output.dir)");
    app.add_option("--seed", seed_override, "seed override (overrides mc.seed)");
    app.add_option("--threads", threads, "worker thread count (affects speed only)");
    app.add_flag("--require-verdict", require_verdict,
                 "exit 4 when a diagnose run ends Inconclusive");
    app.add_flag("--validate-only", validate_only, "validate the config and exit");

    CLI11_PARSE(app, argc, argv);

    mildsim::set_thread_count(threads);

    mildsim::RunConfig cfg;
    try {
        cfg = mildsim::RunConfig::from_file(config_path);
    } catch (const mildsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;

    const mildsim::ValidationReport report = cfg.validate();
    if (!report.issues.empty()) std::cerr << report.to_text();
    if (report.fatal()) return 2;
    if (validate_only) {
        std::cout << "config ok: experiment '" << cfg.experiment << "'\n";
        return 0;
    }

    try {
        const mildsim::ExperimentResult result =
            mildsim::run_experiment(cfg, cfg.out_dir, require_verdict);
        if (!result.message.empty()) {
            (result.exit_code == 0 ? std::cout : std::cerr) << result.message << "\n";
        }
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
