#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mildsim/config.hpp"

namespace mildsim {

struct ExperimentResult {
    int exit_code = 0; // 0 ok, 2 validation, 3 divergence, 4 inconclusive-under-require
    std::string verdict;                // experiment-specific, may be empty
    std::vector<std::string> artifacts; // file names written into out_dir
    std::string message;                // human-readable status
};

/// Executes the configured experiment, writing every artifact (including
/// manifest.json) into out_dir. Throws only on I/O failures; config and
/// numerical problems are encoded in exit_code.
ExperimentResult run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir,
                                bool require_verdict);

} // namespace mildsim
