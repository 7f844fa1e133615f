#pragma once

#include <stdexcept>
#include <string>

namespace mildsim {

/// Invalid configuration (bad keys, unsatisfiable plans). CLI maps this to exit 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite state during integration. CLI maps this to exit 3.
struct DivergenceError : std::runtime_error {
    DivergenceError(const std::string& what, long step_index)
        : std::runtime_error(what + " (step " + std::to_string(step_index) + ")"),
          step(step_index) {}
    long step;
};

} // namespace mildsim
