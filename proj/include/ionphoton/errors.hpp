#pragma once

#include <stdexcept>
#include <string>

namespace ionphoton {

/// Invalid configuration or input file contents. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime or numerical failure (integrator breakdown, positivity loss, ...).
/// CLI exit code 3.
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ionphoton
