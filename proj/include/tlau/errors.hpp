#pragma once

#include <stdexcept>
#include <string>

namespace tlau {

// Error taxonomy mirrors the CLI exit codes: config 2, physics 3, statistics 4.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct physics_error : std::runtime_error {
    explicit physics_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct stats_error : std::runtime_error {
    explicit stats_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tlau
