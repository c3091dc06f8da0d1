#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace winp {

// Invalid or inconsistent configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A delivery could not complete within the trace horizon.
struct InfeasibleError : std::runtime_error {
    std::vector<int> unfinished_slices;
    InfeasibleError(const std::string& msg, std::vector<int> slices)
        : std::runtime_error(msg), unfinished_slices(std::move(slices)) {}
};

// Broken internal invariant (cycle, deadlock, livelock guard).
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace winp
