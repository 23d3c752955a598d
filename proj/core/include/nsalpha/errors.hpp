#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nsalpha {

// Incompatible meshes, grid shapes, or time grids.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A solve produced a non-finite or runaway field.
struct BlowUpError : std::runtime_error {
    BlowUpError(const std::string& what, int step_index)
        : std::runtime_error(what), step(step_index) {}
    int step;
};

// Configuration rejected; all validation issues are collected, not just the first.
struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), issues(std::move(problems)) {}
    std::vector<std::string> issues;

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& e : v) s += "\n  " + e;
        return s;
    }
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nsalpha
