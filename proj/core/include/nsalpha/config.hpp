#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsalpha/adjoint_solver.hpp"
#include "nsalpha/optimizer.hpp"

namespace nsalpha {

enum class RunMode { Simulate, Optimize, SweepAlpha, Verify };

std::string to_string(RunMode m);
std::string to_string(CostKind k);
std::string to_string(TimeScheme s);

struct MeshConfig {
    int dim = 2;
    int n = 8;
    int m_steps = 32;
};

// Fixture name, or a snapshot path; exactly one.
struct FieldSpec {
    std::string fixture;
    double amplitude = 1.0;
    std::string file;
};

struct TargetSpec {
    std::string fixture = "tracking";  // or empty with explicit files
    std::string u_d_file;
    std::string u_T_file;
};

struct OptimizerConfig {
    int max_iters = 500;
    double tol = 1e-8;
};

struct RunConfig {
    RunMode mode = RunMode::Verify;
    MeshConfig mesh;
    PhysicalParams physics{0.1, 0.1, 1.0};
    CostWeights weights{1.0, 0.0, 0.1};
    CostKind cost = CostKind::DaTracking;
    AdmissibleSet set;
    TargetSpec target;
    FieldSpec initial{"taylor_green", 1.0, ""};
    FieldSpec forcing{"zero", 0.0, ""};
    TimeScheme scheme = TimeScheme::ImexCnHeun;
    OptimizerConfig optimizer;
    std::vector<double> sweep_alphas{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::string output_dir = "out";
    std::uint64_t seed = 1234;
    unsigned threads = 1;
};

// Parses and fully validates a JSON configuration; every violation is
// reported with its key path (ConfigError carries the whole list).
// cli_mode, when set, supplies or must agree with the "mode" key.
RunConfig parse_config(const std::string& text,
                       std::optional<RunMode> cli_mode = std::nullopt);

RunConfig load_config(const std::string& path,
                      std::optional<RunMode> cli_mode = std::nullopt);

}  // namespace nsalpha
