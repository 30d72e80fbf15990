#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lobsim::cli {

// exit codes shared by all subcommands
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_integrity = 3;
inline constexpr int exit_divergence = 4;

struct SimulateOpts {
    std::string config_path;
    std::vector<std::string> sets; ///< repeated --set key=value overrides
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

struct CalibrateOpts {
    std::string events_path;
    std::vector<std::string> sets;
    std::string out_dir;
};

struct SweepOpts {
    std::string mode; ///< "stability" or "tails"
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    int jobs = 0; ///< 0 = hardware concurrency
};

struct AnalyzeOpts {
    std::string series_path;
    std::string out_dir;
};

int cmd_simulate(const SimulateOpts& opts);
int cmd_calibrate(const CalibrateOpts& opts);
int cmd_sweep(const SweepOpts& opts);
int cmd_analyze(const AnalyzeOpts& opts);

/// Resolve an output directory against LOBSIM_OUT_ROOT (relative paths only).
std::string resolve_out_dir(const std::string& out_dir);

} // namespace lobsim::cli
