#pragma once
#include <cstdint>
#include <vector>

namespace lobsim::sim {

struct LifetimeRecord {
    std::int64_t tau = 0;
    bool cancelled = false; ///< false = executed
};

struct Diagnostics {
    std::uint64_t placed_limits = 0;
    std::uint64_t executed = 0;
    std::uint64_t cancelled = 0;
    std::uint64_t rejected_executions = 0;
    std::uint64_t rejected_cancellations = 0;
    double realized_transaction_rate = 0.0; ///< post-warmup market-order fraction
    double mean_ntot = 0.0;
    std::size_t min_side_depth = 0;
    bool divergent = false;
    std::int64_t steps_run = 0;
};

/// Per-step series (post-warmup; row i is caused by step t[i]) plus lifetime
/// records and run diagnostics.
struct SimOutput {
    std::vector<std::int64_t> t;
    std::vector<double> returns;       ///< log midprice change produced by the step
    std::vector<double> spreads;       ///< spread immediately before the placement
    std::vector<std::uint8_t> transacted;
    std::vector<std::int32_t> n_tot;   ///< resting orders after the step
    std::vector<LifetimeRecord> lifetimes;
    Diagnostics diag;
};

} // namespace lobsim::sim
