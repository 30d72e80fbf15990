#pragma once
#include <string>

#include "lobsim/calib/cancellation_fit.hpp"
#include "lobsim/calib/events.hpp"
#include "lobsim/calib/placement_fit.hpp"
#include "lobsim/stats/hurst.hpp"

namespace lobsim::calib {

struct CalibConfig {
    FilterRules rules;
    CancelBins cancel_bins;
    double s0 = 0.0;              ///< spread condition for the P* reconstruction
    double tick_override = 0.0;   ///< 0 = estimate from the data
    bool logical_time = true;     ///< timestamps count order placements
    /// Censor boundary of a market order's unobserved draw: the spread
    /// itself, or spread - T/p when the one-tick window also transacts.
    bool censor_at_tick_window = false;
    std::size_t pstar_bins = 25;
    std::size_t curve_bins = 20;
};

/// Everything the parameter report needs: the Table-2 column set
/// (H_s, alpha_x, sigma_x, A, B, T) plus fit diagnostics and curves.
struct CalibrationReport {
    double H_s = 0.0;
    stats::HurstEstimate hurst;
    PlacementFit placement;
    PstarDensity pstar;
    CancellationFit cancellation;
    std::vector<TransactionCurveBin> transaction_curve;
    FilterCounts filters;
    double tick = 0.0;
    std::size_t n_events = 0;
    std::size_t n_placements = 0;
    double realized_transaction_rate = 0.0;
};

/// Sign sequence of all placements (limit and market pooled) fed to DFA.
stats::HurstEstimate calibrate_hurst(std::span<const PlacementRow> placements);

/// Full pipeline over a replayed event log.
CalibrationReport calibrate(std::span<const OrderEvent> events, const CalibConfig& cfg);

/// Convenience: load + calibrate.
CalibrationReport calibrate_file(const std::string& events_path, const CalibConfig& cfg);

} // namespace lobsim::calib
