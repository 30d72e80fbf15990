#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "lobsim/calib/events.hpp"

namespace lobsim::calib {

/// Data-cleaning rules applied to placements before fitting. The two
/// time-based rules (same-second exclusivity and the stale-quote window)
/// only make sense for wall-clock timestamps and are off by default;
/// synthetic logs use logical event time.
struct FilterRules {
    double max_size = 1e6;            ///< shares
    std::int64_t max_spread_ticks = 100;
    bool time_filters = false;
    double stale_window = 5.0;        ///< seconds after a spread increase
};

struct FilterCounts {
    std::size_t kept = 0;
    std::size_t by_size = 0;
    std::size_t by_spread = 0;
    std::size_t by_same_second = 0;
    std::size_t by_stale_quote = 0;
    std::size_t by_missing_context = 0;
};

struct FilteredPlacements {
    std::vector<PlacementRow> rows;
    FilterCounts counts;
};

/// Apply the cleaning rules; idempotent. Rejection counts are reported per rule.
FilteredPlacements filter_events(std::span<const PlacementRow> rows, const FilterRules& rules);

struct PstarBin {
    double lo = 0.0, hi = 0.0, center = 0.0;
    std::size_t count = 0;
    double weight_mass = 0.0;
    double density = 0.0;
};

struct PstarDensity {
    std::vector<PstarBin> bins;   ///< symmetric log-spaced in |x|
    std::vector<double> x;        ///< effective-limit-order sample
    std::vector<double> w;        ///< censoring weights, all >= 1
    double s0 = 0.0;
    std::size_t n_threshold = 0;  ///< placements whose threshold entered the weights
};

/// Weighted reconstruction of the placement density P*(x) from effective
/// limit orders (x < s - T/p), restricted to placements with spread > s0.
/// Each point x_j gets weight N / #{i : s_i - T/p_i > x_j} with the count
/// running over all surviving placements, which undoes the spread censoring.
PstarDensity reconstruct_pstar(std::span<const PlacementRow> rows, double s0,
                               std::size_t bins_per_side = 25);

struct PlacementFit {
    double alpha_x = 0.0;
    double sigma_x = 0.0;
    double s0 = 0.0;
    std::size_t n = 0;
    double log_lik = 0.0;
    bool converged = false;
    bool nu_at_bound = false; ///< dof hit the upper bound: no heavy tail resolved
};

/// Weighted maximum-likelihood fit of a centered Student to (x, w) samples.
/// Throws config_error with diagnostics when the optimizer cannot bracket.
PlacementFit fit_student(std::span<const double> x, std::span<const double> w);
PlacementFit fit_student(std::span<const double> x);

/// Censored maximum likelihood: observed relative prices x plus one
/// right-censoring threshold per market order (the draw exceeded it but was
/// not recorded). Unlike reweighting, this keeps the score balanced beyond
/// the largest observable threshold, which otherwise biases the tail index
/// upward. Large inputs are strided down to ~4e5 points.
PlacementFit fit_student_censored(std::span<const double> x,
                                  std::span<const double> censor_thresholds);

struct TransactionCurveBin {
    double s_lo = 0.0, s_hi = 0.0, s_center = 0.0;
    std::size_t n = 0;
    double empirical = 0.0;
    double empirical_se = 0.0;
    double predicted = 0.0; ///< Student tail above s - T/p, averaged over the bin
};

/// Empirical market-order fraction vs spread, with the model prediction
/// averaged over the observed midprices in each bin.
std::vector<TransactionCurveBin> empirical_transaction_curve(
    std::span<const PlacementRow> rows, double sigma_x, double alpha_x,
    std::size_t n_bins = 20);

} // namespace lobsim::calib
