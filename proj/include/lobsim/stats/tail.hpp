#pragma once
#include <cstdint>
#include <span>
#include <vector>

namespace lobsim::stats {

struct TailEstimate {
    double alpha = 0.0;
    std::size_t k = 0;       ///< tail order statistics used
    double se = 0.0;         ///< alpha / sqrt(k)
    double stability = 0.0;  ///< relative spread of alpha across half/double fractions
    bool unstable = false;   ///< no stable power law across fractions
};

/// Hill estimator on |values| using the top tail_fraction order statistics.
/// Needs >= 1000 samples and 0 < tail_fraction <= 0.1. Nonpositive values are
/// ignored; a degenerate tail (all tail samples equal) is an error.
TailEstimate hill_estimator(std::span<const double> values, double tail_fraction);

/// Pareto-tail MLE above an explicit threshold: alpha = k / sum log(x_i / u)
/// over x_i >= u.
TailEstimate hill_at_threshold(std::span<const double> values, double threshold);

struct LifetimeCause {
    std::int64_t tau;
    bool cancelled; ///< false = executed
};

struct LifetimeFit {
    double gamma_c = 0.0;     ///< CCDF tail exponent via Hill above tau >= 10
    double gamma_se = 0.0;
    double lambda = 0.0;      ///< 1/mean(tau), the Poisson comparison rate
    bool tail_unstable = false;
    std::size_t n = 0;
    struct Bin {
        double lo, hi, center;
        std::size_t count;
        double density;
    };
    std::vector<Bin> density; ///< log-binned lifetime density
};

/// Lifetime distribution of cancelled orders: log-binned density, Hill tail
/// exponent on tau >= 10 (with stability flag), and the Poisson-baseline
/// rate. Requires >= 1000 lifetimes.
LifetimeFit lifetime_distribution(std::span<const std::int64_t> lifetimes);

} // namespace lobsim::stats
