#pragma once
#include <span>
#include <vector>

namespace lobsim::stats {

/// Sorted-sample empirical distribution with CCDF evaluation and optional
/// log-spaced density bins.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> samples);

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

    /// P(X >= x): 1 at/below the minimum sample, <= 1/n above the maximum.
    double ccdf(double x) const;

    struct DensityBin {
        double lo, hi, center;
        std::size_t count;
        double density;
    };
    /// Log-spaced density histogram over the positive samples.
    std::vector<DensityBin> log_density(std::size_t n_bins) const;

private:
    std::vector<double> sorted_;
};

struct Summary {
    double mean = 0.0;
    double sd = 0.0;          ///< population standard deviation
    double se_mean = 0.0;     ///< long-memory-aware error bar (variance plot)
    std::size_t n = 0;
};

/// Mean, population sd and a variance-plot standard error of the mean
/// (plain sd/sqrt(n) when the series is too short for block extrapolation).
Summary summarize(std::span<const double> xs);

/// Standard error of the mean by the variance-plot method: block-mean
/// variances at geometric block sizes, log-log slope over the largest decade,
/// extrapolated to one block of size n. Requires length >= 1e4.
double variance_plot_se(std::span<const double> xs);

} // namespace lobsim::stats
