#include "lobsim/stats/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "lobsim/detmath.hpp"
#include "lobsim/errors.hpp"

namespace lobsim::stats {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw config_error("empirical distribution: no samples");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::ccdf(double x) const {
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(sorted_.end() - it) / static_cast<double>(sorted_.size());
}

std::vector<EmpiricalDistribution::DensityBin>
EmpiricalDistribution::log_density(std::size_t n_bins) const {
    const auto first_pos = std::upper_bound(sorted_.begin(), sorted_.end(), 0.0);
    if (first_pos == sorted_.end() || n_bins == 0) return {};
    const double lo = *first_pos;
    const double hi = sorted_.back();
    if (!(hi > lo)) return {};
    const double llo = detmath::log(lo), lhi = detmath::log(hi);
    const double step = (lhi - llo) / static_cast<double>(n_bins);
    const std::size_t n_pos = static_cast<std::size_t>(sorted_.end() - first_pos);

    std::vector<DensityBin> bins;
    bins.reserve(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        const double a = detmath::exp(llo + step * static_cast<double>(b));
        const double z = b + 1 == n_bins
                             ? std::nextafter(hi, hi + 1.0)
                             : detmath::exp(llo + step * static_cast<double>(b + 1));
        const auto ia = std::lower_bound(first_pos, sorted_.end(), a);
        const auto iz = std::lower_bound(first_pos, sorted_.end(), z);
        const auto count = static_cast<std::size_t>(iz - ia);
        DensityBin bin;
        bin.lo = a;
        bin.hi = z;
        bin.center = std::sqrt(a * z);
        bin.count = count;
        bin.density = static_cast<double>(count) / (static_cast<double>(n_pos) * (z - a));
        bins.push_back(bin);
    }
    return bins;
}

Summary summarize(std::span<const double> xs) {
    if (xs.empty()) throw config_error("summarize: empty series");
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    Summary s;
    s.mean = mean;
    s.sd = std::sqrt(ss / static_cast<double>(xs.size()));
    s.n = xs.size();
    s.se_mean = xs.size() >= 10000 ? variance_plot_se(xs)
                                   : s.sd / std::sqrt(static_cast<double>(xs.size()));
    return s;
}

double variance_plot_se(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 10000) throw config_error("variance_plot_se: need at least 1e4 samples");

    const Summary base = [&] {
        double sum = 0.0;
        for (double x : xs) sum += x;
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        Summary s;
        s.mean = mean;
        s.sd = std::sqrt(ss / static_cast<double>(n));
        return s;
    }();
    if (base.sd == 0.0) return 0.0;

    // block-mean variance at geometric block sizes, >= 30 blocks each
    std::vector<double> log_m, log_v;
    const std::size_t max_block = n / 30;
    for (double mf = 1.0; static_cast<std::size_t>(mf) <= max_block; mf *= 1.5) {
        const auto m = static_cast<std::size_t>(mf);
        const std::size_t blocks = n / m;
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t b = 0; b < blocks; ++b) {
            double bm = 0.0;
            for (std::size_t i = b * m; i < (b + 1) * m; ++i) bm += xs[i];
            bm /= static_cast<double>(m);
            s1 += bm;
            s2 += bm * bm;
        }
        const double mu = s1 / static_cast<double>(blocks);
        const double var = s2 / static_cast<double>(blocks) - mu * mu;
        if (var > 0.0) {
            log_m.push_back(detmath::log(static_cast<double>(m)));
            log_v.push_back(detmath::log(var));
        }
    }
    if (log_m.size() < 3) return base.sd / std::sqrt(static_cast<double>(n));

    // least squares over the largest decade of block sizes
    const double cutoff = log_m.back() - detmath::log(10.0);
    std::size_t first = 0;
    while (first + 3 < log_m.size() && log_m[first] < cutoff) ++first;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto cnt = static_cast<double>(log_m.size() - first);
    for (std::size_t i = first; i < log_m.size(); ++i) {
        sx += log_m[i];
        sy += log_v[i];
        sxx += log_m[i] * log_m[i];
        sxy += log_m[i] * log_v[i];
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / cnt;
    // extrapolate the block-mean variance to a single block of size n
    const double log_var_n = intercept + slope * detmath::log(static_cast<double>(n));
    return std::sqrt(detmath::exp(log_var_n));
}

} // namespace lobsim::stats
