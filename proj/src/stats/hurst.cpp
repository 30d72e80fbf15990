#include "lobsim/stats/hurst.hpp"

#include <cmath>

#include "lobsim/detmath.hpp"
#include "lobsim/errors.hpp"
#include "lobsim/kernels.hpp"

namespace lobsim::stats {

namespace {

// Mean squared residual of a linear fit over y[0..w), from the kernel's
// three segment sums and closed-form index sums.
double detrended_msq(const double* y, std::size_t w) {
    double sy, siy, syy;
    kernels::active().seg_sums(y, w, sy, siy, syy);
    const double n = static_cast<double>(w);
    const double si = 0.5 * n * (n - 1.0);
    const double sii = (n - 1.0) * n * (2.0 * n - 1.0) / 6.0;
    const double det = n * sii - si * si;
    const double b = (n * siy - si * sy) / det;  // slope
    const double a = (sy - b * si) / n;          // intercept
    // sum (y - a - b i)^2 expanded through the accumulated sums
    const double ss = syy + n * a * a + b * b * sii + 2.0 * (a * b * si - a * sy - b * siy);
    return std::max(ss, 0.0) / n;
}

} // namespace

HurstEstimate dfa_hurst(std::span<const double> series, std::size_t min_window,
                        std::size_t max_window) {
    const std::size_t n = series.size();
    if (n < 1000) throw config_error("dfa: need at least 1000 samples");
    if (min_window < 4 || max_window <= min_window || max_window > n / 2)
        throw config_error("dfa: bad window range");

    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(n);

    std::vector<double> profile(n);
    double acc = 0.0;
    bool constant = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (series[i] != series[0]) constant = false;
        acc += series[i] - mean;
        profile[i] = acc;
    }
    if (constant) throw config_error("dfa: constant series");

    // >= 12 geometrically spaced window sizes
    const double lmin = detmath::log(static_cast<double>(min_window));
    const double lmax = detmath::log(static_cast<double>(max_window));
    const std::size_t n_sizes = std::max<std::size_t>(
        12, static_cast<std::size_t>((lmax - lmin) / detmath::log(2.0) * 4.0));
    std::vector<std::size_t> sizes;
    std::size_t last = 0;
    for (std::size_t i = 0; i < n_sizes; ++i) {
        const double lw = lmin + (lmax - lmin) * static_cast<double>(i) /
                                     static_cast<double>(n_sizes - 1);
        const auto w = static_cast<std::size_t>(std::lround(detmath::exp(lw)));
        if (w > last) {
            sizes.push_back(w);
            last = w;
        }
    }

    std::vector<double> lw, lf;
    for (std::size_t w : sizes) {
        const std::size_t segs = n / w;
        if (segs < 2) continue;
        double msq = 0.0;
        for (std::size_t s = 0; s < segs; ++s) msq += detrended_msq(profile.data() + s * w, w);
        msq /= static_cast<double>(segs);
        if (msq > 0.0) {
            lw.push_back(detmath::log(static_cast<double>(w)));
            lf.push_back(0.5 * detmath::log(msq));
        }
    }
    if (lw.size() < 3) throw config_error("dfa: too few usable window sizes");

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy2 = 0;
    const auto m = static_cast<double>(lw.size());
    for (std::size_t i = 0; i < lw.size(); ++i) {
        sx += lw[i];
        sy += lf[i];
        sxx += lw[i] * lw[i];
        sxy += lw[i] * lf[i];
        syy2 += lf[i] * lf[i];
    }
    HurstEstimate est;
    est.H = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    est.window_min = static_cast<double>(sizes.front());
    est.window_max = static_cast<double>(sizes.back());
    const double vy = syy2 - sy * sy / m;
    const double vexp = est.H * (sxy - sx * sy / m);
    est.r2 = vy > 0.0 ? vexp / vy : 1.0;
    return est;
}

HurstEstimate dfa_hurst(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 1000) throw config_error("dfa: need at least 1000 samples");
    return dfa_hurst(series, 10, std::max<std::size_t>(n / 10, 40));
}

SignPersistence sign_persistence(std::span<const std::int8_t> signs,
                                 std::span<const std::size_t> lags) {
    const std::size_t n = signs.size();
    SignPersistence out;
    for (std::size_t lag : lags) {
        if (lag == 0 || lag >= n / 10)
            throw config_error("sign_persistence: lags must be in [1, n/10)");
        std::size_t same = 0;
        for (std::size_t t = 0; t + lag < n; ++t)
            if (signs[t] == signs[t + lag]) ++same;
        const auto total = static_cast<double>(n - lag);
        const double p = static_cast<double>(same) / total;
        out.lags.push_back(lag);
        out.p_same.push_back(p);
        out.p_opposite.push_back(1.0 - p);
    }

    // fit (P+ - P-) ~ K tau^-gamma over lags with positive excess
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < out.lags.size(); ++i) {
        const double diff = out.p_same[i] - out.p_opposite[i];
        if (diff <= 0.0) continue;
        const double x = detmath::log(static_cast<double>(out.lags[i]));
        const double y = detmath::log(diff);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m >= 3) {
        const auto dm = static_cast<double>(m);
        const double slope = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
        out.gamma = -slope;
        out.K = detmath::exp((sy - slope * sx) / dm);
    }
    return out;
}

} // namespace lobsim::stats
