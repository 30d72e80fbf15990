#include "lobsim/stats/tail.hpp"

#include <algorithm>
#include <cmath>

#include "lobsim/detmath.hpp"
#include "lobsim/errors.hpp"

namespace lobsim::stats {

namespace {

// Hill statistic on the top-k absolute order statistics (no diagnostics).
double hill_alpha(const std::vector<double>& sorted_abs, std::size_t k) {
    const std::size_t n = sorted_abs.size();
    const double x_ref = sorted_abs[n - k - 1];
    if (!(x_ref > 0.0)) throw config_error("hill: tail reaches nonpositive values");
    double acc = 0.0;
    for (std::size_t i = n - k; i < n; ++i)
        acc += detmath::log(sorted_abs[i] / x_ref);
    if (!(acc > 0.0)) throw config_error("hill: degenerate tail (all samples equal)");
    return static_cast<double>(k) / acc;
}

} // namespace

TailEstimate hill_estimator(std::span<const double> values, double tail_fraction) {
    if (values.size() < 1000) throw config_error("hill: need at least 1000 samples");
    if (!(tail_fraction > 0.0 && tail_fraction <= 0.1))
        throw config_error("hill: tail fraction must be in (0, 0.1]");

    std::vector<double> abs_sorted;
    abs_sorted.reserve(values.size());
    for (double v : values) abs_sorted.push_back(std::fabs(v));
    std::sort(abs_sorted.begin(), abs_sorted.end());

    const auto k_of = [&](double f) {
        return std::max<std::size_t>(
            10, static_cast<std::size_t>(f * static_cast<double>(abs_sorted.size())));
    };
    const std::size_t k = k_of(tail_fraction);
    if (k + 1 >= abs_sorted.size()) throw config_error("hill: tail larger than sample");

    TailEstimate est;
    est.k = k;
    est.alpha = hill_alpha(abs_sorted, k);
    est.se = est.alpha / std::sqrt(static_cast<double>(k));

    // drift across half/double fractions signals a non-power-law tail
    const std::size_t k_half = k_of(0.5 * tail_fraction);
    const std::size_t k_dbl = std::min(k_of(2.0 * tail_fraction), abs_sorted.size() - 2);
    const double a_half = hill_alpha(abs_sorted, k_half);
    const double a_dbl = hill_alpha(abs_sorted, k_dbl);
    const double lo = std::min({est.alpha, a_half, a_dbl});
    const double hi = std::max({est.alpha, a_half, a_dbl});
    est.stability = (hi - lo) / est.alpha;
    est.unstable = est.stability > 0.25;
    return est;
}

TailEstimate hill_at_threshold(std::span<const double> values, double threshold) {
    if (!(threshold > 0.0)) throw config_error("hill: threshold must be positive");
    double acc = 0.0;
    std::size_t k = 0;
    for (double v : values) {
        const double a = std::fabs(v);
        if (a >= threshold) {
            acc += detmath::log(a / threshold);
            ++k;
        }
    }
    if (k < 10) throw config_error("hill: fewer than 10 tail points above threshold");
    if (!(acc > 0.0)) throw config_error("hill: degenerate tail (all samples equal)");
    TailEstimate est;
    est.k = k;
    est.alpha = static_cast<double>(k) / acc;
    est.se = est.alpha / std::sqrt(static_cast<double>(k));
    return est;
}

LifetimeFit lifetime_distribution(std::span<const std::int64_t> lifetimes) {
    if (lifetimes.size() < 1000)
        throw config_error("lifetime_distribution: need at least 1000 lifetimes");

    LifetimeFit fit;
    fit.n = lifetimes.size();
    double sum = 0.0;
    std::vector<double> taus;
    taus.reserve(lifetimes.size());
    for (std::int64_t t : lifetimes) {
        sum += static_cast<double>(t);
        taus.push_back(static_cast<double>(t));
    }
    fit.lambda = sum > 0.0 ? static_cast<double>(lifetimes.size()) / sum : 0.0;

    // the sub-10 head is not power law; fit the tail above tau = 10
    const TailEstimate t10 = hill_at_threshold(taus, 10.0);
    fit.gamma_c = t10.alpha;
    fit.gamma_se = t10.se;
    // threshold drift diagnostic
    try {
        const double a20 = hill_at_threshold(taus, 20.0).alpha;
        const double a40 = hill_at_threshold(taus, 40.0).alpha;
        const double lo = std::min({fit.gamma_c, a20, a40});
        const double hi = std::max({fit.gamma_c, a20, a40});
        fit.tail_unstable = (hi - lo) / fit.gamma_c > 0.25;
    } catch (const config_error&) {
        fit.tail_unstable = true;
    }

    std::vector<double> pos(taus);
    std::sort(pos.begin(), pos.end());
    const auto first_pos = std::upper_bound(pos.begin(), pos.end(), 0.0);
    if (first_pos != pos.end() && pos.back() > *first_pos) {
        const double lo = *first_pos, hi = pos.back();
        const double llo = detmath::log(lo), lhi = detmath::log(hi);
        const std::size_t nb = 30;
        const double step = (lhi - llo) / static_cast<double>(nb);
        const auto n_pos = static_cast<double>(pos.end() - first_pos);
        for (std::size_t b = 0; b < nb; ++b) {
            const double a = detmath::exp(llo + step * static_cast<double>(b));
            const double z = b + 1 == nb ? std::nextafter(hi, 2.0 * hi)
                                         : detmath::exp(llo + step * static_cast<double>(b + 1));
            const auto ia = std::lower_bound(first_pos, pos.end(), a);
            const auto iz = std::lower_bound(first_pos, pos.end(), z);
            LifetimeFit::Bin bin;
            bin.lo = a;
            bin.hi = z;
            bin.center = std::sqrt(a * z);
            bin.count = static_cast<std::size_t>(iz - ia);
            bin.density = static_cast<double>(bin.count) / (n_pos * (z - a));
            fit.density.push_back(bin);
        }
    }
    return fit;
}

} // namespace lobsim::stats
