#include "lobsim/calib/placement_fit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lobsim/detmath.hpp"
#include "lobsim/flow/student.hpp"

namespace lobsim::calib {

FilteredPlacements filter_events(std::span<const PlacementRow> rows, const FilterRules& rules) {
    FilteredPlacements out;
    out.rows.reserve(rows.size());

    // seconds with more than one placement (timestamps floor to seconds)
    std::map<double, int> per_second;
    if (rules.time_filters)
        for (const PlacementRow& r : rows) per_second[std::floor(r.t)] += 1;

    for (const PlacementRow& r : rows) {
        if (!r.x_valid && !r.market) {
            ++out.counts.by_missing_context;
            continue;
        }
        if (r.p_mid <= 0.0) {
            ++out.counts.by_missing_context;
            continue;
        }
        if (r.size > rules.max_size) {
            ++out.counts.by_size;
            continue;
        }
        if (r.spread_ticks < 0 || r.spread_ticks > rules.max_spread_ticks) {
            ++out.counts.by_spread;
            continue;
        }
        if (rules.time_filters) {
            if (per_second[std::floor(r.t)] > 1) {
                ++out.counts.by_same_second;
                continue;
            }
            if (!r.market && r.t - r.t_last_widen < rules.stale_window) {
                ++out.counts.by_stale_quote;
                continue;
            }
        }
        out.rows.push_back(r);
        ++out.counts.kept;
    }
    return out;
}

PstarDensity reconstruct_pstar(std::span<const PlacementRow> rows, double s0,
                               std::size_t bins_per_side) {
    PstarDensity out;
    out.s0 = s0;

    std::vector<double> thresholds; // s - T/p over all surviving placements
    for (const PlacementRow& r : rows) {
        if (r.spread <= s0) continue;
        thresholds.push_back(r.spread - r.tick_over_p);
        if (!r.market && r.x_valid && r.x < r.spread - r.tick_over_p) out.x.push_back(r.x);
    }
    if (out.x.size() < 100) throw config_error("reconstruct_pstar: too few effective limit orders");
    std::sort(thresholds.begin(), thresholds.end());
    out.n_threshold = thresholds.size();

    const auto n_total = static_cast<double>(thresholds.size());
    out.w.reserve(out.x.size());
    for (double xj : out.x) {
        const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), xj);
        const auto above = static_cast<double>(thresholds.end() - it);
        out.w.push_back(n_total / above); // above >= 1: the point's own threshold
    }

    // symmetric log-spaced bins in |x| plus a linear bin around zero
    double amax = 0.0;
    std::vector<double> absx;
    absx.reserve(out.x.size());
    for (double v : out.x) {
        absx.push_back(std::fabs(v));
        amax = std::max(amax, std::fabs(v));
    }
    std::sort(absx.begin(), absx.end());
    double amin = absx[absx.size() / 1000]; // skip the bottom 0.1%
    amin = std::max(amin, amax * 1e-9);
    if (!(amin > 0.0) || !(amax > amin))
        throw config_error("reconstruct_pstar: degenerate x sample");

    std::vector<double> edges; // ascending, symmetric around the center bin
    for (std::size_t b = 0; b <= bins_per_side; ++b) {
        const double e = amin * detmath::pow(amax / amin,
                                             static_cast<double>(b) /
                                                 static_cast<double>(bins_per_side));
        edges.push_back(e);
    }
    std::vector<double> full_edges;
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) full_edges.push_back(-*it);
    for (double e : edges) full_edges.push_back(e);
    full_edges.back() = std::nextafter(amax, 2.0 * amax);
    full_edges.front() = -full_edges.back();

    out.bins.resize(full_edges.size() - 1);
    for (std::size_t b = 0; b + 1 < full_edges.size(); ++b) {
        out.bins[b].lo = full_edges[b];
        out.bins[b].hi = full_edges[b + 1];
        out.bins[b].center = 0.5 * (full_edges[b] + full_edges[b + 1]);
    }
    for (std::size_t j = 0; j < out.x.size(); ++j) {
        const auto it = std::upper_bound(full_edges.begin(), full_edges.end(), out.x[j]);
        if (it == full_edges.begin() || it == full_edges.end()) continue;
        const auto b = static_cast<std::size_t>(it - full_edges.begin() - 1);
        out.bins[b].count += 1;
        out.bins[b].weight_mass += out.w[j];
    }
    // w = N / count is self-normalizing: E[sum of w over a bin] = N * P*(bin),
    // so dividing by N keeps the estimate unbiased; mass beyond the largest
    // observable threshold shows up as total mass slightly below one rather
    // than inflating every bin.
    for (PstarBin& b : out.bins)
        b.density = b.weight_mass / (n_total * (b.hi - b.lo));
    return out;
}

namespace {

// d/dlog(sigma) of the weighted log likelihood, strictly decreasing in sigma.
double dll_dlogsigma(std::span<const double> x, std::span<const double> w, double nu,
                     double sigma) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = x[i] / sigma;
        const double u2 = u * u;
        acc += w[i] * ((nu + 1.0) * u2 / (nu + u2) - 1.0);
    }
    return acc;
}

double profile_sigma(std::span<const double> x, std::span<const double> w, double nu,
                     double lo, double hi) {
    double flo = dll_dlogsigma(x, w, nu, lo);
    double fhi = dll_dlogsigma(x, w, nu, hi);
    if (flo < 0.0 || fhi > 0.0)
        throw config_error("fit_student: cannot bracket the scale (degenerate sample?)");
    for (int i = 0; i < 100; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (dll_dlogsigma(x, w, nu, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return std::sqrt(lo * hi);
}

double loglik(std::span<const double> x, std::span<const double> w, double nu, double sigma) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += w[i] * flow::student::log_pdf(x[i], nu, sigma);
    return acc;
}

} // namespace

PlacementFit fit_student(std::span<const double> x, std::span<const double> w) {
    if (x.size() != w.size()) throw config_error("fit_student: x/w size mismatch");
    if (x.size() < 1000) throw config_error("fit_student: need at least 1000 samples");

    std::vector<double> absx;
    absx.reserve(x.size());
    for (double v : x) absx.push_back(std::fabs(v));
    std::sort(absx.begin(), absx.end());
    const double q25 = absx[absx.size() / 4];
    const double q99 = absx[absx.size() * 99 / 100];
    if (!(q99 > 0.0)) throw config_error("fit_student: degenerate sample");
    const double sig_lo = std::max(q25 * 1e-2, 1e-300);
    const double sig_hi = q99 * 1e2;

    constexpr double nu_min = 0.2, nu_max = 64.0;
    const auto profile = [&](double nu) {
        const double sigma = profile_sigma(x, w, nu, sig_lo, sig_hi);
        return std::pair<double, double>(loglik(x, w, nu, sigma), sigma);
    };

    // golden-section maximization over log nu
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = detmath::log(nu_min), b = detmath::log(nu_max);
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    auto [f1, s1] = profile(detmath::exp(c1));
    auto [f2, s2] = profile(detmath::exp(c2));
    for (int i = 0; i < 60; ++i) {
        if (f1 < f2) {
            a = c1;
            c1 = c2;
            f1 = f2;
            s1 = s2;
            c2 = a + gr * (b - a);
            std::tie(f2, s2) = profile(detmath::exp(c2));
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            s2 = s1;
            c1 = b - gr * (b - a);
            std::tie(f1, s1) = profile(detmath::exp(c1));
        }
    }

    PlacementFit fit;
    fit.alpha_x = detmath::exp(f1 > f2 ? c1 : c2);
    fit.sigma_x = f1 > f2 ? s1 : s2;
    fit.log_lik = std::max(f1, f2);
    fit.n = x.size();
    fit.converged = true;
    fit.nu_at_bound = fit.alpha_x > 50.0 || fit.alpha_x < 0.21;
    return fit;
}

PlacementFit fit_student(std::span<const double> x) {
    const std::vector<double> w(x.size(), 1.0);
    return fit_student(x, w);
}

namespace {

// censoring thresholds collapsed to a quantile grid so each likelihood
// evaluation costs O(bins) tail probabilities instead of O(n)
struct CensorGrid {
    std::vector<double> value;
    std::vector<double> count;
};

CensorGrid make_censor_grid(std::span<const double> thr, std::size_t n_bins) {
    std::vector<double> sorted(thr.begin(), thr.end());
    std::sort(sorted.begin(), sorted.end());
    CensorGrid grid;
    const std::size_t per = std::max<std::size_t>(1, sorted.size() / n_bins);
    for (std::size_t i = 0; i < sorted.size(); i += per) {
        const std::size_t j = std::min(i + per, sorted.size());
        double acc = 0.0;
        for (std::size_t k = i; k < j; ++k) acc += sorted[k];
        grid.value.push_back(acc / static_cast<double>(j - i));
        grid.count.push_back(static_cast<double>(j - i));
    }
    return grid;
}

double censored_loglik(std::span<const double> x2, const CensorGrid& grid, double nu,
                       double sigma) {
    constexpr double ln_pi = 1.1447298858494001741;
    const double norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                        0.5 * (detmath::log(nu) + ln_pi) - detmath::log(sigma);
    const double inv = 1.0 / (nu * sigma * sigma);
    double tail = 0.0;
    for (double q : x2) tail += std::log1p(q * inv);
    double acc = static_cast<double>(x2.size()) * norm - 0.5 * (nu + 1.0) * tail;
    for (std::size_t b = 0; b < grid.value.size(); ++b) {
        const double q = flow::student::ccdf(grid.value[b], nu, sigma);
        acc += grid.count[b] * detmath::log(std::max(q, 1e-300));
    }
    return acc;
}

} // namespace

PlacementFit fit_student_censored(std::span<const double> x,
                                  std::span<const double> censor_thresholds) {
    if (x.size() < 1000) throw config_error("fit_student_censored: need at least 1000 samples");

    // deterministic stride subsample to bound the optimization cost
    constexpr std::size_t cap = 400000;
    std::vector<double> xs;
    if (x.size() > cap) {
        const std::size_t stride = (x.size() + cap - 1) / cap;
        for (std::size_t i = 0; i < x.size(); i += stride) xs.push_back(x[i]);
    } else {
        xs.assign(x.begin(), x.end());
    }
    std::vector<double> thr;
    const double thr_scale =
        x.size() > cap ? static_cast<double>(xs.size()) / static_cast<double>(x.size()) : 1.0;
    thr.assign(censor_thresholds.begin(), censor_thresholds.end());

    CensorGrid grid = make_censor_grid(thr, 256);
    for (double& c : grid.count) c *= thr_scale; // keep censored/observed balance

    std::vector<double> absx;
    absx.reserve(xs.size());
    for (double v : xs) absx.push_back(std::fabs(v));
    std::sort(absx.begin(), absx.end());
    const double q99 = absx[absx.size() * 99 / 100];
    if (!(q99 > 0.0)) throw config_error("fit_student_censored: degenerate sample");
    const double sig_lo = std::max(absx[absx.size() / 4] * 1e-2, 1e-300);
    const double sig_hi = q99 * 1e2;

    std::vector<double> x2(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) x2[i] = xs[i] * xs[i];

    constexpr double nu_min = 0.2, nu_max = 64.0;
    const auto profile = [&](double nu) {
        // golden section on log sigma; the censored term breaks the clean
        // monotone score so a derivative-free search is safer
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = detmath::log(sig_lo), b = detmath::log(sig_hi);
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double f1 = censored_loglik(x2, grid, nu, detmath::exp(c1));
        double f2 = censored_loglik(x2, grid, nu, detmath::exp(c2));
        for (int i = 0; i < 40; ++i) {
            if (f1 < f2) {
                a = c1;
                c1 = c2;
                f1 = f2;
                c2 = a + gr * (b - a);
                f2 = censored_loglik(x2, grid, nu, detmath::exp(c2));
            } else {
                b = c2;
                c2 = c1;
                f2 = f1;
                c1 = b - gr * (b - a);
                f1 = censored_loglik(x2, grid, nu, detmath::exp(c1));
            }
        }
        const double ls = f1 > f2 ? c1 : c2;
        return std::pair<double, double>(std::max(f1, f2), detmath::exp(ls));
    };

    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = detmath::log(nu_min), b = detmath::log(nu_max);
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    auto [f1, s1] = profile(detmath::exp(c1));
    auto [f2, s2] = profile(detmath::exp(c2));
    for (int i = 0; i < 30; ++i) {
        if (f1 < f2) {
            a = c1;
            c1 = c2;
            f1 = f2;
            s1 = s2;
            c2 = a + gr * (b - a);
            std::tie(f2, s2) = profile(detmath::exp(c2));
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            s2 = s1;
            c1 = b - gr * (b - a);
            std::tie(f1, s1) = profile(detmath::exp(c1));
        }
    }

    PlacementFit fit;
    fit.alpha_x = detmath::exp(f1 > f2 ? c1 : c2);
    fit.sigma_x = f1 > f2 ? s1 : s2;
    fit.log_lik = std::max(f1, f2);
    fit.n = xs.size();
    fit.converged = true;
    fit.nu_at_bound = fit.alpha_x > 50.0 || fit.alpha_x < 0.21;
    return fit;
}

std::vector<TransactionCurveBin> empirical_transaction_curve(
    std::span<const PlacementRow> rows, double sigma_x, double alpha_x,
    std::size_t n_bins) {
    std::vector<const PlacementRow*> usable;
    for (const PlacementRow& r : rows)
        if (r.spread > 0.0) usable.push_back(&r);
    if (usable.size() < 100)
        throw config_error("transaction curve: too few placements with spread context");

    double smin = 1e300, smax = 0.0;
    for (const PlacementRow* r : usable) {
        smin = std::min(smin, r->spread);
        smax = std::max(smax, r->spread);
    }
    if (!(smax > smin)) throw config_error("transaction curve: degenerate spreads");

    const double llo = detmath::log(smin);
    const double step = (detmath::log(smax) - llo) / static_cast<double>(n_bins);
    std::vector<TransactionCurveBin> bins(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        bins[b].s_lo = detmath::exp(llo + step * static_cast<double>(b));
        bins[b].s_hi = detmath::exp(llo + step * static_cast<double>(b + 1));
        bins[b].s_center = std::sqrt(bins[b].s_lo * bins[b].s_hi);
    }
    std::vector<double> pred_acc(n_bins, 0.0), emp_acc(n_bins, 0.0);
    for (const PlacementRow* r : usable) {
        auto b = step > 0.0 ? static_cast<std::size_t>((detmath::log(r->spread) - llo) / step)
                            : std::size_t{0};
        if (b >= n_bins) b = n_bins - 1;
        bins[b].n += 1;
        emp_acc[b] += r->market ? 1.0 : 0.0;
        pred_acc[b] +=
            flow::student::ccdf(r->spread - r->tick_over_p, alpha_x, sigma_x);
    }
    for (std::size_t b = 0; b < n_bins; ++b) {
        if (bins[b].n == 0) continue;
        const auto n = static_cast<double>(bins[b].n);
        bins[b].empirical = emp_acc[b] / n;
        bins[b].empirical_se =
            std::sqrt(std::max(bins[b].empirical * (1.0 - bins[b].empirical), 0.0) / n);
        bins[b].predicted = pred_acc[b] / n;
    }
    return bins;
}

} // namespace lobsim::calib
