#include "lobsim/flow/placement.hpp"

#include <cmath>

#include "lobsim/detmath.hpp"
#include "lobsim/flow/student.hpp"

namespace lobsim::flow::student {

namespace {

// Regularized incomplete beta I_x(a, b) by Lentz continued fraction.
double betacf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

double inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lnbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front =
        detmath::exp(a * detmath::log(x) + b * detmath::log(1.0 - x) - lnbeta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

} // namespace

double ccdf_standard(double z, double nu) {
    if (z == 0.0) return 0.5;
    if (z < 0.0) return 1.0 - ccdf_standard(-z, nu);
    const double x = nu / (nu + z * z);
    return 0.5 * inc_beta(0.5 * nu, 0.5, x);
}

double log_pdf(double x, double nu, double sigma) {
    constexpr double ln_pi = 1.1447298858494001741;
    const double u = x / sigma;
    const double norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                        0.5 * (detmath::log(nu) + ln_pi) - detmath::log(sigma);
    return norm - 0.5 * (nu + 1.0) * std::log1p(u * u / nu);
}

double pdf(double x, double nu, double sigma) { return detmath::exp(log_pdf(x, nu, sigma)); }

double upper_quantile_standard(double p, double nu) {
    if (!(p > 0.0 && p < 1.0)) throw config_error("quantile: p must be in (0,1)");
    double lo = 0.0, hi = 1.0;
    if (p >= 0.5) { // negative quantile by symmetry
        return -upper_quantile_standard(1.0 - p, nu);
    }
    while (ccdf_standard(hi, nu) > p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ccdf_standard(mid, nu) > p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace lobsim::flow::student

namespace lobsim::flow {

double sample_rel_price(double sigma_x, double alpha_x, Rng& rng) {
    if (!(sigma_x > 0.0)) throw config_error("sigma_x must be positive");
    if (!(alpha_x > 0.0)) throw config_error("alpha_x must be positive");
    return sigma_x * rng.student_t(alpha_x);
}

Classified classify_order(double x, const lob::Quotes& q, lob::Side side,
                          const lob::TickGrid& grid, ThresholdMode mode) {
    if (mode == ThresholdMode::TickCorrected) {
        const double p_mid = detmath::exp(q.mid_log);
        if (x >= q.spread - grid.tick / p_mid) return Classified{true, 0};
    } else {
        if (x >= q.spread) return Classified{true, 0};
    }

    const double log_limit =
        side == lob::Side::Buy ? q.bid_log + x : q.ask_log - x;
    // Round away from the opposite best: buy prices floor, sell prices ceil.
    // Rounding both sides down drags the whole price level lower by about
    // half a tick per placement and the level decays without bound; outward
    // rounding is the stationary choice. Student tails occasionally reach
    // prices below one tick or far beyond any sane level, so the tick index
    // is clamped to [1, 2^50]. The 1e-12 nudges keep grid-exact log prices
    // from shifting a tick after the log/exp round trip.
    const double price = detmath::exp(std::min(log_limit, 700.0));
    const double raw = side == lob::Side::Buy
                           ? std::floor(price / grid.tick * (1.0 + 1e-12))
                           : std::ceil(price / grid.tick * (1.0 - 1e-12));
    constexpr double max_ticks = 1125899906842624.0; // 2^50
    const std::int64_t ticks =
        raw < 1.0 ? 1 : static_cast<std::int64_t>(std::min(raw, max_ticks));

    // rounding down can cross or lock a best quote; those fills are market orders
    if (side == lob::Side::Buy && ticks >= q.ask_ticks) return Classified{true, 0};
    if (side == lob::Side::Sell && ticks <= q.bid_ticks) return Classified{true, 0};
    return Classified{false, ticks};
}

double transaction_prob(double s, double sigma_x, double alpha_x) {
    if (!(s >= 0.0)) throw config_error("transaction_prob: spread must be nonnegative");
    if (!(sigma_x > 0.0) || !(alpha_x > 0.0))
        throw config_error("transaction_prob: invalid Student parameters");
    return student::ccdf(s, alpha_x, sigma_x);
}

} // namespace lobsim::flow
