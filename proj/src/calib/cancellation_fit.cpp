#include "lobsim/calib/cancellation_fit.hpp"

#include <cmath>

#include "lobsim/detmath.hpp"

namespace lobsim::calib {

double assemble_amplitude(double K1, double K2, double K3, double P_C) {
    if (!(P_C > 0.0)) throw config_error("assemble_amplitude: P(C) must be positive");
    return K1 * K2 * K3 / (P_C * P_C);
}

namespace {

// counts below this carry too much noise into the least-squares fits
constexpr double min_bin_count = 50.0;

} // namespace

CancellationFit fit_cancellation(const CancelHists& h) {
    if (h.canc_total < 1000.0)
        throw config_error("fit_cancellation: need at least 1000 cancellations");
    if (!(h.obs_total > 0.0)) throw config_error("fit_cancellation: no observations");

    CancellationFit fit;
    fit.P_C = h.canc_total / h.obs_total;
    const CancelBins& bins = h.bins;

    // P(C_i | y): conditional probability per bin, K_1 (1 - e^-y) fit
    {
        double num = 0.0, den = 0.0;
        for (std::size_t b = 0; b < h.y_all.size(); ++b) {
            if (h.y_all[b] < min_bin_count) continue;
            const bool overflow = b == static_cast<std::size_t>(bins.y_bins);
            const double y_center =
                overflow ? bins.y_max * 1.5
                         : (static_cast<double>(b) + 0.5) * bins.y_max /
                               static_cast<double>(bins.y_bins);
            const double p = h.y_canc[b] / h.y_all[b];
            const double g = 1.0 - detmath::exp(-y_center);
            num += h.y_all[b] * p * g;
            den += h.y_all[b] * g * g;
            fit.curve_y.push_back({y_center, p, h.y_all[b]});
        }
        if (!(den > 0.0)) throw config_error("fit_cancellation: empty y histogram");
        fit.K1 = num / den;
    }

    // P(C_i | n_imb): linear fit K_2 (n_imb + B)
    {
        double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t b = 0; b < h.imb_all.size(); ++b) {
            if (h.imb_all[b] < min_bin_count) continue;
            const double center =
                (static_cast<double>(b) + 0.5) / static_cast<double>(bins.imb_bins);
            const double p = h.imb_canc[b] / h.imb_all[b];
            const double w = h.imb_all[b];
            sw += w;
            sx += w * center;
            sy += w * p;
            sxx += w * center * center;
            sxy += w * center * p;
            fit.curve_imb.push_back({center, p, w});
        }
        const double det = sw * sxx - sx * sx;
        if (!(det > 0.0) || fit.curve_imb.size() < 3)
            throw config_error("fit_cancellation: imbalance histogram too thin");
        fit.K2 = (sw * sxy - sx * sy) / det;
        const double intercept = (sy - fit.K2 * sx) / sw;
        if (!(fit.K2 > 0.0))
            throw config_error("fit_cancellation: non-positive imbalance slope");
        fit.B = intercept / fit.K2;
    }

    // P(C_i | n_tot): K_3 / n_tot with the slope pinned to -1, plus the free
    // slope as a diagnostic
    {
        double sw = 0.0, s_logk = 0.0;
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t b = 0; b < h.ntot_all.size(); ++b) {
            if (h.ntot_all[b] < min_bin_count || h.ntot_canc[b] <= 0.0) continue;
            const double center = bins.ntot_center(static_cast<int>(b));
            const double p = h.ntot_canc[b] / h.ntot_all[b];
            const double w = h.ntot_all[b];
            const double lx = detmath::log(center);
            const double ly = detmath::log(p);
            sw += w;
            s_logk += w * (ly + lx);
            sx += w * lx;
            sy += w * ly;
            sxx += w * lx * lx;
            sxy += w * lx * ly;
            fit.curve_ntot.push_back({center, p, w});
        }
        if (!(sw > 0.0) || fit.curve_ntot.size() < 2)
            throw config_error("fit_cancellation: n_tot histogram too thin");
        fit.K3 = detmath::exp(s_logk / sw);
        const double det = sw * sxx - sx * sx;
        fit.free_slope = det > 0.0 ? -((sw * sxy - sx * sy) / det) : 1.0;
    }

    fit.A = assemble_amplitude(fit.K1, fit.K2, fit.K3, fit.P_C);

    // direct conditional moments: per imbalance bin,
    // cancellations / sum(g/n) = A (n_imb + B); weighted linear fit
    {
        double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        std::size_t used = 0;
        for (std::size_t b = 0; b < h.imb_gn.size(); ++b) {
            if (h.imb_canc_valid[b] < min_bin_count || !(h.imb_gn[b] > 0.0)) continue;
            const double center =
                (static_cast<double>(b) + 0.5) / static_cast<double>(bins.imb_bins);
            const double ratio = h.imb_canc_valid[b] / h.imb_gn[b];
            const double w = h.imb_canc_valid[b];
            sw += w;
            sx += w * center;
            sy += w * ratio;
            sxx += w * center * center;
            sxy += w * center * ratio;
            ++used;
        }
        const double det = sw * sxx - sx * sx;
        if (used >= 3 && det > 0.0) {
            fit.A_direct = (sw * sxy - sx * sy) / det;
            const double intercept = (sy - fit.A_direct * sx) / sw;
            fit.B_direct = fit.A_direct != 0.0 ? intercept / fit.A_direct : 0.0;
        }
        // thin identification: fall back to the one-dimensional moment with
        // the curve-fit B
        if (!(fit.A_direct > 0.0) || !(fit.B_direct > -0.5) || !(fit.B_direct < 10.0)) {
            fit.B_direct = fit.B;
            fit.A_direct = h.canc_count /
                           (h.sum_g_imb_over_n + fit.B_direct * h.sum_g_over_n);
        }
    }
    return fit;
}

} // namespace lobsim::calib
