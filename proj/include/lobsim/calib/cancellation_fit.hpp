#pragma once
#include <vector>

#include "lobsim/calib/events.hpp"

namespace lobsim::calib {

struct CurvePoint {
    double x = 0.0;      ///< bin center (y, n_imb or n_tot)
    double prob = 0.0;   ///< conditional per-order cancellation probability
    double count = 0.0;  ///< observations in the bin
};

/// The three-factor cancellation fit assembled by the Bayes-rule histogram
/// construction: P(C_i | v) per conditioning variable, then
/// K_1 (1 - e^-y), K_2 (n_imb + B), K_3 / n_tot least-squares fits and
/// A = K_1 K_2 K_3 / P(C)^2 (an identity of the construction).
struct CancellationFit {
    double K1 = 0.0;
    double K2 = 0.0;
    double K3 = 0.0;
    double B = 0.0;       ///< from the linear imbalance fit, intercept/slope
    double P_C = 0.0;
    double A = 0.0;       ///< K1 K2 K3 / P(C)^2, exactly
    double free_slope = 0.0; ///< unpinned log-log slope of P(C_i | n_tot)
    std::vector<CurvePoint> curve_y;
    std::vector<CurvePoint> curve_imb;
    std::vector<CurvePoint> curve_ntot;

    // Direct moment estimates of the combined model. The factorized identity
    // above inherits bias whenever y, n_imb and n_tot are correlated in the
    // standing book; matching E[cancel] and E[cancel * n_imb] against the
    // model instead stays consistent, so the parameter report quotes these.
    double A_direct = 0.0;
    double B_direct = 0.0;
};

/// Assemble A from already-fitted factors (the identity above).
double assemble_amplitude(double K1, double K2, double K3, double P_C);

/// Fit from replay histograms. Throws config_error when the log records
/// fewer than 1000 cancellations.
CancellationFit fit_cancellation(const CancelHists& hists);

} // namespace lobsim::calib
