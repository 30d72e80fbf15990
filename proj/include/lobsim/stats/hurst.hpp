#pragma once
#include <cstdint>
#include <span>
#include <vector>

namespace lobsim::stats {

struct HurstEstimate {
    double H = 0.5;
    double window_min = 0.0;
    double window_max = 0.0;
    double r2 = 0.0; ///< goodness of the log-log fit
};

/// Detrended fluctuation analysis with linear detrending (DFA1).
/// Windows geometrically spaced over [min_window, max_window]; H is the
/// log-log slope of fluctuation vs window size.
HurstEstimate dfa_hurst(std::span<const double> series, std::size_t min_window,
                        std::size_t max_window);

/// Defaults: windows 10 .. n/10, at least 12 sizes.
HurstEstimate dfa_hurst(std::span<const double> series);

struct SignPersistence {
    std::vector<std::size_t> lags;
    std::vector<double> p_same;     ///< P_tau+ : same sign at lag tau
    std::vector<double> p_opposite; ///< P_tau- = 1 - P_tau+
    double gamma = 0.0;             ///< power-law fit of (P+ - P-) ~ K tau^-gamma
    double K = 0.0;
};

/// Same/opposite-sign agreement frequencies per lag with a power-law fit of
/// the difference. Lags must stay below length/10.
SignPersistence sign_persistence(std::span<const std::int8_t> signs,
                                 std::span<const std::size_t> lags);

} // namespace lobsim::stats
