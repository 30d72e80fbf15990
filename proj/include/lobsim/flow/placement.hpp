#pragma once
#include <cstdint>

#include "lobsim/flow/params.hpp"
#include "lobsim/lob/book.hpp"
#include "lobsim/rng.hpp"

namespace lobsim::flow {

/// Relative log price of a new order: sigma_x-scaled Student draw with
/// alpha_x degrees of freedom, symmetric about the same best.
double sample_rel_price(double sigma_x, double alpha_x, Rng& rng);

struct Classified {
    bool market = false;
    std::int64_t ticks = 0; ///< limit price, valid when !market
};

/// Market-order threshold on the relative price draw. TickCorrected uses
/// x >= s - T/p (the one-tick window at the opposite best produces no
/// resting order); PlainSpread uses x >= s, so draws inside the window
/// floor-round onto the level one tick below the opposite best instead.
/// The distinction only matters at spreads of a few ticks, but it decides
/// whether a tick-pinned spread can cap the transaction rate.
enum class ThresholdMode { TickCorrected, PlainSpread };

/// Decide what a draw x becomes given pre-placement quotes.
///
/// Non-market draws become limit orders at same-best +/- x, rounded down to
/// the grid; if rounding crosses or locks the opposite best the order is
/// reclassified as a market order.
Classified classify_order(double x, const lob::Quotes& q, lob::Side side,
                          const lob::TickGrid& grid,
                          ThresholdMode mode = ThresholdMode::TickCorrected);

/// P_theta(s): probability that a fresh draw transacts at spread s, the
/// upper Student tail at s. Decreasing, 0.5 at s = 0.
double transaction_prob(double s, double sigma_x, double alpha_x);

} // namespace lobsim::flow
