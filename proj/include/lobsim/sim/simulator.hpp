#pragma once
#include <memory>

#include "lobsim/lob/book.hpp"
#include "lobsim/sim/config.hpp"
#include "lobsim/sim/output.hpp"

namespace lobsim::sim {

/// Book with init_depth orders on each best quote, init_spread_ticks apart,
/// centered on the tick grid at p0.
lob::OrderBook init_book(const SimConfig& cfg, lob::EventSink* sink = nullptr);

/// One price-formation run: per step generate a sign, draw a relative price,
/// classify and apply the order, then run the cancellation sweep over every
/// resting order. Deterministic given (config, seed).
SimOutput run(const SimConfig& cfg, lob::EventSink* sink = nullptr);

} // namespace lobsim::sim
