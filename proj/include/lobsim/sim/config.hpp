#pragma once
#include <cstdint>
#include <string>

#include "lobsim/flow/params.hpp"
#include "lobsim/flow/placement.hpp"

namespace lobsim::sim {

enum class SignModel { Fgn, HiddenOrder };
enum class CancelModel { Conditional, Poisson };

struct SimConfig {
    flow::FlowParams flow;
    flow::HiddenOrderParams hidden; ///< used when sign_model == HiddenOrder
    SignModel sign_model = SignModel::Fgn;

    std::int64_t n_steps = 100000;
    std::int64_t warmup = 10000;
    int init_depth = 10;          ///< orders per best quote at t = 0
    int init_spread_ticks = 1;
    double length_multiplier = 20.0; ///< run-length factor vs a reference sample
    std::int64_t reference_len = 0;  ///< if set and n_steps == 0, n_steps = multiplier * reference + warmup
    bool record_events = false;

    CancelModel cancel_model = CancelModel::Conditional;
    double poisson_rate = 0.0;    ///< per-order per-step rate for the Poisson ablation
    flow::ThresholdMode threshold = flow::ThresholdMode::PlainSpread;

    std::int64_t ntot_ceiling = 50000;    ///< divergence guard
    std::int64_t ceiling_patience = 10000;///< steps above the ceiling before giving up

    void finalize_and_validate();
};

} // namespace lobsim::sim
