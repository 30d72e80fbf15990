#pragma once
#include "lobsim/flow/params.hpp"

namespace lobsim::flow {

/// Per-order cancellation probability per order-placement step:
/// min(1, A * (1 - e^-y) * (n_imb + B) / n_tot).
/// Increasing in y and n_imb, proportional to 1/n_tot, zero at y = 0.
double cancel_prob(const CancellationInputs& in, double A, double B);

} // namespace lobsim::flow
