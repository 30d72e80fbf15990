#include "lobsim/flow/cancellation.hpp"

#include <algorithm>

#include "lobsim/detmath.hpp"

namespace lobsim::flow {

double cancel_prob(const CancellationInputs& in, double A, double B) {
    if (in.n_tot < 1) throw config_error("cancel_prob: n_tot must be at least 1");
    if (!(in.y >= 0.0)) throw config_error("cancel_prob: y must be nonnegative");
    if (!(in.n_imb >= 0.0 && in.n_imb <= 1.0))
        throw config_error("cancel_prob: n_imb must be in [0,1]");
    const double p =
        A * (1.0 - detmath::exp(-in.y)) * (in.n_imb + B) / static_cast<double>(in.n_tot);
    return std::min(1.0, p);
}

} // namespace lobsim::flow
