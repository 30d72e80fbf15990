#pragma once
#include <cstdint>

#include "lobsim/errors.hpp"

namespace lobsim::flow {

/// The six order-flow parameters plus initial price and seed.
struct FlowParams {
    double H_s = 0.77;      ///< Hurst exponent of the sign series, [0.5, 1)
    double alpha_x = 1.31;  ///< Student degrees of freedom of relative prices
    double sigma_x = 2.4e-3;///< Student scale, log-price units
    double A = 1.12;        ///< cancellation amplitude
    double B = 0.20;        ///< imbalance offset
    double T = 1.0;         ///< tick size, currency units
    double p0 = 3000.0;     ///< initial price, currency units
    std::uint64_t seed = 1;

    void validate() const {
        if (!(H_s >= 0.5 && H_s < 1.0)) throw config_error("H_s must be in [0.5, 1)");
        if (!(alpha_x > 0.0)) throw config_error("alpha_x must be positive");
        if (!(sigma_x > 0.0)) throw config_error("sigma_x must be positive");
        if (!(A >= 0.0)) throw config_error("A must be nonnegative");
        if (!(B >= 0.0)) throw config_error("B must be nonnegative");
        if (!(T > 0.0)) throw config_error("T must be positive");
        if (!(p0 > 0.0)) throw config_error("p0 must be positive");
    }
};

/// Parameters of the hidden-order sign model: latent metaorders with
/// power-law sizes executed one unit at a time from a fixed-size pool.
struct HiddenOrderParams {
    double beta = 1.59;  ///< size tail exponent; sign memory decays as lag^-(beta-1)
    int pool_size = 20;  ///< concurrently active hidden orders
    double max_size = 1e9;

    void validate() const {
        if (!(beta > 1.0)) throw config_error("beta must exceed 1 (integrable sizes)");
        if (pool_size < 1) throw config_error("pool_size must be at least 1");
    }
};

/// Inputs of the per-order cancellation probability.
struct CancellationInputs {
    double y = 1.0;      ///< Delta(t) / Delta(0), >= 0
    double n_imb = 0.5;  ///< same-side order fraction, in [0, 1]
    std::int64_t n_tot = 1;
};

} // namespace lobsim::flow
