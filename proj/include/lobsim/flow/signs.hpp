#pragma once
#include <cstdint>
#include <vector>

#include "lobsim/flow/params.hpp"
#include "lobsim/rng.hpp"

namespace lobsim::flow {

/// Signs (+1/-1) of an exact fractional-Gaussian-noise sample with Hurst
/// exponent H in [0.5, 1). Circulant-embedding spectral synthesis; falls back
/// to the Hosking recursion if the embedding is not nonnegative definite
/// (does not happen for fGn in practice, but the path is kept and tested).
std::vector<std::int8_t> gen_signs_fgn(std::size_t n, double H, std::uint64_t seed);

/// The underlying Gaussian sample itself (unit variance); test support and
/// estimator oracles.
std::vector<double> fgn_sample(std::size_t n, double H, std::uint64_t seed);

/// Exact O(n^2) sequential fGn sampler (Hosking recursion).
std::vector<double> fgn_sample_hosking(std::size_t n, double H, std::uint64_t seed);

/// Signs from superposed hidden orders: IID arrivals, Pareto(beta) sizes,
/// one uniformly chosen active order executes per step. Autocorrelation
/// decays as lag^-(beta-1).
std::vector<std::int8_t> gen_signs_hidden_order(std::size_t n, const HiddenOrderParams& p,
                                                std::uint64_t seed);

} // namespace lobsim::flow
