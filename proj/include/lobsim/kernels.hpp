#pragma once
#include <cstddef>

// Data-parallel inner loops, provided as scalar reference implementations and
// AVX2 variants selected once at startup. Both paths execute the identical
// IEEE operation sequence (fixed lane decomposition for reductions, shared
// polynomial for exp), so their outputs are equal bit for bit; the unit tests
// assert exactly that. Set LOBSIM_SIMD=scalar in the environment to force the
// reference path.

namespace lobsim::kernels {

/// out[i] = coef * (1 - exp(-dir * (opp_log - log_px[i]) * inv_delta0[i]))
///
/// One cancellation-sweep side: dir = +1 evaluates buy orders against the
/// best ask, dir = -1 sell orders against the best bid; coef carries the
/// A * (n_imb + B) / n_tot factor, constant per side per sweep.
using cancel_probs_fn = void (*)(const double* log_px, const double* inv_delta0,
                                 std::size_t n, double opp_log, double dir,
                                 double coef, double* out);

/// Segment sums for linear detrending: sy = sum y[i], siy = sum i*y[i],
/// syy = sum y[i]^2, i = 0..n-1. Accumulated in four index-mod-4 partial
/// sums combined as (a0+a2)+(a1+a3), remainder added sequentially.
using seg_sums_fn = void (*)(const double* y, std::size_t n, double& sy,
                             double& siy, double& syy);

struct Funcs {
    cancel_probs_fn cancel_probs;
    seg_sums_fn seg_sums;
};

/// Runtime-selected implementation (AVX2+FMA when available, else scalar).
const Funcs& active();
const char* active_name();

namespace scalar {
void cancel_probs(const double* log_px, const double* inv_delta0, std::size_t n,
                  double opp_log, double dir, double coef, double* out);
void seg_sums(const double* y, std::size_t n, double& sy, double& siy, double& syy);
}

bool avx2_available();
namespace avx2 {
// Defined only when built for x86-64; call only if avx2_available().
void cancel_probs(const double* log_px, const double* inv_delta0, std::size_t n,
                  double opp_log, double dir, double coef, double* out);
void seg_sums(const double* y, std::size_t n, double& sy, double& siy, double& syy);
}

} // namespace lobsim::kernels
