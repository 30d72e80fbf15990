#pragma once
#include <cstdint>

// Bit-reproducible elementary functions.
//
// Every arithmetic step is a single IEEE-754 operation in a fixed order, so
// results do not depend on the libm implementation, optimization level or
// platform (the build disables FP contraction; fma is always explicit).
// The AVX2 kernels evaluate the same operation sequence lane-wise, which is
// what makes scalar/SIMD equivalence testable at the bit level.

namespace lobsim::detmath {

/// exp(x). Flushes to 0 below -708, +inf above 709. ~1 ulp.
double exp(double x) noexcept;

/// Natural log. log(0) = -inf, log(x<0) = NaN. ~1 ulp.
double log(double x) noexcept;

/// sin(pi*t) and cos(pi*t) for t in [-2^52, 2^52].
void sincospi(double t, double& s, double& c) noexcept;

/// x^y for x > 0 via exp(y*log(x)); ~2 ulp relative.
double pow(double x, double y) noexcept;

// Shared exp constants; the AVX2 kernel replays exactly this scheme.
namespace expdetail {
inline constexpr double log2e   = 1.4426950408889634074;
inline constexpr double ln2_hi  = 6.93147180369123816490e-01;
inline constexpr double ln2_lo  = 1.90821492927058770002e-10;
inline constexpr double lo_bound = -708.0; // exp() == 0 below
inline constexpr double hi_bound = 709.0;  // exp() == +inf above
// Taylor coefficients 1/13! .. 1/2!, consumed by Horner from highest degree.
inline constexpr double coeff[12] = {
    1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
    1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
    1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        1.0 / 2.0,
};
} // namespace expdetail

} // namespace lobsim::detmath
