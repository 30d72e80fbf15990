#include "lobsim/detmath.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace lobsim::detmath {

double exp(double x) noexcept {
    using namespace expdetail;
    if (x != x) return x;
    if (x > hi_bound) return std::numeric_limits<double>::infinity();
    if (x < lo_bound) return 0.0;

    // x = k*ln2 + r, |r| <= ln2/2, with Cody-Waite two-part ln2.
    double k = std::nearbyint(x * log2e); // round-to-nearest-even, matches vroundpd
    double r = std::fma(-k, ln2_hi, x);
    r = std::fma(-k, ln2_lo, r);

    double p = coeff[0];
    for (int i = 1; i < 12; ++i) p = std::fma(p, r, coeff[i]);
    p = std::fma(p, r * r, r) + 1.0;

    // scale by 2^k through the exponent field; k in [-1022, 1023] here
    const std::int64_t ki = static_cast<std::int64_t>(k);
    const double scale = std::bit_cast<double>((ki + 1023) << 52);
    return p * scale;
}

// fdlibm-style log: m in [sqrt(2)/2, sqrt(2)), f = m-1, s = f/(2+f).
namespace {
constexpr double Lg1 = 6.666666666666735130e-01;
constexpr double Lg2 = 3.999999999940941908e-01;
constexpr double Lg3 = 2.857142874366239149e-01;
constexpr double Lg4 = 2.222219843214978396e-01;
constexpr double Lg5 = 1.818357216161805012e-01;
constexpr double Lg6 = 1.531383769920937332e-01;
constexpr double Lg7 = 1.479819860511658591e-01;
constexpr double ln2_hi_l = 6.93147180369123816490e-01;
constexpr double ln2_lo_l = 1.90821492927058770002e-10;
} // namespace

double log(double x) noexcept {
    if (x != x) return x;
    if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x == std::numeric_limits<double>::infinity()) return x;

    int e = 0;
    double m = std::frexp(x, &e); // m in [0.5, 1)
    if (m < 0.70710678118654752440) {
        m += m;
        e -= 1;
    }
    const double f = m - 1.0;
    const double s = f / (2.0 + f);
    const double z = s * s;
    const double w = z * z;
    const double t1 = w * (Lg2 + w * (Lg4 + w * Lg6));
    const double t2 = z * (Lg1 + w * (Lg3 + w * (Lg5 + w * Lg7)));
    const double R = t2 + t1;
    const double hfsq = 0.5 * f * f;
    const double dk = static_cast<double>(e);
    return dk * ln2_hi_l - ((hfsq - (s * (hfsq + R) + dk * ln2_lo_l)) - f);
}

namespace {
constexpr double pi_d = 3.14159265358979323846;

// Taylor cores on |v| <= pi/4, v = pi*u.
double sin_core(double u) noexcept {
    const double v = u * pi_d;
    const double v2 = v * v;
    double p = -1.0 / 355687428096000.0;        // -1/17!
    p = p * v2 + 1.0 / 1307674368000.0;         //  1/15!
    p = p * v2 - 1.0 / 6227020800.0;
    p = p * v2 + 1.0 / 39916800.0;
    p = p * v2 - 1.0 / 362880.0;
    p = p * v2 + 1.0 / 5040.0;
    p = p * v2 - 1.0 / 120.0;
    p = p * v2 + 1.0 / 6.0;
    return v - v * v2 * p;
}

double cos_core(double u) noexcept {
    const double v = u * pi_d;
    const double v2 = v * v;
    double p = 1.0 / 20922789888000.0;          //  1/16!
    p = p * v2 - 1.0 / 87178291200.0;
    p = p * v2 + 1.0 / 479001600.0;
    p = p * v2 - 1.0 / 3628800.0;
    p = p * v2 + 1.0 / 40320.0;
    p = p * v2 - 1.0 / 720.0;
    p = p * v2 + 1.0 / 24.0;
    p = p * v2 - 1.0 / 2.0;
    return 1.0 + v2 * p;
}
} // namespace

void sincospi(double t, double& s, double& c) noexcept {
    const double n = std::nearbyint(t * 2.0);
    const double u = t - 0.5 * n;                    // u in [-1/4, 1/4]
    const auto q = static_cast<std::int64_t>(n) & 3; // quadrant
    const double sc = sin_core(u);
    const double cc = cos_core(u);
    switch (q) {
        case 0: s = sc;  c = cc;  break;
        case 1: s = cc;  c = -sc; break;
        case 2: s = -sc; c = -cc; break;
        default: s = -cc; c = sc; break;
    }
}

double pow(double x, double y) noexcept { return detmath::exp(y * detmath::log(x)); }

} // namespace lobsim::detmath
