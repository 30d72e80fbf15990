#include "lobsim/kernels.hpp"

#include <cmath>

#include "lobsim/detmath.hpp"

namespace lobsim::kernels::scalar {

void cancel_probs(const double* log_px, const double* inv_delta0, std::size_t n,
                  double opp_log, double dir, double coef, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double y = dir * (opp_log - log_px[i]) * inv_delta0[i];
        out[i] = coef * (1.0 - detmath::exp(-y));
    }
}

void seg_sums(const double* y, std::size_t n, double& sy, double& siy, double& syy) {
    double a[4] = {0, 0, 0, 0};   // sum y, per lane
    double b[4] = {0, 0, 0, 0};   // sum i*y
    double c[4] = {0, 0, 0, 0};   // sum y^2
    double idx[4] = {0.0, 1.0, 2.0, 3.0};
    const std::size_t n4 = n & ~static_cast<std::size_t>(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        for (int l = 0; l < 4; ++l) {
            const double v = y[i + l];
            a[l] += v;
            b[l] = std::fma(idx[l], v, b[l]);
            c[l] = std::fma(v, v, c[l]);
            idx[l] += 4.0;
        }
    }
    double s0 = (a[0] + a[2]) + (a[1] + a[3]);
    double s1 = (b[0] + b[2]) + (b[1] + b[3]);
    double s2 = (c[0] + c[2]) + (c[1] + c[3]);
    for (std::size_t i = n4; i < n; ++i) {
        const double v = y[i];
        s0 += v;
        s1 = std::fma(static_cast<double>(i), v, s1);
        s2 = std::fma(v, v, s2);
    }
    sy = s0;
    siy = s1;
    syy = s2;
}

} // namespace lobsim::kernels::scalar
