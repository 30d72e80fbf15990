#include "lobsim/kernels.hpp"

#if defined(LOBSIM_BUILD_AVX2) && defined(__x86_64__)

#include <immintrin.h>

#include <cmath>

#include "lobsim/detmath.hpp"

namespace lobsim::kernels::avx2 {

namespace {

// Vector twin of detmath::exp: identical constants and operation order,
// so each lane reproduces the scalar result bit for bit.
inline __m256d exp_pd(__m256d x) {
    using namespace lobsim::detmath::expdetail;
    const __m256d lo = _mm256_set1_pd(lo_bound);
    const __m256d hi = _mm256_set1_pd(hi_bound);
    const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

    const __m256d k =
        _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(log2e)),
                        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(ln2_hi), xc);
    r = _mm256_fnmadd_pd(k, _mm256_set1_pd(ln2_lo), r);

    __m256d p = _mm256_set1_pd(coeff[0]);
    for (int i = 1; i < 12; ++i)
        p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(coeff[i]));
    const __m256d rr = _mm256_mul_pd(r, r);
    p = _mm256_add_pd(_mm256_fmadd_pd(p, rr, r), _mm256_set1_pd(1.0));

    // 2^k via the exponent field
    const __m128i k32 = _mm256_cvtpd_epi32(k);
    __m256i k64 = _mm256_cvtepi32_epi64(k32);
    k64 = _mm256_add_epi64(k64, _mm256_set1_epi64x(1023));
    const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(k64, 52));
    __m256d res = _mm256_mul_pd(p, scale);

    // saturate exactly like the scalar branch cuts
    const __m256d zero = _mm256_setzero_pd();
    const __m256d inf = _mm256_set1_pd(__builtin_inf());
    res = _mm256_blendv_pd(res, zero, _mm256_cmp_pd(x, lo, _CMP_LT_OQ));
    res = _mm256_blendv_pd(res, inf, _mm256_cmp_pd(x, hi, _CMP_GT_OQ));
    res = _mm256_blendv_pd(res, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
    return res;
}

} // namespace

void cancel_probs(const double* log_px, const double* inv_delta0, std::size_t n,
                  double opp_log, double dir, double coef, double* out) {
    const __m256d vopp = _mm256_set1_pd(opp_log);
    const __m256d vdir = _mm256_set1_pd(dir);
    const __m256d vcoef = _mm256_set1_pd(coef);
    const __m256d one = _mm256_set1_pd(1.0);
    const std::size_t n4 = n & ~static_cast<std::size_t>(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d px = _mm256_loadu_pd(log_px + i);
        const __m256d id0 = _mm256_loadu_pd(inv_delta0 + i);
        const __m256d d = _mm256_mul_pd(vdir, _mm256_sub_pd(vopp, px));
        const __m256d y = _mm256_mul_pd(d, id0);
        const __m256d e = exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), y));
        const __m256d pr = _mm256_mul_pd(vcoef, _mm256_sub_pd(one, e));
        _mm256_storeu_pd(out + i, pr);
    }
    for (std::size_t i = n4; i < n; ++i) {
        const double y = dir * (opp_log - log_px[i]) * inv_delta0[i];
        out[i] = coef * (1.0 - detmath::exp(-y));
    }
}

void seg_sums(const double* y, std::size_t n, double& sy, double& siy, double& syy) {
    __m256d a = _mm256_setzero_pd();
    __m256d b = _mm256_setzero_pd();
    __m256d c = _mm256_setzero_pd();
    __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    const __m256d four = _mm256_set1_pd(4.0);
    const std::size_t n4 = n & ~static_cast<std::size_t>(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d v = _mm256_loadu_pd(y + i);
        a = _mm256_add_pd(a, v);
        b = _mm256_fmadd_pd(idx, v, b);
        c = _mm256_fmadd_pd(v, v, c);
        idx = _mm256_add_pd(idx, four);
    }
    // (lane0+lane2) + (lane1+lane3), same combine as the scalar reference
    const auto hsum = [](__m256d v) {
        const __m128d lo = _mm256_castpd256_pd128(v);
        const __m128d hi = _mm256_extractf128_pd(v, 1);
        const __m128d s = _mm_add_pd(lo, hi); // (l0+l2, l1+l3)
        return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
    };
    double s0 = hsum(a);
    double s1 = hsum(b);
    double s2 = hsum(c);
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

} // namespace lobsim::kernels::avx2

#else

namespace lobsim::kernels::avx2 {
void cancel_probs(const double*, const double*, std::size_t, double, double,
                  double, double*) {}
void seg_sums(const double*, std::size_t, double&, double&, double&) {}
} // namespace lobsim::kernels::avx2

#endif
