#include "lobsim/flow/signs.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <utility>

#include "lobsim/detmath.hpp"

namespace lobsim::flow {

namespace {

// fGn autocovariance at lag k for unit-variance noise.
double fgn_gamma(double k, double two_h) {
    if (k == 0.0) return 1.0;
    const double km = k - 1.0, kp = k + 1.0;
    const double a = km == 0.0 ? 0.0 : detmath::pow(km, two_h);
    return 0.5 * (detmath::pow(kp, two_h) - 2.0 * detmath::pow(k, two_h) + a);
}

// In-place iterative radix-2 FFT (forward, unnormalized). Twiddles come from
// detmath::sincospi refreshed every 64 steps of a complex recurrence, keeping
// the transform bit-reproducible without a twiddle table.
void fft_forward(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const double step = -1.0 / static_cast<double>(half); // in half-turns of pi
        double ws, wc;
        detmath::sincospi(step, ws, wc);
        const std::complex<double> wstep(wc, ws);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < half; ++j) {
                if ((j & 63) == 0) {
                    double s, c;
                    detmath::sincospi(step * static_cast<double>(j), s, c);
                    w = {c, s};
                }
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + half] * w;
                a[i + j] = u + v;
                a[i + j + half] = u - v;
                w *= wstep;
            }
        }
    }
}

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

// Davies-Harte: eigenvalues of the circulant embedding of the fGn covariance.
// Returns empty if the embedding has a materially negative eigenvalue.
std::vector<double> embedding_eigenvalues(std::size_t m, double H) {
    std::vector<std::complex<double>> c(m);
    const double two_h = 2.0 * H;
    const std::size_t half = m / 2;
    for (std::size_t j = 0; j <= half; ++j)
        c[j] = fgn_gamma(static_cast<double>(j), two_h);
    for (std::size_t j = half + 1; j < m; ++j) c[j] = c[m - j];
    fft_forward(c);

    std::vector<double> lam(m);
    double max_l = 0.0, min_l = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        lam[j] = c[j].real();
        max_l = std::max(max_l, lam[j]);
        min_l = std::min(min_l, lam[j]);
    }
    if (min_l < -1e-9 * max_l) return {};
    for (double& l : lam) l = std::max(l, 0.0);
    return lam;
}

// Parameter sweeps regenerate signs for the same (m, H) hundreds of times;
// the eigenvalue FFT is the expensive part, so memoize it.
const std::vector<double>& cached_eigenvalues(std::size_t m, double H) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, double>, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.try_emplace({m, H});
    if (inserted) it->second = embedding_eigenvalues(m, H);
    return it->second;
}

} // namespace

std::vector<double> fgn_sample_hosking(std::size_t n, double H, std::uint64_t seed) {
    if (n == 0) throw config_error("fgn: n must be at least 1");
    if (!(H >= 0.5 && H < 1.0)) throw config_error("fgn: H must be in [0.5, 1)");
    Rng rng(seed);
    const double two_h = 2.0 * H;

    std::vector<double> gam(n);
    for (std::size_t k = 0; k < n; ++k) gam[k] = fgn_gamma(static_cast<double>(k), two_h);

    std::vector<double> x(n), phi(n, 0.0), prev(n, 0.0);
    double v = 1.0; // innovation variance
    x[0] = rng.normal();
    for (std::size_t t = 1; t < n; ++t) {
        // update partial autocorrelations (Durbin-Levinson)
        double num = gam[t];
        for (std::size_t j = 0; j < t - 1; ++j) num -= prev[j] * gam[t - 1 - j];
        const double k = num / v;
        phi[t - 1] = k;
        for (std::size_t j = 0; j + 1 < t; ++j)
            phi[j] = prev[j] - k * prev[t - 2 - j];
        v *= (1.0 - k * k);

        double mean = 0.0;
        for (std::size_t j = 0; j < t; ++j) mean += phi[j] * x[t - 1 - j];
        x[t] = mean + std::sqrt(v) * rng.normal();
        std::swap(prev, phi);
    }
    return x;
}

std::vector<double> fgn_sample(std::size_t n, double H, std::uint64_t seed) {
    if (n == 0) throw config_error("fgn: n must be at least 1");
    if (!(H >= 0.5 && H < 1.0)) throw config_error("fgn: H must be in [0.5, 1)");

    const std::size_t m = next_pow2(std::max<std::size_t>(2 * n, 8));
    const std::vector<double>& lam = cached_eigenvalues(m, H);
    if (lam.empty()) {
        if (n > 200000)
            throw error("fgn: circulant embedding failed and n is too large for the "
                        "sequential fallback");
        return fgn_sample_hosking(n, H, seed);
    }

    Rng rng(seed);
    const double inv_m = 1.0 / static_cast<double>(m);
    std::vector<std::complex<double>> w(m);
    w[0] = std::sqrt(lam[0] * inv_m) * rng.normal();
    for (std::size_t k = 1; k < m / 2; ++k) {
        const double scale = std::sqrt(0.5 * lam[k] * inv_m);
        const double re = rng.normal();
        const double im = rng.normal();
        w[k] = {scale * re, scale * im};
        w[m - k] = std::conj(w[k]);
    }
    w[m / 2] = std::sqrt(lam[m / 2] * inv_m) * rng.normal();

    fft_forward(w);
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = w[t].real();
    return x;
}

std::vector<std::int8_t> gen_signs_fgn(std::size_t n, double H, std::uint64_t seed) {
    const std::vector<double> g = fgn_sample(n, H, seed);
    std::vector<std::int8_t> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = g[i] >= 0.0 ? 1 : -1;
    return s;
}

std::vector<std::int8_t> gen_signs_hidden_order(std::size_t n, const HiddenOrderParams& p,
                                                std::uint64_t seed) {
    p.validate();
    if (n == 0) throw config_error("hidden-order signs: n must be at least 1");
    Rng rng(seed);

    struct Hidden {
        std::int8_t sign;
        double remaining;
    };
    auto fresh = [&]() {
        const std::int8_t sgn = (rng.next_u64() & 1) ? std::int8_t{1} : std::int8_t{-1};
        // Pareto(beta) size with unit minimum, capped to keep runs finite
        const double u = rng.uniform_pos();
        const double size =
            std::min(p.max_size, detmath::exp(-detmath::log(u) / p.beta));
        return Hidden{sgn, std::ceil(size)};
    };

    std::vector<Hidden> pool(static_cast<std::size_t>(p.pool_size));
    for (auto& h : pool) h = fresh();

    std::vector<std::int8_t> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t pick = static_cast<std::size_t>(
            rng.uniform() * static_cast<double>(pool.size()));
        Hidden& h = pool[pick < pool.size() ? pick : pool.size() - 1];
        out[t] = h.sign;
        if (--h.remaining <= 0.0) h = fresh();
    }
    return out;
}

} // namespace lobsim::flow
