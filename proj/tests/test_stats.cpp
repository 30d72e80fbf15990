#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lobsim/flow/signs.hpp"
#include "lobsim/rng.hpp"
#include "lobsim/stats/distribution.hpp"
#include "lobsim/stats/hurst.hpp"
#include "lobsim/stats/tail.hpp"
#include "support/oracles.hpp"

using namespace lobsim;

TEST_SUITE_BEGIN("stats");

TEST_CASE("hill on exact Pareto recovers the exponent") {
    const auto xs = oracles::pareto_sample(100000, 2.5, 12345);
    const auto est = stats::hill_estimator(xs, 0.05);
    CHECK(std::fabs(est.alpha - 2.5) < 0.1);
    CHECK(est.k == 5000);
    CHECK(est.se == doctest::Approx(est.alpha / std::sqrt(5000.0)));
    CHECK_FALSE(est.unstable);
}

TEST_CASE("hill flags an exponential tail as unstable") {
    const auto xs = oracles::exponential_sample(100000, 1.0, 321);
    const auto a_10 = stats::hill_estimator(xs, 0.10);
    const auto a_025 = stats::hill_estimator(xs, 0.025);
    CHECK(a_025.alpha > a_10.alpha); // drifts upward as the fraction shrinks
    CHECK(stats::hill_estimator(xs, 0.05).unstable);
}

TEST_CASE("hill rejects degenerate input") {
    std::vector<double> same(2000, 3.0);
    CHECK_THROWS_AS(stats::hill_estimator(same, 0.05), config_error);
    std::vector<double> few(100, 1.0);
    CHECK_THROWS_AS(stats::hill_estimator(few, 0.05), config_error);
    const auto xs = oracles::pareto_sample(2000, 2.0, 5);
    CHECK_THROWS_AS(stats::hill_estimator(xs, 0.5), config_error);
}

TEST_CASE("hill is scale invariant") {
    const auto xs = oracles::pareto_sample(50000, 1.7, 99);
    const auto base = stats::hill_estimator(xs, 0.05);
    // powers of two rescale exactly
    std::vector<double> scaled(xs);
    for (auto& v : scaled) v *= 1024.0;
    CHECK(stats::hill_estimator(scaled, 0.05).alpha == base.alpha);
    // arbitrary positive scale up to rounding
    for (auto& v : scaled) v *= 3.7 / 1024.0;
    CHECK(stats::hill_estimator(scaled, 0.05).alpha ==
          doctest::Approx(base.alpha).epsilon(1e-12));
}

TEST_CASE("dfa: white noise has H = 1/2") {
    const auto xs = oracles::gaussian_sample(100000, 2718);
    const auto est = stats::dfa_hurst(xs);
    CHECK(std::fabs(est.H - 0.5) < 0.03);
    CHECK(est.r2 > 0.99);
}

TEST_CASE("dfa: fGn recovers its Hurst exponent") {
    const auto xs = flow::fgn_sample(1000000, 0.75, 4242);
    const auto est = stats::dfa_hurst(xs);
    CHECK(std::fabs(est.H - 0.75) < 0.03);
}

TEST_CASE("dfa: sign series from a strongly persistent generator") {
    const auto signs = flow::gen_signs_fgn(1000000, 0.85, 777);
    std::vector<double> xs(signs.begin(), signs.end());
    const auto est = stats::dfa_hurst(xs);
    CHECK(std::fabs(est.H - 0.85) < 0.04);
}

TEST_CASE("dfa invariances and errors") {
    const auto xs = oracles::gaussian_sample(20000, 5);
    const auto base = stats::dfa_hurst(xs);
    std::vector<double> shifted(xs);
    for (auto& v : shifted) v += 100.0;
    CHECK(stats::dfa_hurst(shifted).H == doctest::Approx(base.H).epsilon(1e-6));
    std::vector<double> flipped(xs);
    for (auto& v : flipped) v = -v;
    CHECK(stats::dfa_hurst(flipped).H == doctest::Approx(base.H).epsilon(1e-9));

    std::vector<double> constant(5000, 1.0);
    CHECK_THROWS_AS(stats::dfa_hurst(constant), config_error);
    std::vector<double> tiny(100, 0.0);
    CHECK_THROWS_AS(stats::dfa_hurst(tiny), config_error);
}

TEST_CASE("variance plot SE: IID reduces to sd/sqrt(n)") {
    const auto xs = oracles::gaussian_sample(100000, 6);
    const auto sm = stats::summarize(xs);
    const double classic = sm.sd / std::sqrt(static_cast<double>(xs.size()));
    const double se = stats::variance_plot_se(xs);
    CHECK(se == doctest::Approx(classic).epsilon(0.20));
}

TEST_CASE("variance plot SE: long memory inflates the error bar") {
    const auto xs = flow::fgn_sample(200000, 0.8, 8);
    const auto sm = stats::summarize(xs);
    const double classic = sm.sd / std::sqrt(static_cast<double>(xs.size()));
    CHECK(stats::variance_plot_se(xs) > 2.0 * classic);
}

TEST_CASE("variance plot SE: constant series and short input") {
    std::vector<double> constant(20000, 2.5);
    CHECK(stats::variance_plot_se(constant) == 0.0);
    std::vector<double> tiny(100, 1.0);
    CHECK_THROWS_AS(stats::variance_plot_se(tiny), config_error);
}

TEST_CASE("summarize basics") {
    std::vector<double> c(5, 4.2);
    const auto sc = stats::summarize(c);
    CHECK(sc.mean == doctest::Approx(4.2));
    CHECK(sc.sd == 0.0);

    std::vector<double> v = {1.0, 2.0, 3.0};
    const auto sv = stats::summarize(v);
    CHECK(sv.mean == doctest::Approx(2.0));
    CHECK(sv.sd == doctest::Approx(std::sqrt(2.0 / 3.0)));
}

TEST_CASE("empirical CCDF invariants") {
    const auto xs = oracles::pareto_sample(5000, 2.0, 13);
    stats::EmpiricalDistribution dist{std::vector<double>(xs)};
    const double mn = dist.sorted().front(), mx = dist.sorted().back();
    CHECK(dist.ccdf(mn) == 1.0);
    CHECK(dist.ccdf(mn - 1.0) == 1.0);
    CHECK(dist.ccdf(std::nextafter(mx, 2.0 * mx)) == 0.0);
    CHECK(dist.ccdf(mx) <= 1.0 / 5000.0 + 1e-12);
    double prev = 1.0;
    for (double q = mn; q < mx; q *= 1.3) {
        const double v = dist.ccdf(q);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
    const auto bins = dist.log_density(20);
    CHECK(bins.size() == 20);
    double mass = 0.0;
    for (const auto& b : bins) mass += b.density * (b.hi - b.lo);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sign persistence: IID, alternating, fGn") {
    std::vector<std::int8_t> iid;
    oracles::Lcg lcg(3);
    for (int i = 0; i < 200000; ++i) iid.push_back(lcg.next() < 0.5 ? -1 : 1);
    std::vector<std::size_t> lags = {1, 2, 5, 10, 100};
    const auto sp = stats::sign_persistence(iid, lags);
    for (std::size_t i = 0; i < sp.lags.size(); ++i) {
        CHECK(sp.p_same[i] == doctest::Approx(0.5).epsilon(0.02));
        CHECK(sp.p_same[i] + sp.p_opposite[i] == 1.0);
    }

    std::vector<std::int8_t> alternating;
    for (int i = 0; i < 1000; ++i) alternating.push_back(i % 2 ? 1 : -1);
    const std::vector<std::size_t> odd = {1, 3, 5};
    const auto spa = stats::sign_persistence(alternating, odd);
    for (double p : spa.p_same) CHECK(p == 0.0);

    const auto signs = flow::gen_signs_fgn(1000000, 0.77, 2029);
    std::vector<std::size_t> fit_lags;
    for (std::size_t lag = 4; lag <= 2048; lag *= 2) fit_lags.push_back(lag);
    const auto spf = stats::sign_persistence(signs, fit_lags);
    CHECK(std::fabs(spf.gamma - 0.46) < 0.1); // 2 - 2H
}

TEST_CASE("lifetime distribution: geometric baseline vs Pareto tail") {
    // geometric lifetimes, lambda = 0.04: exponential tail, flagged unstable
    oracles::Lcg lcg(17);
    std::vector<std::int64_t> geo;
    for (int i = 0; i < 50000; ++i) {
        double u = lcg.next();
        if (u <= 0.0) u = 0.5;
        geo.push_back(1 + static_cast<std::int64_t>(std::log(u) / std::log(1.0 - 0.04)));
    }
    const auto gfit = stats::lifetime_distribution(geo);
    CHECK(gfit.lambda == doctest::Approx(0.04).epsilon(0.05));
    CHECK(gfit.tail_unstable);

    // Pareto(1.1) lifetimes: gamma_c recovered within +-0.2
    const auto pareto = oracles::pareto_sample(50000, 1.1, 29);
    std::vector<std::int64_t> taus;
    for (double v : pareto) taus.push_back(static_cast<std::int64_t>(std::ceil(10.0 * v)));
    const auto pfit = stats::lifetime_distribution(taus);
    CHECK(std::fabs(pfit.gamma_c - 1.1) < 0.2);
    CHECK_FALSE(pfit.tail_unstable);
    CHECK_FALSE(pfit.density.empty());

    std::vector<std::int64_t> few(100, 5);
    CHECK_THROWS_AS(stats::lifetime_distribution(few), config_error);
}

TEST_SUITE_END();
