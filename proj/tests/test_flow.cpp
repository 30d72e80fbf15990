#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lobsim/detmath.hpp"
#include "lobsim/flow/cancellation.hpp"
#include "lobsim/flow/placement.hpp"
#include "lobsim/flow/student.hpp"
#include "lobsim/rng.hpp"
#include "lobsim/stats/tail.hpp"
#include "support/oracles.hpp"

using namespace lobsim;

TEST_SUITE_BEGIN("flow");

TEST_CASE("sample_rel_price: symmetry and tail exponent") {
    Rng rng(77);
    const double sigma = 2.4e-3, nu = 1.31;
    const std::size_t n = 1000000;
    std::vector<double> xs(n);
    std::size_t pos = 0;
    for (auto& x : xs) {
        x = flow::sample_rel_price(sigma, nu, rng);
        if (x > 0.0) ++pos;
    }
    CHECK(std::fabs(static_cast<double>(pos) / static_cast<double>(n) - 0.5) < 0.002);

    std::vector<double> sorted(xs);
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[n / 2];
    CHECK(std::fabs(median) < 3.0 * sigma * 1e-3 * 3.0); // 0 +- a few e-6

    // sample quantiles against the analytic Student CCDF
    for (double p : {0.25, 0.1, 0.01}) {
        const double q_theory = sigma * flow::student::upper_quantile_standard(p, nu);
        const double q_sample = sorted[static_cast<std::size_t>((1.0 - p) * n)];
        CHECK(q_sample == doctest::Approx(q_theory).epsilon(0.05));
    }

    const auto tail = stats::hill_estimator(xs, 0.01);
    CHECK(std::fabs(tail.alpha - nu) < 0.1);
}

namespace {

lob::Quotes quotes_for(const lob::TickGrid& grid, std::int64_t bid, std::int64_t ask) {
    lob::Quotes q;
    q.bid_ticks = bid;
    q.ask_ticks = ask;
    q.bid_log = grid.log_price(bid);
    q.ask_log = grid.log_price(ask);
    q.mid_log = 0.5 * (q.bid_log + q.ask_log);
    q.spread = q.ask_log - q.bid_log;
    return q;
}

} // namespace

TEST_CASE("classify_order boundaries") {
    lob::TickGrid grid{1.0};
    const lob::Quotes q = quotes_for(grid, 2996, 3000); // 4-tick spread
    const double p = lobsim::detmath::exp(q.mid_log);

    // exactly at the threshold: market (half-open interval)
    const double thr = q.spread - grid.tick / p;
    CHECK(thr > 0.0);
    CHECK(flow::classify_order(thr, q, lob::Side::Buy, grid).market);
    CHECK(flow::classify_order(thr + 1e-9, q, lob::Side::Sell, grid).market);

    // x = 0: limit at the same best
    const auto at_best = flow::classify_order(0.0, q, lob::Side::Buy, grid);
    CHECK_FALSE(at_best.market);
    CHECK(at_best.ticks == 2996);
    const auto sell_best = flow::classify_order(0.0, q, lob::Side::Sell, grid);
    CHECK_FALSE(sell_best.market);
    CHECK(sell_best.ticks == 3000);

    // x > 0 below the threshold: inside the spread
    const auto in_spread = flow::classify_order(0.4 * thr, q, lob::Side::Buy, grid);
    CHECK_FALSE(in_spread.market);
    CHECK(in_spread.ticks > 2996);
    CHECK(in_spread.ticks < 3000);

    // x < 0: strictly inside the book
    const auto inside = flow::classify_order(-5e-3, q, lob::Side::Buy, grid);
    CHECK_FALSE(inside.market);
    CHECK(inside.ticks < 2996);
    const auto inside_s = flow::classify_order(-5e-3, q, lob::Side::Sell, grid);
    CHECK(inside_s.ticks > 3000);

    // sell just below the threshold: outward rounding keeps it one tick above
    // the bid instead of locking it
    const auto near_thr = flow::classify_order(thr - 1e-7, q, lob::Side::Sell, grid);
    CHECK_FALSE(near_thr.market);
    CHECK(near_thr.ticks == 2997);

    // extreme |x| clamps instead of overflowing
    const auto deep = flow::classify_order(-10.0, q, lob::Side::Buy, grid);
    CHECK_FALSE(deep.market);
    CHECK(deep.ticks >= 1);
    const auto high = flow::classify_order(-800.0, q, lob::Side::Sell, grid);
    CHECK_FALSE(high.market);
    CHECK(high.ticks > 3000);

    // at a one-tick spread the whole window up to the opposite best is within
    // T/p, so even a same-best draw counts as an effective market order
    const lob::Quotes q1 = quotes_for(grid, 2999, 3000);
    CHECK(q1.spread - grid.tick / lobsim::detmath::exp(q1.mid_log) < 0.0);
    CHECK(flow::classify_order(0.0, q1, lob::Side::Buy, grid).market);
    // floor rounding puts any x < 0 strictly below the same best
    const auto join = flow::classify_order(-1e-6, q1, lob::Side::Buy, grid);
    CHECK_FALSE(join.market);
    CHECK(join.ticks == 2998);
}

TEST_CASE("transaction_prob endpoints and quadrature cross-check") {
    const double sigma = 2.4e-3, nu = 1.31;
    CHECK(flow::transaction_prob(0.0, sigma, nu) == 0.5);
    CHECK(flow::transaction_prob(1.0, sigma, nu) < 1e-3);
    double prev = 0.5;
    for (double s = 1e-4; s < 0.05; s *= 1.7) {
        const double v = flow::transaction_prob(s, sigma, nu);
        CHECK(v < prev);
        prev = v;
    }
    for (double s : {0.5 * sigma, sigma, 2.0 * sigma, 10.0 * sigma}) {
        const double got = flow::transaction_prob(s, sigma, nu);
        const double ref = oracles::student_ccdf_quadrature(s / sigma, nu);
        CHECK(std::fabs(got - ref) < 1e-6);
        CHECK(got > 0.0);
        CHECK(got < 0.5);
    }
}

TEST_CASE("classification frequency matches the transaction probability") {
    lob::TickGrid grid{1.0};
    lob::Quotes q;
    q.bid_ticks = 2996;
    q.ask_ticks = 3000;
    q.bid_log = grid.log_price(2996);
    q.ask_log = grid.log_price(3000);
    q.mid_log = 0.5 * (q.bid_log + q.ask_log);
    q.spread = q.ask_log - q.bid_log;

    const double sigma = 2.4e-3, nu = 1.31;
    Rng rng(11);
    const std::size_t n = 1000000;
    std::size_t markets = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = flow::sample_rel_price(sigma, nu, rng);
        if (flow::classify_order(x, q, lob::Side::Buy, grid).market) ++markets;
    }
    // prediction at the tick-corrected threshold
    const double p_mid = std::exp(q.mid_log);
    const double expect = flow::student::ccdf(q.spread - grid.tick / p_mid, nu, sigma);
    const double got = static_cast<double>(markets) / static_cast<double>(n);
    const double se = std::sqrt(expect * (1.0 - expect) / static_cast<double>(n));
    CHECK(std::fabs(got - expect) < 3.0 * se + 1e-4);

    // plain threshold: the market fraction is transaction_prob(s) itself
    Rng rng2(12);
    std::size_t markets2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = flow::sample_rel_price(sigma, nu, rng2);
        if (flow::classify_order(x, q, lob::Side::Buy, grid,
                                 flow::ThresholdMode::PlainSpread)
                .market)
            ++markets2;
    }
    const double expect2 = flow::transaction_prob(q.spread, sigma, nu);
    const double got2 = static_cast<double>(markets2) / static_cast<double>(n);
    const double se2 = std::sqrt(expect2 * (1.0 - expect2) / static_cast<double>(n));
    CHECK(std::fabs(got2 - expect2) < 3.0 * se2 + 1e-4);
}

TEST_CASE("cancel_prob formula and properties") {
    using flow::CancellationInputs;
    // y = 0 kills the probability entirely
    for (double A : {0.5, 1.12, 3.0})
        CHECK(flow::cancel_prob({0.0, 0.9, 5}, A, 0.2) == 0.0);

    // hand-evaluated saturation value
    const double p = flow::cancel_prob({1e9, 0.5, 100}, 1.12, 0.20);
    CHECK(p == doctest::Approx(0.00784).epsilon(1e-9));

    // doubling n_tot halves the probability
    const double p1 = flow::cancel_prob({0.7, 0.4, 50}, 1.12, 0.2);
    const double p2 = flow::cancel_prob({0.7, 0.4, 100}, 1.12, 0.2);
    CHECK(p1 == doctest::Approx(2.0 * p2));

    // monotonicity
    CHECK(flow::cancel_prob({0.5, 0.4, 50}, 1.12, 0.2) <
          flow::cancel_prob({1.5, 0.4, 50}, 1.12, 0.2));
    CHECK(flow::cancel_prob({0.5, 0.2, 50}, 1.12, 0.2) <
          flow::cancel_prob({0.5, 0.8, 50}, 1.12, 0.2));

    // clamped at 1 for tiny books
    CHECK(flow::cancel_prob({100.0, 1.0, 1}, 5.0, 0.5) == 1.0);

    CHECK_THROWS_AS(flow::cancel_prob({0.5, 0.5, 0}, 1.0, 0.2), config_error);
}

TEST_CASE("total cancellation intensity is independent of k-fold replication") {
    // replicating every order k-fold with identical y and n_imb leaves the
    // summed probability unchanged (the 1/n_tot factor cancels the count)
    const std::vector<double> ys = {0.2, 0.7, 1.3, 2.5, 4.0};
    const double imb = 0.6, A = 1.12, B = 0.2;
    const auto total = [&](int k) {
        double acc = 0.0;
        const std::int64_t n = static_cast<std::int64_t>(ys.size()) * k;
        for (double y : ys)
            acc += static_cast<double>(k) * flow::cancel_prob({y, imb, n}, A, B);
        return acc;
    };
    const double t1 = total(1);
    for (int k : {2, 5, 13}) CHECK(total(k) == doctest::Approx(t1).epsilon(1e-12));
}

TEST_SUITE_END();
