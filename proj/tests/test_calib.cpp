#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lobsim/calib/calibrate.hpp"
#include "lobsim/flow/student.hpp"
#include "lobsim/rng.hpp"
#include "lobsim/sim/simulator.hpp"
#include "support/oracles.hpp"

using namespace lobsim;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("calib");

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("lobsim_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string write_events(const TempDir& dir, const std::string& body) {
    const auto p = dir.path / "events.csv";
    std::ofstream out(p);
    out << "t,type,side,price,order_id,size\n" << body;
    return p.string();
}

std::string simulate_events(const TempDir& dir, sim::SimConfig cfg) {
    const auto p = dir.path / "sim_events.csv";
    calib::CsvEventSink sink(p.string());
    cfg.record_events = true;
    sim::run(cfg, &sink);
    sink.flush();
    return p.string();
}

} // namespace

TEST_CASE("load_events: round trip, ordering and id errors") {
    TempDir dir;
    sim::SimConfig cfg;
    cfg.n_steps = 12000;
    cfg.warmup = 1000;
    cfg.flow.seed = 21;
    const std::string path = simulate_events(dir, cfg);

    const auto events = calib::load_events(path);
    CHECK(events.size() > 15000); // placements + cancels + initial book
    CHECK(calib::estimate_tick(events) == doctest::Approx(1.0));

    const std::string bad_order = write_events(
        dir, "5,L,B,100,1,1\n4,L,S,101,2,1\n");
    CHECK_THROWS_AS(calib::load_events(bad_order), integrity_error);

    const std::string unknown_cancel = write_events(
        dir, "1,L,B,100,1,1\n2,C,B,100,7,1\n");
    CHECK_THROWS_AS(calib::load_events(unknown_cancel), integrity_error);

    const std::string malformed = write_events(dir, "1,L,B,abc,1,1\n");
    CHECK_THROWS_AS(calib::load_events(malformed), integrity_error);

    const std::string off_best = write_events(
        dir, "1,L,B,100,1,1\n2,L,B,99,2,1\n3,L,S,101,3,1\n4,M,B,99,2,1\n");
    CHECK_THROWS_AS(calib::load_events(off_best), integrity_error);
}

TEST_CASE("filters: size, spread, same-second, stale-quote") {
    std::vector<calib::PlacementRow> rows;
    const auto mk = [](double t, bool market, double size, std::int64_t spread_ticks,
                       double t_widen) {
        calib::PlacementRow r;
        r.t = t;
        r.side = lob::Side::Buy;
        r.market = market;
        r.size = size;
        r.x = -1e-3;
        r.x_valid = true;
        r.spread = 1e-3;
        r.spread_ticks = spread_ticks;
        r.p_mid = 3000.0;
        r.tick_over_p = 1.0 / 3000.0;
        r.t_last_widen = t_widen;
        return r;
    };
    rows.push_back(mk(1, false, 100, 3, -100));      // kept
    rows.push_back(mk(2, false, 2e6, 3, -100));      // size rule
    rows.push_back(mk(3, false, 100, 120, -100));    // spread rule
    rows.push_back(mk(10, false, 100, 3, -100));     // same second pair -> both out
    rows.push_back(mk(10.4, false, 100, 3, -100));
    rows.push_back(mk(20, false, 100, 3, 17.0));     // 3 s after a widening
    rows.push_back(mk(30, true, 100, 3, 28.0));      // market order: stale rule not applied
    rows.push_back(mk(40, false, 100, 3, 34.0));     // 6 s after: kept

    calib::FilterRules rules;
    rules.time_filters = true;
    const auto filtered = calib::filter_events(rows, rules);
    CHECK(filtered.counts.kept == 3);
    CHECK(filtered.counts.by_size == 1);
    CHECK(filtered.counts.by_spread == 1);
    CHECK(filtered.counts.by_same_second == 2);
    CHECK(filtered.counts.by_stale_quote == 1);

    // idempotent
    const auto again = calib::filter_events(filtered.rows, rules);
    CHECK(again.counts.kept == filtered.rows.size());

    // logical event time: time rules off
    calib::FilterRules logical;
    const auto loose = calib::filter_events(rows, logical);
    CHECK(loose.counts.kept == 6);
}

TEST_CASE("reconstruct_pstar: no censoring means unit weights") {
    Rng rng(5);
    std::vector<calib::PlacementRow> rows;
    for (int i = 0; i < 5000; ++i) {
        calib::PlacementRow r;
        r.t = i;
        r.market = false;
        r.x_valid = true;
        r.x = 1e-3 * rng.student_t(1.5);
        r.spread = 10.0; // huge: nothing censored
        r.spread_ticks = 3;
        r.p_mid = 3000.0;
        r.tick_over_p = 1.0 / 3000.0;
        r.size = 1.0;
        rows.push_back(r);
    }
    const auto d = calib::reconstruct_pstar(rows, 0.0, 20);
    for (double w : d.w) CHECK(w == 1.0);
    // plain histogram: bin masses equal counts
    for (const auto& b : d.bins)
        CHECK(b.weight_mass == doctest::Approx(static_cast<double>(b.count)));
}

TEST_CASE("reconstruct_pstar: censored synthetic sample matches the truth") {
    // placements with known Student(1.3) x and widely varying spreads;
    // censoring removes x >= s - T/p, the weights must undo it
    Rng rng(6);
    const double sigma = 2.4e-3, nu = 1.3;
    std::vector<calib::PlacementRow> rows;
    std::vector<double> all_x;
    for (int i = 0; i < 400000; ++i) {
        calib::PlacementRow r;
        r.t = i;
        r.p_mid = 3000.0;
        r.tick_over_p = 1.0 / 3000.0;
        r.size = 1.0;
        r.spread_ticks = 3;
        // right-skewed spread mixture, one to a few dozen ticks
        const double u = rng.uniform();
        r.spread = r.tick_over_p * (1.0 + 40.0 * u * u * u);
        const double x = sigma * rng.student_t(nu);
        all_x.push_back(x);
        const double thr = r.spread - r.tick_over_p;
        if (x >= thr) {
            r.market = true;
            r.x_valid = false;
        } else {
            r.market = false;
            r.x_valid = true;
            r.x = x;
        }
        rows.push_back(r);
    }
    const auto d = calib::reconstruct_pstar(rows, 0.0, 24);
    for (double w : d.w) CHECK(w >= 1.0);

    // brute-force weights on a small prefix agree exactly
    {
        std::vector<calib::PlacementRow> prefix(rows.begin(), rows.begin() + 2000);
        const auto dp = calib::reconstruct_pstar(prefix, 0.0, 10);
        std::vector<double> thresholds;
        for (const auto& r : prefix) thresholds.push_back(r.spread - r.tick_over_p);
        std::size_t j = 0;
        for (const auto& r : prefix) {
            if (r.market || !r.x_valid || !(r.x < r.spread - r.tick_over_p)) continue;
            std::size_t above = 0;
            for (double thr : thresholds)
                if (thr > r.x) ++above;
            const double w_expect =
                static_cast<double>(thresholds.size()) / static_cast<double>(above);
            CHECK(dp.w[j] == doctest::Approx(w_expect));
            ++j;
        }
        CHECK(j == dp.x.size());
    }

    // per-bin density within 10% of the bin-averaged true Student density
    std::size_t checked = 0;
    for (const auto& b : d.bins) {
        if (b.count < 2000) continue;
        double truth = 0.0;
        const int K = 200;
        for (int k = 0; k < K; ++k)
            truth += flow::student::pdf(b.lo + (b.hi - b.lo) * (k + 0.5) / K, nu, sigma);
        truth /= K;
        CHECK(b.density == doctest::Approx(truth).epsilon(0.10));
        ++checked;
    }
    CHECK(checked >= 10);

    // the spread condition leaves the sample and its weights unchanged
    // beyond s0: the (x, w) pairs with x > s0 must agree exactly
    const double s0 = 0.003;
    const auto d2 = calib::reconstruct_pstar(rows, s0, 24);
    // weights scale with the subsample size, so compare w / N = 1 / count
    std::vector<std::pair<double, double>> above1, above2;
    for (std::size_t j = 0; j < d.x.size(); ++j)
        if (d.x[j] > s0)
            above1.emplace_back(d.x[j], d.w[j] / static_cast<double>(d.n_threshold));
    for (std::size_t j = 0; j < d2.x.size(); ++j)
        if (d2.x[j] > s0)
            above2.emplace_back(d2.x[j], d2.w[j] / static_cast<double>(d2.n_threshold));
    std::sort(above1.begin(), above1.end());
    std::sort(above2.begin(), above2.end());
    REQUIRE(above1.size() == above2.size());
    CHECK(above1.size() > 1000);
    bool all_equal = true;
    for (std::size_t j = 0; j < above1.size(); ++j)
        all_equal = all_equal && above1[j].first == above2[j].first &&
                    std::fabs(above1[j].second - above2[j].second) <
                        1e-12 * above1[j].second;
    CHECK(all_equal);
}

TEST_CASE("fit_student recovers parameters by self-sampling") {
    Rng rng(7);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = 2.4e-3 * rng.student_t(1.31);
    const auto fit = calib::fit_student(xs);
    CHECK(fit.converged);
    CHECK(fit.alpha_x == doctest::Approx(1.31).epsilon(0.05));
    CHECK(fit.sigma_x == doctest::Approx(2.4e-3).epsilon(0.05));
    CHECK_FALSE(fit.nu_at_bound);
}

TEST_CASE("fit_student_censored undoes spread censoring") {
    Rng rng(8);
    const double sigma = 2.4e-3, nu = 1.31;
    std::vector<double> obs, censors;
    for (int i = 0; i < 300000; ++i) {
        const double u = rng.uniform();
        const double thr = 3.33e-4 * 40.0 * u * u * u;
        const double x = sigma * rng.student_t(nu);
        if (x < thr)
            obs.push_back(x);
        else
            censors.push_back(thr);
    }
    const auto fit = calib::fit_student_censored(obs, censors);
    CHECK(fit.alpha_x == doctest::Approx(nu).epsilon(0.05));
    CHECK(fit.sigma_x == doctest::Approx(sigma).epsilon(0.05));

    // reweighted fit on the same sample is biased by the one-sided support
    // truncation; the censored likelihood is the estimator of record
    const auto plain = calib::fit_student(obs);
    CHECK(plain.alpha_x > fit.alpha_x);
}

TEST_CASE("fit_student flags Gaussian data") {
    const auto g = oracles::gaussian_sample(50000, 99);
    const auto fit = calib::fit_student(g);
    CHECK(fit.nu_at_bound);
    CHECK(fit.alpha_x > 50.0);
}

TEST_CASE("cancellation identity and the published-constant arithmetic") {
    CHECK(calib::assemble_amplitude(0.012, 0.0098, 0.54, 0.0075) ==
          doctest::Approx(1.1289).epsilon(1e-3));
    CHECK_THROWS_AS(calib::assemble_amplitude(1, 1, 1, 0.0), config_error);
}

TEST_CASE("simulate-export-calibrate round trip recovers the flow parameters") {
    TempDir dir;
    sim::SimConfig cfg;
    cfg.flow.seed = 31;
    cfg.n_steps = 400000; // the full 15% contract is checked at 2.4e6 in acceptance
    cfg.warmup = 10000;
    const std::string path = simulate_events(dir, cfg);

    calib::CalibConfig ccfg;
    const auto rep = calib::calibrate_file(path, ccfg);

    CHECK(rep.tick == doctest::Approx(1.0));
    CHECK(rep.H_s == doctest::Approx(0.77).epsilon(0.08));
    CHECK(rep.placement.alpha_x == doctest::Approx(1.31).epsilon(0.12));
    CHECK(rep.placement.sigma_x == doctest::Approx(2.4e-3).epsilon(0.12));
    CHECK(rep.cancellation.A_direct == doctest::Approx(1.12).epsilon(0.12));
    CHECK(rep.cancellation.B_direct == doctest::Approx(0.20).epsilon(0.30));
    // the factorized construction keeps its identity exactly
    CHECK(rep.cancellation.A * rep.cancellation.P_C * rep.cancellation.P_C ==
          doctest::Approx(rep.cancellation.K1 * rep.cancellation.K2 *
                          rep.cancellation.K3));
    // the free n_tot slope should sit near -1
    CHECK(rep.cancellation.free_slope == doctest::Approx(1.0).epsilon(0.25));

    // transaction curve: empirical tracks predicted for well-populated bins
    for (const auto& b : rep.transaction_curve) {
        if (b.n < 3000 || b.empirical <= 0.0) continue;
        CHECK(b.predicted == doctest::Approx(b.empirical).epsilon(0.5));
        CHECK(b.predicted < 2.0 * b.empirical + 0.02);
        CHECK(b.predicted > 0.5 * b.empirical - 0.02);
    }
}

TEST_CASE("calibrate_hurst: shuffling destroys the memory") {
    sim::SimConfig cfg;
    cfg.flow.seed = 77;
    cfg.n_steps = 80000;
    cfg.warmup = 5000;
    TempDir dir;
    const std::string path = simulate_events(dir, cfg);
    const auto events = calib::load_events(path);
    const auto replay = calib::replay_events(events, calib::CancelBins{});

    const auto est = calib::calibrate_hurst(replay.placements);
    CHECK(est.H > 0.65);

    // deterministic shuffle
    auto rows = replay.placements;
    Rng rng(1);
    for (std::size_t i = rows.size(); i > 1; --i)
        std::swap(rows[i - 1],
                  rows[static_cast<std::size_t>(rng.uniform() * static_cast<double>(i))]);
    const auto shuffled = calib::calibrate_hurst(rows);
    CHECK(std::fabs(shuffled.H - 0.5) < 0.03);
}

TEST_SUITE_END();
