#include "lobsim/sim/sweeps.hpp"

#include <atomic>
#include <functional>
#include <thread>

#include "lobsim/rng.hpp"
#include "lobsim/sim/simulator.hpp"
#include "lobsim/stats/tail.hpp"

namespace lobsim::sim {

namespace {

void parallel_cells(std::size_t n_cells, int jobs, const std::function<void(std::size_t)>& work) {
    const unsigned hw = std::thread::hardware_concurrency();
    const int n_threads = jobs > 0 ? jobs : static_cast<int>(hw ? hw : 1);
    if (n_threads <= 1 || n_cells <= 1) {
        for (std::size_t i = 0; i < n_cells; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n_cells) return;
                work(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

double window_mean(const std::vector<std::int32_t>& xs, std::size_t from, std::size_t to) {
    if (to <= from) return 0.0;
    double acc = 0.0;
    for (std::size_t i = from; i < to; ++i) acc += static_cast<double>(xs[i]);
    return acc / static_cast<double>(to - from);
}

} // namespace

StabilityMap sweep_stability(const SimConfig& base, std::vector<double> A_grid,
                             std::vector<double> p0_grid, std::vector<double> T_list,
                             std::int64_t steps_per_cell, double growth_factor,
                             int jobs) {
    if (A_grid.empty() || p0_grid.empty() || T_list.empty())
        throw config_error("stability sweep: empty grid");
    if (!(growth_factor > 1.0)) throw config_error("stability sweep: growth factor must exceed 1");

    StabilityMap map;
    map.A_grid = std::move(A_grid);
    map.p0_grid = std::move(p0_grid);
    map.T_list = std::move(T_list);
    map.steps_per_cell = steps_per_cell;
    const std::size_t n_cells = map.A_grid.size() * map.p0_grid.size() * map.T_list.size();
    map.cells.resize(n_cells);

    parallel_cells(n_cells, jobs, [&](std::size_t idx) {
        const std::size_t pi = idx % map.p0_grid.size();
        const std::size_t ai = (idx / map.p0_grid.size()) % map.A_grid.size();
        const std::size_t ti = idx / (map.p0_grid.size() * map.A_grid.size());

        SimConfig cfg = base;
        cfg.flow.A = map.A_grid[ai];
        cfg.flow.p0 = map.p0_grid[pi];
        cfg.flow.T = map.T_list[ti];
        // seed by (A, p0) position only, so tick sizes see comparable noise
        cfg.flow.seed =
            Rng::derive_seed(base.flow.seed, 1000 + ai * map.p0_grid.size() + pi);
        cfg.n_steps = steps_per_cell;
        cfg.warmup = std::min<std::int64_t>(base.warmup, steps_per_cell / 10);
        cfg.record_events = false;

        StabilityCell& cell = map.cells[idx];
        cell.A = cfg.flow.A;
        cell.p0 = cfg.flow.p0;
        cell.T = cfg.flow.T;
        try {
            const SimOutput out = run(cfg);
            const std::size_t rows = out.n_tot.size();
            const double early = window_mean(out.n_tot, 0, rows / 4);
            const double late = window_mean(out.n_tot, rows - rows / 4, rows);
            cell.mean_ntot = out.diag.mean_ntot;
            cell.growth = early > 0.0 ? late / early : 0.0;
            cell.divergent = out.diag.divergent || cell.growth > growth_factor;
            cell.steps_run = out.diag.steps_run;
        } catch (const error&) {
            // a cell that cannot even run (e.g. p0 below one tick) counts as divergent
            cell.divergent = true;
        }
    });
    return map;
}

std::vector<TailCell> sweep_tails(const SimConfig& base, std::vector<double> alpha_grid,
                                  std::vector<double> H_list, int n_seeds,
                                  std::int64_t steps_per_cell, int jobs) {
    if (alpha_grid.empty() || H_list.empty() || n_seeds < 1)
        throw config_error("tails sweep: empty grid");
    if (steps_per_cell < 1000000 + base.warmup)
        throw config_error("tails sweep: need at least 1e6 recorded placements per cell");

    std::vector<TailCell> cells(alpha_grid.size() * H_list.size() *
                                static_cast<std::size_t>(n_seeds));
    parallel_cells(cells.size(), jobs, [&](std::size_t idx) {
        const std::size_t si = idx % static_cast<std::size_t>(n_seeds);
        const std::size_t ai = (idx / static_cast<std::size_t>(n_seeds)) % alpha_grid.size();
        const std::size_t hi = idx / (static_cast<std::size_t>(n_seeds) * alpha_grid.size());

        SimConfig cfg = base;
        cfg.flow.H_s = H_list[hi];
        cfg.flow.alpha_x = alpha_grid[ai];
        cfg.flow.seed = Rng::derive_seed(base.flow.seed, 7000 + si);
        cfg.n_steps = steps_per_cell;
        cfg.record_events = false;

        TailCell& cell = cells[idx];
        cell.H_s = cfg.flow.H_s;
        cell.alpha_x = cfg.flow.alpha_x;
        cell.seed = cfg.flow.seed;
        const SimOutput out = run(cfg);
        cell.divergent = out.diag.divergent;
        if (!cell.divergent) {
            const auto est = stats::hill_estimator(out.returns, 0.05);
            cell.alpha_r = est.alpha;
            cell.alpha_r_se = est.se;
        }
    });
    return cells;
}

} // namespace lobsim::sim
