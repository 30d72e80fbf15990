#pragma once
#include <vector>

#include "lobsim/sim/config.hpp"
#include "lobsim/sim/output.hpp"

namespace lobsim::sim {

struct StabilityCell {
    double A = 0.0;
    double p0 = 0.0;
    double T = 0.0;
    bool divergent = false;
    double mean_ntot = 0.0;
    double growth = 0.0; ///< late-window over early-window mean n_tot
    std::int64_t steps_run = 0;
};

struct StabilityMap {
    std::vector<double> A_grid;
    std::vector<double> p0_grid;
    std::vector<double> T_list;
    std::vector<StabilityCell> cells; ///< T-major, then A, then p0
    std::int64_t steps_per_cell = 0;

    const StabilityCell& at(std::size_t ti, std::size_t ai, std::size_t pi) const {
        return cells[(ti * A_grid.size() + ai) * p0_grid.size() + pi];
    }
};

/// Bounded-vs-divergent verdict over an (A, p0) grid per tick size. A cell is
/// divergent when n_tot breaches the ceiling or the late-window mean exceeds
/// the early-window mean by growth_factor. Cells run independently, each with
/// a seed derived from (base seed, cell index); parallel across jobs.
StabilityMap sweep_stability(const SimConfig& base, std::vector<double> A_grid,
                             std::vector<double> p0_grid, std::vector<double> T_list,
                             std::int64_t steps_per_cell, double growth_factor,
                             int jobs);

struct TailCell {
    double H_s = 0.0;
    double alpha_x = 0.0;
    std::uint64_t seed = 0;
    double alpha_r = 0.0; ///< Hill tail exponent of |r|
    double alpha_r_se = 0.0;
    bool divergent = false;
};

/// Tail exponent of |r| per (H_s, alpha_x, seed) cell; divergent cells are
/// marked, not fatal.
std::vector<TailCell> sweep_tails(const SimConfig& base, std::vector<double> alpha_grid,
                                  std::vector<double> H_list, int n_seeds,
                                  std::int64_t steps_per_cell, int jobs);

} // namespace lobsim::sim
