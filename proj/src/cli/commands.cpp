#include "lobsim/cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

#include "lobsim/calib/calibrate.hpp"
#include "lobsim/io/csv.hpp"
#include "lobsim/io/kv_config.hpp"
#include "lobsim/sim/simulator.hpp"
#include "lobsim/sim/sweeps.hpp"
#include "lobsim/stats/distribution.hpp"
#include "lobsim/stats/hurst.hpp"
#include "lobsim/stats/tail.hpp"
#include "lobsim/version.hpp"

namespace lobsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> sim_keys = {
    "flow.H_s", "flow.alpha_x", "flow.sigma_x", "flow.A", "flow.B", "flow.T",
    "flow.p0", "flow.seed", "flow.sign_model", "flow.beta", "flow.hidden_pool",
    "sim.n_steps", "sim.warmup", "sim.init_depth", "sim.init_spread_ticks",
    "sim.length_multiplier", "sim.reference_len", "sim.record_events",
    "sim.cancel_model", "sim.poisson_rate", "sim.threshold",
    "sim.ntot_ceiling", "sim.ceiling_patience",
};

const std::set<std::string> sweep_keys = [] {
    std::set<std::string> keys = sim_keys;
    for (const char* k :
         {"sweep.A_list", "sweep.A_min", "sweep.A_max", "sweep.A_steps",
          "sweep.p0_list", "sweep.p0_min", "sweep.p0_max", "sweep.p0_steps",
          "sweep.T_list", "sweep.steps_per_cell", "sweep.growth_factor",
          "sweep.alpha_list", "sweep.alpha_min", "sweep.alpha_max", "sweep.alpha_steps",
          "sweep.H_list", "sweep.seeds"})
        keys.insert(k);
    return keys;
}();

const std::set<std::string> calib_keys = {
    "calib.s0",        "calib.tick",        "calib.time_filters",
    "calib.logical_time", "calib.censor_tick",
    "calib.max_size",  "calib.max_spread_ticks", "calib.stale_window",
    "calib.y_bins",    "calib.y_max",       "calib.imb_bins",
    "calib.ntot_log_base", "calib.pstar_bins", "calib.curve_bins",
    "calib.write_curves",
};

sim::SimConfig sim_config_from(const io::KvConfig& kv) {
    sim::SimConfig cfg;
    cfg.flow.H_s = kv.get_double("flow.H_s", cfg.flow.H_s);
    cfg.flow.alpha_x = kv.get_double("flow.alpha_x", cfg.flow.alpha_x);
    cfg.flow.sigma_x = kv.get_double("flow.sigma_x", cfg.flow.sigma_x);
    cfg.flow.A = kv.get_double("flow.A", cfg.flow.A);
    cfg.flow.B = kv.get_double("flow.B", cfg.flow.B);
    cfg.flow.T = kv.get_double("flow.T", cfg.flow.T);
    cfg.flow.p0 = kv.get_double("flow.p0", cfg.flow.p0);
    cfg.flow.seed = static_cast<std::uint64_t>(kv.get_int("flow.seed", 1));
    const std::string sign_model = kv.get_string("flow.sign_model", "fgn");
    if (sign_model == "fgn")
        cfg.sign_model = sim::SignModel::Fgn;
    else if (sign_model == "hidden")
        cfg.sign_model = sim::SignModel::HiddenOrder;
    else
        throw config_error("flow.sign_model must be 'fgn' or 'hidden'");
    cfg.hidden.beta = kv.get_double("flow.beta", cfg.hidden.beta);
    cfg.hidden.pool_size = static_cast<int>(kv.get_int("flow.hidden_pool", cfg.hidden.pool_size));
    cfg.n_steps = kv.get_int("sim.n_steps", cfg.n_steps);
    cfg.warmup = kv.get_int("sim.warmup", cfg.warmup);
    cfg.init_depth = static_cast<int>(kv.get_int("sim.init_depth", cfg.init_depth));
    cfg.init_spread_ticks =
        static_cast<int>(kv.get_int("sim.init_spread_ticks", cfg.init_spread_ticks));
    cfg.length_multiplier = kv.get_double("sim.length_multiplier", cfg.length_multiplier);
    cfg.reference_len = kv.get_int("sim.reference_len", cfg.reference_len);
    cfg.record_events = kv.get_bool("sim.record_events", cfg.record_events);
    const std::string cancel_model = kv.get_string("sim.cancel_model", "conditional");
    if (cancel_model == "conditional")
        cfg.cancel_model = sim::CancelModel::Conditional;
    else if (cancel_model == "poisson")
        cfg.cancel_model = sim::CancelModel::Poisson;
    else
        throw config_error("sim.cancel_model must be 'conditional' or 'poisson'");
    cfg.poisson_rate = kv.get_double("sim.poisson_rate", cfg.poisson_rate);
    const std::string threshold = kv.get_string("sim.threshold", "spread");
    if (threshold == "spread")
        cfg.threshold = flow::ThresholdMode::PlainSpread;
    else if (threshold == "tick")
        cfg.threshold = flow::ThresholdMode::TickCorrected;
    else
        throw config_error("sim.threshold must be 'spread' or 'tick'");
    cfg.ntot_ceiling = kv.get_int("sim.ntot_ceiling", cfg.ntot_ceiling);
    cfg.ceiling_patience = kv.get_int("sim.ceiling_patience", cfg.ceiling_patience);
    return cfg;
}

io::KvConfig load_overlaid(const std::string& path, const std::vector<std::string>& sets) {
    io::KvConfig kv = path.empty() ? io::KvConfig{} : io::KvConfig::from_file(path);
    for (const std::string& pair : sets) kv.set_pair(pair);
    return kv;
}

json config_json(const io::KvConfig& kv) {
    json j = json::object();
    for (const auto& [k, v] : kv.entries()) j[k] = v;
    return j;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

void write_manifest(const fs::path& dir, const std::string& command,
                    const io::KvConfig& kv, std::uint64_t seed,
                    const std::vector<std::string>& outputs, double duration_s) {
    json j;
    j["schema_version"] = output_schema_version;
    j["tool_version"] = version_string;
    j["command"] = command;
    j["config"] = config_json(kv);
    j["seed"] = seed;
    j["outputs"] = outputs;
    j["duration_seconds"] = duration_s;
    std::ofstream out(dir / "manifest.json");
    out << j.dump(2) << '\n';
}

json tail_json(const stats::TailEstimate& t) {
    return json{{"alpha", t.alpha}, {"k", t.k},       {"se", t.se},
                {"stability", t.stability}, {"unstable", t.unstable}};
}

json series_tails(const std::vector<double>& values) {
    json j = json::object();
    for (const auto& [name, frac] :
         {std::pair<const char*, double>{"f025", 0.025}, {"f05", 0.05}, {"f10", 0.10}}) {
        try {
            j[name] = tail_json(stats::hill_estimator(values, frac));
        } catch (const error& e) {
            j[name] = json{{"error", e.what()}};
        }
    }
    return j;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const integrity_error& e) {
        std::cerr << "data integrity error: " << e.what() << '\n';
        return exit_integrity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }
}

} // namespace

std::string resolve_out_dir(const std::string& out_dir) {
    if (out_dir.empty()) throw config_error("--out is required");
    fs::path p(out_dir);
    if (p.is_relative()) {
        if (const char* root = std::getenv("LOBSIM_OUT_ROOT")) p = fs::path(root) / p;
    }
    return p.string();
}

int cmd_simulate(const SimulateOpts& opts) {
    return run_guarded([&]() -> int {
        Stopwatch watch;
        if (opts.config_path.empty()) throw config_error("--config is required");
        io::KvConfig kv = load_overlaid(opts.config_path, opts.sets);
        if (opts.seed) kv.set("flow.seed", io::format_int(static_cast<std::int64_t>(*opts.seed)));
        kv.require_known(sim_keys);
        sim::SimConfig cfg = sim_config_from(kv);
        cfg.finalize_and_validate();

        const fs::path dir(resolve_out_dir(opts.out_dir));
        fs::create_directories(dir);

        std::vector<std::string> outputs = {"series.csv", "summary.json"};
        std::unique_ptr<calib::CsvEventSink> sink;
        if (cfg.record_events) {
            sink = std::make_unique<calib::CsvEventSink>((dir / "events.csv").string());
            outputs.push_back("events.csv");
        }

        const sim::SimOutput out = sim::run(cfg, sink.get());
        if (sink) sink->flush();

        {
            io::CsvWriter w((dir / "series.csv").string(), {"t", "r", "s", "transacted", "n_tot"});
            for (std::size_t i = 0; i < out.t.size(); ++i) {
                w.begin_row();
                w.field(out.t[i]);
                w.field(out.returns[i]);
                w.field(out.spreads[i]);
                w.field(static_cast<std::int64_t>(out.transacted[i]));
                w.field(static_cast<std::int64_t>(out.n_tot[i]));
                w.end_row();
            }
        }

        json summary;
        summary["schema_version"] = output_schema_version;
        summary["divergent"] = out.diag.divergent;
        summary["steps_run"] = out.diag.steps_run;
        summary["recorded_rows"] = out.t.size();
        if (!out.returns.empty()) {
            std::vector<double> abs_r(out.returns.size());
            for (std::size_t i = 0; i < out.returns.size(); ++i)
                abs_r[i] = std::fabs(out.returns[i]);
            const stats::Summary sr = stats::summarize(abs_r);
            const stats::Summary ss = stats::summarize(out.spreads);
            summary["E_abs_r"] = sr.mean;
            summary["sigma_abs_r"] = sr.sd;
            summary["se_abs_r"] = sr.se_mean;
            summary["E_s"] = ss.mean;
            summary["sigma_s"] = ss.sd;
            summary["se_s"] = ss.se_mean;
            summary["alpha_r"] = series_tails(abs_r);
            summary["alpha_s"] = series_tails(out.spreads);
        }
        summary["transaction_rate"] = out.diag.realized_transaction_rate;
        summary["mean_ntot"] = out.diag.mean_ntot;
        summary["diagnostics"] = {
            {"placed_limits", out.diag.placed_limits},
            {"executed", out.diag.executed},
            {"cancelled", out.diag.cancelled},
            {"rejected_executions", out.diag.rejected_executions},
            {"rejected_cancellations", out.diag.rejected_cancellations},
            {"min_side_depth", out.diag.min_side_depth},
        };
        std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';

        write_manifest(dir, "simulate", kv, cfg.flow.seed, outputs, watch.seconds());
        return out.diag.divergent ? exit_divergence : exit_ok;
    });
}

int cmd_calibrate(const CalibrateOpts& opts) {
    return run_guarded([&]() -> int {
        Stopwatch watch;
        if (opts.events_path.empty()) throw config_error("--events is required");
        io::KvConfig kv = load_overlaid("", opts.sets);
        kv.require_known(calib_keys);

        calib::CalibConfig cfg;
        cfg.s0 = kv.get_double("calib.s0", cfg.s0);
        cfg.tick_override = kv.get_double("calib.tick", cfg.tick_override);
        cfg.rules.time_filters = kv.get_bool("calib.time_filters", cfg.rules.time_filters);
        cfg.logical_time = kv.get_bool("calib.logical_time", !cfg.rules.time_filters);
        cfg.censor_at_tick_window = kv.get_bool("calib.censor_tick", cfg.censor_at_tick_window);
        cfg.rules.max_size = kv.get_double("calib.max_size", cfg.rules.max_size);
        cfg.rules.max_spread_ticks =
            kv.get_int("calib.max_spread_ticks", cfg.rules.max_spread_ticks);
        cfg.rules.stale_window = kv.get_double("calib.stale_window", cfg.rules.stale_window);
        cfg.cancel_bins.y_bins = static_cast<int>(kv.get_int("calib.y_bins", cfg.cancel_bins.y_bins));
        cfg.cancel_bins.y_max = kv.get_double("calib.y_max", cfg.cancel_bins.y_max);
        cfg.cancel_bins.imb_bins =
            static_cast<int>(kv.get_int("calib.imb_bins", cfg.cancel_bins.imb_bins));
        cfg.cancel_bins.ntot_log_base =
            kv.get_double("calib.ntot_log_base", cfg.cancel_bins.ntot_log_base);
        cfg.pstar_bins = static_cast<std::size_t>(kv.get_int("calib.pstar_bins",
                                                             static_cast<std::int64_t>(cfg.pstar_bins)));
        cfg.curve_bins = static_cast<std::size_t>(kv.get_int("calib.curve_bins",
                                                             static_cast<std::int64_t>(cfg.curve_bins)));
        const bool write_curves = kv.get_bool("calib.write_curves", true);

        const fs::path dir(resolve_out_dir(opts.out_dir));
        fs::create_directories(dir);

        const calib::CalibrationReport rep = calib::calibrate_file(opts.events_path, cfg);

        json j;
        j["schema_version"] = output_schema_version;
        j["params"] = {
            {"H_s", rep.H_s},
            {"alpha_x", rep.placement.alpha_x},
            {"sigma_x", rep.placement.sigma_x},
            {"A", rep.cancellation.A_direct},
            {"B", rep.cancellation.B_direct},
            {"T", rep.tick},
        };
        j["cancellation"] = {
            {"K1", rep.cancellation.K1},
            {"K2", rep.cancellation.K2},
            {"K3", rep.cancellation.K3},
            {"P_C", rep.cancellation.P_C},
            {"A_factorized", rep.cancellation.A},
            {"B_curve", rep.cancellation.B},
            {"free_slope", rep.cancellation.free_slope},
        };
        j["placement_fit"] = {
            {"n", rep.placement.n},
            {"log_lik", rep.placement.log_lik},
            {"converged", rep.placement.converged},
            {"nu_at_bound", rep.placement.nu_at_bound},
            {"s0", rep.placement.s0},
        };
        j["hurst"] = {
            {"H", rep.hurst.H},
            {"window_min", rep.hurst.window_min},
            {"window_max", rep.hurst.window_max},
            {"r2", rep.hurst.r2},
        };
        j["filters"] = {
            {"kept", rep.filters.kept},
            {"by_size", rep.filters.by_size},
            {"by_spread", rep.filters.by_spread},
            {"by_same_second", rep.filters.by_same_second},
            {"by_stale_quote", rep.filters.by_stale_quote},
            {"by_missing_context", rep.filters.by_missing_context},
        };
        j["n_events"] = rep.n_events;
        j["n_placements"] = rep.n_placements;
        j["transaction_rate"] = rep.realized_transaction_rate;
        std::ofstream(dir / "report.json") << j.dump(2) << '\n';

        std::vector<std::string> outputs = {"report.json"};
        if (write_curves) {
            {
                io::CsvWriter w((dir / "cancellation_curves.csv").string(),
                                {"variable", "center", "prob", "count"});
                const auto dump = [&](const char* name,
                                      const std::vector<calib::CurvePoint>& curve) {
                    for (const auto& pt : curve) {
                        w.begin_row();
                        w.field(std::string(name));
                        w.field(pt.x);
                        w.field(pt.prob);
                        w.field(pt.count);
                        w.end_row();
                    }
                };
                dump("y", rep.cancellation.curve_y);
                dump("n_imb", rep.cancellation.curve_imb);
                dump("n_tot", rep.cancellation.curve_ntot);
            }
            {
                io::CsvWriter w((dir / "pstar.csv").string(),
                                {"x_lo", "x_hi", "x_center", "count", "density"});
                for (const auto& b : rep.pstar.bins) {
                    w.begin_row();
                    w.field(b.lo);
                    w.field(b.hi);
                    w.field(b.center);
                    w.field(static_cast<std::int64_t>(b.count));
                    w.field(b.density);
                    w.end_row();
                }
            }
            {
                io::CsvWriter w((dir / "transaction_curve.csv").string(),
                                {"s_lo", "s_hi", "s_center", "n", "empirical", "se", "predicted"});
                for (const auto& b : rep.transaction_curve) {
                    w.begin_row();
                    w.field(b.s_lo);
                    w.field(b.s_hi);
                    w.field(b.s_center);
                    w.field(static_cast<std::int64_t>(b.n));
                    w.field(b.empirical);
                    w.field(b.empirical_se);
                    w.field(b.predicted);
                    w.end_row();
                }
            }
            outputs.insert(outputs.end(),
                           {"cancellation_curves.csv", "pstar.csv", "transaction_curve.csv"});
        }

        write_manifest(dir, "calibrate", kv, 0, outputs, watch.seconds());
        return exit_ok;
    });
}

int cmd_sweep(const SweepOpts& opts) {
    return run_guarded([&]() -> int {
        Stopwatch watch;
        if (opts.mode != "stability" && opts.mode != "tails")
            throw config_error("--mode must be 'stability' or 'tails'");
        if (opts.config_path.empty()) throw config_error("--config is required");
        io::KvConfig kv = load_overlaid(opts.config_path, opts.sets);
        if (opts.seed) kv.set("flow.seed", io::format_int(static_cast<std::int64_t>(*opts.seed)));
        kv.require_known(sweep_keys);
        sim::SimConfig base = sim_config_from(kv);

        const fs::path dir(resolve_out_dir(opts.out_dir));
        fs::create_directories(dir);

        const auto grid_from = [&](const char* list_key, const char* min_key,
                                   const char* max_key, const char* steps_key) {
            if (kv.has(list_key)) return kv.get_double_list(list_key, {});
            const double lo = kv.get_double(min_key, 0.0);
            const double hi = kv.get_double(max_key, 0.0);
            const std::int64_t steps = kv.get_int(steps_key, 0);
            if (steps < 1 || !(hi >= lo))
                throw config_error(std::string("sweep grid needs ") + list_key + " or " +
                                   min_key + "/" + max_key + "/" + steps_key);
            std::vector<double> grid;
            for (std::int64_t i = 0; i < steps; ++i)
                grid.push_back(steps == 1 ? lo
                                          : lo + (hi - lo) * static_cast<double>(i) /
                                                     static_cast<double>(steps - 1));
            return grid;
        };

        std::vector<std::string> outputs;
        if (opts.mode == "stability") {
            const auto A_grid = grid_from("sweep.A_list", "sweep.A_min", "sweep.A_max", "sweep.A_steps");
            const auto p0_grid =
                grid_from("sweep.p0_list", "sweep.p0_min", "sweep.p0_max", "sweep.p0_steps");
            const auto T_list = kv.get_double_list("sweep.T_list", {0.25, 0.5, 1.0});
            const std::int64_t steps = kv.get_int("sweep.steps_per_cell", 30000);
            const double growth = kv.get_double("sweep.growth_factor", 2.0);

            const sim::StabilityMap map =
                sim::sweep_stability(base, A_grid, p0_grid, T_list, steps, growth, opts.jobs);
            io::CsvWriter w((dir / "stability.csv").string(),
                            {"T", "A", "p0", "divergent", "mean_ntot", "growth", "steps_run"});
            for (const auto& cell : map.cells) {
                w.begin_row();
                w.field(cell.T);
                w.field(cell.A);
                w.field(cell.p0);
                w.field(static_cast<std::int64_t>(cell.divergent ? 1 : 0));
                w.field(cell.mean_ntot);
                w.field(cell.growth);
                w.field(cell.steps_run);
                w.end_row();
            }
            outputs.push_back("stability.csv");
        } else {
            const auto alpha_grid = grid_from("sweep.alpha_list", "sweep.alpha_min",
                                              "sweep.alpha_max", "sweep.alpha_steps");
            const auto H_list = kv.get_double_list("sweep.H_list", {0.5, 0.75, 0.85});
            const int seeds = static_cast<int>(kv.get_int("sweep.seeds", 1));
            const std::int64_t steps =
                kv.get_int("sweep.steps_per_cell", 1000000 + base.warmup);

            const auto cells = sim::sweep_tails(base, alpha_grid, H_list, seeds, steps, opts.jobs);
            io::CsvWriter w((dir / "tails.csv").string(),
                            {"H_s", "alpha_x", "seed", "alpha_r", "alpha_r_se", "divergent"});
            for (const auto& cell : cells) {
                w.begin_row();
                w.field(cell.H_s);
                w.field(cell.alpha_x);
                w.field(cell.seed);
                w.field(cell.alpha_r);
                w.field(cell.alpha_r_se);
                w.field(static_cast<std::int64_t>(cell.divergent ? 1 : 0));
                w.end_row();
            }
            outputs.push_back("tails.csv");
        }

        write_manifest(dir, "sweep-" + opts.mode, kv, base.flow.seed, outputs, watch.seconds());
        return exit_ok;
    });
}

int cmd_analyze(const AnalyzeOpts& opts) {
    return run_guarded([&]() -> int {
        Stopwatch watch;
        const fs::path dir(resolve_out_dir(opts.out_dir));
        fs::create_directories(dir);

        const io::CsvTable table = io::read_csv(opts.series_path);
        const std::size_t cr = table.col("r");
        const std::size_t cs = table.col("s");
        std::vector<double> abs_r, s;
        abs_r.reserve(table.rows.size());
        s.reserve(table.rows.size());
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            abs_r.push_back(std::fabs(io::parse_double(table.rows[i][cr], i + 2)));
            s.push_back(io::parse_double(table.rows[i][cs], i + 2));
        }
        if (abs_r.empty()) throw integrity_error("analyze: empty series");

        json j;
        j["schema_version"] = output_schema_version;
        const auto summarize_into = [&](const char* name, const std::vector<double>& xs) {
            const stats::Summary sm = stats::summarize(xs);
            j[name] = {{"mean", sm.mean}, {"sd", sm.sd}, {"se_mean", sm.se_mean}, {"n", sm.n}};
        };
        summarize_into("abs_r", abs_r);
        summarize_into("s", s);
        j["alpha_r"] = series_tails(abs_r);
        j["alpha_s"] = series_tails(s);
        try {
            const stats::HurstEstimate hv = stats::dfa_hurst(abs_r);
            j["H_v"] = {{"H", hv.H}, {"r2", hv.r2}};
        } catch (const error& e) {
            j["H_v"] = {{"error", e.what()}};
        }
        std::ofstream(dir / "analysis.json") << j.dump(2) << '\n';

        write_manifest(dir, "analyze", io::KvConfig{}, 0, {"analysis.json"}, watch.seconds());
        return exit_ok;
    });
}

} // namespace lobsim::cli
