#include <CLI11.hpp>

#include "lobsim/cli/commands.hpp"
#include "lobsim/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lobsim: continuous-double-auction order-flow simulator and calibration toolkit"};
    app.set_version_flag("--version", lobsim::version_string);
    app.require_subcommand(1);

    lobsim::cli::SimulateOpts sim_opts;
    CLI::App* sim = app.add_subcommand("simulate", "run a price-formation simulation");
    sim->add_option("--config", sim_opts.config_path, "key=value config file")->required();
    sim->add_option("--set", sim_opts.sets, "override a config key (key=value, repeatable)");
    sim->add_option("--seed", sim_opts.seed, "override flow.seed");
    sim->add_option("--out", sim_opts.out_dir, "output directory")->required();

    lobsim::cli::CalibrateOpts cal_opts;
    CLI::App* cal = app.add_subcommand("calibrate", "fit flow parameters from an event log");
    cal->add_option("--events", cal_opts.events_path, "event CSV (t,type,side,price,order_id,size)")
        ->required();
    cal->add_option("--set", cal_opts.sets, "override a calib.* key (repeatable)");
    cal->add_option("--out", cal_opts.out_dir, "output directory")->required();

    lobsim::cli::SweepOpts sweep_opts;
    CLI::App* sweep = app.add_subcommand("sweep", "stability or tail-exponent parameter sweep");
    sweep->add_option("--mode", sweep_opts.mode, "stability | tails")->required();
    sweep->add_option("--config", sweep_opts.config_path, "key=value config file")->required();
    sweep->add_option("--set", sweep_opts.sets, "override a config key (repeatable)");
    sweep->add_option("--seed", sweep_opts.seed, "override flow.seed");
    sweep->add_option("--jobs", sweep_opts.jobs, "parallel cells (default: hardware)");
    sweep->add_option("--out", sweep_opts.out_dir, "output directory")->required();

    lobsim::cli::AnalyzeOpts an_opts;
    CLI::App* an = app.add_subcommand("analyze", "summary statistics of a series CSV");
    an->add_option("--series", an_opts.series_path, "series CSV with r and s columns")->required();
    an->add_option("--out", an_opts.out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : lobsim::cli::exit_config;
    }

    if (sim->parsed()) return lobsim::cli::cmd_simulate(sim_opts);
    if (cal->parsed()) return lobsim::cli::cmd_calibrate(cal_opts);
    if (sweep->parsed()) return lobsim::cli::cmd_sweep(sweep_opts);
    return lobsim::cli::cmd_analyze(an_opts);
}
