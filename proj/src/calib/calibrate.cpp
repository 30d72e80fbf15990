#include "lobsim/calib/calibrate.hpp"

namespace lobsim::calib {

stats::HurstEstimate calibrate_hurst(std::span<const PlacementRow> placements) {
    if (placements.size() < 10000)
        throw config_error("calibrate_hurst: need at least 1e4 placements");
    std::vector<std::int8_t> signs;
    signs.reserve(placements.size());
    for (const PlacementRow& r : placements)
        signs.push_back(r.side == lob::Side::Buy ? 1 : -1);
    std::vector<double> as_double(signs.begin(), signs.end());
    return stats::dfa_hurst(as_double);
}

CalibrationReport calibrate(std::span<const OrderEvent> events, const CalibConfig& cfg) {
    const ReplayResult replay =
        replay_events(events, cfg.cancel_bins, cfg.tick_override, cfg.logical_time);

    CalibrationReport rep;
    rep.tick = replay.tick;
    rep.n_events = replay.n_events;
    rep.n_placements = replay.placements.size();

    rep.hurst = calibrate_hurst(replay.placements);
    rep.H_s = rep.hurst.H;

    const FilteredPlacements filtered = filter_events(replay.placements, cfg.rules);
    rep.filters = filtered.counts;

    rep.pstar = reconstruct_pstar(filtered.rows, cfg.s0, cfg.pstar_bins);

    // censored MLE over all surviving placements: observed draws from the
    // limit orders, right-censoring thresholds from the market orders
    std::vector<double> obs, censors;
    for (const PlacementRow& r : filtered.rows) {
        if (r.market)
            censors.push_back(cfg.censor_at_tick_window ? r.spread - r.tick_over_p
                                                        : r.spread);
        else if (r.x_valid)
            obs.push_back(r.x);
    }
    rep.placement = fit_student_censored(obs, censors);
    rep.placement.s0 = cfg.s0;

    rep.cancellation = fit_cancellation(replay.hists);

    rep.transaction_curve = empirical_transaction_curve(
        filtered.rows, rep.placement.sigma_x, rep.placement.alpha_x, cfg.curve_bins);

    std::size_t markets = 0;
    for (const PlacementRow& r : filtered.rows) markets += r.market ? 1 : 0;
    rep.realized_transaction_rate =
        filtered.rows.empty() ? 0.0
                              : static_cast<double>(markets) /
                                    static_cast<double>(filtered.rows.size());
    return rep;
}

CalibrationReport calibrate_file(const std::string& events_path, const CalibConfig& cfg) {
    const std::vector<OrderEvent> events = load_events(events_path);
    return calibrate(events, cfg);
}

} // namespace lobsim::calib
