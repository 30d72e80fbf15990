#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lobsim/io/csv.hpp"
#include "lobsim/lob/book.hpp"

namespace lobsim::calib {

/// One book mutation. Columns t,type,side,price,order_id,size; type L places
/// a limit order, M removes the filled resting order (the market order's side
/// is the opposite of the row's side), C cancels.
struct OrderEvent {
    double t = 0.0;
    char type = 'L';
    lob::Side side = lob::Side::Buy;
    double price = 0.0;
    std::uint64_t order_id = 0;
    double size = 1.0;
};

/// EventSink that streams book mutations into the calibration CSV schema.
class CsvEventSink : public lob::EventSink {
public:
    explicit CsvEventSink(const std::string& path)
        : writer_(path, {"t", "type", "side", "price", "order_id", "size"}) {}

    void on_event(const lob::BookEvent& ev) override {
        writer_.begin_row();
        writer_.field(ev.t);
        writer_.field(ev.type);
        writer_.field(ev.side == lob::Side::Buy ? 'B' : 'S');
        writer_.field(ev.price);
        writer_.field(ev.order_id);
        writer_.field(std::int64_t{1});
        writer_.end_row();
    }

    void flush() { writer_.flush(); }

private:
    io::CsvWriter writer_;
};

/// Parse an event log and validate it structurally and by full book replay
/// (monotone timestamps, known ids, executions at the opposite best).
/// Malformed rows and replay inconsistencies throw integrity_error with the
/// offending line.
std::vector<OrderEvent> load_events(const std::string& path);

/// Smallest positive gap between distinct observed prices; every price must
/// sit on the implied grid.
double estimate_tick(std::span<const OrderEvent> events);

/// One order placement with its book context, produced by replay.
/// For executions the side is the aggressor's (the placed market order).
struct PlacementRow {
    double t = 0.0;
    lob::Side side = lob::Side::Buy;
    bool market = false;
    double size = 1.0;
    double price = 0.0;
    double x = 0.0;              ///< log distance from the same best (limit rows)
    bool x_valid = false;
    double spread = 0.0;         ///< immediately before the placement
    std::int64_t spread_ticks = 0;
    double p_mid = 0.0;          ///< midprice (currency) before the placement
    double tick_over_p = 0.0;    ///< T / p at placement
    double t_last_widen = -1e300;///< time of the last spread increase before this row
};

/// Histogram accumulators for the conditional cancellation fits.
struct CancelBins {
    int y_bins = 40;       ///< linear bins on [0, y_max] plus overflow
    double y_max = 4.0;
    int imb_bins = 20;     ///< linear bins on [0, 1]
    double ntot_log_base = 1.25;
    int ntot_bins = 64;

    int y_bin(double y) const {
        if (y >= y_max) return y_bins;
        const int b = static_cast<int>(y / y_max * y_bins);
        return b < 0 ? 0 : (b >= y_bins ? y_bins - 1 : b);
    }
    int imb_bin(double v) const {
        const int b = static_cast<int>(v * imb_bins);
        return b < 0 ? 0 : (b >= imb_bins ? imb_bins - 1 : b);
    }
    int ntot_bin(double n) const;
    double ntot_center(int bin) const;
};

struct CancelHists {
    CancelBins bins;
    std::vector<double> y_all, y_canc;
    std::vector<double> imb_all, imb_canc;
    std::vector<double> ntot_all, ntot_canc;
    double obs_total = 0.0;  ///< resting-order observations (one per order per placement)
    double canc_total = 0.0;

    // Moment sums for the direct (A, B) estimator, g = 1 - e^-y, over
    // observations with valid y and the matching cancellations. Within an
    // imbalance bin, cancellations / sum(g/n) = A (n_imb + B) exactly under
    // the model, whatever the correlations between y, n_imb and n_tot.
    double sum_g_over_n = 0.0;        ///< sum g / n_tot
    double sum_g_imb_over_n = 0.0;    ///< sum g * n_imb / n_tot
    double canc_count = 0.0;          ///< cancellations with valid y
    std::vector<double> imb_gn;       ///< per imb bin: sum g / n_tot
    std::vector<double> imb_canc_valid; ///< per imb bin: cancellations with valid y
};

struct ReplayResult {
    std::vector<PlacementRow> placements;
    CancelHists hists;
    double tick = 1.0;
    std::size_t n_events = 0;
};

/// Replay the full event stream: annotate every placement with its book
/// context and accumulate the cancellation histograms. After each placement
/// the state of every resting order is snapshotted (that is the observation
/// set); cancellations are attributed to their snapshot values.
///
/// With logical_time (the default, matching simulator logs where t counts
/// order placements), gaps in the integer timestamps are steps whose market
/// order was rejected by the stability floor: no event is logged but the
/// cancellation sweep still ran, so the replay re-snapshots and counts the
/// extra exposure. Pass logical_time = false for wall-clock data.
ReplayResult replay_events(std::span<const OrderEvent> events, const CancelBins& bins,
                           double tick_override = 0.0, bool logical_time = true);

} // namespace lobsim::calib
