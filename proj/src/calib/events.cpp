#include "lobsim/calib/events.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lobsim/detmath.hpp"

namespace lobsim::calib {

int CancelBins::ntot_bin(double n) const {
    if (n < 1.0) n = 1.0;
    const int b = static_cast<int>(detmath::log(n) / detmath::log(ntot_log_base));
    return b >= ntot_bins ? ntot_bins - 1 : b;
}

double CancelBins::ntot_center(int bin) const {
    return detmath::exp((static_cast<double>(bin) + 0.5) * detmath::log(ntot_log_base));
}

std::vector<OrderEvent> load_events(const std::string& path) {
    const io::CsvTable table = io::read_csv(path);
    const std::size_t ct = table.col("t");
    const std::size_t ctype = table.col("type");
    const std::size_t cside = table.col("side");
    const std::size_t cprice = table.col("price");
    const std::size_t cid = table.col("order_id");
    const std::size_t csize = table.col("size");

    std::vector<OrderEvent> events;
    events.reserve(table.rows.size());
    double prev_t = -1e300;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t lineno = r + 2;
        OrderEvent ev;
        ev.t = io::parse_double(row[ct], lineno);
        if (ev.t < prev_t)
            throw integrity_error("events line " + std::to_string(lineno) +
                                  ": timestamps out of order");
        prev_t = ev.t;
        if (row[ctype].size() != 1 || (row[ctype][0] != 'L' && row[ctype][0] != 'M' &&
                                       row[ctype][0] != 'C'))
            throw integrity_error("events line " + std::to_string(lineno) +
                                  ": type must be L, M or C");
        ev.type = row[ctype][0];
        if (row[cside] == "B")
            ev.side = lob::Side::Buy;
        else if (row[cside] == "S")
            ev.side = lob::Side::Sell;
        else
            throw integrity_error("events line " + std::to_string(lineno) +
                                  ": side must be B or S");
        ev.price = io::parse_double(row[cprice], lineno);
        if (!(ev.price > 0.0))
            throw integrity_error("events line " + std::to_string(lineno) +
                                  ": price must be positive");
        ev.order_id = static_cast<std::uint64_t>(io::parse_int(row[cid], lineno));
        ev.size = io::parse_double(row[csize], lineno);
        if (!(ev.size > 0.0))
            throw integrity_error("events line " + std::to_string(lineno) +
                                  ": size must be positive");
        events.push_back(ev);
    }
    if (events.empty()) throw integrity_error("event log is empty: " + path);

    // structural replay: every id placed once, removed at most once, and
    // executions hit the best opposite price
    struct Live {
        lob::Side side;
        double price;
    };
    std::map<std::uint64_t, Live> live;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const OrderEvent& ev = events[i];
        const std::size_t lineno = i + 2;
        if (ev.type == 'L') {
            if (!live.emplace(ev.order_id, Live{ev.side, ev.price}).second)
                throw integrity_error("events line " + std::to_string(lineno) +
                                      ": duplicate order id");
        } else {
            const auto it = live.find(ev.order_id);
            if (it == live.end())
                throw integrity_error("events line " + std::to_string(lineno) + ": " +
                                      (ev.type == 'C' ? "cancel" : "execution") +
                                      " of unknown order id");
            if (it->second.side != ev.side)
                throw integrity_error("events line " + std::to_string(lineno) +
                                      ": side mismatch for order id");
            if (ev.type == 'M') {
                // must be the best price on its side
                double best = it->second.price;
                for (const auto& [id, o] : live)
                    if (o.side == ev.side)
                        best = ev.side == lob::Side::Buy ? std::max(best, o.price)
                                                         : std::min(best, o.price);
                if (best != it->second.price)
                    throw integrity_error("events line " + std::to_string(lineno) +
                                          ": execution away from the best price");
            }
            live.erase(it);
        }
    }
    return events;
}

double estimate_tick(std::span<const OrderEvent> events) {
    std::set<double> prices;
    for (const OrderEvent& ev : events) prices.insert(ev.price);
    if (prices.size() < 2) throw integrity_error("estimate_tick: need at least two distinct prices");
    double tick = 1e300;
    double prev = *prices.begin();
    for (auto it = std::next(prices.begin()); it != prices.end(); ++it) {
        tick = std::min(tick, *it - prev);
        prev = *it;
    }
    for (double p : prices) {
        const double k = p / tick;
        if (std::fabs(k - std::nearbyint(k)) > 1e-6)
            throw integrity_error("estimate_tick: prices are not on a common grid");
    }
    return tick;
}

namespace {

struct SnapshotOrder {
    std::uint64_t id;
    double y;
    double imb;
};

} // namespace

ReplayResult replay_events(std::span<const OrderEvent> events, const CancelBins& bins,
                           double tick_override, bool logical_time) {
    ReplayResult res;
    res.n_events = events.size();
    res.tick = tick_override > 0.0 ? tick_override : estimate_tick(events);
    res.hists.bins = bins;
    res.hists.y_all.assign(static_cast<std::size_t>(bins.y_bins) + 1, 0.0);
    res.hists.y_canc.assign(static_cast<std::size_t>(bins.y_bins) + 1, 0.0);
    res.hists.imb_all.assign(static_cast<std::size_t>(bins.imb_bins), 0.0);
    res.hists.imb_canc.assign(static_cast<std::size_t>(bins.imb_bins), 0.0);
    res.hists.ntot_all.assign(static_cast<std::size_t>(bins.ntot_bins), 0.0);
    res.hists.ntot_canc.assign(static_cast<std::size_t>(bins.ntot_bins), 0.0);
    res.hists.imb_gn.assign(static_cast<std::size_t>(bins.imb_bins), 0.0);
    res.hists.imb_canc_valid.assign(static_cast<std::size_t>(bins.imb_bins), 0.0);

    const lob::TickGrid grid{res.tick};
    lob::OrderBook book(grid);

    // id-sorted snapshot taken after each placement
    std::vector<SnapshotOrder> snap;
    double snap_ntot = 0.0;

    double last_widen = -1e300;
    double prev_spread = -1.0;
    std::map<std::uint64_t, std::uint64_t> id_map; // external id -> internal id

    const auto track_spread = [&](double t) {
        if (book.n_buy() == 0 || book.n_sell() == 0) return;
        const lob::Quotes q = book.quotes();
        if (prev_spread >= 0.0 && q.spread > prev_spread) last_widen = t;
        prev_spread = q.spread;
    };

    // One cancellation opportunity for every resting order; mult > 1 counts
    // the sweeps of hidden steps whose state is identical to the current one.
    const auto take_snapshot = [&](double mult) {
        snap.clear();
        snap_ntot = static_cast<double>(book.n_tot());
        if (snap_ntot == 0.0) return;
        const bool have_both = book.n_buy() > 0 && book.n_sell() > 0;
        double bid_log = 0.0, ask_log = 0.0;
        if (have_both) {
            const lob::Quotes q = book.quotes();
            bid_log = q.bid_log;
            ask_log = q.ask_log;
        }
        const double imb_b = book.imbalance(lob::Side::Buy);
        const double imb_s = 1.0 - imb_b;

        double exposed = 0.0;
        for (lob::Side s : {lob::Side::Buy, lob::Side::Sell}) {
            const auto view = book.view(s);
            // two orders per side are protected by the stability floor: their
            // cancellation hazard is exactly zero, so they are not exposures
            const bool exposable = view.ids.size() > 2;
            const double imb = s == lob::Side::Buy ? imb_b : imb_s;
            const double opp = s == lob::Side::Buy ? ask_log : bid_log;
            if (exposable) {
                exposed += static_cast<double>(view.ids.size());
                res.hists.imb_all[static_cast<std::size_t>(bins.imb_bin(imb))] +=
                    mult * static_cast<double>(view.ids.size());
            }
            for (std::size_t i = 0; i < view.ids.size(); ++i) {
                double y = -1.0;
                if (have_both && view.inv_delta0[i] > 0.0) {
                    const double d = s == lob::Side::Buy ? opp - view.log_price[i]
                                                         : view.log_price[i] - opp;
                    y = d * view.inv_delta0[i];
                    if (exposable) {
                        res.hists.y_all[static_cast<std::size_t>(bins.y_bin(y))] += mult;
                        const double g = 1.0 - detmath::exp(-y);
                        res.hists.sum_g_over_n += mult * g / snap_ntot;
                        res.hists.sum_g_imb_over_n += mult * g * imb / snap_ntot;
                        res.hists.imb_gn[static_cast<std::size_t>(bins.imb_bin(imb))] +=
                            mult * g / snap_ntot;
                    }
                }
                snap.push_back(SnapshotOrder{view.ids[i], y, imb});
            }
        }
        res.hists.ntot_all[static_cast<std::size_t>(bins.ntot_bin(snap_ntot))] +=
            mult * exposed;
        res.hists.obs_total += mult * exposed;
        std::sort(snap.begin(), snap.end(),
                  [](const SnapshotOrder& a, const SnapshotOrder& b) { return a.id < b.id; });
    };

    std::int64_t prev_step = 0;
    bool group_has_snapshot = true; // seeds at t = 0 precede the first sweep
    std::int64_t group_t = 0;

    for (const OrderEvent& ev : events) {
        if (logical_time) {
            const auto t_step = static_cast<std::int64_t>(ev.t);
            if (t_step != group_t) {
                // steps with no events at all: rejected market orders whose
                // sweeps cancelled nothing; the state they saw is the current one
                const std::int64_t hidden = t_step - prev_step - 1;
                if (hidden > 0) take_snapshot(static_cast<double>(hidden));
                prev_step = group_t = t_step;
                group_has_snapshot = false;
            }
        }
        if (ev.type == 'L') {
            const std::int64_t ticks = grid.index_of(ev.price * (1.0 + 1e-12));
            PlacementRow row;
            row.t = ev.t;
            row.side = ev.side;
            row.market = false;
            row.size = ev.size;
            row.price = grid.price(ticks);
            row.t_last_widen = last_widen;
            const bool have_both = book.n_buy() > 0 && book.n_sell() > 0;
            if (have_both) {
                const lob::Quotes q = book.quotes();
                row.spread = q.spread;
                row.spread_ticks = q.ask_ticks - q.bid_ticks;
                row.p_mid = detmath::exp(q.mid_log);
                row.tick_over_p = res.tick / row.p_mid;
                const double own = grid.log_price(ticks);
                row.x = ev.side == lob::Side::Buy ? own - q.bid_log : q.ask_log - own;
                row.x_valid = true;
            }
            std::uint64_t internal;
            const bool opp_empty =
                ev.side == lob::Side::Buy ? book.n_sell() == 0 : book.n_buy() == 0;
            if (opp_empty) {
                // bootstrap rows (the very first side of the initial book):
                // delta0 is undefined, excluded from the y statistics
                internal = book.seed_order(ev.side, ticks, static_cast<std::int64_t>(ev.t),
                                           std::numeric_limits<double>::infinity());
            } else {
                internal =
                    book.place_limit(ev.side, ticks, static_cast<std::int64_t>(ev.t)).id;
            }
            id_map[ev.order_id] = internal;
            res.placements.push_back(row);
            track_spread(ev.t);
            take_snapshot(1.0);
            group_has_snapshot = true;
        } else if (ev.type == 'M') {
            const auto it = id_map.find(ev.order_id);
            if (it == id_map.end()) throw integrity_error("replay: execution of unknown id");
            PlacementRow row;
            row.t = ev.t;
            row.side = opposite(ev.side); // aggressor
            row.market = true;
            row.size = ev.size;
            row.price = ev.price;
            row.t_last_widen = last_widen;
            if (book.n_buy() > 0 && book.n_sell() > 0) {
                const lob::Quotes q = book.quotes();
                row.spread = q.spread;
                row.spread_ticks = q.ask_ticks - q.bid_ticks;
                row.p_mid = detmath::exp(q.mid_log);
                row.tick_over_p = res.tick / row.p_mid;
            }
            if (book.oldest_at_best(ev.side) != it->second)
                throw integrity_error("replay: execution is not the oldest order at the best");
            book.remove_order(it->second, static_cast<std::int64_t>(ev.t));
            id_map.erase(it);
            res.placements.push_back(row);
            track_spread(ev.t);
            take_snapshot(1.0);
            group_has_snapshot = true;
        } else {
            const auto it = id_map.find(ev.order_id);
            if (it == id_map.end()) throw integrity_error("replay: cancel of unknown id");
            // a cancellation group with no preceding placement at this step:
            // the sweep of a rejected-execution step, observing the current state
            if (logical_time && !group_has_snapshot) {
                take_snapshot(1.0);
                group_has_snapshot = true;
            }
            const auto sit = std::lower_bound(
                snap.begin(), snap.end(), it->second,
                [](const SnapshotOrder& a, std::uint64_t id) { return a.id < id; });
            if (sit != snap.end() && sit->id == it->second) {
                if (sit->y >= 0.0) {
                    res.hists.y_canc[static_cast<std::size_t>(bins.y_bin(sit->y))] += 1.0;
                    res.hists.canc_count += 1.0;
                    res.hists.imb_canc_valid[static_cast<std::size_t>(
                        bins.imb_bin(sit->imb))] += 1.0;
                }
                res.hists.imb_canc[static_cast<std::size_t>(bins.imb_bin(sit->imb))] += 1.0;
                res.hists.ntot_canc[static_cast<std::size_t>(bins.ntot_bin(snap_ntot))] += 1.0;
                res.hists.canc_total += 1.0;
            }
            book.remove_order(it->second, static_cast<std::int64_t>(ev.t));
            id_map.erase(it);
            track_spread(ev.t);
        }
    }
    return res;
}

} // namespace lobsim::calib
