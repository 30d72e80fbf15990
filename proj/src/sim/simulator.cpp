#include "lobsim/sim/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "lobsim/detmath.hpp"
#include "lobsim/flow/placement.hpp"
#include "lobsim/flow/signs.hpp"
#include "lobsim/kernels.hpp"
#include "lobsim/rng.hpp"

namespace lobsim::sim {

void SimConfig::finalize_and_validate() {
    flow.validate();
    if (sign_model == SignModel::HiddenOrder) hidden.validate();
    if (n_steps == 0 && reference_len > 0)
        n_steps = static_cast<std::int64_t>(length_multiplier * static_cast<double>(reference_len)) + warmup;
    if (n_steps <= warmup) throw config_error("n_steps must exceed warmup");
    if (warmup < 0) throw config_error("warmup must be nonnegative");
    if (init_depth < 2) throw config_error("init_depth must be at least 2");
    if (init_spread_ticks < 1) throw config_error("init_spread_ticks must be at least 1");
    if (cancel_model == CancelModel::Poisson && !(poisson_rate > 0.0))
        throw config_error("poisson cancellation needs a positive rate");
    if (ntot_ceiling < 100) throw config_error("ntot_ceiling too small");
    if (ceiling_patience < 1) throw config_error("ceiling_patience must be positive");
}

lob::OrderBook init_book(const SimConfig& cfg, lob::EventSink* sink) {
    const lob::TickGrid grid{cfg.flow.T};
    const std::int64_t center = grid.index_of(cfg.flow.p0);
    const std::int64_t bid = center - cfg.init_spread_ticks;
    if (bid < 1) throw config_error("p0 too small for the initial spread");

    lob::OrderBook book(grid);
    book.set_event_sink(sink);
    const double s0 = grid.log_price(center) - grid.log_price(bid);
    // interleave so that an event-log replay sees an opposite best early
    for (int i = 0; i < cfg.init_depth; ++i) {
        book.seed_order(lob::Side::Buy, bid, 0, s0);
        book.seed_order(lob::Side::Sell, center, 0, s0);
    }
    return book;
}

namespace {

class Simulation {
public:
    Simulation(const SimConfig& cfg, lob::EventSink* sink)
        : cfg_(cfg),
          book_(init_book(cfg, sink)),
          rng_(Rng::derive_seed(cfg.flow.seed, 2)) {}

    SimOutput run_all() {
        const auto n = static_cast<std::size_t>(cfg_.n_steps);
        const std::uint64_t sign_seed = Rng::derive_seed(cfg_.flow.seed, 1);
        const std::vector<std::int8_t> signs =
            cfg_.sign_model == SignModel::Fgn
                ? flow::gen_signs_fgn(n, cfg_.flow.H_s, sign_seed)
                : flow::gen_signs_hidden_order(n, cfg_.hidden, sign_seed);

        const auto recorded = static_cast<std::size_t>(cfg_.n_steps - cfg_.warmup);
        out_.t.reserve(recorded);
        out_.returns.reserve(recorded);
        out_.spreads.reserve(recorded);
        out_.transacted.reserve(recorded);
        out_.n_tot.reserve(recorded);

        min_depth_ = std::min(book_.n_buy(), book_.n_sell());
        std::int64_t above_ceiling = 0;
        double ntot_acc = 0.0;

        std::int64_t t = 1;
        for (; t <= cfg_.n_steps; ++t) {
            const lob::Side side = signs[static_cast<std::size_t>(t - 1)] > 0
                                       ? lob::Side::Buy
                                       : lob::Side::Sell;
            step(t, side);
            if (t > cfg_.warmup && t < cfg_.n_steps) {
                // row caused by step t: pre-placement spread, post-step midprice move
                const lob::Quotes post = book_.quotes();
                out_.t.push_back(t);
                out_.returns.push_back(post.mid_log - pre_.mid_log);
                out_.spreads.push_back(pre_.spread);
                out_.transacted.push_back(transacted_ ? 1 : 0);
                out_.n_tot.push_back(static_cast<std::int32_t>(book_.n_tot()));
                ntot_acc += static_cast<double>(book_.n_tot());
            }
            if (static_cast<std::int64_t>(book_.n_tot()) > cfg_.ntot_ceiling) {
                if (++above_ceiling >= cfg_.ceiling_patience) {
                    out_.diag.divergent = true;
                    break;
                }
            } else {
                above_ceiling = 0;
            }
        }

        out_.diag.steps_run = std::min(t, cfg_.n_steps);
        out_.diag.min_side_depth = min_depth_;
        const std::size_t rows = out_.t.size();
        out_.diag.mean_ntot = rows ? ntot_acc / static_cast<double>(rows) : 0.0;
        out_.diag.realized_transaction_rate =
            rows ? static_cast<double>(std::count(out_.transacted.begin(),
                                                  out_.transacted.end(), 1)) /
                       static_cast<double>(rows)
                 : 0.0;
        return std::move(out_);
    }

private:
    void step(std::int64_t t, lob::Side side) {
        pre_ = book_.quotes();
        transacted_ = false;

        const double x = flow::sample_rel_price(cfg_.flow.sigma_x, cfg_.flow.alpha_x, rng_);
        const flow::Classified cls =
            flow::classify_order(x, pre_, side, book_.grid(), cfg_.threshold);
        if (cls.market) {
            if (auto filled = book_.execute_market(side, t)) {
                out_.lifetimes.push_back({t - filled->t_placed, false});
                ++out_.diag.executed;
                transacted_ = true;
            } else {
                ++out_.diag.rejected_executions;
            }
        } else {
            book_.place_limit(side, cls.ticks, t);
            ++out_.diag.placed_limits;
        }

        cancel_sweep(t);
        min_depth_ = std::min({min_depth_, book_.n_buy(), book_.n_sell()});
    }

    // Inputs (quotes, counts, y_i) are frozen at sweep start; orders are
    // visited in ascending id order across both sides, one uniform draw each.
    void cancel_sweep(std::int64_t t) {
        const std::size_t nb = book_.n_buy();
        const std::size_t ns = book_.n_sell();
        const std::size_t n = nb + ns;
        if (n == 0) return;

        const auto bv = book_.view(lob::Side::Buy);
        const auto sv = book_.view(lob::Side::Sell);
        probs_buy_.resize(nb);
        probs_sell_.resize(ns);

        if (cfg_.cancel_model == CancelModel::Conditional) {
            const lob::Quotes q = book_.quotes();
            // quote ordering guarantees every resting order's distance to the
            // opposite best is positive, so y_i > 0 throughout the sweep
            assert(q.bid_log < q.ask_log);
            const double inv_n = 1.0 / static_cast<double>(n);
            const double imb_b = static_cast<double>(nb) * inv_n;
            const double imb_s = static_cast<double>(ns) * inv_n;
            const double coef_b = cfg_.flow.A * (imb_b + cfg_.flow.B) * inv_n;
            const double coef_s = cfg_.flow.A * (imb_s + cfg_.flow.B) * inv_n;
            const auto& k = kernels::active();
            k.cancel_probs(bv.log_price.data(), bv.inv_delta0.data(), nb, q.ask_log,
                           +1.0, coef_b, probs_buy_.data());
            k.cancel_probs(sv.log_price.data(), sv.inv_delta0.data(), ns, q.bid_log,
                           -1.0, coef_s, probs_sell_.data());
        } else {
            std::fill(probs_buy_.begin(), probs_buy_.end(), cfg_.poisson_rate);
            std::fill(probs_sell_.begin(), probs_sell_.end(), cfg_.poisson_rate);
        }

        ids_buy_.assign(bv.ids.begin(), bv.ids.end());
        ids_sell_.assign(sv.ids.begin(), sv.ids.end());
        to_cancel_.clear();

        std::size_t live_b = nb, live_s = ns;
        std::size_t i = 0, j = 0;
        while (i < nb || j < ns) {
            const bool take_buy = j >= ns || (i < nb && ids_buy_[i] < ids_sell_[j]);
            const double p = take_buy ? probs_buy_[i] : probs_sell_[j];
            const std::uint64_t id = take_buy ? ids_buy_[i] : ids_sell_[j];
            std::size_t& live = take_buy ? live_b : live_s;
            take_buy ? ++i : ++j;
            if (rng_.uniform() < p) {
                if (live > 2) {
                    to_cancel_.push_back(id);
                    --live;
                } else {
                    ++out_.diag.rejected_cancellations;
                }
            }
        }
        for (std::uint64_t id : to_cancel_) {
            const lob::Order o = book_.remove_order(id, t);
            out_.lifetimes.push_back({t - o.t_placed, true});
            ++out_.diag.cancelled;
        }
    }

    SimConfig cfg_;
    lob::OrderBook book_;
    Rng rng_;
    SimOutput out_;
    lob::Quotes pre_;
    bool transacted_ = false;
    std::size_t min_depth_ = 0;
    std::vector<double> probs_buy_, probs_sell_;
    std::vector<std::uint64_t> ids_buy_, ids_sell_;
    std::vector<std::uint64_t> to_cancel_;
};

} // namespace

SimOutput run(const SimConfig& cfg_in, lob::EventSink* sink) {
    SimConfig cfg = cfg_in;
    cfg.finalize_and_validate();
    Simulation s(cfg, sink);
    return s.run_all();
}

} // namespace lobsim::sim
