#include "lobsim/lob/book.hpp"

#include <algorithm>
#include <cmath>

#include "lobsim/detmath.hpp"

namespace lobsim::lob {

std::int64_t TickGrid::index_of(double price) const {
    if (!(price > 0.0)) throw config_error("price must be positive");
    return static_cast<std::int64_t>(std::floor(price / tick));
}

double TickGrid::log_price(std::int64_t index) const {
    return detmath::log(static_cast<double>(index) * tick);
}

OrderBook::OrderBook(TickGrid grid) : grid_(grid) {
    if (!(grid_.tick > 0.0)) throw config_error("tick size must be positive");
    // bids: highest price first; asks: lowest price first
    buy_.levels = decltype(buy_.levels)(std::greater<std::int64_t>{});
    sell_.levels = decltype(sell_.levels)(std::less<std::int64_t>{});
}

void OrderBook::emit(std::int64_t t, char type, Side s, std::int64_t ticks, std::uint64_t id) {
    if (sink_) sink_->on_event(BookEvent{t, type, s, grid_.price(ticks), id});
}

std::uint64_t OrderBook::insert(Side s, std::int64_t ticks, std::int64_t now, double delta0) {
    BookSide& bs = side(s);
    const std::uint64_t id = next_id_++;
    bs.ids.push_back(id);
    bs.ticks.push_back(ticks);
    bs.log_px.push_back(grid_.log_price(ticks));
    bs.delta0.push_back(delta0);
    bs.inv_delta0.push_back(1.0 / delta0);
    bs.t_placed.push_back(now);
    bs.levels[ticks].push_back(id);
    emit(now, 'L', s, ticks, id);
    return id;
}

std::uint64_t OrderBook::seed_order(Side s, std::int64_t ticks, std::int64_t now, double delta0) {
    if (!(delta0 > 0.0)) throw contract_error("seed_order: delta0 must be positive");
    if (ticks < 1) throw contract_error("seed_order: price below one tick");
    return insert(s, ticks, now, delta0);
}

Order OrderBook::place_limit(Side s, std::int64_t ticks, std::int64_t now) {
    if (ticks < 1) throw contract_error("place_limit: price below one tick");
    const BookSide& opp = side(opposite(s));
    if (opp.levels.empty()) throw contract_error("place_limit: opposite side empty, delta0 undefined");
    const std::int64_t opp_best = opp.levels.begin()->first;
    if (s == Side::Buy ? ticks >= opp_best : ticks <= opp_best)
        throw contract_error("place_limit: price crosses or locks the opposite best");
    const double opp_log = grid_.log_price(opp_best);
    const double own_log = grid_.log_price(ticks);
    const double delta0 = s == Side::Buy ? opp_log - own_log : own_log - opp_log;
    const std::uint64_t id = insert(s, ticks, now, delta0);
    return Order{id, s, ticks, own_log, now, delta0};
}

Order OrderBook::erase_at(Side s, std::size_t pos, std::int64_t now, char event_type) {
    BookSide& bs = side(s);
    Order out;
    out.id = bs.ids[pos];
    out.side = s;
    out.price_ticks = bs.ticks[pos];
    out.log_price = bs.log_px[pos];
    out.t_placed = bs.t_placed[pos];
    out.delta0 = bs.delta0[pos];

    auto lvl = bs.levels.find(out.price_ticks);
    auto& q = lvl->second;
    q.erase(std::find(q.begin(), q.end(), out.id));
    if (q.empty()) bs.levels.erase(lvl);

    bs.ids.erase(bs.ids.begin() + pos);
    bs.ticks.erase(bs.ticks.begin() + pos);
    bs.log_px.erase(bs.log_px.begin() + pos);
    bs.inv_delta0.erase(bs.inv_delta0.begin() + pos);
    bs.delta0.erase(bs.delta0.begin() + pos);
    bs.t_placed.erase(bs.t_placed.begin() + pos);

    emit(now, event_type, s, out.price_ticks, out.id);
    return out;
}

std::optional<Order> OrderBook::execute_market(Side aggressor, std::int64_t now) {
    const Side resting = opposite(aggressor);
    BookSide& bs = side(resting);
    if (bs.size() < 3) return std::nullopt; // keep at least two orders per side
    const std::uint64_t victim = bs.levels.begin()->second.front();
    const auto it = std::lower_bound(bs.ids.begin(), bs.ids.end(), victim);
    return erase_at(resting, static_cast<std::size_t>(it - bs.ids.begin()), now, 'M');
}

std::optional<Order> OrderBook::cancel_order(std::uint64_t id, std::int64_t now) {
    for (Side s : {Side::Buy, Side::Sell}) {
        BookSide& bs = side(s);
        const auto it = std::lower_bound(bs.ids.begin(), bs.ids.end(), id);
        if (it != bs.ids.end() && *it == id) {
            if (bs.size() < 3) return std::nullopt;
            return erase_at(s, static_cast<std::size_t>(it - bs.ids.begin()), now, 'C');
        }
    }
    throw contract_error("cancel_order: unknown order id");
}

Order OrderBook::remove_order(std::uint64_t id, std::int64_t now) {
    for (Side s : {Side::Buy, Side::Sell}) {
        BookSide& bs = side(s);
        const auto it = std::lower_bound(bs.ids.begin(), bs.ids.end(), id);
        if (it != bs.ids.end() && *it == id)
            return erase_at(s, static_cast<std::size_t>(it - bs.ids.begin()), now, 'C');
    }
    throw contract_error("remove_order: unknown order id");
}

Quotes OrderBook::quotes() const {
    if (buy_.levels.empty() || sell_.levels.empty()) throw empty_book_error{};
    Quotes q;
    q.bid_ticks = buy_.levels.begin()->first;
    q.ask_ticks = sell_.levels.begin()->first;
    q.bid_log = grid_.log_price(q.bid_ticks);
    q.ask_log = grid_.log_price(q.ask_ticks);
    q.mid_log = 0.5 * (q.bid_log + q.ask_log);
    q.spread = q.ask_log - q.bid_log;
    return q;
}

double OrderBook::imbalance(Side s) const {
    const std::size_t n = n_tot();
    if (n == 0) throw empty_book_error{};
    return static_cast<double>(side(s).size()) / static_cast<double>(n);
}

bool OrderBook::contains(std::uint64_t id) const {
    for (Side s : {Side::Buy, Side::Sell}) {
        const BookSide& bs = side(s);
        const auto it = std::lower_bound(bs.ids.begin(), bs.ids.end(), id);
        if (it != bs.ids.end() && *it == id) return true;
    }
    return false;
}

std::int64_t OrderBook::best_ticks(Side s) const {
    const BookSide& bs = side(s);
    if (bs.levels.empty()) throw empty_book_error{};
    return bs.levels.begin()->first;
}

std::uint64_t OrderBook::oldest_at_best(Side s) const {
    const BookSide& bs = side(s);
    if (bs.levels.empty()) throw empty_book_error{};
    return bs.levels.begin()->second.front();
}

OrderBook::SideView OrderBook::view(Side s) const {
    const BookSide& bs = side(s);
    return SideView{bs.ids, bs.log_px, bs.inv_delta0};
}

void OrderBook::check_invariants() const {
    if (!buy_.levels.empty() && !sell_.levels.empty()) {
        if (buy_.levels.begin()->first >= sell_.levels.begin()->first)
            throw contract_error("invariant: best bid >= best ask");
    }
    for (Side s : {Side::Buy, Side::Sell}) {
        const BookSide& bs = side(s);
        if (!std::is_sorted(bs.ids.begin(), bs.ids.end()))
            throw contract_error("invariant: ids not ascending");
        std::size_t in_levels = 0;
        for (const auto& [ticks, q] : bs.levels) {
            in_levels += q.size();
            if (!std::is_sorted(q.begin(), q.end()))
                throw contract_error("invariant: FIFO queue out of id order");
            for (std::uint64_t id : q) {
                const auto it = std::lower_bound(bs.ids.begin(), bs.ids.end(), id);
                if (it == bs.ids.end() || *it != id)
                    throw contract_error("invariant: level references unknown id");
                if (bs.ticks[static_cast<std::size_t>(it - bs.ids.begin())] != ticks)
                    throw contract_error("invariant: level/array price mismatch");
            }
        }
        if (in_levels != bs.size()) throw contract_error("invariant: count mismatch");
        for (double d0 : bs.delta0)
            if (!(d0 > 0.0)) throw contract_error("invariant: delta0 <= 0");
    }
}

} // namespace lobsim::lob
