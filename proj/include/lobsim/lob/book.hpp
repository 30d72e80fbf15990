#pragma once
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "lobsim/errors.hpp"

namespace lobsim::lob {

enum class Side : int { Buy = +1, Sell = -1 };

inline Side opposite(Side s) { return s == Side::Buy ? Side::Sell : Side::Buy; }
inline int sign_of(Side s) { return static_cast<int>(s); }

/// Price grid: every stored price is an integer multiple of the tick.
struct TickGrid {
    double tick = 1.0;

    /// floor(p / tick); p must be positive.
    std::int64_t index_of(double price) const;
    double price(std::int64_t index) const { return static_cast<double>(index) * tick; }
    double log_price(std::int64_t index) const;
};

struct Order {
    std::uint64_t id = 0;
    Side side = Side::Buy;
    std::int64_t price_ticks = 0;
    double log_price = 0.0;
    std::int64_t t_placed = 0;
    double delta0 = 0.0; ///< log distance to the opposite best at placement
};

struct Quotes {
    std::int64_t bid_ticks = 0;
    std::int64_t ask_ticks = 0;
    double bid_log = 0.0;
    double ask_log = 0.0;
    double mid_log = 0.0;
    double spread = 0.0;
};

struct BookEvent {
    std::int64_t t = 0;
    char type = 'L'; ///< L = limit placement, M = execution, C = cancellation
    Side side = Side::Buy;
    double price = 0.0;
    std::uint64_t order_id = 0;
};

class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void on_event(const BookEvent& ev) = 0;
};

class empty_book_error : public error {
public:
    empty_book_error() : error("book side is empty") {}
};

/// Price-time-priority book with unit order sizes.
///
/// Per side the resting orders live in id-ascending parallel arrays (the
/// cancellation sweep consumes them as contiguous spans) plus a price-level
/// map of FIFO queues for matching. Single writer; const queries are safe
/// concurrently with no writer.
class OrderBook {
public:
    explicit OrderBook(TickGrid grid);

    void set_event_sink(EventSink* sink) { sink_ = sink; }
    const TickGrid& grid() const { return grid_; }

    /// Insert with caller-supplied delta0; used to build the initial book.
    std::uint64_t seed_order(Side side, std::int64_t ticks, std::int64_t now, double delta0);

    /// Rest a limit order. The price must not cross or lock the opposite
    /// best (callers classify crossing orders as market orders first);
    /// a crossing price throws contract_error.
    Order place_limit(Side side, std::int64_t ticks, std::int64_t now);

    /// Fill the oldest order at the opposite best. Returns nullopt when the
    /// opposite side holds fewer than three orders (stability floor).
    std::optional<Order> execute_market(Side aggressor, std::int64_t now);

    /// Cancel by id, honoring the two-order stability floor (nullopt when the
    /// floor would be breached). Unknown id throws contract_error.
    std::optional<Order> cancel_order(std::uint64_t id, std::int64_t now);

    /// Unconditional removal (event replay; floor handling is the caller's).
    Order remove_order(std::uint64_t id, std::int64_t now);

    Quotes quotes() const; ///< throws empty_book_error if either side is empty

    /// n_side / n_tot for the given side.
    double imbalance(Side side) const;

    std::size_t n_buy() const { return buy_.ids.size(); }
    std::size_t n_sell() const { return sell_.ids.size(); }
    std::size_t n_tot() const { return n_buy() + n_sell(); }
    bool contains(std::uint64_t id) const;

    std::int64_t best_ticks(Side side) const; ///< throws empty_book_error
    std::uint64_t oldest_at_best(Side side) const;

    struct SideView {
        std::span<const std::uint64_t> ids;
        std::span<const double> log_price;
        std::span<const double> inv_delta0;
    };
    /// Id-ascending view of one side; invalidated by any mutation.
    SideView view(Side side) const;

    /// Full structural audit (counts, quote ordering, FIFO, delta0 > 0).
    /// O(n log n); test support.
    void check_invariants() const;

private:
    struct BookSide {
        // parallel arrays, id-ascending
        std::vector<std::uint64_t> ids;
        std::vector<std::int64_t> ticks;
        std::vector<double> log_px;
        std::vector<double> inv_delta0;
        std::vector<double> delta0;
        std::vector<std::int64_t> t_placed;
        // price -> FIFO queue of ids; key order set up so begin() is the best
        std::map<std::int64_t, std::deque<std::uint64_t>, std::function<bool(std::int64_t, std::int64_t)>> levels;

        std::size_t size() const { return ids.size(); }
    };

    BookSide& side(Side s) { return s == Side::Buy ? buy_ : sell_; }
    const BookSide& side(Side s) const { return s == Side::Buy ? buy_ : sell_; }
    std::uint64_t insert(Side s, std::int64_t ticks, std::int64_t now, double delta0);
    Order erase_at(Side s, std::size_t pos, std::int64_t now, char event_type);
    void emit(std::int64_t t, char type, Side s, std::int64_t ticks, std::uint64_t id);

    TickGrid grid_;
    BookSide buy_;
    BookSide sell_;
    std::uint64_t next_id_ = 1;
    EventSink* sink_ = nullptr;
};

} // namespace lobsim::lob
