#include <doctest.h>

#include <cmath>
#include <vector>

#include "lobsim/lob/book.hpp"
#include "lobsim/rng.hpp"

using namespace lobsim;
using lob::OrderBook;
using lob::Side;
using lob::TickGrid;

TEST_SUITE_BEGIN("book");

TEST_CASE("round_to_tick floor arithmetic") {
    TickGrid quarter{0.25};
    CHECK(quarter.index_of(100.3) == 401);
    CHECK(quarter.price(401) == doctest::Approx(100.25));
    CHECK(quarter.index_of(100.25) == 401);
    TickGrid penny{1.0};
    CHECK(penny.price(penny.index_of(2999.7)) == doctest::Approx(2999.0));
    CHECK_THROWS_AS(penny.index_of(-1.0), config_error);
    CHECK_THROWS_AS(penny.index_of(0.0), config_error);

    // idempotent on grid points, monotone in p
    for (double p = 0.25; p < 30.0; p += 0.25)
        CHECK(quarter.price(quarter.index_of(quarter.price(quarter.index_of(p)))) ==
              quarter.price(quarter.index_of(p)));
    std::int64_t prev = 0;
    for (double p = 0.3; p < 50.0; p += 0.101) {
        const auto ix = quarter.index_of(p);
        CHECK(ix >= prev);
        prev = ix;
    }
}

namespace {

OrderBook seeded_book(int depth = 10, std::int64_t bid = 2999, std::int64_t ask = 3000) {
    OrderBook book(TickGrid{1.0});
    const double s0 = book.grid().log_price(ask) - book.grid().log_price(bid);
    for (int i = 0; i < depth; ++i) {
        book.seed_order(Side::Buy, bid, 0, s0);
        book.seed_order(Side::Sell, ask, 0, s0);
    }
    return book;
}

} // namespace

TEST_CASE("place_limit keeps quotes and computes delta0") {
    OrderBook book = seeded_book();
    const auto q0 = book.quotes();

    // buy below the best bid: book grows, best bid unchanged
    const auto o1 = book.place_limit(Side::Buy, 2990, 1);
    CHECK(book.n_buy() == 11);
    CHECK(book.quotes().bid_ticks == 2999);
    CHECK(o1.delta0 == doctest::Approx(q0.ask_log - book.grid().log_price(2990)));

    // buy one tick below the best ask: new best bid, spread one tick
    book.place_limit(Side::Buy, 2999, 2); // same level join
    const auto o2 = book.place_limit(Side::Buy, 2999, 3);
    CHECK(o2.delta0 == doctest::Approx(q0.spread));
    CHECK(book.quotes().bid_ticks == 2999);

    // crossing / locking prices are upstream classification bugs
    CHECK_THROWS_AS(book.place_limit(Side::Buy, 3000, 4), contract_error);
    CHECK_THROWS_AS(book.place_limit(Side::Sell, 2999, 4), contract_error);
}

TEST_CASE("execute_market is FIFO at the best price") {
    OrderBook book(TickGrid{0.25});
    const double s0 = 0.001;
    book.seed_order(Side::Buy, 400, 0, s0);
    book.seed_order(Side::Buy, 400, 0, s0);
    book.seed_order(Side::Buy, 399, 0, s0);
    const auto a1 = book.seed_order(Side::Sell, 404, 0, s0); // 101.0, oldest
    const auto a2 = book.seed_order(Side::Sell, 404, 0, s0); // 101.0
    book.seed_order(Side::Sell, 405, 0, s0);                 // 101.25
    book.seed_order(Side::Sell, 405, 0, s0);

    // removes the older order at 101.0; best ask stays
    auto f1 = book.execute_market(Side::Buy, 5);
    REQUIRE(f1.has_value());
    CHECK(f1->id == a1);
    CHECK(book.quotes().ask_ticks == 404);

    // next removal empties 101.0, the quote moves and the midprice rises
    const double mid_before = book.quotes().mid_log;
    auto f2 = book.execute_market(Side::Buy, 6);
    REQUIRE(f2.has_value());
    CHECK(f2->id == a2);
    CHECK(book.quotes().ask_ticks == 405);
    CHECK(book.quotes().mid_log > mid_before);

    // with exactly 2 asks left the stability floor rejects
    CHECK(book.n_sell() == 2);
    CHECK_FALSE(book.execute_market(Side::Buy, 8).has_value());
}

TEST_CASE("cancel_order honors the floor and moves quotes") {
    OrderBook book = seeded_book(4);
    const auto best_bid = book.place_limit(Side::Buy, 2999, 1); // join best level
    // cancel a deep order: quotes unchanged
    const auto deep = book.place_limit(Side::Buy, 2000, 2);
    const auto q_before = book.quotes();
    auto c = book.cancel_order(deep.id, 3);
    REQUIRE(c.has_value());
    CHECK(c->t_placed == 2);
    CHECK(book.quotes().bid_ticks == q_before.bid_ticks);
    (void)best_bid;

    // sole order at a higher best: cancelling moves the quote down
    const auto top = book.place_limit(Side::Buy, 29990 / 10, 4); // 2999, join
    (void)top;
    const auto solo = book.place_limit(Side::Buy, 29995 / 10, 5);
    CHECK(book.quotes().bid_ticks == 2999);
    auto c2 = book.cancel_order(solo.id, 6);
    REQUIRE(c2.has_value());
    CHECK(book.quotes().bid_ticks == 2999);

    CHECK_THROWS_AS(book.cancel_order(999999, 7), contract_error);

    // drain one side to the floor
    while (book.n_buy() > 2) {
        const auto view = book.view(Side::Buy);
        REQUIRE(book.cancel_order(view.ids[0], 8).has_value());
    }
    const auto view = book.view(Side::Buy);
    CHECK_FALSE(book.cancel_order(view.ids[0], 9).has_value());
}

TEST_CASE("quotes math") {
    OrderBook book(TickGrid{1.0});
    book.seed_order(Side::Buy, 100, 0, 0.01);
    book.seed_order(Side::Buy, 100, 0, 0.01);
    book.seed_order(Side::Sell, 101, 0, 0.01);
    book.seed_order(Side::Sell, 101, 0, 0.01);
    const auto q = book.quotes();
    CHECK(q.spread == doctest::Approx(std::log(101.0) - std::log(100.0)));
    CHECK(q.spread == doctest::Approx(0.00995).epsilon(1e-3));
    CHECK(q.mid_log == doctest::Approx(0.5 * (std::log(101.0) + std::log(100.0))));

    OrderBook empty(TickGrid{1.0});
    CHECK_THROWS_AS(empty.quotes(), lob::empty_book_error);
    empty.seed_order(Side::Buy, 100, 0, 0.01);
    CHECK_THROWS_AS(empty.quotes(), lob::empty_book_error);
}

TEST_CASE("imbalance") {
    OrderBook book(TickGrid{1.0});
    for (int i = 0; i < 19; ++i) book.seed_order(Side::Buy, 100 - i, 0, 0.01);
    book.seed_order(Side::Sell, 102, 0, 0.01);
    CHECK(book.imbalance(Side::Buy) == doctest::Approx(0.95));
    CHECK(book.imbalance(Side::Sell) == doctest::Approx(0.05));
    OrderBook empty(TickGrid{1.0});
    CHECK_THROWS_AS(empty.imbalance(Side::Buy), lob::empty_book_error);
}

TEST_CASE("randomized operation sequences keep every invariant") {
    OrderBook book = seeded_book(10);
    Rng rng(99);
    std::size_t executed = 0, cancelled = 0, placed = 20, rejected = 0;
    std::vector<std::uint64_t> live;
    for (const Side s : {Side::Buy, Side::Sell}) {
        const auto view = book.view(s);
        live.insert(live.end(), view.ids.begin(), view.ids.end());
    }

    for (std::int64_t t = 1; t <= 100000; ++t) {
        const double roll = rng.uniform();
        const Side side = rng.uniform() < 0.5 ? Side::Buy : Side::Sell;
        if (roll < 0.48) {
            const auto q = book.quotes();
            const std::int64_t off = 1 + static_cast<std::int64_t>(rng.uniform() * 12.0);
            const std::int64_t ticks =
                side == Side::Buy ? q.ask_ticks - off : q.bid_ticks + off;
            if (ticks >= 1) {
                live.push_back(book.place_limit(side, ticks, t).id);
                ++placed;
            }
        } else if (roll < 0.75) {
            if (auto filled = book.execute_market(side, t)) {
                CHECK(filled->t_placed <= t); // lifetime >= 0
                live.erase(std::find(live.begin(), live.end(), filled->id));
                ++executed;
            } else {
                ++rejected;
            }
        } else if (!live.empty()) {
            const auto pick = static_cast<std::size_t>(rng.uniform() * live.size());
            const auto id = live[std::min(pick, live.size() - 1)];
            if (auto c = book.cancel_order(id, t)) {
                CHECK(c->t_placed <= t);
                live.erase(std::find(live.begin(), live.end(), id));
                ++cancelled;
            } else {
                ++rejected;
            }
        }
        if ((t & 1023) == 0) book.check_invariants();
        REQUIRE(book.n_buy() >= 2);
        REQUIRE(book.n_sell() >= 2);
    }
    book.check_invariants();
    // conservation: placed = executed + cancelled + resting
    CHECK(placed == executed + cancelled + book.n_tot());
    CHECK(rejected > 0);
}

TEST_SUITE_END();
