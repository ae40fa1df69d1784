#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "checks.hpp"
#include "doctest.h"
#include "novopoly/agents.hpp"
#include "novopoly/engine.hpp"

using namespace novopoly;
using novopoly::testing::ScriptedAgent;
using novopoly::testing::share;

namespace {

// Exact distribution of the dice sum by enumerating every ordered outcome.
std::map<int, double> enumerate_sums(const DiceConfig& dice) {
    std::map<int, double> dist{{0, 1.0}};
    for (int d = 0; d < dice.count; ++d) {
        const auto w = dice.die_weights(d);
        std::map<int, double> next;
        for (const auto& [sum, p] : dist) {
            for (std::size_t f = 0; f < w.size(); ++f) next[sum + static_cast<int>(f) + 1] += p * w[f];
        }
        dist = std::move(next);
    }
    return dist;
}

struct Table {
    explicit Table(BoardSchema board = default_board(), ScriptedAgent::Script script = {}, std::uint64_t seed = 1)
        : a(script), b(script), c(script), d(script),
          engine(share(std::move(board)), {&a, &b, &c, &d}, seed) {}
    explicit Table(ScriptedAgent::Script script) : Table(default_board(), std::move(script)) {}

    SlotState& slot(int i) { return engine.state().slots[static_cast<std::size_t>(i)]; }
    PlayerState& player(int i) { return engine.state().players[static_cast<std::size_t>(i)]; }
    long count(EventKind k) const {
        const auto& ev = engine.events();
        return std::count_if(ev.begin(), ev.end(), [k](const GameEvent& e) { return e.kind == k; });
    }
    const GameEvent* last(EventKind k) const {
        const auto& ev = engine.events();
        for (auto it = ev.rbegin(); it != ev.rend(); ++it) {
            if (it->kind == k) return &*it;
        }
        return nullptr;
    }
    // Puts the given card on top of its deck.
    void stack(Deck deck, int card) {
        auto& cards = engine.state().deck(deck);
        cards.erase(std::find(cards.begin(), cards.end(), card));
        cards.push_front(card);
    }

    ScriptedAgent a, b, c, d;
    Engine engine;
};

AgentAction always(ActionKind k) { return AgentAction::of(k); }

}  // namespace

TEST_CASE("dice sum probabilities by enumeration") {
    const auto two = enumerate_sums(DiceConfig{});
    CHECK(two.at(2) == doctest::Approx(1.0 / 36.0));
    CHECK(two.at(3) == doctest::Approx(2.0 / 36.0));
    CHECK(two.at(7) == doctest::Approx(6.0 / 36.0));
    const auto three = enumerate_sums(DiceConfig{3, 6, {}});
    CHECK(three.count(2) == 0);
    CHECK(three.at(3) == doctest::Approx(1.0 / 216.0));
}

TEST_CASE("roll_dice shape and determinism") {
    Rng r1(42), r2(42);
    DiceConfig four{4, 6, {}};
    for (int i = 0; i < 1000; ++i) {
        const auto d = roll_dice(r1, four);
        REQUIRE(d.size() == 4);
        for (int v : d) CHECK((v >= 1 && v <= 6));
        CHECK(d == roll_dice(r2, four));
    }
}

TEST_CASE("biased die shifts the mean to the weighted value") {
    DiceConfig dice{1, 6, {{0.05, 0.05, 0.05, 0.05, 0.05, 0.75}}};
    double exact = 0.0;
    for (int f = 0; f < 6; ++f) exact += (f + 1) * dice.weights[0][static_cast<std::size_t>(f)];
    Rng rng(9);
    const int n = 10000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = roll_dice(rng, dice)[0];
        sum += v;
        sq += v * v;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(mean - exact) < 4.0 * sd / std::sqrt(double(n)));
}

TEST_CASE("advance wraps and credits Go") {
    Table t;
    t.player(0).position = 38;
    t.engine.advance(0, 4);
    CHECK(t.player(0).position == 2);
    CHECK(t.player(0).cash == 1700);
    CHECK(t.player(0).round_trips == 1);

    t.player(1).position = 0;
    t.engine.advance(1, 40);
    CHECK(t.player(1).position == 0);
    CHECK(t.player(1).cash == 1700);
    CHECK(t.count(EventKind::pass_go) == 2);

    t.player(2).position = 5;
    t.engine.advance(2, 3);
    CHECK(t.player(2).position == 8);
    CHECK(t.player(2).cash == 1500);
    CHECK(t.player(2).round_trips == 0);
}

TEST_CASE("railroad rent grows with railroads owned") {
    Table t;
    const int rails[] = {5, 15, 25, 35};
    std::vector<Money> rents;
    for (int n = 1; n <= 4; ++n) {
        t.slot(rails[n - 1]).owner = 1;
        rents.push_back(*t.engine.compute_rent(5, 7, 0));
    }
    CHECK(rents == std::vector<Money>{25, 50, 100, 200});
}

TEST_CASE("street rent by level and monopoly") {
    Table t;
    t.slot(39).owner = 1;
    CHECK(*t.engine.compute_rent(39, 7, 0) == 50);
    t.slot(37).owner = 1;
    CHECK(*t.engine.compute_rent(39, 7, 0) == 100);  // unimproved monopoly doubles
    t.slot(39).level = kHotelLevel;
    CHECK(*t.engine.compute_rent(39, 7, 0) == 2000);
    t.slot(39).level = 3;
    CHECK(*t.engine.compute_rent(39, 7, 0) == 1400);
    CHECK(*t.engine.compute_rent(39, 7, 1) == 0);  // own property
}

TEST_CASE("no rent due on unowned, mortgaged or dead owner's property") {
    Table t;
    CHECK_FALSE(t.engine.compute_rent(39, 7, 0).has_value());
    t.slot(39).owner = 1;
    t.slot(39).mortgaged = true;
    CHECK_FALSE(t.engine.compute_rent(39, 7, 0).has_value());
    t.slot(39).mortgaged = false;
    t.player(1).alive = false;
    CHECK_FALSE(t.engine.compute_rent(39, 7, 0).has_value());
}

TEST_CASE("utility rent is dice sum times multiplier") {
    Table t;
    t.slot(12).owner = 2;
    CHECK(*t.engine.compute_rent(12, 9, 0) == 36);
    t.slot(28).owner = 2;
    CHECK(*t.engine.compute_rent(12, 9, 0) == 90);
}

TEST_CASE("collect card credits once and returns to the bottom") {
    Table t;
    t.stack(Deck::chance, 6);  // dividend of $50
    t.engine.apply_card(0, Deck::chance);
    CHECK(t.player(0).cash == 1550);
    CHECK(t.engine.state().chance_deck.size() == 16);
    CHECK(t.engine.state().chance_deck.back() == 6);
    CHECK(t.engine.state().chance_deck.front() != 6);
}

TEST_CASE("go-to-jail card skips the Go credit") {
    Table t;
    t.player(0).position = 36;
    t.stack(Deck::chance, 9);
    t.engine.apply_card(0, Deck::chance);
    CHECK(t.player(0).position == 10);
    CHECK(t.player(0).in_jail);
    CHECK(t.player(0).cash == 1500);
    CHECK(t.count(EventKind::pass_go) == 0);
}

TEST_CASE("get-out-of-jail-free card moves to the hand and back") {
    Table t([](const DecisionRequest& r) {
        return r.point == DecisionPoint::jail_choice ? always(ActionKind::use_jail_card) : always(conservative_action(r.point));
    });
    t.stack(Deck::community_chest, 4);
    t.engine.apply_card(0, Deck::community_chest);
    CHECK(t.engine.state().chest_deck.size() == 15);
    CHECK(t.player(0).jail_cards.size() == 1);
    t.engine.send_to_jail(0);
    t.engine.take_turn(0);
    const GameEvent* exit = t.last(EventKind::jail_exit);
    REQUIRE(exit != nullptr);
    CHECK(exit->detail == "card");
    CHECK(t.player(0).jail_cards.empty());
    CHECK(t.engine.state().chest_deck.size() == 16);
}

TEST_CASE("advance-to-Go card credits the increment") {
    Table t;
    t.player(0).position = 7;
    t.stack(Deck::chance, 0);
    t.engine.apply_card(0, Deck::chance);
    CHECK(t.player(0).position == 0);
    CHECK(t.player(0).cash == 1700);
}

TEST_CASE("pay-each-player card moves cash between seats") {
    Table t;
    t.stack(Deck::chance, 14);
    t.engine.apply_card(0, Deck::chance);
    CHECK(t.player(0).cash == 1350);
    CHECK(t.player(1).cash == 1550);
    CHECK(t.player(3).cash == 1550);
}

TEST_CASE("landing on an unowned street offers it for sale") {
    Table t([](const DecisionRequest& r) {
        return r.point == DecisionPoint::buy_or_decline ? always(ActionKind::buy) : always(conservative_action(r.point));
    });
    t.player(0).position = 39;
    t.engine.resolve_landing(0, 7);
    CHECK(t.slot(39).owner == 0);
    CHECK(t.player(0).cash == 1100);
    REQUIRE(t.last(EventKind::buy) != nullptr);
    CHECK(t.last(EventKind::buy)->amount == 400);
}

TEST_CASE("declined property stays with the bank") {
    Table t;
    t.player(0).position = 39;
    t.engine.resolve_landing(0, 7);
    CHECK(t.slot(39).owner == -1);
    CHECK(t.count(EventKind::decline) == 1);
    CHECK(t.player(0).cash == 1500);
}

TEST_CASE("income tax takes 200 to the bank") {
    Table t;
    t.player(0).position = 4;
    t.engine.resolve_landing(0, 4);
    CHECK(t.player(0).cash == 1300);
    const GameEvent* e = t.last(EventKind::tax_paid);
    REQUIRE(e != nullptr);
    CHECK(e->amount == 200);
    CHECK(e->payee->is_bank());
}

TEST_CASE("landing on an opponent's unimproved monopoly pays double") {
    Table t;
    t.slot(1).owner = 2;
    t.slot(3).owner = 2;
    t.player(0).position = 3;
    t.engine.resolve_landing(0, 3);
    CHECK(t.player(0).cash == 1492);
    CHECK(t.player(2).cash == 1508);
}

TEST_CASE("simple agent goes bankrupt without liquidating") {
    SimpleAgent s;
    ScriptedAgent o1, o2, o3;
    Engine engine(share(default_board()), {&s, &o1, &o2, &o3}, 3);
    auto& st = engine.state();
    st.slots[39].owner = 1;
    st.slots[37].owner = 1;
    st.slots[39].level = kHotelLevel;
    st.slots[37].level = kHotelLevel;
    st.slots[5].owner = 0;  // mortgageable
    st.players[0].position = 39;
    engine.resolve_landing(0, 5);
    CHECK_FALSE(st.players[0].alive);
    for (const auto& e : engine.events()) {
        CHECK(e.kind != EventKind::mortgage);
        CHECK(e.kind != EventKind::sell_improvement);
    }
    CHECK(st.players[1].cash == 1500 + 1500);  // all cash goes to the creditor
    CHECK(st.slots[5].owner == 1);
}

TEST_CASE("H1 mortgages before paying rent it cannot cover") {
    H1Agent h;
    ScriptedAgent o1, o2, o3;
    Engine engine(share(default_board()), {&h, &o1, &o2, &o3}, 3);
    auto& st = engine.state();
    st.slots[39].owner = 1;
    st.slots[5].owner = 0;
    st.slots[15].owner = 0;
    st.players[0].cash = 20;
    st.players[0].position = 39;
    engine.resolve_landing(0, 5);
    const auto& ev = engine.events();
    const auto mort = std::find_if(ev.begin(), ev.end(), [](const GameEvent& e) { return e.kind == EventKind::mortgage; });
    const auto rent = std::find_if(ev.begin(), ev.end(), [](const GameEvent& e) { return e.kind == EventKind::rent_paid; });
    REQUIRE(mort != ev.end());
    REQUIRE(rent != ev.end());
    CHECK(mort < rent);
    CHECK(st.players[0].alive);
    CHECK(st.players[1].cash == 1550);
}

TEST_CASE("debtor with nothing goes bankrupt and the creditor gets nothing") {
    Table t;
    t.slot(39).owner = 1;
    t.player(0).cash = 0;
    t.player(0).position = 39;
    t.engine.resolve_landing(0, 5);
    CHECK_FALSE(t.player(0).alive);
    CHECK(t.player(1).cash == 1500);
    CHECK(t.a.requests.empty());
}

TEST_CASE("two fruitless liquidation answers force bankruptcy") {
    Table t;  // scripted agents pass when asked to raise cash
    t.slot(39).owner = 1;
    t.slot(5).owner = 0;
    t.player(0).cash = 10;
    t.player(0).position = 39;
    t.engine.resolve_landing(0, 5);
    CHECK_FALSE(t.player(0).alive);
    CHECK(std::count(t.a.requests.begin(), t.a.requests.end(), DecisionPoint::raise_cash) == 2);
}

TEST_CASE("bankruptcy to the bank frees the properties") {
    Table t;
    t.slot(1).owner = 0;
    t.slot(1).mortgaged = true;
    t.player(0).cash = 5;
    t.player(0).position = 4;
    t.engine.resolve_landing(0, 4);
    CHECK_FALSE(t.player(0).alive);
    CHECK(t.slot(1).owner == -1);
    CHECK_FALSE(t.slot(1).mortgaged);
}

TEST_CASE("three doubles in a row send the player to jail") {
    BoardSchema b = default_board();
    b.dice.faces = 1;  // every roll is 1+1
    Table t(b);
    t.player(0).position = 10;
    t.engine.take_turn(0);
    CHECK(t.player(0).in_jail);
    CHECK(t.player(0).position == 10);
    CHECK(t.count(EventKind::roll) == 3);
    CHECK(t.count(EventKind::move) == 2);
}

TEST_CASE("paying the jail fine releases and rolls") {
    Table t([](const DecisionRequest& r) {
        return r.point == DecisionPoint::jail_choice ? always(ActionKind::pay_jail_fine) : always(conservative_action(r.point));
    });
    t.engine.send_to_jail(0);
    t.engine.take_turn(0);
    CHECK_FALSE(t.player(0).in_jail);
    const GameEvent* e = t.last(EventKind::jail_exit);
    REQUIRE(e != nullptr);
    CHECK(e->amount == 50);
    CHECK(t.count(EventKind::roll) >= 1);
}

TEST_CASE("three failed escape rolls force the fine") {
    BoardSchema b = default_board();
    b.dice.faces = 2;
    b.dice.weights = {{1.0, 0.0}, {0.0, 1.0}};  // always 1+2
    Table t(b);
    t.engine.send_to_jail(0);
    for (int i = 0; i < 3; ++i) t.engine.take_turn(0);
    CHECK_FALSE(t.player(0).in_jail);
    CHECK(t.player(0).position == 13);
    CHECK(t.player(0).cash == 1450);
}

TEST_CASE("improvement requires the whole group and builds evenly") {
    Table t;
    t.slot(37).owner = 0;
    CHECK(t.engine.improvable(0).empty());
    t.slot(39).owner = 0;
    CHECK(t.engine.improvable(0) == std::vector<int>{37, 39});
    t.slot(37).level = 1;
    CHECK(t.engine.improvable(0) == std::vector<int>{39});
    t.slot(39).mortgaged = true;
    CHECK(t.engine.improvable(0).empty());
}

TEST_CASE("sell and mortgage menus follow building rules") {
    Table t;
    t.slot(37).owner = 0;
    t.slot(39).owner = 0;
    t.slot(37).level = 2;
    t.slot(39).level = 1;
    CHECK(t.engine.sellable(0) == std::vector<int>{37});
    CHECK(t.engine.mortgageable(0).empty());  // improved group
    t.slot(5).owner = 0;
    CHECK(t.engine.mortgageable(0) == std::vector<int>{5});
}

TEST_CASE("throwing agent is a fault, not a crash") {
    Table t([](const DecisionRequest&) -> AgentAction { throw std::runtime_error("boom"); });
    t.player(0).position = 39;
    t.engine.resolve_landing(0, 7);
    CHECK(t.slot(39).owner == -1);
    CHECK(t.count(EventKind::invalid_action_substituted) == 1);
    CHECK(t.engine.fault_counts()[0] == 1);
}

TEST_CASE("action outside the legal menu is substituted") {
    Table t([](const DecisionRequest&) { return AgentAction::of(ActionKind::improve, 39); });
    t.player(0).position = 39;
    t.engine.resolve_landing(0, 7);
    CHECK(t.slot(39).owner == -1);
    const GameEvent* e = t.last(EventKind::invalid_action_substituted);
    REQUIRE(e != nullptr);
    CHECK(e->detail.find("substituted decline") != std::string::npos);
}

TEST_CASE("trade for a property the proposer does not own is a fault") {
    Table t([](const DecisionRequest& r) {
        if (r.point != DecisionPoint::propose_trades) return AgentAction::of(conservative_action(r.point));
        AgentAction a = AgentAction::of(ActionKind::propose_trades);
        a.offers.push_back(TradeOffer{r.seat, 1, {39}, 0, {}, 100});
        return a;
    });
    t.engine.take_turn(0);
    CHECK(t.count(EventKind::trade_proposed) == 0);
    CHECK(t.engine.fault_counts()[0] >= 1);
}

TEST_CASE("accepted trade swaps property for cash") {
    Table t([](const DecisionRequest& r) {
        if (r.point == DecisionPoint::respond_to_trade) return AgentAction::of(ActionKind::accept);
        if (r.point == DecisionPoint::propose_trades && r.seat == 0) {
            AgentAction a = AgentAction::of(ActionKind::propose_trades);
            a.offers.push_back(TradeOffer{0, 1, {39}, 0, {}, 300});
            return a;
        }
        return AgentAction::of(conservative_action(r.point));
    });
    t.slot(39).owner = 0;
    t.player(0).position = 20;  // stay clear of chance slots on the roll
    t.engine.take_turn(0);
    CHECK(t.slot(39).owner == 1);
    const GameEvent* e = t.last(EventKind::trade_accepted);
    REQUIRE(e != nullptr);
    CHECK(e->amount == 300);
    CHECK(e->payer->seat == 1);
}

TEST_CASE("run_game is deterministic and terminates") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto s1 = testing::make_seats({"simple", "simple", "simple", "simple"});
        auto s2 = testing::make_seats({"simple", "simple", "simple", "simple"});
        const auto o1 = run_game(share(default_board()), s1.ptrs, seed);
        const auto o2 = run_game(share(default_board()), s2.ptrs, seed);
        CHECK(write_log(o1.log) == write_log(o2.log));
        CHECK(o1.result == o2.result);
        CHECK(o1.log.events.back().kind == EventKind::game_end);
        CHECK(o1.result.winner.has_value() == (o1.result.reason == Termination::last_player_standing));
    }
    auto a = testing::make_seats({"h1", "h2", "h1", "h2"});
    auto b = testing::make_seats({"h1", "h2", "h1", "h2"});
    CHECK(write_log(run_game(share(default_board()), a.ptrs, 11).log) !=
          write_log(run_game(share(default_board()), b.ptrs, 12).log));
}

TEST_CASE("round-trip cap ends the game as a draw") {
    auto seats = testing::make_seats({"h1", "h1", "h1", "h1"});
    GameLimits limits;
    limits.round_trip_cap = 2;
    const auto o = run_game(share(default_board()), seats.ptrs, 5, limits);
    CHECK(o.result.reason == Termination::round_trip_cap);
    CHECK_FALSE(o.result.winner.has_value());
    CHECK(o.result.max_round_trips() >= 2);
}

TEST_CASE("run_game needs four seats and a positive cap") {
    auto seats = testing::make_seats({"simple", "simple", "simple"});
    CHECK_THROWS_AS(run_game(share(default_board()), seats.ptrs, 1), std::invalid_argument);
    auto four = testing::make_seats({"simple", "simple", "simple", "simple"});
    GameLimits limits;
    limits.round_trip_cap = 0;
    CHECK_THROWS_AS(run_game(share(default_board()), four.ptrs, 1, limits), std::invalid_argument);
}

TEST_CASE("games are sound across agent mixes") {
    const std::vector<std::vector<std::string>> mixes = {
        {"simple", "simple", "simple", "simple"}, {"h1", "h2", "h1", "h2"}, {"simple", "h1", "h2", "hybrid"}};
    for (std::uint64_t seed = 1; seed <= 9; ++seed) {
        auto seats = testing::make_seats(mixes[seed % mixes.size()]);
        const auto o = run_game(share(default_board()), seats.ptrs, seed);
        const auto v = testing::soundness_violations(o.log, o.final_state);
        CHECK_MESSAGE(v.empty(), "seed ", seed, ": ", (v.empty() ? "" : v.front()));
        // Log round-trip.
        const GameLog back = parse_log(write_log(o.log));
        CHECK(back.events == o.log.events);
        CHECK(back.result == o.log.result);
        CHECK_FALSE(back.truncated);
    }
}

TEST_CASE("a log without its result line parses as truncated") {
    auto seats = testing::make_seats({"simple", "simple", "simple", "simple"});
    const auto o = run_game(share(default_board()), seats.ptrs, 4);
    std::string text = write_log(o.log);
    text.erase(text.rfind('\n', text.size() - 2) + 1);
    const GameLog back = parse_log(text);
    CHECK(back.truncated);
    CHECK_FALSE(back.result.has_value());
}
