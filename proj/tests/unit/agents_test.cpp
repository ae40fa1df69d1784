#include <algorithm>

#include "checks.hpp"
#include "doctest.h"
#include "novopoly/agents.hpp"
#include "novopoly/novelty.hpp"

using namespace novopoly;
using novopoly::testing::share;

namespace {

struct View {
    View() {
        state.players.assign(4, PublicPlayer{0, 1500, true, false, 0, 0});
        state.slots.assign(schema->slots.size(), SlotState{});
    }

    DecisionRequest request(DecisionPoint point, int seat, LegalMenu menu = {}) const {
        DecisionRequest r;
        r.point = point;
        r.seat = seat;
        r.turn = 10;
        r.schema = schema;
        r.index = index;
        r.state = state;
        r.menu = std::move(menu);
        return r;
    }
    void own(int seat, std::initializer_list<int> slots) {
        for (int s : slots) state.slots[static_cast<std::size_t>(s)].owner = seat;
    }

    std::shared_ptr<const BoardSchema> schema = share(default_board());
    std::shared_ptr<const BoardIndex> index = std::make_shared<BoardIndex>(*schema);
    PublicState state;
};

LegalMenu menu(std::vector<MenuEntry> entries, int max_offers = 4) { return LegalMenu{std::move(entries), max_offers}; }

HeuristicConfig eager() {
    HeuristicConfig c;
    c.build_reserve = 100;
    return c;
}

}  // namespace

TEST_CASE("simple agent buys exactly when it can pay") {
    View v;
    SimpleAgent a;
    auto r = v.request(DecisionPoint::buy_or_decline, 0, menu({{ActionKind::buy, {}}, {ActionKind::decline, {}}}));
    r.slot = 39;
    CHECK(a.decide(r).kind == ActionKind::buy);
    r.state.players[0].cash = 400;
    CHECK(a.decide(r).kind == ActionKind::buy);
    r.state.players[0].cash = 399;
    CHECK(a.decide(r).kind == ActionKind::decline);
}

TEST_CASE("simple agent never trades, builds or liquidates") {
    View v;
    v.own(0, {1, 3});
    SimpleAgent a;
    CHECK(a.decide(v.request(DecisionPoint::raise_cash, 0,
                             menu({{ActionKind::mortgage, {1, 3}}, {ActionKind::declare_bankruptcy, {}}})))
              .kind == ActionKind::declare_bankruptcy);
    auto t = v.request(DecisionPoint::respond_to_trade, 0, menu({{ActionKind::accept, {}}, {ActionKind::reject, {}}}));
    t.offer = TradeOffer{1, 0, {}, 5000, {5}, 0};
    CHECK(a.decide(t).kind == ActionKind::reject);
    CHECK(a.decide(v.request(DecisionPoint::propose_trades, 0, menu({{ActionKind::propose_trades, {}}, {ActionKind::pass, {}}})))
              .kind == ActionKind::pass);
    CHECK(a.decide(v.request(DecisionPoint::pre_roll_actions, 0, menu({{ActionKind::improve, {1, 3}}, {ActionKind::pass, {}}})))
              .kind == ActionKind::pass);
}

TEST_CASE("H1 builds on the least improved street, lowest index first") {
    View v;
    v.own(0, {16, 18, 19});
    H1Agent a(eager());
    auto act = a.decide(v.request(DecisionPoint::pre_roll_actions, 0,
                                  menu({{ActionKind::improve, {16, 18, 19}}, {ActionKind::pass, {}}})));
    CHECK(act == AgentAction::of(ActionKind::improve, 16));

    v.state.slots[16].level = 1;
    H1Agent b(eager());
    act = b.decide(v.request(DecisionPoint::pre_roll_actions, 0, menu({{ActionKind::improve, {18, 19}}, {ActionKind::pass, {}}})));
    CHECK(act == AgentAction::of(ActionKind::improve, 18));
}

TEST_CASE("H1 keeps its build reserve") {
    View v;
    v.own(0, {1, 3});
    H1Agent a;  // default reserve is far above starting cash
    CHECK(a.decide(v.request(DecisionPoint::pre_roll_actions, 0, menu({{ActionKind::improve, {1, 3}}, {ActionKind::pass, {}}})))
              .kind == ActionKind::pass);
}

TEST_CASE("H1 short of cash offers a property to the richest opponent") {
    View v;
    v.own(0, {5});
    v.state.players[0].cash = 50;
    v.state.players[1].cash = 900;
    v.state.players[2].cash = 3000;
    H1Agent a;
    const auto act = a.decide(v.request(DecisionPoint::propose_trades, 0, menu({{ActionKind::propose_trades, {}}, {ActionKind::pass, {}}})));
    REQUIRE(act.kind == ActionKind::propose_trades);
    REQUIRE(act.offers.size() == 1);
    const TradeOffer& o = act.offers[0];
    CHECK(o.responder == 2);
    CHECK(o.offered == std::vector<int>{5});
    CHECK(o.requested.empty());
    CHECK(o.requested_cash == 200);
    CHECK(o.offered_cash == 0);
}

TEST_CASE("H1 mortgages before declaring bankruptcy") {
    View v;
    v.own(0, {5, 39});
    H1Agent a;
    auto r = v.request(DecisionPoint::raise_cash, 0,
                       menu({{ActionKind::mortgage, {5, 39}}, {ActionKind::declare_bankruptcy, {}}, {ActionKind::pass, {}}}));
    r.amount_due = 1600;
    CHECK(a.decide(r).kind == ActionKind::mortgage);
}

TEST_CASE("H2 offers a two-way swap to complete a group") {
    View v;
    v.own(0, {16, 18, 5});
    v.own(1, {19});
    v.state.players[0].cash = 5000;
    H2Agent a;
    const auto act = a.decide(v.request(DecisionPoint::propose_trades, 0, menu({{ActionKind::propose_trades, {}}, {ActionKind::pass, {}}})));
    REQUIRE(act.kind == ActionKind::propose_trades);
    REQUIRE(act.offers.size() == 1);
    CHECK(act.offers[0].responder == 1);
    CHECK(act.offers[0].requested == std::vector<int>{19});
    CHECK(act.offers[0].offered == std::vector<int>{5});
}

TEST_CASE("H2 sends offers to several counterparties at once") {
    View v;
    v.own(0, {16, 18, 21, 23});
    v.own(1, {19});
    v.own(2, {24});
    v.state.players[0].cash = 6000;
    H2Agent a;
    const auto act = a.decide(v.request(DecisionPoint::propose_trades, 0, menu({{ActionKind::propose_trades, {}}, {ActionKind::pass, {}}})));
    REQUIRE(act.offers.size() == 2);
    CHECK(act.offers[0].responder != act.offers[1].responder);
}

TEST_CASE("H2 rejects an offer that breaks its monopoly") {
    View v;
    v.own(0, {1, 3});
    H2Agent a;
    auto r = v.request(DecisionPoint::respond_to_trade, 0, menu({{ActionKind::accept, {}}, {ActionKind::reject, {}}}));
    r.offer = TradeOffer{1, 0, {}, 5000, {1}, 0};
    r.state.players[1].cash = 6000;
    CHECK(a.decide(r).kind == ActionKind::reject);
}

TEST_CASE("H2 accepts an offer that completes a monopoly") {
    View v;
    v.own(0, {16, 18});
    v.own(1, {19});
    H2Agent a;
    auto r = v.request(DecisionPoint::respond_to_trade, 0, menu({{ActionKind::accept, {}}, {ActionKind::reject, {}}}));
    r.offer = TradeOffer{1, 0, {19}, 0, {}, 100};
    CHECK(a.decide(r).kind == ActionKind::accept);
}

TEST_CASE("built-in agents are deterministic") {
    View v;
    v.own(0, {16, 18, 5});
    v.own(1, {19});
    v.state.players[0].cash = 5000;
    const auto r = v.request(DecisionPoint::propose_trades, 0, menu({{ActionKind::propose_trades, {}}, {ActionKind::pass, {}}}));
    for (const char* id : {"simple", "h1", "h2", "hybrid"}) {
        auto a = make_agent(id);
        auto b = make_agent(id);
        CHECK(a->decide(r) == b->decide(r));
    }
}

TEST_CASE("hybrid buy policy hook overrides the heuristic") {
    View v;
    auto r = v.request(DecisionPoint::buy_or_decline, 0, menu({{ActionKind::buy, {}}, {ActionKind::decline, {}}}));
    r.slot = 1;
    HybridAgent a({}, [](const DecisionRequest&) { return std::optional<bool>(false); });
    CHECK(a.decide(r).kind == ActionKind::decline);
    a.set_buy_policy([](const DecisionRequest&) { return std::optional<bool>(); });
    CHECK(a.decide(r).kind == ActionKind::buy);
}

TEST_CASE("hybrid raises a latched signal on a changed board") {
    HybridAgent a;
    a.start_game(GameStart{0, 1, share(default_board()), true});
    CHECK_FALSE(a.novelty_signaled());
    const auto spec = find_novelty("dice-count-4");
    REQUIRE(spec);
    a.start_game(GameStart{0, 1, share(apply_novelty(default_board(), fixed_instance(*spec))), true});
    CHECK(a.novelty_signaled());
    a.start_game(GameStart{0, 1, share(default_board()), true});
    CHECK(a.novelty_signaled());
}

TEST_CASE("one agent may back several seats") {
    H2Agent shared;
    SimpleAgent s1, s2;
    const auto o = run_game(share(default_board()), {&shared, &s1, &shared, &s2}, 8);
    CHECK(o.log.events.back().kind == EventKind::game_end);
    CHECK(testing::soundness_violations(o.log, o.final_state).empty());
}

TEST_CASE("simple seats never propose trades or improve") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto seats = testing::make_seats({"simple", "h2", "simple", "h1"});
        const auto o = run_game(share(default_board()), seats.ptrs, seed);
        for (const auto& e : o.log.events) {
            if (e.player != 0 && e.player != 2) continue;
            CHECK(e.kind != EventKind::trade_proposed);
            CHECK(e.kind != EventKind::improve);
        }
    }
}

TEST_CASE("agent catalog and factory") {
    const auto& c = agent_catalog();
    REQUIRE(c.size() == 4);
    for (const auto& a : c) {
        CHECK(is_builtin_agent(a.id));
        CHECK(make_agent(a.id)->id() == a.id);
        CHECK_FALSE(a.description.empty());
    }
    CHECK_THROWS_AS(make_agent("h3"), std::invalid_argument);
    CHECK_THROWS_AS(make_agent("exec:"), std::invalid_argument);
}

TEST_CASE("heuristic config round-trips through JSON") {
    HeuristicConfig c;
    c.cash_reserve = 77;
    c.sale_premium = 1.25;
    c.max_offers = 2;
    CHECK(heuristic_config_from_json(heuristic_config_to_json(c)) == c);
    CHECK(heuristic_config_from_json(json::object()) == HeuristicConfig{});
}

TEST_CASE("split blue pair on a collapsed board tends to stall") {
    auto board = testing::share(apply_novelty(default_board(), fixed_instance(*find_novelty("color-collapse-blue"))));
    const int park = *board->index_of("Park Place"), walk = *board->index_of("Boardwalk");
    int draws = 0, default_draws = 0;
    const int games = 20;
    for (std::uint64_t seed = 1; seed <= games; ++seed) {
        auto seats = testing::make_seats({"h2", "h2", "h2", "h2"});
        Engine e(board, seats.ptrs, seed);
        e.state().slots[static_cast<std::size_t>(park)].owner = 0;
        e.state().slots[static_cast<std::size_t>(walk)].owner = 1;
        draws += !e.run().winner;
        auto base = testing::make_seats({"h2", "h2", "h2", "h2"});
        default_draws += !run_game(testing::share(default_board()), base.ptrs, seed).result.winner;
    }
    CHECK(draws >= 15);
    CHECK(default_draws <= 5);
}
