#include <algorithm>
#include <chrono>
#include <sstream>

#include "checks.hpp"
#include "doctest.h"
#include "novopoly/agents.hpp"
#include "novopoly/bridge.hpp"
#include "novopoly/protocol.hpp"

using namespace novopoly;
using novopoly::testing::share;

namespace {

DecisionRequest sample_request() {
    auto schema = share(default_board());
    DecisionRequest r;
    r.point = DecisionPoint::buy_or_decline;
    r.seat = 1;
    r.turn = 7;
    r.schema = schema;
    r.index = std::make_shared<BoardIndex>(*schema);
    r.state.players.assign(4, PublicPlayer{0, 1500, true, false, 0, 0});
    r.state.slots.assign(40, SlotState{});
    r.state.slots[5].owner = 2;
    r.menu = LegalMenu{{{ActionKind::buy, {}}, {ActionKind::decline, {}}}, 0};
    r.slot = 39;
    return r;
}

std::string faulty(const std::string& mode) { return std::string("exec:") + FAULTY_AGENT + " " + mode; }

}  // namespace

TEST_CASE("actions round-trip by slot name") {
    const BoardSchema& b = default_board();
    AgentAction a = AgentAction::of(ActionKind::propose_trades);
    a.offers.push_back(TradeOffer{0, 2, {39}, 10, {1, 3}, 0});
    const json j = action_to_json(a, b);
    CHECK(j["offers"][0]["offered"][0] == "Boardwalk");
    CHECK(action_from_json(j, b) == a);
    CHECK(action_from_json(action_to_json(AgentAction::of(ActionKind::mortgage, 5), b), b) ==
          AgentAction::of(ActionKind::mortgage, 5));
}

TEST_CASE("malformed actions are protocol faults") {
    const BoardSchema& b = default_board();
    CHECK_THROWS_AS(action_from_json(json{{"kind", "flip"}}, b), ProtocolFault);
    CHECK_THROWS_AS(action_from_json(json{{"kind", "mortgage"}, {"slot", "Atlantis"}}, b), ProtocolFault);
    CHECK_THROWS_AS(action_from_json(json::array(), b), ProtocolFault);
    CHECK_THROWS_AS(action_from_json(json{{"kind", "propose_trades"}, {"offers", 3}}, b), ProtocolFault);
}

TEST_CASE("message parsing checks framing and version") {
    CHECK_THROWS_AS(parse_message("not json"), ProtocolFault);
    CHECK_THROWS_AS(parse_message("[1,2]"), ProtocolFault);
    CHECK_THROWS_AS(parse_message(R"({"type":"action-response"})"), ProtocolFault);
    CHECK_THROWS_AS(parse_message(R"({"type":"action-response","protocol_version":99})"), ProtocolFault);
    CHECK(parse_message(R"({"type":"novelty-detected","protocol_version":1})")["type"] == "novelty-detected");
}

TEST_CASE("decision request carries public information only") {
    const auto r = sample_request();
    const json msg = decision_request_message(r, 5, false);
    CHECK(msg["type"] == "decision-request");
    CHECK(msg["protocol_version"] == kProtocolVersion);
    for (const auto& [key, value] : msg.items()) {
        CHECK(key.find("deck") == std::string::npos);
        CHECK(key.find("rng") == std::string::npos);
    }
    CHECK_FALSE(msg.contains("schema"));
    CHECK(decision_request_message(r, 5, true).contains("schema"));

    const auto back = decision_request_from_message(msg, r.schema);
    CHECK(back.point == r.point);
    CHECK(back.seat == r.seat);
    CHECK(back.turn == r.turn);
    CHECK(back.state == r.state);
    CHECK(back.menu == r.menu);
    CHECK(back.slot == 39);
}

TEST_CASE("serve_agent answers each request with its id") {
    std::stringstream in, out;
    in << game_start_message(GameStart{1, 3, share(default_board()), true}).dump() << '\n';
    in << "garbage line\n";
    in << decision_request_message(sample_request(), 42, false).dump() << '\n';
    H1Agent agent;
    CHECK(serve_agent(agent, in, out) == 1);
    const json reply = parse_message(out.str().substr(0, out.str().find('\n')));
    CHECK(reply["type"] == "action-response");
    CHECK(reply["request_id"] == 42);
    CHECK(reply["action"]["kind"] == "buy");
}

TEST_CASE("endpoint parsing") {
    CHECK(Endpoint::parse("exec:./agent --x").command == "./agent --x");
    const auto t = Endpoint::parse("tcp:localhost:9000");
    CHECK(t.host == "localhost");
    CHECK(t.port == 9000);
    CHECK(t.spec() == "tcp:localhost:9000");
    CHECK_THROWS_AS(Endpoint::parse("tcp:localhost:99999"), std::invalid_argument);
    CHECK_THROWS_AS(Endpoint::parse("udp:x"), std::invalid_argument);
}

TEST_CASE("remote agent happy path") {
    RemoteAgent agent(Endpoint::parse(faulty("valid")), 2000);
    agent.start_game(GameStart{1, 3, share(default_board()), true});
    CHECK(agent.decide(sample_request()).kind == ActionKind::buy);
}

TEST_CASE("silent remote agent times out and trips the breaker") {
    RemoteAgent agent(Endpoint::parse(faulty("silent")), 100);
    agent.start_game(GameStart{1, 3, share(default_board()), true});
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 3; ++i) CHECK_THROWS_AS(agent.decide(sample_request()), ProtocolFault);
    CHECK(agent.breaker_open());
    CHECK_THROWS_AS(agent.decide(sample_request()), ProtocolFault);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(2));
}

TEST_CASE("garbage and crashing remote agents are protocol faults") {
    RemoteAgent garbage(Endpoint::parse(faulty("garbage")), 1000);
    garbage.start_game(GameStart{1, 3, share(default_board()), true});
    CHECK_THROWS_AS(garbage.decide(sample_request()), ProtocolFault);

    RemoteAgent crash(Endpoint::parse(faulty("crash")), 1000);
    crash.start_game(GameStart{1, 3, share(default_board()), true});
    CHECK_THROWS_AS(crash.decide(sample_request()), ProtocolFault);
    CHECK_THROWS_AS(crash.decide(sample_request()), ProtocolFault);
}

TEST_CASE("unreachable tcp endpoint fails to connect") {
    RemoteAgent agent(Endpoint::parse("tcp:127.0.0.1:1"), 200);
    CHECK_THROWS_AS(agent.connect(), ProtocolFault);
}

TEST_CASE("illegal remote actions become substituted events") {
    AgentOptions opts;
    opts.timeout_ms = 200;
    auto seats = testing::make_seats({faulty("illegal"), "h1", "h1", "h1"}, opts);
    GameLimits limits;
    limits.round_trip_cap = 5;
    const auto o = run_game(share(default_board()), seats.ptrs, 2, limits);
    const long substituted = std::count_if(o.log.events.begin(), o.log.events.end(), [](const GameEvent& e) {
        return e.kind == EventKind::invalid_action_substituted && e.player == 0;
    });
    CHECK(substituted > 0);
    CHECK(substituted == o.result.faults[0]);
    CHECK(o.log.events.back().kind == EventKind::game_end);
}
