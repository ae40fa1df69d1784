#include "novopoly/protocol.hpp"

#include <istream>
#include <ostream>

namespace novopoly {

namespace {

json stamp(json j, const char* type) {
    j["type"] = type;
    j["protocol_version"] = kProtocolVersion;
    return j;
}

std::string slot_name(const BoardSchema& board, int s) {
    if (s < 0 || static_cast<std::size_t>(s) >= board.slots.size()) return {};
    return board.slots[static_cast<std::size_t>(s)].name;
}

int slot_from_name(const json& j, const BoardSchema& board) {
    if (!j.is_string()) throw ProtocolFault("slot must be a slot name");
    auto idx = board.index_of(j.get<std::string>());
    if (!idx) throw ProtocolFault("unknown slot '" + j.get<std::string>() + "'");
    return *idx;
}

json menu_to_json(const LegalMenu& menu, const BoardSchema& board) {
    json entries = json::array();
    for (const auto& e : menu.entries) {
        json slots = json::array();
        for (int s : e.slots) slots.push_back(slot_name(board, s));
        entries.push_back(json{{"kind", to_string(e.kind)}, {"slots", std::move(slots)}});
    }
    return entries;
}

}  // namespace

json game_start_message(const GameStart& start) {
    json j{{"seat", start.seat}, {"seed", start.seed}, {"schema_visible", start.schema_visible}};
    if (start.schema_visible && start.schema) j["schema"] = schema_to_json(*start.schema);
    return stamp(std::move(j), "game-start");
}

json decision_request_message(const DecisionRequest& r, std::uint64_t request_id, bool include_schema) {
    const BoardSchema& board = *r.schema;
    json recent = json::array();
    for (const auto& e : r.recent) {
        json ev = event_to_json(e, board);
        ev.erase("record");
        recent.push_back(std::move(ev));
    }
    json j{{"request_id", request_id},
           {"point", to_string(r.point)},
           {"seat", r.seat},
           {"turn", r.turn},
           {"state", public_state_to_json(r.state)},
           {"recent", std::move(recent)},
           {"menu", menu_to_json(r.menu, board)},
           {"max_offers", r.menu.max_offers}};
    if (r.slot >= 0) j["slot"] = slot_name(board, r.slot);
    if (r.offer) j["offer"] = offer_to_json(*r.offer, board);
    if (r.point == DecisionPoint::raise_cash) {
        j["amount_due"] = r.amount_due;
        if (r.creditor) j["creditor"] = party_to_json(*r.creditor);
    }
    if (include_schema) j["schema"] = schema_to_json(board);
    return stamp(std::move(j), "decision-request");
}

json game_end_message(int seat, const GameResult& result) {
    json res = result_to_json(result);
    res.erase("record");
    return stamp(json{{"seat", seat}, {"result", std::move(res)}}, "game-end");
}

json action_to_json(const AgentAction& a, const BoardSchema& board) {
    json j{{"kind", to_string(a.kind)}};
    if (a.slot >= 0) j["slot"] = slot_name(board, a.slot);
    if (!a.offers.empty()) {
        json offers = json::array();
        for (const auto& o : a.offers) offers.push_back(offer_to_json(o, board));
        j["offers"] = std::move(offers);
    }
    return j;
}

AgentAction action_from_json(const json& j, const BoardSchema& board) {
    if (!j.is_object()) throw ProtocolFault("action must be an object");
    auto kind_it = j.find("kind");
    if (kind_it == j.end() || !kind_it->is_string()) throw ProtocolFault("action has no kind");
    auto kind = action_kind_from_string(kind_it->get<std::string>());
    if (!kind) throw ProtocolFault("unknown action kind '" + kind_it->get<std::string>() + "'");
    AgentAction a = AgentAction::of(*kind);
    if (auto s = j.find("slot"); s != j.end() && !s->is_null()) a.slot = slot_from_name(*s, board);
    if (auto offers = j.find("offers"); offers != j.end()) {
        if (!offers->is_array()) throw ProtocolFault("offers must be an array");
        for (const auto& o : *offers) {
            try {
                a.offers.push_back(offer_from_json(o, board));
            } catch (const std::exception& e) {
                throw ProtocolFault(std::string("bad trade offer: ") + e.what());
            }
        }
    }
    return a;
}

json action_response_message(const AgentAction& action, std::uint64_t request_id, const BoardSchema& board) {
    json j{{"request_id", request_id}, {"action", action_to_json(action, board)}};
    if (action.novelty_detected) j["novelty_detected"] = true;
    return stamp(std::move(j), "action-response");
}

DecisionRequest decision_request_from_message(const json& msg, std::shared_ptr<const BoardSchema> board) {
    const BoardSchema& b = *board;
    DecisionRequest r;
    auto point = decision_point_from_string(msg.at("point").get<std::string>());
    if (!point) throw ProtocolFault("unknown decision point");
    r.point = *point;
    r.seat = msg.at("seat").get<int>();
    r.turn = msg.at("turn").get<int>();
    r.state = public_state_from_json(msg.at("state"));
    for (const auto& e : msg.at("recent")) r.recent.push_back(event_from_json(e, b));
    for (const auto& e : msg.at("menu")) {
        auto kind = action_kind_from_string(e.at("kind").get<std::string>());
        if (!kind) throw ProtocolFault("unknown menu entry");
        MenuEntry entry{*kind, {}};
        for (const auto& s : e.at("slots")) entry.slots.push_back(slot_from_name(s, b));
        r.menu.entries.push_back(std::move(entry));
    }
    r.menu.max_offers = msg.value("max_offers", 0);
    if (msg.contains("slot")) r.slot = slot_from_name(msg.at("slot"), b);
    if (msg.contains("offer")) r.offer = offer_from_json(msg.at("offer"), b);
    r.amount_due = msg.value("amount_due", Money{0});
    if (msg.contains("creditor")) r.creditor = party_from_json(msg.at("creditor"));
    r.schema = board;
    r.index = std::make_shared<BoardIndex>(b);
    return r;
}

json parse_message(const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ProtocolFault("malformed message");
    if (!j.contains("type") || !j["type"].is_string()) throw ProtocolFault("message has no type");
    if (j.value("protocol_version", -1) != kProtocolVersion) throw ProtocolFault("protocol version mismatch");
    return j;
}

std::uint64_t serve_agent(Agent& agent, std::istream& in, std::ostream& out) {
    // Without a visible schema the host assumes the reference board.
    auto board = std::make_shared<const BoardSchema>(default_board());
    std::shared_ptr<const BoardIndex> index = std::make_shared<BoardIndex>(*board);
    std::uint64_t served = 0;
    bool announced = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json msg;
        try {
            msg = parse_message(line);
        } catch (const ProtocolFault&) {
            continue;
        }
        const auto type = msg["type"].get<std::string>();
        if (type == "game-start") {
            board = msg.contains("schema") ? std::make_shared<const BoardSchema>(schema_from_json(msg["schema"]))
                                           : std::make_shared<const BoardSchema>(default_board());
            index = std::make_shared<BoardIndex>(*board);
            agent.start_game(GameStart{msg.value("seat", -1), msg.value("seed", std::uint64_t{0}), board,
                                       msg.value("schema_visible", true)});
        } else if (type == "decision-request") {
            const auto id = msg.value("request_id", std::uint64_t{0});
            AgentAction action;
            try {
                DecisionRequest r = decision_request_from_message(msg, board);
                r.index = index;
                action = agent.decide(r);
            } catch (const std::exception&) {
                action = AgentAction::of(ActionKind::pass);
            }
            if (agent.novelty_signaled() && !announced) {
                announced = true;
                out << stamp(json::object(), "novelty-detected").dump() << '\n';
            }
            out << action_response_message(action, id, *board).dump() << '\n' << std::flush;
            ++served;
        } else if (type == "game-end") {
            const json& res = msg.at("result");
            json full = res;
            full["record"] = "result";
            agent.end_game(msg.value("seat", -1), result_from_json(full));
        }
    }
    return served;
}

}  // namespace novopoly
