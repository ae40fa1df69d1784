#include "novopoly/events.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

namespace novopoly {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 22> kEventNames{{
    {EventKind::roll, "roll"},
    {EventKind::move, "move"},
    {EventKind::pass_go, "pass-go"},
    {EventKind::buy, "buy"},
    {EventKind::decline, "decline"},
    {EventKind::rent_paid, "rent-paid"},
    {EventKind::tax_paid, "tax-paid"},
    {EventKind::card_drawn, "card-drawn"},
    {EventKind::card_effect, "card-effect"},
    {EventKind::trade_proposed, "trade-proposed"},
    {EventKind::trade_accepted, "trade-accepted"},
    {EventKind::trade_rejected, "trade-rejected"},
    {EventKind::improve, "improve"},
    {EventKind::sell_improvement, "sell-improvement"},
    {EventKind::mortgage, "mortgage"},
    {EventKind::unmortgage, "unmortgage"},
    {EventKind::jail_enter, "jail-enter"},
    {EventKind::jail_exit, "jail-exit"},
    {EventKind::bankruptcy, "bankruptcy"},
    {EventKind::invalid_action_substituted, "invalid-action-substituted"},
    {EventKind::novelty_detected, "novelty-detected"},
    {EventKind::game_end, "game-end"},
}};

json names_of(const std::vector<int>& slots, const BoardSchema& board) {
    json out = json::array();
    for (int s : slots) {
        if (s < 0 || static_cast<std::size_t>(s) >= board.slots.size()) {
            throw std::invalid_argument("slot index out of range: " + std::to_string(s));
        }
        out.push_back(board.slots[static_cast<std::size_t>(s)].name);
    }
    return out;
}

std::vector<int> indices_of(const json& names, const BoardSchema& board) {
    if (!names.is_array()) throw std::invalid_argument("property list must be an array");
    std::vector<int> out;
    for (const auto& n : names) {
        if (!n.is_string()) throw std::invalid_argument("property names must be strings");
        auto idx = board.index_of(n.get<std::string>());
        if (!idx) throw std::invalid_argument("unknown property '" + n.get<std::string>() + "'");
        out.push_back(*idx);
    }
    return out;
}

std::string_view termination_name(Termination t) {
    return t == Termination::last_player_standing ? "last-player-standing" : "round-trip-cap";
}

}  // namespace

std::string_view to_string(EventKind kind) {
    for (const auto& [k, n] : kEventNames) {
        if (k == kind) return n;
    }
    return "?";
}

std::optional<EventKind> event_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kEventNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::string_view to_string(Termination t) { return termination_name(t); }

int GameResult::max_round_trips() const {
    return round_trips.empty() ? 0 : *std::max_element(round_trips.begin(), round_trips.end());
}

json party_to_json(const Party& p) {
    if (p.is_bank()) return "bank";
    return p.seat;
}

Party party_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "bank") return Party::bank();
    if (j.is_number_integer()) return Party::player(j.get<int>());
    throw std::invalid_argument("party must be a seat number or \"bank\"");
}

json offer_to_json(const TradeOffer& o, const BoardSchema& board) {
    return json{{"proposer", o.proposer},
                {"responder", o.responder},
                {"offered", names_of(o.offered, board)},
                {"offered_cash", o.offered_cash},
                {"requested", names_of(o.requested, board)},
                {"requested_cash", o.requested_cash}};
}

TradeOffer offer_from_json(const json& j, const BoardSchema& board) {
    if (!j.is_object()) throw std::invalid_argument("trade offer must be an object");
    TradeOffer o;
    o.proposer = j.value("proposer", -1);
    o.responder = j.value("responder", -1);
    o.offered = indices_of(j.value("offered", json::array()), board);
    o.offered_cash = j.value("offered_cash", Money{0});
    o.requested = indices_of(j.value("requested", json::array()), board);
    o.requested_cash = j.value("requested_cash", Money{0});
    return o;
}

json event_to_json(const GameEvent& e, const BoardSchema& board) {
    json j{{"record", "event"}, {"turn", e.turn}, {"kind", to_string(e.kind)}};
    j["player"] = e.player >= 0 ? json(e.player) : json(nullptr);
    if (e.payer) {
        j["payer"] = party_to_json(*e.payer);
        j["payee"] = party_to_json(e.payee.value_or(Party::bank()));
        j["amount"] = e.amount;
    }
    if (e.slot >= 0) {
        j["slot"] = e.slot;
        if (static_cast<std::size_t>(e.slot) < board.slots.size()) {
            j["slot_name"] = board.slots[static_cast<std::size_t>(e.slot)].name;
        }
    }
    if (e.from >= 0) j["from"] = e.from;
    if (e.to >= 0) j["to"] = e.to;
    if (e.level >= 0) j["level"] = e.level;
    if (!e.dice.empty()) j["dice"] = e.dice;
    if (!e.properties.empty()) j["properties"] = names_of(e.properties, board);
    if (e.offer) j["offer"] = offer_to_json(*e.offer, board);
    if (!e.detail.empty()) j["detail"] = e.detail;
    return j;
}

GameEvent event_from_json(const json& j, const BoardSchema& board) {
    GameEvent e;
    e.turn = j.at("turn").get<int>();
    e.player = j.at("player").is_null() ? -1 : j.at("player").get<int>();
    auto kind = event_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown event kind " + j.at("kind").dump());
    e.kind = *kind;
    if (j.contains("payer")) {
        e.payer = party_from_json(j.at("payer"));
        e.payee = party_from_json(j.at("payee"));
        e.amount = j.at("amount").get<Money>();
    }
    e.slot = j.value("slot", -1);
    e.from = j.value("from", -1);
    e.to = j.value("to", -1);
    e.level = j.value("level", -1);
    e.dice = j.value("dice", std::vector<int>{});
    if (j.contains("properties")) e.properties = indices_of(j.at("properties"), board);
    if (j.contains("offer")) e.offer = offer_from_json(j.at("offer"), board);
    e.detail = j.value("detail", std::string{});
    return e;
}

json result_to_json(const GameResult& r) {
    json j{{"record", "result"},
           {"turns", r.turns},
           {"round_trips", r.round_trips},
           {"bankruptcy_order", r.bankruptcy_order},
           {"termination", termination_name(r.reason)},
           {"novelty_detected", r.novelty_detected},
           {"faults", r.faults}};
    j["winner"] = r.winner ? json(*r.winner) : json(nullptr);
    return j;
}

GameResult result_from_json(const json& j) {
    GameResult r;
    if (!j.at("winner").is_null()) r.winner = j.at("winner").get<int>();
    r.turns = j.at("turns").get<int>();
    r.round_trips = j.at("round_trips").get<std::vector<int>>();
    r.bankruptcy_order = j.at("bankruptcy_order").get<std::vector<int>>();
    auto t = j.at("termination").get<std::string>();
    if (t == "last-player-standing") {
        r.reason = Termination::last_player_standing;
    } else if (t == "round-trip-cap") {
        r.reason = Termination::round_trip_cap;
    } else {
        throw std::invalid_argument("unknown termination reason '" + t + "'");
    }
    r.novelty_detected = j.value("novelty_detected", std::vector<bool>{});
    r.faults = j.value("faults", std::vector<int>{});
    return r;
}

std::string write_log(const GameLog& log) {
    std::string out;
    json header{{"record", "header"},
                {"format", "novopoly-event-log"},
                {"version", 1},
                {"seed", log.seed},
                {"seats", log.seats},
                {"board_hash", content_hash(log.board)},
                {"board", schema_to_json(log.board)}};
    out += header.dump();
    out += '\n';
    for (const auto& e : log.events) {
        out += event_to_json(e, log.board).dump();
        out += '\n';
    }
    if (log.result) {
        out += result_to_json(*log.result).dump();
        out += '\n';
    }
    return out;
}

GameLog parse_log(std::string_view text) {
    GameLog log;
    log.truncated = true;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        const bool complete = nl != std::string_view::npos;
        std::string_view line = text.substr(pos, complete ? nl - pos : std::string_view::npos);
        pos = complete ? nl + 1 : text.size();
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            // A torn final line is what a crashed run leaves behind.
            if (!complete) break;
            throw std::invalid_argument("malformed log line");
        }
        const auto record = j.value("record", std::string{});
        if (record == "header") {
            log.seed = j.at("seed").get<std::uint64_t>();
            log.seats = j.at("seats").get<std::vector<std::string>>();
            log.board = schema_from_json(j.at("board"));
            have_header = true;
        } else if (record == "event") {
            if (!have_header) throw std::invalid_argument("event before log header");
            log.events.push_back(event_from_json(j, log.board));
        } else if (record == "result") {
            log.result = result_from_json(j);
            log.truncated = false;
        } else {
            throw std::invalid_argument("unknown log record '" + record + "'");
        }
    }
    if (!have_header) throw std::invalid_argument("log has no header");
    return log;
}

}  // namespace novopoly
