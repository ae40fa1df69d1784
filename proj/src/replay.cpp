#include "novopoly/replay.hpp"

#include <sstream>
#include <stdexcept>

namespace novopoly {

namespace {

std::string seat_name(int seat) { return "P" + std::to_string(seat); }

std::string party_name(const std::optional<Party>& p) {
    if (!p || p->is_bank()) return "the bank";
    return seat_name(p->seat);
}

std::string slot_name(const BoardSchema& board, int slot) {
    if (slot < 0 || static_cast<std::size_t>(slot) >= board.slots.size()) return "?";
    return board.slots[static_cast<std::size_t>(slot)].name;
}

std::string join_slots(const BoardSchema& board, const std::vector<int>& slots) {
    std::string out;
    for (int s : slots) {
        if (!out.empty()) out += ", ";
        out += slot_name(board, s);
    }
    return out.empty() ? "nothing" : out;
}

std::string dice_text(const std::vector<int>& dice) {
    std::string out;
    int sum = 0;
    for (int d : dice) {
        if (!out.empty()) out += "+";
        out += std::to_string(d);
        sum += d;
    }
    return out + " = " + std::to_string(sum);
}

std::string money(Money m) { return "$" + std::to_string(m); }

PlayerState* player_at(std::vector<PlayerState>& players, int seat) {
    if (seat < 0 || static_cast<std::size_t>(seat) >= players.size()) return nullptr;
    return &players[static_cast<std::size_t>(seat)];
}

SlotState* slot_at(std::vector<SlotState>& slots, int slot) {
    if (slot < 0 || static_cast<std::size_t>(slot) >= slots.size()) return nullptr;
    return &slots[static_cast<std::size_t>(slot)];
}

// Applies one event to the replayed state.
void fold(const GameEvent& e, std::vector<PlayerState>& players, std::vector<SlotState>& slots) {
    if (e.monetary() && e.kind != EventKind::bankruptcy) {
        if (!e.payer->is_bank()) {
            if (auto* p = player_at(players, e.payer->seat)) p->cash -= e.amount;
        }
        if (e.payee && !e.payee->is_bank()) {
            if (auto* p = player_at(players, e.payee->seat)) p->cash += e.amount;
        }
    }
    PlayerState* actor = player_at(players, e.player);
    switch (e.kind) {
        case EventKind::move:
            if (actor) actor->position = e.to;
            break;
        case EventKind::pass_go:
            if (actor) ++actor->round_trips;
            break;
        case EventKind::buy:
            if (auto* s = slot_at(slots, e.slot)) s->owner = e.player;
            break;
        case EventKind::improve:
        case EventKind::sell_improvement:
            if (auto* s = slot_at(slots, e.slot)) s->level = e.level;
            break;
        case EventKind::mortgage:
            if (auto* s = slot_at(slots, e.slot)) s->mortgaged = true;
            break;
        case EventKind::unmortgage:
            if (auto* s = slot_at(slots, e.slot)) s->mortgaged = false;
            break;
        case EventKind::trade_accepted:
            if (e.offer) {
                for (int s : e.offer->offered) {
                    if (auto* st = slot_at(slots, s)) st->owner = e.offer->responder;
                }
                for (int s : e.offer->requested) {
                    if (auto* st = slot_at(slots, s)) st->owner = e.offer->proposer;
                }
            }
            break;
        case EventKind::jail_enter:
            if (actor) {
                actor->position = e.to;
                actor->in_jail = true;
            }
            break;
        case EventKind::jail_exit:
            if (actor) {
                actor->in_jail = false;
                if (e.detail == "card" && !actor->jail_cards.empty()) actor->jail_cards.pop_back();
            }
            break;
        case EventKind::card_effect:
            if (actor && e.detail == "retained") actor->jail_cards.push_back(HeldCard{});
            break;
        case EventKind::bankruptcy: {
            const bool to_bank = !e.payee || e.payee->is_bank();
            for (int s : e.properties) {
                if (auto* st = slot_at(slots, s)) {
                    st->level = 0;
                    st->owner = to_bank ? -1 : e.payee->seat;
                    if (to_bank) st->mortgaged = false;
                }
            }
            if (!to_bank) {
                if (auto* c = player_at(players, e.payee->seat)) c->cash += e.amount;
            }
            if (actor) {
                actor->cash = 0;
                actor->alive = false;
                actor->in_jail = false;
                actor->jail_cards.clear();
            }
            break;
        }
        default:
            break;
    }
}

PublicState snapshot(const BoardSchema& board, const std::vector<PlayerState>& players, const std::vector<SlotState>& slots) {
    PublicState s;
    for (const auto& p : players) {
        s.players.push_back(PublicPlayer{p.position, p.cash, p.alive, p.in_jail, static_cast<int>(p.jail_cards.size()),
                                         p.round_trips});
    }
    s.slots = slots;
    mirror_replicas(board, s.slots);
    return s;
}

}  // namespace

bool is_frame_event(EventKind kind) {
    switch (kind) {
        case EventKind::decline:
        case EventKind::card_drawn:
        case EventKind::trade_proposed:
        case EventKind::trade_rejected:
        case EventKind::invalid_action_substituted:
        case EventKind::novelty_detected:
            return false;
        default:
            return true;
    }
}

std::string caption(const GameEvent& e, const BoardSchema& board) {
    const std::string who = seat_name(e.player);
    switch (e.kind) {
        case EventKind::roll: return who + " rolls " + dice_text(e.dice);
        case EventKind::move:
            return who + " moves to " + slot_name(board, e.to) + (e.detail == "card" ? " (card)" : "");
        case EventKind::pass_go: return who + " passes " + slot_name(board, 0) + " and collects " + money(e.amount);
        case EventKind::buy: return who + " buys " + slot_name(board, e.slot) + " for " + money(e.amount);
        case EventKind::decline: return who + " declines " + slot_name(board, e.slot);
        case EventKind::rent_paid:
            return who + " pays " + money(e.amount) + " rent to " + party_name(e.payee) + " for " + slot_name(board, e.slot);
        case EventKind::tax_paid: return who + " pays " + money(e.amount) + " at " + slot_name(board, e.slot);
        case EventKind::card_drawn: return who + " draws " + e.detail;
        case EventKind::card_effect:
            if (e.detail == "retained") return who + " keeps a get-out-of-jail card";
            if (e.payee && !e.payee->is_bank() && e.payee->seat == e.player) {
                return who + " collects " + money(e.amount) + ": " + e.detail;
            }
            return who + " pays " + money(e.amount) + " to " + party_name(e.payee) + ": " + e.detail;
        case EventKind::trade_proposed:
        case EventKind::trade_accepted:
        case EventKind::trade_rejected: {
            if (!e.offer) return who + " trades";
            const auto& o = *e.offer;
            const std::string verb = e.kind == EventKind::trade_proposed  ? " offers "
                                     : e.kind == EventKind::trade_accepted ? " trades "
                                                                          : " is refused ";
            std::string text = who + verb + join_slots(board, o.offered);
            if (o.offered_cash > 0) text += " + " + money(o.offered_cash);
            text += " to " + seat_name(o.responder) + " for " + join_slots(board, o.requested);
            if (o.requested_cash > 0) text += " + " + money(o.requested_cash);
            return text;
        }
        case EventKind::improve:
            return who + " builds on " + slot_name(board, e.slot) + " (level " + std::to_string(e.level) + ")";
        case EventKind::sell_improvement:
            return who + " sells a building on " + slot_name(board, e.slot) + " (level " + std::to_string(e.level) + ")";
        case EventKind::mortgage: return who + " mortgages " + slot_name(board, e.slot) + " for " + money(e.amount);
        case EventKind::unmortgage:
            return who + " lifts the mortgage on " + slot_name(board, e.slot) + " for " + money(e.amount);
        case EventKind::jail_enter: return who + " goes to jail";
        case EventKind::jail_exit:
            if (e.detail == "card") return who + " leaves jail with a card";
            if (e.detail == "doubles") return who + " rolls doubles and leaves jail";
            return who + " pays " + money(e.amount) + " to leave jail";
        case EventKind::bankruptcy: return who + " goes bankrupt to " + party_name(e.payee);
        case EventKind::invalid_action_substituted: return who + " made an invalid move: " + e.detail;
        case EventKind::novelty_detected: return who + " signals novelty";
        case EventKind::game_end:
            return e.player >= 0 ? "Game over: " + who + " wins" : "Game over: draw at the round-trip cap";
    }
    return who;
}

FrameSet build_frames(const GameLog& log) {
    const BoardSchema& board = log.board;
    const int seats = static_cast<int>(log.seats.size());
    std::vector<PlayerState> players(static_cast<std::size_t>(seats));
    for (auto& p : players) p.cash = board.starting_cash;
    std::vector<SlotState> slots(board.slots.size());

    FrameSet out;
    out.truncated = log.truncated;
    ReplayFrame frame;
    frame.slot_count = static_cast<int>(board.slots.size());
    frame.caption = "Game start";
    frame.state = snapshot(board, players, slots);
    out.frames.push_back(frame);

    for (const auto& e : log.events) {
        if (!is_frame_event(e.kind)) continue;
        fold(e, players, slots);
        ReplayFrame f;
        f.index = static_cast<int>(out.frames.size());
        f.turn = e.turn;
        f.event = e.kind;
        f.player = e.player;
        f.dice = e.kind == EventKind::roll ? e.dice : out.frames.back().dice;
        f.caption = caption(e, board);
        f.slot_count = frame.slot_count;
        f.final = e.kind == EventKind::game_end;
        f.state = snapshot(board, players, slots);
        for (const auto& p : f.state.players) f.shortfall = f.shortfall || p.cash < 0;
        out.frames.push_back(std::move(f));
    }
    return out;
}

json frame_to_json(const ReplayFrame& f) {
    return json{{"index", f.index},
                {"turn", f.turn},
                {"event", f.event ? json(to_string(*f.event)) : json(nullptr)},
                {"player", f.player},
                {"dice", f.dice},
                {"caption", f.caption},
                {"slot_count", f.slot_count},
                {"shortfall", f.shortfall},
                {"final", f.final},
                {"players", public_state_to_json(f.state)["players"]},
                {"slots", public_state_to_json(f.state)["slots"]}};
}

ReplayFrame frame_from_json(const json& j) {
    ReplayFrame f;
    f.index = j.at("index").get<int>();
    f.turn = j.at("turn").get<int>();
    if (!j.at("event").is_null()) {
        auto k = event_kind_from_string(j["event"].get<std::string>());
        if (!k) throw std::invalid_argument("unknown event kind in frame");
        f.event = *k;
    }
    f.player = j.at("player").get<int>();
    f.dice = j.at("dice").get<std::vector<int>>();
    f.caption = j.at("caption").get<std::string>();
    f.slot_count = j.at("slot_count").get<int>();
    f.shortfall = j.at("shortfall").get<bool>();
    f.final = j.at("final").get<bool>();
    f.state = public_state_from_json(json{{"players", j.at("players")}, {"slots", j.at("slots")}});
    return f;
}

std::string export_frames(const std::vector<ReplayFrame>& frames, std::string_view format) {
    std::ostringstream out;
    if (format == "ndjson") {
        for (const auto& f : frames) out << frame_to_json(f).dump() << '\n';
    } else if (format == "snapshots") {
        for (const auto& f : frames) {
            out << f.index << '\t' << f.turn << '\t' << f.caption;
            for (std::size_t p = 0; p < f.state.players.size(); ++p) {
                const auto& pl = f.state.players[p];
                out << '\t' << seat_name(static_cast<int>(p)) << '@' << pl.position << ':' << pl.cash
                    << (pl.alive ? "" : ":out");
            }
            out << '\n';
        }
    } else {
        throw std::invalid_argument("unknown frame format '" + std::string(format) + "'");
    }
    return out.str();
}

std::vector<ReplayFrame> parse_frames(std::string_view ndjson) {
    std::vector<ReplayFrame> out;
    std::istringstream in{std::string(ndjson)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(frame_from_json(json::parse(line)));
    }
    return out;
}

json board_geometry(const BoardSchema& board) {
    json slots = json::array();
    for (const auto& s : board.slots) {
        json j{{"name", s.name}, {"kind", to_string(s.kind)}};
        if (!s.color.empty()) j["color"] = s.color;
        if (s.purchasable()) j["price"] = s.price;
        if (s.replica()) j["extends"] = s.extends;
        slots.push_back(std::move(j));
    }
    return json{{"name", board.name}, {"slot_count", board.slots.size()}, {"slots", slots},
                {"dice", {{"count", board.dice.count}, {"faces", board.dice.faces}}}};
}

}  // namespace novopoly
