#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "novopoly/actions.hpp"
#include "novopoly/board.hpp"

namespace novopoly {

// Money counterparty: a seat or the bank.
struct Party {
    static constexpr int kBank = -1;
    int seat = kBank;

    static Party bank() { return Party{kBank}; }
    static Party player(int s) { return Party{s}; }
    bool is_bank() const { return seat == kBank; }
    bool operator==(const Party&) const = default;
};

enum class EventKind {
    roll,
    move,
    pass_go,
    buy,
    decline,
    rent_paid,
    tax_paid,
    card_drawn,
    card_effect,
    trade_proposed,
    trade_accepted,
    trade_rejected,
    improve,
    sell_improvement,
    mortgage,
    unmortgage,
    jail_enter,
    jail_exit,
    bankruptcy,
    invalid_action_substituted,
    novelty_detected,
    game_end,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

struct GameEvent {
    int turn = 0;
    int player = -1;
    EventKind kind = EventKind::roll;
    // Monetary events carry payer, payee and amount; the payer is debited exactly what the payee is credited.
    std::optional<Party> payer;
    std::optional<Party> payee;
    Money amount = 0;
    int slot = -1;
    int from = -1;
    int to = -1;
    int level = -1;
    std::vector<int> dice;
    std::vector<int> properties;
    std::optional<TradeOffer> offer;
    std::string detail;

    bool monetary() const { return payer.has_value(); }
    bool operator==(const GameEvent&) const = default;
};

enum class Termination { last_player_standing, round_trip_cap };
std::string_view to_string(Termination t);

struct GameResult {
    std::optional<int> winner;  // none for a draw
    int turns = 0;
    std::vector<int> round_trips;
    std::vector<int> bankruptcy_order;
    Termination reason = Termination::round_trip_cap;
    std::vector<bool> novelty_detected;
    std::vector<int> faults;

    int max_round_trips() const;
    bool operator==(const GameResult&) const = default;
};

// Everything written to an event log file.
struct GameLog {
    std::uint64_t seed = 0;
    std::vector<std::string> seats;
    BoardSchema board;
    std::vector<GameEvent> events;
    std::optional<GameResult> result;
    bool truncated = false;  // set by parse_log when the final result line is missing
};

json party_to_json(const Party& p);
Party party_from_json(const json& j);
json offer_to_json(const TradeOffer& offer, const BoardSchema& board);
TradeOffer offer_from_json(const json& j, const BoardSchema& board);
json event_to_json(const GameEvent& event, const BoardSchema& board);
GameEvent event_from_json(const json& j, const BoardSchema& board);
json result_to_json(const GameResult& result);
GameResult result_from_json(const json& j);

// Newline-delimited log: a header line, one line per event, then the result line.
std::string write_log(const GameLog& log);
GameLog parse_log(std::string_view text);

}  // namespace novopoly
