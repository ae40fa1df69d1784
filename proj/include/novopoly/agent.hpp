#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "novopoly/actions.hpp"
#include "novopoly/events.hpp"
#include "novopoly/state.hpp"

namespace novopoly {

// The question the engine asks an agent at a decision point.
struct DecisionRequest {
    DecisionPoint point = DecisionPoint::pre_roll_actions;
    int seat = -1;
    int turn = 0;
    std::shared_ptr<const BoardSchema> schema;
    std::shared_ptr<const BoardIndex> index;
    PublicState state;
    std::vector<GameEvent> recent;  // latest public events, oldest first
    LegalMenu menu;

    int slot = -1;                     // buy-or-decline: the slot on offer
    std::optional<TradeOffer> offer;   // respond-to-trade
    Money amount_due = 0;              // raise-cash
    std::optional<Party> creditor;     // raise-cash

    const PublicPlayer& me() const { return state.players[static_cast<std::size_t>(seat)]; }
};

struct GameStart {
    int seat = -1;
    std::uint64_t seed = 0;
    std::shared_ptr<const BoardSchema> schema;
    bool schema_visible = true;
};

// Decision-making logic behind one or more seats. decide() may throw; the
// engine treats any exception as a protocol fault and substitutes the
// conservative action.
class Agent {
public:
    virtual ~Agent() = default;

    virtual std::string id() const = 0;
    virtual void start_game(const GameStart&) {}
    virtual AgentAction decide(const DecisionRequest& request) = 0;
    virtual void end_game(int /*seat*/, const GameResult&) {}
    // Out-of-band detection signal (e.g. a separate wire message).
    virtual bool novelty_signaled() const { return false; }
};

using AgentPtr = std::unique_ptr<Agent>;

}  // namespace novopoly
