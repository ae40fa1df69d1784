#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "novopoly/agent.hpp"
#include "novopoly/board.hpp"
#include "novopoly/events.hpp"
#include "novopoly/rng.hpp"
#include "novopoly/state.hpp"

namespace novopoly {

inline constexpr int kSeats = 4;

struct GameLimits {
    int round_trip_cap = 500;
    int max_pre_roll_actions = 24;
    int max_trade_offers = 4;
    int recent_events = 12;
    bool schema_visible = true;  // false: external agents discover the board by play

    bool operator==(const GameLimits&) const = default;
};

// Rolls every die once. Consumes rng state deterministically.
std::vector<int> roll_dice(Rng& rng, const DiceConfig& dice);
bool all_equal(const std::vector<int>& dice);

// Ownership and building rules shared by the engine and the built-in agents.
namespace rules {
bool owns_group(const BoardIndex& index, std::span<const SlotState> slots, int group, int seat);
int monopoly_count(const BoardIndex& index, std::span<const SlotState> slots, int seat);
int count_owned(std::span<const int> members, std::span<const SlotState> slots, int seat);
bool group_improved(const BoardIndex& index, std::span<const SlotState> slots, int group);
// Property can change hands: no buildings anywhere in its color group.
bool tradable(const BoardIndex& index, std::span<const SlotState> slots, int slot);
}  // namespace rules

// Plays one game. Single-threaded; all agent calls are made synchronously in turn order.
class Engine {
public:
    Engine(std::shared_ptr<const BoardSchema> schema, std::vector<Agent*> agents, std::uint64_t seed,
           GameLimits limits = {});

    // Runs to completion and returns the result. Call once.
    GameResult run();

    // Single turn for one seat, exposed for tests and stepping.
    void take_turn(int player);

    std::vector<int> roll_dice();
    // Moves forward, crediting the Go increment per wrap. Landing effects are not applied.
    void advance(int player, int steps);
    // nullopt means no rent is due (unowned, mortgaged, or owner out).
    std::optional<Money> compute_rent(int slot, int dice_sum, int occupant) const;
    // Draws the card at the deck cursor and applies it.
    void apply_card(int player, Deck deck, int dice_sum = 0);
    void resolve_landing(int player, int dice_sum);
    // Lets the debtor liquidate until it can pay `amount`. Returns false if it went bankrupt.
    bool cash_shortfall(int debtor, Money amount, Party creditor);
    // Transfers money, running the shortfall procedure when needed. Returns false on bankruptcy.
    bool pay(int payer, Party payee, Money amount, EventKind kind, int slot = -1, std::string detail = {});
    void send_to_jail(int player);

    // Legal targets for voluntary building and liquidation.
    std::vector<int> improvable(int player) const;
    std::vector<int> sellable(int player) const;
    std::vector<int> mortgageable(int player) const;
    std::vector<int> unmortgageable(int player) const;

    GameState& state() { return state_; }
    const GameState& state() const { return state_; }
    const BoardSchema& schema() const { return *schema_; }
    const BoardIndex& index() const { return *index_; }
    const std::vector<GameEvent>& events() const { return events_; }
    const std::vector<int>& fault_counts() const { return faults_; }
    bool finished() const { return result_.has_value(); }
    const std::optional<GameResult>& result() const { return result_; }
    GameLog log() const;
    int alive_count() const;

private:
    void emit(GameEvent e);
    GameEvent event(int player, EventKind kind) const;
    AgentAction ask(int seat, DecisionRequest request);
    DecisionRequest request(int seat, DecisionPoint point, LegalMenu menu) const;
    void fault(int seat, DecisionPoint point, const std::string& reason, ActionKind substituted);
    void credit(int player, Party payer, Money amount, EventKind kind, int slot = -1, std::string detail = {});
    void move_to(int player, int target, const char* reason);
    void move_by(int player, int steps, const char* reason);

    void pre_roll_phase(int player);
    void trade_phase(int player);
    bool jail_phase(int player);
    void offer_purchase(int player, int slot);
    void process_offer(int player, TradeOffer offer);
    std::string offer_problem(const TradeOffer& offer) const;
    void execute_trade(const TradeOffer& offer);
    void bankrupt(int debtor, Party creditor);
    void improve(int player, int slot);
    void sell_improvement(int player, int slot);
    void mortgage(int player, int slot);
    void unmortgage(int player, int slot);
    void apply_card_effect(int player, Deck deck, int card, int dice_sum);
    bool check_end();
    int houses_in_use() const;
    int hotels_in_use() const;

    std::shared_ptr<const BoardSchema> schema_;
    std::shared_ptr<const BoardIndex> index_;
    std::vector<Agent*> agents_;
    std::uint64_t seed_;
    GameLimits limits_;
    GameState state_;
    std::vector<GameEvent> events_;
    std::vector<int> faults_;
    std::vector<bool> detected_;
    std::vector<int> bankruptcy_order_;
    std::optional<GameResult> result_;
    int current_ = -1;
};

struct GameOutcome {
    GameResult result;
    GameLog log;
    PublicState final_state;
};

// Plays a full game between the given agents (one per seat, seating order fixed).
GameOutcome run_game(std::shared_ptr<const BoardSchema> schema, std::vector<Agent*> agents, std::uint64_t seed,
                     GameLimits limits = {});

}  // namespace novopoly
