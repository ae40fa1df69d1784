#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "novopoly/agent.hpp"

namespace novopoly {

// Never trades or builds; buys whenever it can pay; goes bankrupt rather than liquidate.
class SimpleAgent : public Agent {
public:
    std::string id() const override { return "simple"; }
    AgentAction decide(const DecisionRequest& request) override;
};

// Tunable constants for the heuristic agents. Defaults are the calibrated values
// used by the test suite; experiments should pin them explicitly.
struct HeuristicConfig {
    Money cash_reserve = 150;        // buy only if at least this much is left over
    Money build_reserve = 30000;     // cash kept back after building
    Money unmortgage_reserve = 400;  // cash kept back after lifting a mortgage
    Money low_cash = 100;            // below this, try to sell a property for cash
    double sale_premium = 1.0;       // asking price for a cash sale, as a multiple of list price
    Money completion_bonus = 2000;   // extra value of a property that completes a color group
    int max_offers = 3;              // offers per propose-trades turn
    int offer_cooldown = 8;          // own turns before re-proposing an identical trade
    int builds_per_turn = 1;         // improvements bought in one pre-roll phase

    bool operator==(const HeuristicConfig&) const = default;
};

json heuristic_config_to_json(const HeuristicConfig& c);
HeuristicConfig heuristic_config_from_json(const json& j);

// H1: builds evenly on monopolies, sells a property for cash when short,
// mortgages and sells improvements before going bankrupt.
class H1Agent : public Agent {
public:
    explicit H1Agent(HeuristicConfig config = {}) : config_(config) {}
    std::string id() const override { return "h1"; }
    AgentAction decide(const DecisionRequest& request) override;
    const HeuristicConfig& config() const { return config_; }

protected:
    virtual bool want_buy(const DecisionRequest& r) const;
    virtual AgentAction pre_roll(const DecisionRequest& r);
    virtual std::vector<TradeOffer> proposals(const DecisionRequest& r);
    virtual bool accept_offer(const DecisionRequest& r) const;
    AgentAction jail(const DecisionRequest& r) const;
    AgentAction raise_cash(const DecisionRequest& r);

    // Offer of one property for cash to the richest opponent able to pay, if any.
    std::optional<TradeOffer> cash_sale(const DecisionRequest& r, Money target) const;
    // Value of holding `slot` for `seat`, including group completion.
    Money holding_value(const DecisionRequest& r, int seat, int slot) const;
    bool recently_offered(int seat, const TradeOffer& offer, int turn) const;
    void remember(int seat, const TradeOffer& offer, int turn);

    HeuristicConfig config_;

private:
    // Per-seat memory, so one instance may back several seats.
    std::map<int, std::map<std::string, int>> offered_;
    std::map<int, std::pair<int, Money>> shortfall_trade_;
    std::map<int, std::pair<int, int>> builds_;  // seat -> (turn, improvements bought that turn)
};

// H2: H1 plus two-way property swaps aimed at completing color groups,
// sent to several counterparties at once.
class H2Agent : public H1Agent {
public:
    explicit H2Agent(HeuristicConfig config = {}) : H1Agent(config) {}
    std::string id() const override { return "h2"; }

protected:
    std::vector<TradeOffer> proposals(const DecisionRequest& r) override;
    bool accept_offer(const DecisionRequest& r) const override;
};

// Heuristics everywhere except a replaceable buy-or-decline policy, plus a
// latched detector that fires when the board differs from the reference board.
class HybridAgent : public H2Agent {
public:
    // Returns nullopt to defer to the heuristic.
    using BuyPolicy = std::function<std::optional<bool>(const DecisionRequest&)>;

    explicit HybridAgent(HeuristicConfig config = {}, BuyPolicy policy = {});
    std::string id() const override { return "hybrid"; }
    void start_game(const GameStart& start) override;
    AgentAction decide(const DecisionRequest& request) override;
    bool novelty_signaled() const override { return detected_; }

    void set_buy_policy(BuyPolicy policy) { policy_ = std::move(policy); }
    void reset_detection() { detected_ = false; }

protected:
    bool want_buy(const DecisionRequest& r) const override;

private:
    void observe(const DecisionRequest& r);

    BuyPolicy policy_;
    std::string reference_hash_;
    bool detected_ = false;
};

struct AgentInfo {
    std::string id;
    std::string name;
    std::string description;
};

// Built-in agents, in a stable order.
const std::vector<AgentInfo>& agent_catalog();
bool is_builtin_agent(std::string_view id);

struct AgentOptions {
    HeuristicConfig heuristics;
    int timeout_ms = 1000;
};

// Creates an agent from a built-in id or an external endpoint
// ("exec:<command line>" or "tcp:<host>:<port>"). Throws std::invalid_argument on an unknown id.
AgentPtr make_agent(const std::string& spec, const AgentOptions& options = {});

}  // namespace novopoly
