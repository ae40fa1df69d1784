#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "novopoly/board.hpp"

namespace novopoly {

// A proposed exchange. Property lists hold slot indices of original (non-replica) slots.
struct TradeOffer {
    int proposer = -1;
    int responder = -1;
    std::vector<int> offered;
    Money offered_cash = 0;
    std::vector<int> requested;
    Money requested_cash = 0;

    bool operator==(const TradeOffer&) const = default;
};

enum class DecisionPoint {
    buy_or_decline,
    pre_roll_actions,
    jail_choice,
    respond_to_trade,
    raise_cash,
    propose_trades,
};

enum class ActionKind {
    buy,
    decline,
    pass,
    improve,
    sell_improvement,
    mortgage,
    unmortgage,
    propose_trades,
    accept,
    reject,
    pay_jail_fine,
    use_jail_card,
    roll_for_doubles,
    declare_bankruptcy,
};

std::string_view to_string(DecisionPoint point);
std::optional<DecisionPoint> decision_point_from_string(std::string_view name);
std::string_view to_string(ActionKind kind);
std::optional<ActionKind> action_kind_from_string(std::string_view name);

struct AgentAction {
    ActionKind kind = ActionKind::pass;
    int slot = -1;                   // improve, sell, mortgage, unmortgage
    std::vector<TradeOffer> offers;  // propose_trades
    bool novelty_detected = false;

    static AgentAction of(ActionKind kind, int slot = -1) { return AgentAction{kind, slot, {}, false}; }
    bool operator==(const AgentAction&) const = default;
};

struct MenuEntry {
    ActionKind kind;
    std::vector<int> slots;  // legal targets; empty for untargeted actions

    bool operator==(const MenuEntry&) const = default;
};

struct LegalMenu {
    std::vector<MenuEntry> entries;
    int max_offers = 0;  // upper bound on offers in one propose_trades action

    const MenuEntry* find(ActionKind kind) const;
    bool allows(ActionKind kind) const { return find(kind) != nullptr; }
    // Kind and target are on the menu. Trade contents are checked by the engine.
    bool permits(const AgentAction& action) const;
    bool operator==(const LegalMenu&) const = default;
};

// The action substituted when an agent faults: the most conservative legal choice.
ActionKind conservative_action(DecisionPoint point);

}  // namespace novopoly
