#include "novopoly/actions.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace novopoly {

namespace {

constexpr std::array<std::pair<DecisionPoint, std::string_view>, 6> kPointNames{{
    {DecisionPoint::buy_or_decline, "buy-or-decline"},
    {DecisionPoint::pre_roll_actions, "pre-roll-actions"},
    {DecisionPoint::jail_choice, "jail-choice"},
    {DecisionPoint::respond_to_trade, "respond-to-trade"},
    {DecisionPoint::raise_cash, "raise-cash"},
    {DecisionPoint::propose_trades, "propose-trades"},
}};

constexpr std::array<std::pair<ActionKind, std::string_view>, 14> kActionNames{{
    {ActionKind::buy, "buy"},
    {ActionKind::decline, "decline"},
    {ActionKind::pass, "pass"},
    {ActionKind::improve, "improve"},
    {ActionKind::sell_improvement, "sell-improvement"},
    {ActionKind::mortgage, "mortgage"},
    {ActionKind::unmortgage, "unmortgage"},
    {ActionKind::propose_trades, "propose-trades"},
    {ActionKind::accept, "accept"},
    {ActionKind::reject, "reject"},
    {ActionKind::pay_jail_fine, "pay-jail-fine"},
    {ActionKind::use_jail_card, "use-jail-card"},
    {ActionKind::roll_for_doubles, "roll-for-doubles"},
    {ActionKind::declare_bankruptcy, "declare-bankruptcy"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
    for (const auto& [e, n] : table) {
        if (e == value) return n;
    }
    return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view name) {
    for (const auto& [e, n] : table) {
        if (n == name) return e;
    }
    return std::nullopt;
}

bool targeted(ActionKind kind) {
    switch (kind) {
        case ActionKind::improve:
        case ActionKind::sell_improvement:
        case ActionKind::mortgage:
        case ActionKind::unmortgage:
            return true;
        default:
            return false;
    }
}

}  // namespace

std::string_view to_string(DecisionPoint point) { return name_of(kPointNames, point); }
std::optional<DecisionPoint> decision_point_from_string(std::string_view name) {
    return value_of(kPointNames, name);
}
std::string_view to_string(ActionKind kind) { return name_of(kActionNames, kind); }
std::optional<ActionKind> action_kind_from_string(std::string_view name) { return value_of(kActionNames, name); }

const MenuEntry* LegalMenu::find(ActionKind kind) const {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const MenuEntry& e) { return e.kind == kind; });
    return it == entries.end() ? nullptr : &*it;
}

bool LegalMenu::permits(const AgentAction& action) const {
    const MenuEntry* entry = find(action.kind);
    if (!entry) return false;
    if (targeted(action.kind)) {
        return std::find(entry->slots.begin(), entry->slots.end(), action.slot) != entry->slots.end();
    }
    if (action.kind == ActionKind::propose_trades) {
        return !action.offers.empty() && static_cast<int>(action.offers.size()) <= max_offers;
    }
    return true;
}

ActionKind conservative_action(DecisionPoint point) {
    switch (point) {
        case DecisionPoint::buy_or_decline:
            return ActionKind::decline;
        case DecisionPoint::respond_to_trade:
            return ActionKind::reject;
        case DecisionPoint::jail_choice:
            return ActionKind::roll_for_doubles;
        case DecisionPoint::pre_roll_actions:
        case DecisionPoint::raise_cash:
        case DecisionPoint::propose_trades:
            return ActionKind::pass;
    }
    return ActionKind::pass;
}

}  // namespace novopoly
