#include "novopoly/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "novopoly/bridge.hpp"
#include "novopoly/engine.hpp"

namespace novopoly {

namespace {

const Slot& slot_def(const DecisionRequest& r, int s) { return r.schema->slots[static_cast<std::size_t>(s)]; }
const SlotState& slot_state(const DecisionRequest& r, int s) { return r.state.slots[static_cast<std::size_t>(s)]; }
int group_of(const DecisionRequest& r, int s) { return r.index->group_of[static_cast<std::size_t>(s)]; }

const std::vector<int>& members(const DecisionRequest& r, int g) { return r.index->groups[static_cast<std::size_t>(g)]; }

// Number of other members of slot's group held by seat, and the group size.
std::pair<int, int> group_share(const DecisionRequest& r, int seat, int slot) {
    const int g = group_of(r, slot);
    if (g < 0) return {0, 1};
    int held = 0;
    for (int m : members(r, g)) {
        if (m != slot && slot_state(r, m).owner == seat) ++held;
    }
    return {held, static_cast<int>(members(r, g).size())};
}

bool completes_group(const DecisionRequest& r, int seat, int slot) {
    const auto [held, size] = group_share(r, seat, slot);
    return group_of(r, slot) >= 0 && held == size - 1;
}

bool in_monopoly(const DecisionRequest& r, int seat, int slot) {
    const int g = group_of(r, slot);
    return g >= 0 && rules::owns_group(*r.index, r.state.slots, g, seat);
}

std::vector<int> owned_by(const DecisionRequest& r, int seat) {
    std::vector<int> out;
    for (int s : r.index->properties) {
        if (slot_state(r, s).owner == seat) out.push_back(s);
    }
    return out;
}

std::string offer_key(const TradeOffer& o) {
    std::string k = std::to_string(o.responder) + "|";
    for (int s : o.offered) k += std::to_string(s) + ",";
    k += "|" + std::to_string(o.offered_cash) + "|";
    for (int s : o.requested) k += std::to_string(s) + ",";
    return k + "|" + std::to_string(o.requested_cash);
}

AgentAction propose(std::vector<TradeOffer> offers, int max_offers) {
    if (offers.empty()) return AgentAction::of(ActionKind::pass);
    if (static_cast<int>(offers.size()) > max_offers) offers.resize(static_cast<std::size_t>(std::max(max_offers, 0)));
    AgentAction a = AgentAction::of(ActionKind::propose_trades);
    a.offers = std::move(offers);
    return a;
}

}  // namespace

json heuristic_config_to_json(const HeuristicConfig& c) {
    return json{{"cash_reserve", c.cash_reserve},         {"build_reserve", c.build_reserve},
                {"unmortgage_reserve", c.unmortgage_reserve}, {"low_cash", c.low_cash},
                {"sale_premium", c.sale_premium},         {"completion_bonus", c.completion_bonus},
                {"max_offers", c.max_offers},             {"offer_cooldown", c.offer_cooldown},
                {"builds_per_turn", c.builds_per_turn}};
}

HeuristicConfig heuristic_config_from_json(const json& j) {
    HeuristicConfig c;
    c.cash_reserve = j.value("cash_reserve", c.cash_reserve);
    c.build_reserve = j.value("build_reserve", c.build_reserve);
    c.unmortgage_reserve = j.value("unmortgage_reserve", c.unmortgage_reserve);
    c.low_cash = j.value("low_cash", c.low_cash);
    c.sale_premium = j.value("sale_premium", c.sale_premium);
    c.completion_bonus = j.value("completion_bonus", c.completion_bonus);
    c.max_offers = j.value("max_offers", c.max_offers);
    c.offer_cooldown = j.value("offer_cooldown", c.offer_cooldown);
    c.builds_per_turn = j.value("builds_per_turn", c.builds_per_turn);
    return c;
}

// ---- simple ----

AgentAction SimpleAgent::decide(const DecisionRequest& r) {
    switch (r.point) {
        case DecisionPoint::buy_or_decline:
            return AgentAction::of(r.me().cash >= slot_def(r, r.slot).price ? ActionKind::buy : ActionKind::decline);
        case DecisionPoint::respond_to_trade:
            return AgentAction::of(ActionKind::reject);
        case DecisionPoint::jail_choice:
            return AgentAction::of(ActionKind::roll_for_doubles);
        case DecisionPoint::raise_cash:
            return AgentAction::of(ActionKind::declare_bankruptcy);
        default:
            return AgentAction::of(ActionKind::pass);
    }
}

// ---- h1 ----

AgentAction H1Agent::decide(const DecisionRequest& r) {
    switch (r.point) {
        case DecisionPoint::buy_or_decline:
            return AgentAction::of(want_buy(r) ? ActionKind::buy : ActionKind::decline);
        case DecisionPoint::pre_roll_actions:
            return pre_roll(r);
        case DecisionPoint::propose_trades: {
            auto offers = proposals(r);
            for (const auto& o : offers) remember(r.seat, o, r.turn);
            return propose(std::move(offers), std::min(r.menu.max_offers, config_.max_offers));
        }
        case DecisionPoint::respond_to_trade:
            return AgentAction::of(accept_offer(r) ? ActionKind::accept : ActionKind::reject);
        case DecisionPoint::jail_choice:
            return jail(r);
        case DecisionPoint::raise_cash:
            return raise_cash(r);
    }
    return AgentAction::of(ActionKind::pass);
}

bool H1Agent::want_buy(const DecisionRequest& r) const {
    const Money cash = r.me().cash;
    const Money price = slot_def(r, r.slot).price;
    if (cash - price >= config_.cash_reserve) return true;
    return cash >= price && completes_group(r, r.seat, r.slot);
}

AgentAction H1Agent::pre_roll(const DecisionRequest& r) {
    const Money cash = r.me().cash;
    if (const MenuEntry* e = r.menu.find(ActionKind::unmortgage)) {
        int best = -1;
        Money best_cost = 0;
        for (int s : e->slots) {
            const Money cost = r.schema->unmortgage_cost(slot_def(r, s));
            if (cash - cost < config_.unmortgage_reserve) continue;
            // Monopoly members first, then cheapest.
            const bool mono = in_monopoly(r, r.seat, s);
            if (best < 0 || (mono && !in_monopoly(r, r.seat, best)) ||
                (mono == in_monopoly(r, r.seat, best) && cost < best_cost)) {
                best = s;
                best_cost = cost;
            }
        }
        if (best >= 0) return AgentAction::of(ActionKind::unmortgage, best);
    }
    auto& built = builds_[r.seat];
    if (built.first != r.turn) built = {r.turn, 0};
    if (const MenuEntry* e = r.menu.find(ActionKind::improve); e && built.second < config_.builds_per_turn) {
        int best = -1;
        for (int s : e->slots) {
            const int level = slot_state(r, s).level;
            if (cash - slot_def(r, s).build_cost(level + 1) < config_.build_reserve) continue;
            if (best < 0 || level < slot_state(r, best).level) best = s;
        }
        if (best >= 0) {
            ++built.second;
            return AgentAction::of(ActionKind::improve, best);
        }
    }
    return AgentAction::of(ActionKind::pass);
}

Money H1Agent::holding_value(const DecisionRequest& r, int seat, int slot) const {
    const Slot& def = slot_def(r, slot);
    Money value = def.price;
    if (slot_state(r, slot).mortgaged) value -= r.schema->unmortgage_cost(def);
    const auto [held, size] = group_share(r, seat, slot);
    if (group_of(r, slot) >= 0 && size > 1) {
        value += config_.completion_bonus * held / (size - 1);
    } else if (def.kind == SlotKind::railroad || def.kind == SlotKind::utility) {
        const auto& same = def.kind == SlotKind::railroad ? r.index->railroads : r.index->utilities;
        const int others = rules::count_owned(same, r.state.slots, seat) - (slot_state(r, slot).owner == seat ? 1 : 0);
        value += static_cast<Money>(others) * def.price / 4;
    }
    return value;
}

std::optional<TradeOffer> H1Agent::cash_sale(const DecisionRequest& r, Money target) const {
    int pick = -1;
    Money pick_value = 0;
    for (int s : owned_by(r, r.seat)) {
        if (in_monopoly(r, r.seat, s) || !rules::tradable(*r.index, r.state.slots, s)) continue;
        const Money v = holding_value(r, r.seat, s);
        if (pick < 0 || v < pick_value) {
            pick = s;
            pick_value = v;
        }
    }
    if (pick < 0) return std::nullopt;
    const Slot& def = slot_def(r, pick);
    Money ask = static_cast<Money>(std::llround(static_cast<double>(def.price) * config_.sale_premium));
    if (slot_state(r, pick).mortgaged) ask -= r.schema->mortgage_value(def);
    ask = std::max(ask, target);
    if (ask <= 0) return std::nullopt;

    int buyer = -1;
    for (std::size_t p = 0; p < r.state.players.size(); ++p) {
        const auto& pl = r.state.players[p];
        if (static_cast<int>(p) == r.seat || !pl.alive || pl.cash < ask) continue;
        if (buyer < 0 || pl.cash > r.state.players[static_cast<std::size_t>(buyer)].cash) buyer = static_cast<int>(p);
    }
    if (buyer < 0) return std::nullopt;
    return TradeOffer{r.seat, buyer, {pick}, 0, {}, ask};
}

bool H1Agent::recently_offered(int seat, const TradeOffer& offer, int turn) const {
    auto it = offered_.find(seat);
    if (it == offered_.end()) return false;
    auto jt = it->second.find(offer_key(offer));
    return jt != it->second.end() && turn - jt->second < config_.offer_cooldown * kSeats;
}

void H1Agent::remember(int seat, const TradeOffer& offer, int turn) { offered_[seat][offer_key(offer)] = turn; }

std::vector<TradeOffer> H1Agent::proposals(const DecisionRequest& r) {
    std::vector<TradeOffer> out;
    if (r.me().cash >= config_.low_cash) return out;
    if (auto sale = cash_sale(r, 0); sale && !recently_offered(r.seat, *sale, r.turn)) out.push_back(*sale);
    return out;
}

bool H1Agent::accept_offer(const DecisionRequest& r) const {
    const TradeOffer& o = *r.offer;
    Money gain = o.offered_cash;
    Money loss = o.requested_cash;
    for (int s : o.requested) {
        if (in_monopoly(r, r.seat, s)) return false;
        loss += holding_value(r, r.seat, s);
        if (completes_group(r, o.proposer, s)) loss += config_.completion_bonus;
    }
    for (int s : o.offered) gain += holding_value(r, r.seat, s);
    if (r.me().cash - o.requested_cash + o.offered_cash < config_.cash_reserve && o.requested_cash > 0) return false;
    return gain > loss;
}

AgentAction H1Agent::jail(const DecisionRequest& r) const {
    if (r.menu.allows(ActionKind::use_jail_card)) return AgentAction::of(ActionKind::use_jail_card);
    if (r.menu.allows(ActionKind::pay_jail_fine) && r.me().cash - r.schema->jail_fine >= config_.cash_reserve) {
        return AgentAction::of(ActionKind::pay_jail_fine);
    }
    return AgentAction::of(ActionKind::roll_for_doubles);
}

AgentAction H1Agent::raise_cash(const DecisionRequest& r) {
    const MenuEntry* mort = r.menu.find(ActionKind::mortgage);
    if (mort) {
        for (int s : mort->slots) {
            if (!in_monopoly(r, r.seat, s)) return AgentAction::of(ActionKind::mortgage, s);
        }
    }
    if (const MenuEntry* sell = r.menu.find(ActionKind::sell_improvement); sell && !sell->slots.empty()) {
        return AgentAction::of(ActionKind::sell_improvement, sell->slots.front());
    }
    if (mort && !mort->slots.empty()) return AgentAction::of(ActionKind::mortgage, mort->slots.front());
    if (r.menu.allows(ActionKind::propose_trades)) {
        // One sale attempt per debt; a refusal leads to bankruptcy.
        const auto key = std::make_pair(r.turn, r.amount_due);
        auto it = shortfall_trade_.find(r.seat);
        if (it == shortfall_trade_.end() || it->second != key) {
            shortfall_trade_[r.seat] = key;
            if (auto sale = cash_sale(r, r.amount_due - r.me().cash)) return propose({*sale}, 1);
        }
    }
    return AgentAction::of(ActionKind::declare_bankruptcy);
}

// ---- h2 ----

std::vector<TradeOffer> H2Agent::proposals(const DecisionRequest& r) {
    std::vector<TradeOffer> out = H1Agent::proposals(r);
    std::vector<int> used;
    for (const auto& o : out) used.push_back(o.responder);
    const Money cash = r.me().cash;

    // Groups one property short of completion drive the swaps.
    std::vector<int> wanted_groups;
    for (std::size_t g = 0; g < r.index->groups.size(); ++g) {
        const auto& m = r.index->groups[g];
        if (m.size() > 1 && rules::count_owned(m, r.state.slots, r.seat) == static_cast<int>(m.size()) - 1) {
            wanted_groups.push_back(static_cast<int>(g));
        }
    }
    for (int g : wanted_groups) {
        if (static_cast<int>(out.size()) >= config_.max_offers) break;
        int target = -1;
        for (int m : members(r, g)) {
            if (slot_state(r, m).owner != r.seat) target = m;
        }
        const int other = slot_state(r, target).owner;
        if (other < 0 || !r.state.players[static_cast<std::size_t>(other)].alive) continue;
        if (std::find(used.begin(), used.end(), other) != used.end()) continue;
        if (!rules::tradable(*r.index, r.state.slots, target)) continue;

        // Something to give: prefer a property completing the counterparty's group,
        // else the one it values most. Never one from a group being assembled.
        int give = -1;
        Money give_value = 0;
        bool give_completes = false;
        for (int s : owned_by(r, r.seat)) {
            const int sg = group_of(r, s);
            if (in_monopoly(r, r.seat, s) || !rules::tradable(*r.index, r.state.slots, s)) continue;
            if (sg >= 0 && std::find(wanted_groups.begin(), wanted_groups.end(), sg) != wanted_groups.end()) continue;
            const bool completes = completes_group(r, other, s);
            const Money v = holding_value(r, other, s);
            if (give < 0 || (completes && !give_completes) || (completes == give_completes && v > give_value)) {
                give = s;
                give_value = v;
                give_completes = completes;
            }
        }
        TradeOffer offer{r.seat, other, {}, 0, {target}, 0};
        // Top up so the counterparty's own valuation comes out ahead.
        Money needed = holding_value(r, other, target) + config_.completion_bonus + 1;
        if (give >= 0) {
            offer.offered.push_back(give);
            needed -= give_value;
        }
        offer.offered_cash = std::max<Money>(needed, 0);
        if (offer.offered.empty() && offer.offered_cash == 0) continue;
        if (cash - offer.offered_cash < config_.cash_reserve) continue;
        if (recently_offered(r.seat, offer, r.turn)) continue;
        used.push_back(other);
        out.push_back(std::move(offer));
    }
    return out;
}

bool H2Agent::accept_offer(const DecisionRequest& r) const {
    const TradeOffer& o = *r.offer;
    std::vector<SlotState> after = r.state.slots;
    for (int s : o.offered) after[static_cast<std::size_t>(s)].owner = r.seat;
    for (int s : o.requested) after[static_cast<std::size_t>(s)].owner = o.proposer;
    int before_count = 0;
    int after_count = 0;
    for (std::size_t g = 0; g < r.index->groups.size(); ++g) {
        const bool had = rules::owns_group(*r.index, r.state.slots, static_cast<int>(g), r.seat);
        const bool has = rules::owns_group(*r.index, after, static_cast<int>(g), r.seat);
        if (had && !has) return false;
        before_count += had;
        after_count += has;
    }
    if (after_count > before_count) return r.me().cash - o.requested_cash + o.offered_cash >= 0;
    // Holds on to its own near-monopolies.
    for (int s : o.requested) {
        const int g = group_of(r, s);
        if (g >= 0 && rules::count_owned(members(r, g), r.state.slots, r.seat) + 1 == static_cast<int>(members(r, g).size())) {
            return false;
        }
    }
    return H1Agent::accept_offer(r);
}

// ---- hybrid ----

HybridAgent::HybridAgent(HeuristicConfig config, BuyPolicy policy)
    : H2Agent(config), policy_(std::move(policy)), reference_hash_(content_hash(default_board())) {}

void HybridAgent::start_game(const GameStart& start) {
    if (start.schema && content_hash(*start.schema) != reference_hash_) detected_ = true;
}

void HybridAgent::observe(const DecisionRequest& r) {
    const BoardSchema& ref = default_board();
    if (r.state.slots.size() != ref.slots.size()) detected_ = true;
    for (const auto& e : r.recent) {
        if (e.kind == EventKind::roll && static_cast<int>(e.dice.size()) != ref.dice.count) detected_ = true;
    }
}

AgentAction HybridAgent::decide(const DecisionRequest& r) {
    observe(r);
    AgentAction a = H2Agent::decide(r);
    a.novelty_detected = detected_;
    return a;
}

bool HybridAgent::want_buy(const DecisionRequest& r) const {
    if (policy_) {
        if (auto choice = policy_(r)) return *choice;
    }
    return H2Agent::want_buy(r);
}

// ---- registry ----

const std::vector<AgentInfo>& agent_catalog() {
    static const std::vector<AgentInfo> catalog = {
        {"simple", "Simple", "Buys whenever it can pay, never trades or builds, goes bankrupt instead of liquidating."},
        {"h1", "Heuristic H1",
         "Buys with a cash reserve, builds evenly on monopolies, sells a property for cash when short, "
         "mortgages and sells houses before bankruptcy."},
        {"h2", "Heuristic H2",
         "H1 plus two-way property swaps aimed at completing color groups, offered to several players at once."},
        {"hybrid", "Hybrid",
         "H2 heuristics with a pluggable buy policy and a board-change detector that raises the novelty signal."},
    };
    return catalog;
}

bool is_builtin_agent(std::string_view id) {
    const auto& c = agent_catalog();
    return std::any_of(c.begin(), c.end(), [&](const AgentInfo& a) { return a.id == id; });
}

AgentPtr make_agent(const std::string& spec, const AgentOptions& options) {
    if (spec == "simple") return std::make_unique<SimpleAgent>();
    if (spec == "h1") return std::make_unique<H1Agent>(options.heuristics);
    if (spec == "h2") return std::make_unique<H2Agent>(options.heuristics);
    if (spec == "hybrid") return std::make_unique<HybridAgent>(options.heuristics);
    if (spec.rfind("exec:", 0) == 0 || spec.rfind("tcp:", 0) == 0) {
        return std::make_unique<RemoteAgent>(Endpoint::parse(spec), options.timeout_ms);
    }
    throw std::invalid_argument("unknown agent '" + spec + "'");
}

}  // namespace novopoly
