#include "novopoly/engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace novopoly {

std::vector<int> roll_dice(Rng& rng, const DiceConfig& dice) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(dice.count));
    for (int d = 0; d < dice.count; ++d) {
        if (dice.fair()) {
            out.push_back(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(dice.faces))));
        } else {
            const auto& w = dice.weights[static_cast<std::size_t>(d)];
            out.push_back(1 + static_cast<int>(rng.weighted(w)));
        }
    }
    return out;
}

bool all_equal(const std::vector<int>& dice) {
    // A single die never counts as doubles.
    return dice.size() >= 2 && std::all_of(dice.begin(), dice.end(), [&](int v) { return v == dice.front(); });
}

namespace rules {

bool owns_group(const BoardIndex& index, std::span<const SlotState> slots, int group, int seat) {
    const auto& members = index.groups[static_cast<std::size_t>(group)];
    return !members.empty() && std::all_of(members.begin(), members.end(), [&](int s) {
        return slots[static_cast<std::size_t>(s)].owner == seat;
    });
}

int monopoly_count(const BoardIndex& index, std::span<const SlotState> slots, int seat) {
    int n = 0;
    for (std::size_t g = 0; g < index.groups.size(); ++g) {
        if (owns_group(index, slots, static_cast<int>(g), seat)) ++n;
    }
    return n;
}

int count_owned(std::span<const int> members, std::span<const SlotState> slots, int seat) {
    return static_cast<int>(std::count_if(members.begin(), members.end(), [&](int s) {
        return slots[static_cast<std::size_t>(s)].owner == seat;
    }));
}

bool group_improved(const BoardIndex& index, std::span<const SlotState> slots, int group) {
    const auto& members = index.groups[static_cast<std::size_t>(group)];
    return std::any_of(members.begin(), members.end(), [&](int s) {
        return slots[static_cast<std::size_t>(s)].level > 0;
    });
}

bool tradable(const BoardIndex& index, std::span<const SlotState> slots, int slot) {
    const int g = index.group_of[static_cast<std::size_t>(slot)];
    return g < 0 || !group_improved(index, slots, g);
}

}  // namespace rules

Engine::Engine(std::shared_ptr<const BoardSchema> schema, std::vector<Agent*> agents, std::uint64_t seed,
               GameLimits limits)
    : schema_(std::move(schema)),
      agents_(std::move(agents)),
      seed_(seed),
      limits_(limits),
      faults_(agents_.size(), 0),
      detected_(agents_.size(), false) {
    if (!schema_) throw std::invalid_argument("engine needs a board schema");
    if (agents_.size() < 2) throw std::invalid_argument("a game needs at least two seats");
    if (std::any_of(agents_.begin(), agents_.end(), [](Agent* a) { return a == nullptr; })) {
        throw std::invalid_argument("every seat needs an agent");
    }
    if (limits_.round_trip_cap < 1) throw std::invalid_argument("round-trip cap must be at least 1");
    index_ = std::make_shared<BoardIndex>(*schema_);
    state_.schema = schema_;
    state_.rng = Rng(seed);
    state_.players.assign(agents_.size(), PlayerState{});
    for (auto& p : state_.players) p.cash = schema_->starting_cash;
    state_.slots.assign(schema_->slots.size(), SlotState{});
    for (Deck d : {Deck::chance, Deck::community_chest}) {
        std::vector<int> cards(schema_->deck(d).size());
        std::iota(cards.begin(), cards.end(), 0);
        state_.rng.shuffle(cards);
        state_.deck(d).assign(cards.begin(), cards.end());
    }
    for (std::size_t s = 0; s < agents_.size(); ++s) {
        agents_[s]->start_game(GameStart{static_cast<int>(s), seed, schema_, limits_.schema_visible});
    }
}

GameEvent Engine::event(int player, EventKind kind) const {
    GameEvent e;
    e.turn = state_.turn;
    e.player = player;
    e.kind = kind;
    return e;
}

void Engine::emit(GameEvent e) { events_.push_back(std::move(e)); }

int Engine::alive_count() const {
    return static_cast<int>(std::count_if(state_.players.begin(), state_.players.end(),
                                          [](const PlayerState& p) { return p.alive; }));
}

DecisionRequest Engine::request(int seat, DecisionPoint point, LegalMenu menu) const {
    DecisionRequest r;
    r.point = point;
    r.seat = seat;
    r.turn = state_.turn;
    r.schema = schema_;
    r.index = index_;
    r.state = public_state(state_);
    const std::size_t n = events_.size();
    const std::size_t keep = std::min(n, static_cast<std::size_t>(std::max(limits_.recent_events, 0)));
    r.recent.assign(events_.end() - static_cast<std::ptrdiff_t>(keep), events_.end());
    r.menu = std::move(menu);
    return r;
}

void Engine::fault(int seat, DecisionPoint point, const std::string& reason, ActionKind substituted) {
    ++faults_[static_cast<std::size_t>(seat)];
    GameEvent e = event(seat, EventKind::invalid_action_substituted);
    e.detail = std::string(to_string(point)) + ": " + reason + "; substituted " + std::string(to_string(substituted));
    emit(std::move(e));
}

AgentAction Engine::ask(int seat, DecisionRequest req) {
    Agent* agent = agents_[static_cast<std::size_t>(seat)];
    const ActionKind fallback = conservative_action(req.point);
    AgentAction act;
    try {
        act = agent->decide(req);
    } catch (const std::exception& e) {
        fault(seat, req.point, e.what(), fallback);
        return AgentAction::of(fallback);
    } catch (...) {
        fault(seat, req.point, "agent raised a non-standard exception", fallback);
        return AgentAction::of(fallback);
    }
    if ((act.novelty_detected || agent->novelty_signaled()) && !detected_[static_cast<std::size_t>(seat)]) {
        detected_[static_cast<std::size_t>(seat)] = true;
        emit(event(seat, EventKind::novelty_detected));
    }
    if (!req.menu.permits(act)) {
        fault(seat, req.point, "action '" + std::string(to_string(act.kind)) + "' not in legal menu", fallback);
        return AgentAction::of(fallback);
    }
    return act;
}

void Engine::credit(int player, Party payer, Money amount, EventKind kind, int slot, std::string detail) {
    if (!payer.is_bank()) state_.players[static_cast<std::size_t>(payer.seat)].cash -= amount;
    state_.players[static_cast<std::size_t>(player)].cash += amount;
    GameEvent e = event(player, kind);
    e.payer = payer;
    e.payee = Party::player(player);
    e.amount = amount;
    e.slot = slot;
    e.detail = std::move(detail);
    emit(std::move(e));
}

bool Engine::pay(int payer, Party payee, Money amount, EventKind kind, int slot, std::string detail) {
    amount = std::max<Money>(amount, 0);
    auto& p = state_.players[static_cast<std::size_t>(payer)];
    if (p.cash < amount && !cash_shortfall(payer, amount, payee)) return false;
    p.cash -= amount;
    if (!payee.is_bank()) state_.players[static_cast<std::size_t>(payee.seat)].cash += amount;
    GameEvent e = event(payer, kind);
    e.payer = Party::player(payer);
    e.payee = payee;
    e.amount = amount;
    e.slot = slot;
    e.detail = std::move(detail);
    emit(std::move(e));
    return true;
}

std::vector<int> Engine::roll_dice() { return novopoly::roll_dice(state_.rng, schema_->dice); }

void Engine::advance(int player, int steps) { move_by(player, steps, "roll"); }

void Engine::move_by(int player, int steps, const char* reason) {
    auto& p = state_.players[static_cast<std::size_t>(player)];
    const int n = static_cast<int>(schema_->slots.size());
    const int from = p.position;
    int wraps = 0;
    if (steps >= 0) {
        const int total = from + steps;
        p.position = total % n;
        wraps = total / n;
    } else {
        p.position = ((from + steps) % n + n) % n;
    }
    GameEvent e = event(player, EventKind::move);
    e.from = from;
    e.to = p.position;
    e.detail = reason;
    emit(std::move(e));
    for (int w = 0; w < wraps; ++w) {
        ++p.round_trips;
        credit(player, Party::bank(), schema_->go_increment, EventKind::pass_go);
    }
}

void Engine::move_to(int player, int target, const char* reason) {
    const int n = static_cast<int>(schema_->slots.size());
    const int steps = ((target - state_.players[static_cast<std::size_t>(player)].position) % n + n) % n;
    if (steps > 0) move_by(player, steps, reason);
}

void Engine::send_to_jail(int player) {
    if (index_->jail < 0) return;
    auto& p = state_.players[static_cast<std::size_t>(player)];
    GameEvent e = event(player, EventKind::jail_enter);
    e.from = p.position;
    e.to = index_->jail;
    p.position = index_->jail;
    p.in_jail = true;
    p.jail_turns = 0;
    emit(std::move(e));
}

std::optional<Money> Engine::compute_rent(int slot, int dice_sum, int occupant) const {
    const int prop = schema_->property_index(slot);
    const Slot& s = schema_->slots[static_cast<std::size_t>(prop)];
    if (!s.purchasable() || s.rent.empty()) return std::nullopt;
    const SlotState& st = state_.slots[static_cast<std::size_t>(prop)];
    if (st.owner < 0 || st.mortgaged || !state_.players[static_cast<std::size_t>(st.owner)].alive) {
        return std::nullopt;
    }
    if (st.owner == occupant) return Money{0};
    const auto table_at = [&](int i) {
        return s.rent[static_cast<std::size_t>(std::clamp(i, 0, static_cast<int>(s.rent.size()) - 1))];
    };
    switch (s.kind) {
        case SlotKind::street: {
            if (st.level > 0) return table_at(st.level);
            const int g = index_->group_of[static_cast<std::size_t>(prop)];
            const bool monopoly = g >= 0 && rules::owns_group(*index_, state_.slots, g, st.owner);
            return monopoly ? 2 * s.rent.front() : s.rent.front();
        }
        case SlotKind::railroad:
            return table_at(rules::count_owned(index_->railroads, state_.slots, st.owner) - 1);
        case SlotKind::utility:
            return static_cast<Money>(dice_sum) * table_at(rules::count_owned(index_->utilities, state_.slots, st.owner) - 1);
        default:
            return std::nullopt;
    }
}

int Engine::houses_in_use() const {
    int n = 0;
    for (const auto& s : state_.slots) {
        if (s.level > 0 && s.level < kHotelLevel) n += s.level;
    }
    return n;
}

int Engine::hotels_in_use() const {
    return static_cast<int>(std::count_if(state_.slots.begin(), state_.slots.end(),
                                          [](const SlotState& s) { return s.level >= kHotelLevel; }));
}

std::vector<int> Engine::improvable(int player) const {
    std::vector<int> out;
    const Money cash = state_.players[static_cast<std::size_t>(player)].cash;
    const int houses = houses_in_use();
    const int hotels = hotels_in_use();
    for (std::size_t g = 0; g < index_->groups.size(); ++g) {
        if (!rules::owns_group(*index_, state_.slots, static_cast<int>(g), player)) continue;
        const auto& members = index_->groups[g];
        if (std::any_of(members.begin(), members.end(),
                        [&](int s) { return state_.slots[static_cast<std::size_t>(s)].mortgaged; })) {
            continue;
        }
        int min_level = INT32_MAX;
        for (int s : members) min_level = std::min(min_level, state_.slots[static_cast<std::size_t>(s)].level);
        for (int s : members) {
            const Slot& slot = schema_->slots[static_cast<std::size_t>(s)];
            const int level = state_.slots[static_cast<std::size_t>(s)].level;
            if (level != min_level || level >= slot.max_level()) continue;
            if (cash < slot.build_cost(level + 1)) continue;
            if (level + 1 < kHotelLevel && schema_->house_limit > 0 && houses >= schema_->house_limit) continue;
            if (level + 1 == kHotelLevel && schema_->hotel_limit > 0 && hotels >= schema_->hotel_limit) continue;
            out.push_back(s);
        }
    }
    return out;
}

std::vector<int> Engine::sellable(int player) const {
    std::vector<int> out;
    for (std::size_t g = 0; g < index_->groups.size(); ++g) {
        const auto& members = index_->groups[g];
        int max_level = 0;
        for (int s : members) max_level = std::max(max_level, state_.slots[static_cast<std::size_t>(s)].level);
        if (max_level == 0) continue;
        for (int s : members) {
            const auto& st = state_.slots[static_cast<std::size_t>(s)];
            if (st.owner == player && st.level == max_level) out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> Engine::mortgageable(int player) const {
    std::vector<int> out;
    for (int s : index_->properties) {
        const auto& st = state_.slots[static_cast<std::size_t>(s)];
        if (st.owner != player || st.mortgaged) continue;
        if (!rules::tradable(*index_, state_.slots, s)) continue;
        out.push_back(s);
    }
    return out;
}

std::vector<int> Engine::unmortgageable(int player) const {
    std::vector<int> out;
    const Money cash = state_.players[static_cast<std::size_t>(player)].cash;
    for (int s : index_->properties) {
        const auto& st = state_.slots[static_cast<std::size_t>(s)];
        if (st.owner == player && st.mortgaged &&
            cash >= schema_->unmortgage_cost(schema_->slots[static_cast<std::size_t>(s)])) {
            out.push_back(s);
        }
    }
    return out;
}

void Engine::improve(int player, int slot) {
    auto& st = state_.slots[static_cast<std::size_t>(slot)];
    const Money cost = schema_->slots[static_cast<std::size_t>(slot)].build_cost(st.level + 1);
    ++st.level;
    auto& p = state_.players[static_cast<std::size_t>(player)];
    p.cash -= cost;
    GameEvent e = event(player, EventKind::improve);
    e.payer = Party::player(player);
    e.payee = Party::bank();
    e.amount = cost;
    e.slot = slot;
    e.level = st.level;
    emit(std::move(e));
}

void Engine::sell_improvement(int player, int slot) {
    auto& st = state_.slots[static_cast<std::size_t>(slot)];
    const Money value = schema_->sell_value(schema_->slots[static_cast<std::size_t>(slot)], st.level);
    --st.level;
    state_.players[static_cast<std::size_t>(player)].cash += value;
    GameEvent e = event(player, EventKind::sell_improvement);
    e.payer = Party::bank();
    e.payee = Party::player(player);
    e.amount = value;
    e.slot = slot;
    e.level = st.level;
    emit(std::move(e));
}

void Engine::mortgage(int player, int slot) {
    state_.slots[static_cast<std::size_t>(slot)].mortgaged = true;
    const Money value = schema_->mortgage_value(schema_->slots[static_cast<std::size_t>(slot)]);
    credit(player, Party::bank(), value, EventKind::mortgage, slot);
}

void Engine::unmortgage(int player, int slot) {
    state_.slots[static_cast<std::size_t>(slot)].mortgaged = false;
    const Money cost = schema_->unmortgage_cost(schema_->slots[static_cast<std::size_t>(slot)]);
    pay(player, Party::bank(), cost, EventKind::unmortgage, slot);
}

void Engine::pre_roll_phase(int player) {
    for (int i = 0; i < limits_.max_pre_roll_actions; ++i) {
        LegalMenu menu;
        if (auto v = improvable(player); !v.empty()) menu.entries.push_back({ActionKind::improve, std::move(v)});
        if (auto v = sellable(player); !v.empty()) menu.entries.push_back({ActionKind::sell_improvement, std::move(v)});
        if (auto v = mortgageable(player); !v.empty()) menu.entries.push_back({ActionKind::mortgage, std::move(v)});
        if (auto v = unmortgageable(player); !v.empty()) menu.entries.push_back({ActionKind::unmortgage, std::move(v)});
        if (menu.entries.empty()) return;
        menu.entries.push_back({ActionKind::pass, {}});
        const AgentAction act = ask(player, request(player, DecisionPoint::pre_roll_actions, std::move(menu)));
        switch (act.kind) {
            case ActionKind::improve: improve(player, act.slot); break;
            case ActionKind::sell_improvement: sell_improvement(player, act.slot); break;
            case ActionKind::mortgage: mortgage(player, act.slot); break;
            case ActionKind::unmortgage: unmortgage(player, act.slot); break;
            default: return;
        }
    }
}

void Engine::trade_phase(int player) {
    if (alive_count() < 2) return;
    LegalMenu menu{{{ActionKind::propose_trades, {}}, {ActionKind::pass, {}}}, limits_.max_trade_offers};
    const AgentAction act = ask(player, request(player, DecisionPoint::propose_trades, std::move(menu)));
    if (act.kind != ActionKind::propose_trades) return;
    for (const auto& offer : act.offers) {
        if (!state_.players[static_cast<std::size_t>(player)].alive) return;
        process_offer(player, offer);
    }
}

std::string Engine::offer_problem(const TradeOffer& o) const {
    const int seats = static_cast<int>(state_.players.size());
    if (o.responder < 0 || o.responder >= seats || o.responder == o.proposer) return "invalid trade counterparty";
    if (!state_.players[static_cast<std::size_t>(o.responder)].alive) return "trade counterparty is out of the game";
    if (o.offered_cash < 0 || o.requested_cash < 0) return "negative trade cash";
    if (o.offered.empty() && o.offered_cash == 0) return "trade offers nothing";
    if (o.requested.empty() && o.requested_cash == 0) return "trade requests nothing";
    if (state_.players[static_cast<std::size_t>(o.proposer)].cash < o.offered_cash) return "proposer cannot cover offered cash";
    if (state_.players[static_cast<std::size_t>(o.responder)].cash < o.requested_cash) {
        return "responder cannot cover requested cash";
    }
    std::vector<int> seen;
    const auto check = [&](const std::vector<int>& props, int owner) -> std::string {
        for (int s : props) {
            if (s < 0 || static_cast<std::size_t>(s) >= schema_->slots.size()) return "trade names an unknown slot";
            const Slot& slot = schema_->slots[static_cast<std::size_t>(s)];
            if (!slot.purchasable() || slot.replica()) return "trade names a non-property slot";
            if (state_.slots[static_cast<std::size_t>(s)].owner != owner) return "trade names a property the party does not own";
            if (!rules::tradable(*index_, state_.slots, s)) return "trade names a property in an improved color group";
            if (std::find(seen.begin(), seen.end(), s) != seen.end()) return "trade lists a property twice";
            seen.push_back(s);
        }
        return {};
    };
    if (auto p = check(o.offered, o.proposer); !p.empty()) return p;
    return check(o.requested, o.responder);
}

void Engine::process_offer(int player, TradeOffer offer) {
    if (offer.proposer != player) {
        fault(player, DecisionPoint::propose_trades, "trade proposer must be the acting seat", ActionKind::pass);
        return;
    }
    if (auto problem = offer_problem(offer); !problem.empty()) {
        fault(player, DecisionPoint::propose_trades, problem, ActionKind::pass);
        return;
    }
    GameEvent proposed = event(player, EventKind::trade_proposed);
    proposed.offer = offer;
    emit(std::move(proposed));

    LegalMenu menu{{{ActionKind::accept, {}}, {ActionKind::reject, {}}}, 0};
    DecisionRequest req = request(offer.responder, DecisionPoint::respond_to_trade, std::move(menu));
    req.offer = offer;
    const AgentAction answer = ask(offer.responder, std::move(req));
    if (answer.kind == ActionKind::accept && offer_problem(offer).empty()) {
        execute_trade(offer);
    } else {
        GameEvent rejected = event(player, EventKind::trade_rejected);
        rejected.offer = offer;
        emit(std::move(rejected));
    }
}

void Engine::execute_trade(const TradeOffer& o) {
    for (int s : o.offered) state_.slots[static_cast<std::size_t>(s)].owner = o.responder;
    for (int s : o.requested) state_.slots[static_cast<std::size_t>(s)].owner = o.proposer;
    const Money net = o.offered_cash - o.requested_cash;
    const int payer = net >= 0 ? o.proposer : o.responder;
    const int payee = net >= 0 ? o.responder : o.proposer;
    const Money amount = net >= 0 ? net : -net;
    state_.players[static_cast<std::size_t>(payer)].cash -= amount;
    state_.players[static_cast<std::size_t>(payee)].cash += amount;
    GameEvent e = event(o.proposer, EventKind::trade_accepted);
    e.offer = o;
    e.payer = Party::player(payer);
    e.payee = Party::player(payee);
    e.amount = amount;
    emit(std::move(e));
}

void Engine::bankrupt(int debtor, Party creditor) {
    auto& d = state_.players[static_cast<std::size_t>(debtor)];
    GameEvent e = event(debtor, EventKind::bankruptcy);
    for (int s : index_->properties) {
        auto& st = state_.slots[static_cast<std::size_t>(s)];
        if (st.owner != debtor) continue;
        e.properties.push_back(s);
        st.level = 0;
        if (creditor.is_bank()) {
            st.owner = -1;
            st.mortgaged = false;
        } else {
            st.owner = creditor.seat;
        }
    }
    e.payer = Party::player(debtor);
    e.payee = creditor;
    e.amount = d.cash;
    if (!creditor.is_bank()) state_.players[static_cast<std::size_t>(creditor.seat)].cash += d.cash;
    d.cash = 0;
    d.alive = false;
    d.in_jail = false;
    d.jail_turns = 0;
    for (const auto& held : d.jail_cards) state_.deck(held.deck).push_back(held.card);
    d.jail_cards.clear();
    bankruptcy_order_.push_back(debtor);
    emit(std::move(e));
}

bool Engine::cash_shortfall(int debtor, Money amount, Party creditor) {
    int fruitless = 0;
    auto& d = state_.players[static_cast<std::size_t>(debtor)];
    while (d.alive && d.cash < amount) {
        LegalMenu menu;
        menu.max_offers = limits_.max_trade_offers;
        auto sell = sellable(debtor);
        auto mort = mortgageable(debtor);
        const bool can_trade = alive_count() >= 2 &&
            std::any_of(index_->properties.begin(), index_->properties.end(), [&](int s) {
                return state_.slots[static_cast<std::size_t>(s)].owner == debtor &&
                       rules::tradable(*index_, state_.slots, s);
            });
        if (sell.empty() && mort.empty() && !can_trade) {
            bankrupt(debtor, creditor);
            return false;
        }
        if (!sell.empty()) menu.entries.push_back({ActionKind::sell_improvement, std::move(sell)});
        if (!mort.empty()) menu.entries.push_back({ActionKind::mortgage, std::move(mort)});
        if (can_trade) menu.entries.push_back({ActionKind::propose_trades, {}});
        menu.entries.push_back({ActionKind::declare_bankruptcy, {}});
        menu.entries.push_back({ActionKind::pass, {}});

        DecisionRequest req = request(debtor, DecisionPoint::raise_cash, std::move(menu));
        req.amount_due = amount;
        req.creditor = creditor;
        const Money before = d.cash;
        const AgentAction act = ask(debtor, std::move(req));
        switch (act.kind) {
            case ActionKind::sell_improvement: sell_improvement(debtor, act.slot); break;
            case ActionKind::mortgage: mortgage(debtor, act.slot); break;
            case ActionKind::propose_trades:
                for (const auto& offer : act.offers) process_offer(debtor, offer);
                break;
            case ActionKind::declare_bankruptcy:
                bankrupt(debtor, creditor);
                return false;
            default:
                break;
        }
        if (d.cash > before) {
            fruitless = 0;
        } else if (++fruitless >= 2) {
            bankrupt(debtor, creditor);
            return false;
        }
    }
    return d.alive;
}

void Engine::offer_purchase(int player, int slot) {
    const Money price = schema_->slots[static_cast<std::size_t>(slot)].price;
    if (state_.players[static_cast<std::size_t>(player)].cash < price) {
        GameEvent e = event(player, EventKind::decline);
        e.slot = slot;
        e.detail = "unaffordable";
        emit(std::move(e));
        return;
    }
    LegalMenu menu{{{ActionKind::buy, {}}, {ActionKind::decline, {}}}, 0};
    DecisionRequest req = request(player, DecisionPoint::buy_or_decline, std::move(menu));
    req.slot = slot;
    if (ask(player, std::move(req)).kind == ActionKind::buy) {
        if (pay(player, Party::bank(), price, EventKind::buy, slot)) {
            state_.slots[static_cast<std::size_t>(slot)].owner = player;
        }
    } else {
        GameEvent e = event(player, EventKind::decline);
        e.slot = slot;
        emit(std::move(e));
    }
}

void Engine::resolve_landing(int player, int dice_sum) {
    const int pos = state_.players[static_cast<std::size_t>(player)].position;
    const Slot& slot = schema_->slots[static_cast<std::size_t>(pos)];
    switch (slot.kind) {
        case SlotKind::street:
        case SlotKind::railroad:
        case SlotKind::utility: {
            const int prop = schema_->property_index(pos);
            const int owner = state_.slots[static_cast<std::size_t>(prop)].owner;
            if (owner < 0) {
                offer_purchase(player, prop);
            } else if (owner != player) {
                if (auto rent = compute_rent(pos, dice_sum, player); rent && *rent > 0) {
                    pay(player, Party::player(owner), *rent, EventKind::rent_paid, prop);
                }
            }
            break;
        }
        case SlotKind::tax:
            pay(player, Party::bank(), slot.tax, EventKind::tax_paid, pos);
            break;
        case SlotKind::chance:
            apply_card(player, Deck::chance, dice_sum);
            break;
        case SlotKind::community_chest:
            apply_card(player, Deck::community_chest, dice_sum);
            break;
        case SlotKind::go_to_jail:
            send_to_jail(player);
            break;
        default:
            break;
    }
}

void Engine::apply_card(int player, Deck deck, int dice_sum) {
    auto& cards = state_.deck(deck);
    if (cards.empty()) return;
    const int card = cards.front();
    cards.pop_front();
    const CardSpec& spec = schema_->deck(deck)[static_cast<std::size_t>(card)];
    if (!spec.retained) cards.push_back(card);
    GameEvent e = event(player, EventKind::card_drawn);
    e.detail = std::string(to_string(deck)) + ": " + spec.text;
    emit(std::move(e));
    apply_card_effect(player, deck, card, dice_sum);
}

void Engine::apply_card_effect(int player, Deck deck, int card, int dice_sum) {
    const CardSpec& c = schema_->deck(deck)[static_cast<std::size_t>(card)];
    auto& p = state_.players[static_cast<std::size_t>(player)];
    const int seats = static_cast<int>(state_.players.size());
    const int n = static_cast<int>(schema_->slots.size());
    switch (c.effect) {
        case CardEffect::advance_to:
            if (auto target = schema_->index_of(c.target)) {
                move_to(player, *target, "card");
                resolve_landing(player, dice_sum);
            }
            break;
        case CardEffect::advance_nearest: {
            const auto kind = slot_kind_from_string(c.target);
            for (int k = 1; kind && k < n; ++k) {
                if (schema_->slots[static_cast<std::size_t>((p.position + k) % n)].kind == *kind) {
                    move_by(player, k, "card");
                    resolve_landing(player, dice_sum);
                    break;
                }
            }
            break;
        }
        case CardEffect::collect:
            credit(player, Party::bank(), c.amount, EventKind::card_effect, -1, c.text);
            break;
        case CardEffect::pay:
            pay(player, Party::bank(), c.amount, EventKind::card_effect, -1, c.text);
            break;
        case CardEffect::pay_each_player:
            for (int o = 0; o < seats; ++o) {
                if (o == player || !state_.players[static_cast<std::size_t>(o)].alive) continue;
                if (!pay(player, Party::player(o), c.amount, EventKind::card_effect, -1, c.text)) break;
            }
            break;
        case CardEffect::collect_from_each_player:
            for (int o = 0; o < seats; ++o) {
                if (o == player || !state_.players[static_cast<std::size_t>(o)].alive) continue;
                pay(o, Party::player(player), c.amount, EventKind::card_effect, -1, c.text);
            }
            break;
        case CardEffect::repairs: {
            Money total = 0;
            for (int s : index_->properties) {
                const auto& st = state_.slots[static_cast<std::size_t>(s)];
                if (st.owner != player || st.level == 0) continue;
                total += st.level >= kHotelLevel ? c.per_hotel : c.amount * st.level;
            }
            pay(player, Party::bank(), total, EventKind::card_effect, -1, c.text);
            break;
        }
        case CardEffect::go_to_jail:
            send_to_jail(player);
            break;
        case CardEffect::get_out_of_jail_free: {
            p.jail_cards.push_back(HeldCard{deck, card});
            GameEvent e = event(player, EventKind::card_effect);
            e.detail = "retained";
            emit(std::move(e));
            break;
        }
        case CardEffect::move_back:
            move_by(player, -c.steps, "card");
            resolve_landing(player, dice_sum);
            break;
    }
}

bool Engine::jail_phase(int player) {
    auto& p = state_.players[static_cast<std::size_t>(player)];
    const Money fine = schema_->jail_fine;
    LegalMenu menu;
    menu.entries.push_back({ActionKind::roll_for_doubles, {}});
    if (!p.jail_cards.empty()) menu.entries.push_back({ActionKind::use_jail_card, {}});
    if (p.cash >= fine) menu.entries.push_back({ActionKind::pay_jail_fine, {}});
    const AgentAction act = ask(player, request(player, DecisionPoint::jail_choice, std::move(menu)));

    if (act.kind == ActionKind::use_jail_card) {
        const HeldCard held = p.jail_cards.back();
        p.jail_cards.pop_back();
        state_.deck(held.deck).push_back(held.card);
        p.in_jail = false;
        p.jail_turns = 0;
        GameEvent e = event(player, EventKind::jail_exit);
        e.detail = "card";
        emit(std::move(e));
        return false;
    }
    if (act.kind == ActionKind::pay_jail_fine) {
        if (!pay(player, Party::bank(), fine, EventKind::jail_exit, -1, "fine")) return true;
        p.in_jail = false;
        p.jail_turns = 0;
        return false;
    }

    const std::vector<int> dice = roll_dice();
    GameEvent r = event(player, EventKind::roll);
    r.dice = dice;
    emit(std::move(r));
    const int sum = std::accumulate(dice.begin(), dice.end(), 0);
    if (all_equal(dice)) {
        p.in_jail = false;
        p.jail_turns = 0;
        GameEvent e = event(player, EventKind::jail_exit);
        e.detail = "doubles";
        emit(std::move(e));
    } else if (++p.jail_turns >= 3) {
        if (!pay(player, Party::bank(), fine, EventKind::jail_exit, -1, "forced-fine")) return true;
        p.in_jail = false;
        p.jail_turns = 0;
    } else {
        return true;
    }
    move_by(player, sum, "roll");
    resolve_landing(player, sum);
    return true;
}

void Engine::take_turn(int player) {
    if (!state_.players[static_cast<std::size_t>(player)].alive || result_) return;
    const auto alive = [&] { return state_.players[static_cast<std::size_t>(player)].alive; };
    current_ = player;
    ++state_.turn;
    pre_roll_phase(player);
    if (!alive()) return;
    trade_phase(player);
    if (!alive()) return;
    if (state_.players[static_cast<std::size_t>(player)].in_jail && jail_phase(player)) return;

    int doubles = 0;
    while (true) {
        const std::vector<int> dice = roll_dice();
        GameEvent r = event(player, EventKind::roll);
        r.dice = dice;
        emit(std::move(r));
        const bool again = all_equal(dice);
        if (again && ++doubles >= 3) {
            send_to_jail(player);
            return;
        }
        const int sum = std::accumulate(dice.begin(), dice.end(), 0);
        move_by(player, sum, "roll");
        resolve_landing(player, sum);
        if (!alive() || state_.players[static_cast<std::size_t>(player)].in_jail || !again) return;
    }
}

bool Engine::check_end() {
    if (result_) return true;
    GameResult r;
    if (alive_count() <= 1) {
        r.reason = Termination::last_player_standing;
        for (std::size_t s = 0; s < state_.players.size(); ++s) {
            if (state_.players[s].alive) r.winner = static_cast<int>(s);
        }
    } else {
        const bool capped = std::all_of(state_.players.begin(), state_.players.end(), [&](const PlayerState& p) {
            return !p.alive || p.round_trips >= limits_.round_trip_cap;
        });
        if (!capped) return false;
        r.reason = Termination::round_trip_cap;
    }
    r.turns = state_.turn;
    for (const auto& p : state_.players) r.round_trips.push_back(p.round_trips);
    r.bankruptcy_order = bankruptcy_order_;
    r.novelty_detected = detected_;
    r.faults = faults_;
    GameEvent e = event(r.winner.value_or(-1), EventKind::game_end);
    e.detail = std::string(to_string(r.reason));
    emit(std::move(e));
    result_ = std::move(r);
    return true;
}

GameResult Engine::run() {
    if (result_) return *result_;
    while (!check_end()) {
        for (std::size_t s = 0; s < state_.players.size(); ++s) {
            take_turn(static_cast<int>(s));
            if (check_end()) break;
        }
    }
    for (std::size_t s = 0; s < agents_.size(); ++s) agents_[s]->end_game(static_cast<int>(s), *result_);
    return *result_;
}

GameLog Engine::log() const {
    GameLog out;
    out.seed = seed_;
    for (Agent* a : agents_) out.seats.push_back(a->id());
    out.board = *schema_;
    out.events = events_;
    out.result = result_;
    out.truncated = !result_.has_value();
    return out;
}

GameOutcome run_game(std::shared_ptr<const BoardSchema> schema, std::vector<Agent*> agents, std::uint64_t seed,
                     GameLimits limits) {
    if (agents.size() != static_cast<std::size_t>(kSeats)) {
        throw std::invalid_argument("a game needs exactly " + std::to_string(kSeats) + " agents");
    }
    Engine engine(std::move(schema), std::move(agents), seed, limits);
    GameResult result = engine.run();
    return GameOutcome{std::move(result), engine.log(), public_state(engine.state())};
}

}  // namespace novopoly
