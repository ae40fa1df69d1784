#include "novopoly/state.hpp"

#include <algorithm>

namespace novopoly {

BoardIndex::BoardIndex(const BoardSchema& schema)
    : group_of(schema.slots.size(), -1) {
    for (const auto& [color, members] : schema.color_groups) {
        std::vector<int> idx;
        for (const auto& m : members) {
            if (auto i = schema.index_of(m)) idx.push_back(*i);
        }
        std::sort(idx.begin(), idx.end());
        const int g = static_cast<int>(groups.size());
        for (int i : idx) group_of[static_cast<std::size_t>(i)] = g;
        group_names.push_back(color);
        groups.push_back(std::move(idx));
    }
    for (std::size_t i = 0; i < schema.slots.size(); ++i) {
        const auto& s = schema.slots[i];
        if (s.replica()) continue;
        const int si = static_cast<int>(i);
        if (s.kind == SlotKind::railroad) railroads.push_back(si);
        if (s.kind == SlotKind::utility) utilities.push_back(si);
        if (s.purchasable()) properties.push_back(si);
        if (s.kind == SlotKind::jail && jail < 0) jail = si;
    }
}

void mirror_replicas(const BoardSchema& schema, std::vector<SlotState>& slots) {
    for (std::size_t i = 0; i < schema.slots.size() && i < slots.size(); ++i) {
        if (!schema.slots[i].replica()) continue;
        const int orig = schema.property_index(static_cast<int>(i));
        slots[i] = slots[static_cast<std::size_t>(orig)];
    }
}

PublicState public_state(const GameState& state) {
    PublicState out;
    out.players.reserve(state.players.size());
    for (const auto& p : state.players) {
        out.players.push_back(PublicPlayer{p.position, p.cash, p.alive, p.in_jail,
                                           static_cast<int>(p.jail_cards.size()), p.round_trips});
    }
    out.slots = state.slots;
    if (state.schema) mirror_replicas(*state.schema, out.slots);
    return out;
}

json public_state_to_json(const PublicState& s) {
    json players = json::array();
    for (const auto& p : s.players) {
        players.push_back(json{{"position", p.position},
                               {"cash", p.cash},
                               {"alive", p.alive},
                               {"in_jail", p.in_jail},
                               {"jail_cards", p.jail_cards},
                               {"round_trips", p.round_trips}});
    }
    json slots = json::array();
    for (const auto& sl : s.slots) {
        slots.push_back(json{{"owner", sl.owner}, {"level", sl.level}, {"mortgaged", sl.mortgaged}});
    }
    return json{{"players", std::move(players)}, {"slots", std::move(slots)}};
}

PublicState public_state_from_json(const json& j) {
    PublicState s;
    for (const auto& p : j.at("players")) {
        s.players.push_back(PublicPlayer{p.at("position").get<int>(), p.at("cash").get<Money>(),
                                         p.at("alive").get<bool>(), p.at("in_jail").get<bool>(),
                                         p.at("jail_cards").get<int>(), p.at("round_trips").get<int>()});
    }
    for (const auto& sl : j.at("slots")) {
        s.slots.push_back(SlotState{sl.at("owner").get<int>(), sl.at("level").get<int>(),
                                    sl.at("mortgaged").get<bool>()});
    }
    return s;
}

}  // namespace novopoly
