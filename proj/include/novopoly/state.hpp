#pragma once

#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "novopoly/board.hpp"
#include "novopoly/rng.hpp"

namespace novopoly {

// Lookup tables over an immutable schema.
struct BoardIndex {
    explicit BoardIndex(const BoardSchema& schema);

    std::vector<std::string> group_names;
    std::vector<std::vector<int>> groups;  // original street indices per color group
    std::vector<int> group_of;             // per slot: group id, -1 if not a street
    std::vector<int> railroads;
    std::vector<int> utilities;
    std::vector<int> properties;           // every original purchasable slot
    int jail = -1;
};

struct HeldCard {
    Deck deck = Deck::chance;
    int card = -1;

    bool operator==(const HeldCard&) const = default;
};

struct PlayerState {
    int position = 0;
    Money cash = 0;
    bool alive = true;
    bool in_jail = false;
    int jail_turns = 0;
    std::vector<HeldCard> jail_cards;  // retained get-out-of-jail-free cards
    int round_trips = 0;

    bool operator==(const PlayerState&) const = default;
};

struct SlotState {
    int owner = -1;  // seat, or -1 for the bank
    int level = 0;   // 0 = unimproved, 1-4 houses, 5 hotel, above that extra tiers
    bool mortgaged = false;

    bool operator==(const SlotState&) const = default;
};

struct GameState {
    std::shared_ptr<const BoardSchema> schema;
    std::vector<PlayerState> players;
    std::vector<SlotState> slots;  // indexed by slot; replicas mirror their original in public views
    std::deque<int> chance_deck;   // card indices, front is drawn next
    std::deque<int> chest_deck;
    int turn = 0;
    Rng rng;

    std::deque<int>& deck(Deck d) { return d == Deck::chance ? chance_deck : chest_deck; }
};

// What any observer may see: no deck order, no rng.
struct PublicPlayer {
    int position = 0;
    Money cash = 0;
    bool alive = true;
    bool in_jail = false;
    int jail_cards = 0;
    int round_trips = 0;

    bool operator==(const PublicPlayer&) const = default;
};

struct PublicState {
    std::vector<PublicPlayer> players;
    std::vector<SlotState> slots;

    bool operator==(const PublicState&) const = default;
};

PublicState public_state(const GameState& state);
// Copies original slot state onto replica slots.
void mirror_replicas(const BoardSchema& schema, std::vector<SlotState>& slots);

json public_state_to_json(const PublicState& s);
PublicState public_state_from_json(const json& j);

}  // namespace novopoly
