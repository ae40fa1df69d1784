#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace novopoly {

using Money = std::int64_t;
using json = nlohmann::json;

// Improvement level of a hotel. Levels above it exist only on boards that
// carry extra improvement tiers.
inline constexpr int kHotelLevel = 5;

enum class SlotKind {
    street,
    railroad,
    utility,
    tax,
    chance,
    community_chest,
    go,
    jail,
    free_parking,
    go_to_jail,
};

std::string_view to_string(SlotKind kind);
std::optional<SlotKind> slot_kind_from_string(std::string_view name);

struct Slot {
    std::string name;
    SlotKind kind = SlotKind::free_parking;
    std::string color;              // streets only
    Money price = 0;                // purchasables only
    // street: base, 1-4 houses, hotel, then any extra tiers
    // railroad: rent by number owned; utility: dice multiplier by number owned
    std::vector<Money> rent;
    Money house_cost = 0;
    std::vector<Money> tier_costs;  // build cost of each tier above the hotel
    Money tax = 0;
    std::string extends;            // non-empty on a replica slot: name of the original

    bool purchasable() const {
        return kind == SlotKind::street || kind == SlotKind::railroad || kind == SlotKind::utility;
    }
    bool replica() const { return !extends.empty(); }
    int max_level() const { return static_cast<int>(rent.size()) - 1; }
    // Cost of building the given level (1-based).
    Money build_cost(int level) const;

    bool operator==(const Slot&) const = default;
};

enum class Deck { chance, community_chest };
std::string_view to_string(Deck deck);

enum class CardEffect {
    advance_to,
    advance_nearest,
    collect,
    pay,
    pay_each_player,
    collect_from_each_player,
    repairs,
    go_to_jail,
    get_out_of_jail_free,
    move_back,
};

std::string_view to_string(CardEffect effect);
std::optional<CardEffect> card_effect_from_string(std::string_view name);

struct CardSpec {
    std::string text;
    CardEffect effect = CardEffect::collect;
    std::string target;   // advance_to: slot name, advance_nearest: slot kind
    Money amount = 0;     // money effects; per-house charge for repairs
    Money per_hotel = 0;  // repairs only
    int steps = 0;        // move_back only
    bool retained = false;

    bool operator==(const CardSpec&) const = default;
};

struct DiceConfig {
    int count = 2;
    int faces = 6;
    // One weight vector per die. Empty means every die is fair.
    std::vector<std::vector<double>> weights;

    bool fair() const { return weights.empty(); }
    // Probability of each face (index 0 = face 1) for one die.
    std::vector<double> die_weights(int die) const;
    // Drops the weight table when every die is uniform, so fair dice have one representation.
    void normalize();

    bool operator==(const DiceConfig&) const = default;
};

struct BoardSchema {
    std::string name;
    std::vector<Slot> slots;
    std::map<std::string, std::vector<std::string>> color_groups;
    DiceConfig dice;
    std::vector<CardSpec> chance;
    std::vector<CardSpec> community_chest;
    Money go_increment = 200;
    Money starting_cash = 1500;
    Money jail_fine = 50;
    double mortgage_ratio = 0.5;
    double unmortgage_surcharge = 0.1;
    double improvement_sell_ratio = 0.5;
    int house_limit = 0;  // 0 = unlimited
    int hotel_limit = 0;  // 0 = unlimited
    int max_slots = 120;

    const std::vector<CardSpec>& deck(Deck d) const {
        return d == Deck::chance ? chance : community_chest;
    }
    std::optional<int> index_of(std::string_view slot_name) const;
    // Index of the slot that carries ownership for slot i (itself unless a replica).
    int property_index(int i) const;
    std::optional<int> jail_index() const;

    Money mortgage_value(const Slot& slot) const;
    Money unmortgage_cost(const Slot& slot) const;
    Money sell_value(const Slot& slot, int level) const;

    bool operator==(const BoardSchema&) const = default;
};

// Thrown by load_schema. `location` is a byte offset or JSON pointer when known.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string message, std::string location, std::vector<std::string> violations = {});
    const std::string& location() const { return location_; }
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::string location_;
    std::vector<std::string> violations_;
};

BoardSchema load_schema(std::string_view text);
BoardSchema load_schema_file(const std::filesystem::path& path);
BoardSchema schema_from_json(const json& doc);
json schema_to_json(const BoardSchema& schema);
// Canonical form: sorted keys, two-space indent, trailing newline.
std::string serialize(const BoardSchema& schema);
std::string content_hash(const BoardSchema& schema);

std::vector<std::string> validate_schema(const BoardSchema& schema);

// Street names per color, in board order. Replica slots are not listed.
std::map<std::string, std::vector<std::string>> color_partition(const BoardSchema& schema);
// Recomputes color_groups from slot colors.
void rebuild_color_groups(BoardSchema& schema);

// All dice sums with nonzero probability.
std::vector<int> reachable_sums(const DiceConfig& dice);

const BoardSchema& default_board();
// Raw text of the shipped default board document.
std::string_view default_board_text();

}  // namespace novopoly
