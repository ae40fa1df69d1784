#include "novopoly/board.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "novopoly/hash.hpp"

namespace novopoly {

namespace detail {
extern const std::string_view kDefaultBoardText;
}

namespace {

constexpr std::array<std::pair<SlotKind, std::string_view>, 10> kSlotKindNames{{
    {SlotKind::street, "street"},
    {SlotKind::railroad, "railroad"},
    {SlotKind::utility, "utility"},
    {SlotKind::tax, "tax"},
    {SlotKind::chance, "chance"},
    {SlotKind::community_chest, "community-chest"},
    {SlotKind::go, "go"},
    {SlotKind::jail, "jail"},
    {SlotKind::free_parking, "free-parking"},
    {SlotKind::go_to_jail, "go-to-jail"},
}};

constexpr std::array<std::pair<CardEffect, std::string_view>, 10> kEffectNames{{
    {CardEffect::advance_to, "advance-to"},
    {CardEffect::advance_nearest, "advance-nearest"},
    {CardEffect::collect, "collect"},
    {CardEffect::pay, "pay"},
    {CardEffect::pay_each_player, "pay-each-player"},
    {CardEffect::collect_from_each_player, "collect-from-each-player"},
    {CardEffect::repairs, "repairs"},
    {CardEffect::go_to_jail, "go-to-jail"},
    {CardEffect::get_out_of_jail_free, "get-out-of-jail-free"},
    {CardEffect::move_back, "move-back"},
}};

[[noreturn]] void field_error(const std::string& where, const std::string& what) {
    throw SchemaError("schema format error at " + where + ": " + what, where);
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        field_error(where + "/" + key, e.what());
    }
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) field_error(where + "/" + key, "missing required field");
    return *it;
}

Slot slot_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) field_error(where, "slot must be an object");
    Slot s;
    s.name = get_or<std::string>(j, "name", "", where);
    if (s.name.empty()) field_error(where + "/name", "missing slot name");
    auto kind_name = get_or<std::string>(j, "kind", "", where);
    auto kind = slot_kind_from_string(kind_name);
    if (!kind) field_error(where + "/kind", "unknown slot kind '" + kind_name + "'");
    s.kind = *kind;
    s.color = get_or<std::string>(j, "color", "", where);
    s.price = get_or<Money>(j, "price", 0, where);
    s.rent = get_or<std::vector<Money>>(j, "rent", {}, where);
    s.house_cost = get_or<Money>(j, "house_cost", 0, where);
    s.tier_costs = get_or<std::vector<Money>>(j, "tier_costs", {}, where);
    s.tax = get_or<Money>(j, "tax", 0, where);
    s.extends = get_or<std::string>(j, "extends", "", where);
    return s;
}

json slot_to_json(const Slot& s) {
    json j;
    j["name"] = s.name;
    j["kind"] = to_string(s.kind);
    if (!s.color.empty()) j["color"] = s.color;
    if (s.price != 0) j["price"] = s.price;
    if (!s.rent.empty()) j["rent"] = s.rent;
    if (s.house_cost != 0) j["house_cost"] = s.house_cost;
    if (!s.tier_costs.empty()) j["tier_costs"] = s.tier_costs;
    if (s.tax != 0) j["tax"] = s.tax;
    if (!s.extends.empty()) j["extends"] = s.extends;
    return j;
}

CardSpec card_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) field_error(where, "card must be an object");
    CardSpec c;
    c.text = get_or<std::string>(j, "text", "", where);
    auto effect_name = get_or<std::string>(j, "effect", "", where);
    auto effect = card_effect_from_string(effect_name);
    if (!effect) field_error(where + "/effect", "unknown card effect '" + effect_name + "'");
    c.effect = *effect;
    c.target = get_or<std::string>(j, "target", "", where);
    c.amount = get_or<Money>(j, "amount", 0, where);
    c.per_hotel = get_or<Money>(j, "per_hotel", 0, where);
    c.steps = get_or<int>(j, "steps", 0, where);
    c.retained = get_or<bool>(j, "retained", false, where);
    return c;
}

json card_to_json(const CardSpec& c) {
    json j;
    j["text"] = c.text;
    j["effect"] = to_string(c.effect);
    if (!c.target.empty()) j["target"] = c.target;
    if (c.amount != 0) j["amount"] = c.amount;
    if (c.per_hotel != 0) j["per_hotel"] = c.per_hotel;
    if (c.steps != 0) j["steps"] = c.steps;
    if (c.retained) j["retained"] = true;
    return j;
}

std::vector<CardSpec> deck_from_json(const json& doc, const char* key) {
    std::vector<CardSpec> out;
    auto it = doc.find(key);
    if (it == doc.end()) return out;
    if (!it->is_array()) field_error(std::string("/") + key, "deck must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
        out.push_back(card_from_json((*it)[i], std::string("/") + key + "/" + std::to_string(i)));
    }
    return out;
}

bool strictly_increasing(const std::vector<Money>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

bool nondecreasing(const std::vector<Money>& v) {
    return std::is_sorted(v.begin(), v.end());
}

}  // namespace

std::string_view to_string(SlotKind kind) {
    for (const auto& [k, n] : kSlotKindNames) {
        if (k == kind) return n;
    }
    return "?";
}

std::optional<SlotKind> slot_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kSlotKindNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::string_view to_string(Deck deck) {
    return deck == Deck::chance ? "chance" : "community-chest";
}

std::string_view to_string(CardEffect effect) {
    for (const auto& [e, n] : kEffectNames) {
        if (e == effect) return n;
    }
    return "?";
}

std::optional<CardEffect> card_effect_from_string(std::string_view name) {
    for (const auto& [e, n] : kEffectNames) {
        if (n == name) return e;
    }
    return std::nullopt;
}

Money Slot::build_cost(int level) const {
    if (level <= kHotelLevel) return house_cost;
    auto tier = static_cast<std::size_t>(level - kHotelLevel - 1);
    return tier < tier_costs.size() ? tier_costs[tier] : house_cost;
}

std::vector<double> DiceConfig::die_weights(int die) const {
    if (weights.empty() || die < 0 || static_cast<std::size_t>(die) >= weights.size()) {
        return std::vector<double>(static_cast<std::size_t>(std::max(faces, 0)), 1.0 / faces);
    }
    return weights[static_cast<std::size_t>(die)];
}

void DiceConfig::normalize() {
    if (weights.empty()) return;
    const double u = 1.0 / faces;
    bool uniform = std::all_of(weights.begin(), weights.end(), [&](const auto& w) {
        return static_cast<int>(w.size()) == faces &&
               std::all_of(w.begin(), w.end(), [&](double p) { return std::abs(p - u) <= 1e-12; });
    });
    if (uniform) weights.clear();
}

std::optional<int> BoardSchema::index_of(std::string_view slot_name) const {
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].name == slot_name) return static_cast<int>(i);
    }
    return std::nullopt;
}

int BoardSchema::property_index(int i) const {
    const auto& s = slots[static_cast<std::size_t>(i)];
    if (!s.replica()) return i;
    return index_of(s.extends).value_or(i);
}

std::optional<int> BoardSchema::jail_index() const {
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].kind == SlotKind::jail) return static_cast<int>(i);
    }
    return std::nullopt;
}

Money BoardSchema::mortgage_value(const Slot& slot) const {
    return static_cast<Money>(std::floor(static_cast<double>(slot.price) * mortgage_ratio + 1e-9));
}

Money BoardSchema::unmortgage_cost(const Slot& slot) const {
    Money m = mortgage_value(slot);
    return m + static_cast<Money>(std::ceil(static_cast<double>(m) * unmortgage_surcharge - 1e-9));
}

Money BoardSchema::sell_value(const Slot& slot, int level) const {
    return static_cast<Money>(
        std::floor(static_cast<double>(slot.build_cost(level)) * improvement_sell_ratio + 1e-9));
}

SchemaError::SchemaError(std::string message, std::string location, std::vector<std::string> violations)
    : std::runtime_error(std::move(message)),
      location_(std::move(location)),
      violations_(std::move(violations)) {}

BoardSchema schema_from_json(const json& doc) {
    if (!doc.is_object()) field_error("/", "board document must be an object");
    BoardSchema s;
    s.name = get_or<std::string>(doc, "name", "", "");
    const json& slots = require(doc, "slots", "");
    if (!slots.is_array()) field_error("/slots", "slots must be an array");
    for (std::size_t i = 0; i < slots.size(); ++i) {
        s.slots.push_back(slot_from_json(slots[i], "/slots/" + std::to_string(i)));
    }
    s.color_groups = get_or<std::map<std::string, std::vector<std::string>>>(doc, "color_groups", {}, "");
    if (auto it = doc.find("dice"); it != doc.end()) {
        s.dice.count = get_or<int>(*it, "count", 2, "/dice");
        s.dice.faces = get_or<int>(*it, "faces", 6, "/dice");
        s.dice.weights = get_or<std::vector<std::vector<double>>>(*it, "weights", {}, "/dice");
    }
    s.chance = deck_from_json(doc, "chance");
    s.community_chest = deck_from_json(doc, "community_chest");
    s.go_increment = get_or<Money>(doc, "go_increment", 200, "");
    s.starting_cash = get_or<Money>(doc, "starting_cash", 1500, "");
    s.jail_fine = get_or<Money>(doc, "jail_fine", 50, "");
    s.mortgage_ratio = get_or<double>(doc, "mortgage_ratio", 0.5, "");
    s.unmortgage_surcharge = get_or<double>(doc, "unmortgage_surcharge", 0.1, "");
    s.improvement_sell_ratio = get_or<double>(doc, "improvement_sell_ratio", 0.5, "");
    s.house_limit = get_or<int>(doc, "house_limit", 0, "");
    s.hotel_limit = get_or<int>(doc, "hotel_limit", 0, "");
    s.max_slots = get_or<int>(doc, "max_slots", 120, "");
    return s;
}

json schema_to_json(const BoardSchema& s) {
    json doc;
    doc["name"] = s.name;
    json slots = json::array();
    for (const auto& slot : s.slots) slots.push_back(slot_to_json(slot));
    doc["slots"] = std::move(slots);
    doc["color_groups"] = s.color_groups;
    json dice{{"count", s.dice.count}, {"faces", s.dice.faces}};
    if (!s.dice.weights.empty()) dice["weights"] = s.dice.weights;
    doc["dice"] = std::move(dice);
    json chance = json::array();
    for (const auto& c : s.chance) chance.push_back(card_to_json(c));
    doc["chance"] = std::move(chance);
    json chest = json::array();
    for (const auto& c : s.community_chest) chest.push_back(card_to_json(c));
    doc["community_chest"] = std::move(chest);
    doc["go_increment"] = s.go_increment;
    doc["starting_cash"] = s.starting_cash;
    doc["jail_fine"] = s.jail_fine;
    doc["mortgage_ratio"] = s.mortgage_ratio;
    doc["unmortgage_surcharge"] = s.unmortgage_surcharge;
    doc["improvement_sell_ratio"] = s.improvement_sell_ratio;
    doc["house_limit"] = s.house_limit;
    doc["hotel_limit"] = s.hotel_limit;
    doc["max_slots"] = s.max_slots;
    return doc;
}

BoardSchema load_schema(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("schema parse error: ") + e.what(), "byte " + std::to_string(e.byte));
    }
    BoardSchema schema = schema_from_json(doc);
    auto violations = validate_schema(schema);
    if (!violations.empty()) {
        std::string msg = "schema validation failed:";
        for (const auto& v : violations) msg += "\n  " + v;
        throw SchemaError(msg, "", std::move(violations));
    }
    return schema;
}

BoardSchema load_schema_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open board file " + path.string(), path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_schema(buf.str());
}

std::string serialize(const BoardSchema& schema) {
    return schema_to_json(schema).dump(2) + "\n";
}

std::string content_hash(const BoardSchema& schema) {
    return content_id(schema_to_json(schema).dump());
}

std::vector<int> reachable_sums(const DiceConfig& dice) {
    // Convolve the supports of all dice.
    std::set<int> sums{0};
    for (int d = 0; d < dice.count; ++d) {
        auto w = dice.die_weights(d);
        std::set<int> next;
        for (int s : sums) {
            for (std::size_t f = 0; f < w.size(); ++f) {
                if (w[f] > 0.0) next.insert(s + static_cast<int>(f) + 1);
            }
        }
        sums = std::move(next);
    }
    return {sums.begin(), sums.end()};
}

std::vector<std::string> validate_schema(const BoardSchema& s) {
    std::vector<std::string> out;
    auto bad = [&](std::string msg) { out.push_back(std::move(msg)); };

    const int n = static_cast<int>(s.slots.size());
    if (n == 0) {
        bad("board has no slots");
        return out;
    }
    if (s.slots.front().kind != SlotKind::go) bad("slot 0 must be go");
    if (n > s.max_slots) bad("board has " + std::to_string(n) + " slots, above max_slots " + std::to_string(s.max_slots));

    std::set<std::string> names;
    int jails = 0;
    bool needs_jail = false;
    for (int i = 0; i < n; ++i) {
        const Slot& slot = s.slots[static_cast<std::size_t>(i)];
        const std::string tag = "slot '" + slot.name + "'";
        if (!names.insert(slot.name).second) bad(tag + ": duplicate slot name");
        if (slot.kind == SlotKind::jail && !slot.replica()) ++jails;
        if (slot.kind == SlotKind::go_to_jail) needs_jail = true;
        if (slot.replica()) {
            auto orig = s.index_of(slot.extends);
            if (!orig) {
                bad(tag + ": extends unknown slot '" + slot.extends + "'");
            } else {
                const Slot& o = s.slots[static_cast<std::size_t>(*orig)];
                if (o.replica()) bad(tag + ": extends a replica slot");
                if (o.kind != slot.kind) bad(tag + ": replica kind differs from original");
            }
            continue;
        }
        switch (slot.kind) {
            case SlotKind::street:
                if (slot.color.empty()) bad(tag + ": street without color");
                if (slot.price <= 0) bad(tag + ": nonpositive price");
                if (slot.house_cost <= 0) bad(tag + ": nonpositive house cost");
                if (slot.rent.size() != static_cast<std::size_t>(kHotelLevel + 1) + slot.tier_costs.size()) {
                    bad(tag + ": rent table must have base, 4 house, hotel and one row per extra tier");
                } else if (!strictly_increasing(slot.rent)) {
                    bad(tag + ": rent table not strictly increasing (monotonicity)");
                }
                if (!slot.rent.empty() && slot.rent.front() < 0) bad(tag + ": negative rent");
                break;
            case SlotKind::railroad:
            case SlotKind::utility:
                if (slot.price <= 0) bad(tag + ": nonpositive price");
                if (slot.rent.empty()) bad(tag + ": empty rent table");
                if (!nondecreasing(slot.rent)) bad(tag + ": rent table decreasing in number owned (monotonicity)");
                if (!slot.rent.empty() && slot.rent.front() < 0) bad(tag + ": negative rent");
                break;
            case SlotKind::tax:
                if (slot.tax < 0) bad(tag + ": negative tax");
                break;
            default:
                break;
        }
    }
    for (const auto* deck : {&s.chance, &s.community_chest}) {
        for (const auto& c : *deck) {
            if (c.effect == CardEffect::go_to_jail) needs_jail = true;
        }
    }
    if (jails > 1 || (needs_jail && jails == 0)) bad("board must have exactly one jail slot");

    // Color groups must be an exact partition of the original street slots.
    std::map<std::string, std::string> group_of;
    for (const auto& [color, members] : s.color_groups) {
        if (members.empty()) bad("color group '" + color + "' is empty");
        for (const auto& m : members) {
            auto idx = s.index_of(m);
            if (!idx) {
                bad("color group '" + color + "': unknown property '" + m + "'");
                continue;
            }
            const Slot& slot = s.slots[static_cast<std::size_t>(*idx)];
            if (slot.kind != SlotKind::street || slot.replica()) {
                bad("color group '" + color + "': '" + m + "' is not a street");
            } else if (slot.color != color) {
                bad("color group '" + color + "': '" + m + "' is colored '" + slot.color + "'");
            }
            if (!group_of.emplace(m, color).second) bad("property '" + m + "' is in more than one color group");
        }
    }
    for (const auto& slot : s.slots) {
        if (slot.kind != SlotKind::street || slot.replica() || slot.color.empty()) continue;
        if (!s.color_groups.contains(slot.color)) {
            bad("slot '" + slot.name + "': orphan color '" + slot.color + "'");
        } else if (!group_of.contains(slot.name)) {
            bad("slot '" + slot.name + "': missing from color group '" + slot.color + "'");
        }
    }

    // Dice.
    bool dice_ok = true;
    if (s.dice.count < 1) { bad("dice count must be at least 1"); dice_ok = false; }
    if (s.dice.faces < 1) { bad("dice faces must be at least 1"); dice_ok = false; }
    if (!s.dice.weights.empty()) {
        if (static_cast<int>(s.dice.weights.size()) != s.dice.count) {
            bad("dice weights must list one vector per die");
            dice_ok = false;
        }
        for (const auto& w : s.dice.weights) {
            if (static_cast<int>(w.size()) != s.dice.faces) {
                bad("dice weights must list one weight per face");
                dice_ok = false;
                break;
            }
            if (std::any_of(w.begin(), w.end(), [](double p) { return !(p >= 0.0); })) {
                bad("dice weights must be nonnegative");
                dice_ok = false;
                break;
            }
            if (std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) > 1e-9) {
                bad("dice weights not normalized");
                dice_ok = false;
                break;
            }
        }
    }

    // Cards.
    for (Deck d : {Deck::chance, Deck::community_chest}) {
        const auto& deck = s.deck(d);
        for (std::size_t i = 0; i < deck.size(); ++i) {
            const auto& c = deck[i];
            const std::string tag = std::string(to_string(d)) + " card " + std::to_string(i) + " '" + c.text + "'";
            if (c.retained != (c.effect == CardEffect::get_out_of_jail_free)) {
                bad(tag + ": only get-out-of-jail-free cards may be retained");
            }
            if (c.amount < 0 || c.per_hotel < 0) bad(tag + ": negative amount");
            if (c.effect == CardEffect::advance_to && !s.index_of(c.target)) {
                bad(tag + ": unknown target slot '" + c.target + "'");
            }
            if (c.effect == CardEffect::advance_nearest) {
                auto k = slot_kind_from_string(c.target);
                if (!k || std::none_of(s.slots.begin(), s.slots.end(), [&](const Slot& x) { return x.kind == *k; })) {
                    bad(tag + ": no slot of kind '" + c.target + "'");
                }
            }
            if (c.effect == CardEffect::move_back && c.steps < 1) bad(tag + ": move-back needs steps >= 1");
        }
    }

    // Money constants.
    if (s.go_increment < 0) bad("go_increment must be nonnegative");
    if (s.starting_cash < 0) bad("starting_cash must be nonnegative");
    if (s.jail_fine < 0) bad("jail_fine must be nonnegative");
    if (!(s.mortgage_ratio > 0.0 && s.mortgage_ratio <= 1.0)) bad("mortgage_ratio must be in (0, 1]");
    if (!(s.unmortgage_surcharge >= 0.0)) bad("unmortgage_surcharge must be nonnegative");
    if (!(s.improvement_sell_ratio >= 0.0 && s.improvement_sell_ratio <= 1.0)) {
        bad("improvement_sell_ratio must be in [0, 1]");
    }
    if (s.house_limit < 0 || s.hotel_limit < 0) bad("housing limits must be nonnegative");

    // Every slot must be reachable from Go by some sequence of dice sums.
    if (dice_ok && s.dice.count * static_cast<long>(s.dice.faces) <= 10000) {
        auto steps = reachable_sums(s.dice);
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> frontier{0};
        seen[0] = 1;
        while (!frontier.empty()) {
            int p = frontier.back();
            frontier.pop_back();
            for (int st : steps) {
                int q = (p + st) % n;
                if (!seen[static_cast<std::size_t>(q)]) {
                    seen[static_cast<std::size_t>(q)] = 1;
                    frontier.push_back(q);
                }
            }
        }
        int unreachable = static_cast<int>(std::count(seen.begin(), seen.end(), 0));
        if (unreachable > 0) bad(std::to_string(unreachable) + " slots unreachable by dice from Go");
    }
    return out;
}

std::map<std::string, std::vector<std::string>> color_partition(const BoardSchema& schema) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& slot : schema.slots) {
        if (slot.kind == SlotKind::street && !slot.replica()) out[slot.color].push_back(slot.name);
    }
    return out;
}

void rebuild_color_groups(BoardSchema& schema) {
    schema.color_groups = color_partition(schema);
}

std::string_view default_board_text() { return detail::kDefaultBoardText; }

const BoardSchema& default_board() {
    static const BoardSchema board = load_schema(detail::kDefaultBoardText);
    return board;
}

}  // namespace novopoly
