#include <algorithm>
#include <set>

#include "doctest.h"
#include "novopoly/board.hpp"

using namespace novopoly;

namespace {

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

int slot(const BoardSchema& b, const char* name) { return *b.index_of(name); }

}  // namespace

TEST_CASE("default board constants") {
    const BoardSchema& b = default_board();
    CHECK(validate_schema(b).empty());
    CHECK(b.slots.size() == 40);
    CHECK(b.color_groups.size() == 8);
    CHECK(b.chance.size() == 16);
    CHECK(b.community_chest.size() == 16);
    CHECK(b.go_increment == 200);
    CHECK(b.slots[static_cast<std::size_t>(slot(b, "Income Tax"))].tax == 200);
    CHECK(b.slots[static_cast<std::size_t>(slot(b, "Luxury Tax"))].tax == 100);
    CHECK(b.slots.front().kind == SlotKind::go);
    CHECK(b.dice.count == 2);
    CHECK(b.dice.faces == 6);
    CHECK(b.dice.fair());
}

TEST_CASE("only get-out-of-jail-free cards are retained") {
    for (Deck d : {Deck::chance, Deck::community_chest}) {
        int retained = 0;
        for (const auto& c : default_board().deck(d)) {
            CHECK(c.retained == (c.effect == CardEffect::get_out_of_jail_free));
            retained += c.retained;
        }
        CHECK(retained == 1);
    }
}

TEST_CASE("rent tables are monotone") {
    for (const auto& s : default_board().slots) {
        if (s.kind == SlotKind::street) {
            REQUIRE(s.rent.size() == 6);
            CHECK(std::is_sorted(s.rent.begin(), s.rent.end()));
            CHECK(std::adjacent_find(s.rent.begin(), s.rent.end()) == s.rent.end());
        }
        if (s.kind == SlotKind::railroad) CHECK(std::is_sorted(s.rent.begin(), s.rent.end()));
    }
}

TEST_CASE("street with a color missing from color_groups is an orphan") {
    BoardSchema b = default_board();
    b.slots[1].color = "Mauve";
    CHECK(mentions(validate_schema(b), "orphan color"));
    CHECK_THROWS_AS(load_schema(serialize(b)), SchemaError);
}

TEST_CASE("dice weights summing to 0.9 are rejected") {
    BoardSchema b = default_board();
    b.dice.weights = {{0.15, 0.15, 0.15, 0.15, 0.15, 0.15}, {0.15, 0.15, 0.15, 0.15, 0.15, 0.15}};
    const auto v = validate_schema(b);
    REQUIRE(v.size() == 1);
    CHECK(v.front() == "dice weights not normalized");
}

TEST_CASE("hotel rent below four-house rent breaks monotonicity") {
    BoardSchema b = default_board();
    auto& bw = b.slots[static_cast<std::size_t>(slot(b, "Boardwalk"))];
    bw.rent[5] = bw.rent[4] - 1;
    const auto v = validate_schema(b);
    CHECK(mentions(v, "Boardwalk"));
    CHECK(mentions(v, "monotonicity"));
}

TEST_CASE("decreasing railroad rent breaks monotonicity") {
    BoardSchema b = default_board();
    b.slots[5].rent = {25, 50, 40, 200};
    CHECK(mentions(validate_schema(b), "Reading Railroad"));
}

TEST_CASE("retained flag on an ordinary card is rejected") {
    BoardSchema b = default_board();
    b.chance[6].retained = true;
    CHECK(mentions(validate_schema(b), "retained"));
}

TEST_CASE("second jail is rejected") {
    BoardSchema b = default_board();
    b.slots[20].kind = SlotKind::jail;
    CHECK(mentions(validate_schema(b), "jail"));
}

TEST_CASE("unreachable slots are reported") {
    BoardSchema b = default_board();
    b.dice.count = 1;
    b.dice.faces = 1;
    CHECK(validate_schema(b).empty());  // steps of 1 reach everything
    b.dice.faces = 2;
    b.dice.weights = {{0.0, 1.0}};  // only even steps
    CHECK(mentions(validate_schema(b), "unreachable"));
}

TEST_CASE("load_schema reports parse errors with a location") {
    try {
        load_schema("{\"slots\": [");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.location().rfind("byte", 0) == 0);
    }
    CHECK_THROWS_AS(load_schema("{\"slots\": 7}"), SchemaError);
}

TEST_CASE("serialize round-trips and is byte-stable") {
    const BoardSchema& b = default_board();
    const std::string text = serialize(b);
    const BoardSchema back = load_schema(text);
    CHECK(back == b);
    CHECK(serialize(back) == text);
    CHECK(content_hash(back) == content_hash(b));
    CHECK(load_schema(default_board_text()) == b);
}

TEST_CASE("color partition of the default board") {
    const auto parts = color_partition(default_board());
    CHECK(parts.size() == 8);
    CHECK(parts.at("Blue") == std::vector<std::string>{"Park Place", "Boardwalk"});
    CHECK(parts.at("Brown") == std::vector<std::string>{"Mediterranean Avenue", "Baltic Avenue"});
    std::set<std::string> seen;
    std::size_t total = 0;
    for (const auto& [color, names] : parts) {
        total += names.size();
        seen.insert(names.begin(), names.end());
    }
    const auto streets = std::count_if(default_board().slots.begin(), default_board().slots.end(),
                                       [](const Slot& s) { return s.kind == SlotKind::street; });
    CHECK(total == static_cast<std::size_t>(streets));
    CHECK(seen.size() == total);
}

TEST_CASE("recolored Boardwalk forms its own group") {
    BoardSchema b = default_board();
    b.slots[39].color = "LimeGreen";
    rebuild_color_groups(b);
    CHECK(validate_schema(b).empty());
    const auto parts = color_partition(b);
    CHECK(parts.at("LimeGreen") == std::vector<std::string>{"Boardwalk"});
    CHECK(parts.at("Blue") == std::vector<std::string>{"Park Place"});
}

TEST_CASE("reachable sums") {
    DiceConfig two;
    CHECK(reachable_sums(two).front() == 2);
    CHECK(reachable_sums(two).back() == 12);
    DiceConfig three{3, 6, {}};
    CHECK(reachable_sums(three).front() == 3);
}

TEST_CASE("liquidation values") {
    const BoardSchema& b = default_board();
    const Slot& bw = b.slots[39];
    CHECK(b.mortgage_value(bw) == 200);
    CHECK(b.unmortgage_cost(bw) == 220);
    CHECK(b.sell_value(bw, 1) == 100);
}
