#include <algorithm>

#include "checks.hpp"
#include "doctest.h"
#include "novopoly/replay.hpp"

using namespace novopoly;
using novopoly::testing::make_seats;
using novopoly::testing::share;

namespace {

GameOutcome game(std::uint64_t seed, std::vector<std::string> ids = {"h1", "h2", "h1", "h2"}) {
    auto seats = make_seats(ids);
    return run_game(share(default_board()), seats.ptrs, seed);
}

}  // namespace

TEST_CASE("one frame per frame event plus the initial frame") {
    const auto o = game(3);
    const auto fs = build_frames(o.log);
    const auto n = std::count_if(o.log.events.begin(), o.log.events.end(),
                                 [](const GameEvent& e) { return is_frame_event(e.kind); });
    CHECK(fs.frames.size() == static_cast<std::size_t>(n) + 1);
    CHECK(fs.frames.front().caption == "Game start");
    CHECK_FALSE(fs.frames.front().event.has_value());
    CHECK(fs.frames.back().final);
    CHECK(testing::frame_violations(o.log, o.final_state).empty());
}

TEST_CASE("a purchase shows up in the next frame") {
    const auto o = game(5);
    const auto fs = build_frames(o.log);
    const auto it = std::find_if(fs.frames.begin(), fs.frames.end(),
                                 [](const ReplayFrame& f) { return f.event == EventKind::buy; });
    REQUIRE(it != fs.frames.end());
    const auto before = *(it - 1);
    const auto& buyer = it->state.players[static_cast<std::size_t>(it->player)];
    CHECK(buyer.cash < before.state.players[static_cast<std::size_t>(it->player)].cash);
    CHECK(it->caption.find(" buys ") != std::string::npos);
    bool owns = false;
    for (const auto& s : it->state.slots) owns = owns || s.owner == it->player;
    CHECK(owns);
}

TEST_CASE("non-state events do not make frames") {
    CHECK_FALSE(is_frame_event(EventKind::decline));
    CHECK_FALSE(is_frame_event(EventKind::trade_rejected));
    CHECK(is_frame_event(EventKind::roll));
    CHECK(is_frame_event(EventKind::game_end));
    CHECK(is_frame_event(EventKind::rent_paid));
}

TEST_CASE("ndjson export round-trips and is bit-stable") {
    const auto o = game(8, {"simple", "h1", "h2", "hybrid"});
    const auto frames = build_frames(o.log).frames;
    const std::string text = export_frames(frames, "ndjson");
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(frames.size()));
    CHECK(parse_frames(text) == frames);
    CHECK(export_frames(build_frames(game(8, {"simple", "h1", "h2", "hybrid"}).log).frames, "ndjson") == text);
    const auto from_log = build_frames(parse_log(write_log(o.log))).frames;
    CHECK(from_log == frames);
}

TEST_CASE("snapshot export and unknown formats") {
    const auto frames = build_frames(game(2).log).frames;
    const std::string text = export_frames(frames, "snapshots");
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(frames.size()));
    CHECK(text.rfind("0\t0\tGame start\tP0@0:1500", 0) == 0);
    CHECK_THROWS_AS(export_frames(frames, "gif"), std::invalid_argument);
}

TEST_CASE("a truncated log yields a truncated frame set without a final frame") {
    const auto o = game(4);
    std::string text = write_log(o.log);
    text.erase(text.rfind('\n', text.size() - 2) + 1);
    // Drop the game_end line too.
    text.erase(text.rfind('\n', text.size() - 2) + 1);
    const auto fs = build_frames(parse_log(text));
    CHECK(fs.truncated);
    REQUIRE_FALSE(fs.frames.empty());
    CHECK_FALSE(fs.frames.back().final);
}

TEST_CASE("captions resolve names") {
    const auto board = default_board();
    GameEvent e;
    e.kind = EventKind::buy;
    e.player = 2;
    e.slot = 39;
    e.amount = 400;
    CHECK(caption(e, board) == "P2 buys Boardwalk for $400");
    e.kind = EventKind::game_end;
    e.player = -1;
    CHECK(caption(e, board) == "Game over: draw at the round-trip cap");
    e.kind = EventKind::roll;
    e.player = 0;
    e.dice = {3, 4};
    CHECK(caption(e, board) == "P0 rolls 3+4 = 7");
}

TEST_CASE("board geometry lists every slot") {
    const auto g = board_geometry(default_board());
    CHECK(g["slot_count"] == 40);
    CHECK(g["slots"].size() == 40);
}
