#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "novopoly/events.hpp"
#include "novopoly/state.hpp"

namespace novopoly {

struct ReplayFrame {
    int index = 0;
    int turn = 0;
    std::optional<EventKind> event;  // none on the initial frame
    int player = -1;
    std::vector<int> dice;  // most recent roll
    std::string caption;
    int slot_count = 0;
    bool shortfall = false;  // some player shows negative cash
    bool final = false;      // the game-end frame
    PublicState state;

    bool operator==(const ReplayFrame&) const = default;
};

struct FrameSet {
    std::vector<ReplayFrame> frames;
    bool truncated = false;  // the log stopped before its result line
};

// Events that yield a frame: every public state change, dice rolls, and game end.
bool is_frame_event(EventKind kind);

// Folds the log into frames. frames.size() == frame events + 1.
FrameSet build_frames(const GameLog& log);
// Caption for one event, with slot and player names resolved.
std::string caption(const GameEvent& event, const BoardSchema& board);

json frame_to_json(const ReplayFrame& frame);
ReplayFrame frame_from_json(const json& j);

// "ndjson": one frame document per line. "snapshots": one plain-text line per frame.
// Throws std::invalid_argument on an unknown format.
std::string export_frames(const std::vector<ReplayFrame>& frames, std::string_view format);
std::vector<ReplayFrame> parse_frames(std::string_view ndjson);

// Board layout for a viewer: slot names, kinds and colors.
json board_geometry(const BoardSchema& board);

}  // namespace novopoly
