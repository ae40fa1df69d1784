#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "novopoly/agent.hpp"

namespace novopoly {

// Wire format between the simulator and an external agent: one JSON object per
// line, each with "type" and "protocol_version".
//
//   sim -> agent   game-start        {seat, seed, schema_visible, schema?}
//   sim -> agent   decision-request  {request_id, point, seat, turn, state, recent, menu, max_offers, ...}
//   agent -> sim   action-response   {request_id, action, novelty_detected?}
//   agent -> sim   novelty-detected  {}
//   sim -> agent   game-end          {seat, result}
//
// Properties are named by slot name everywhere on the wire.
inline constexpr int kProtocolVersion = 1;

// Raised for anything an external agent gets wrong: timeouts, malformed
// messages, version mismatches, lost connections.
class ProtocolFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json game_start_message(const GameStart& start);
json decision_request_message(const DecisionRequest& request, std::uint64_t request_id, bool include_schema);
json game_end_message(int seat, const GameResult& result);
json action_response_message(const AgentAction& action, std::uint64_t request_id, const BoardSchema& board);

json action_to_json(const AgentAction& action, const BoardSchema& board);
// Throws ProtocolFault when the action is malformed or names unknown slots.
AgentAction action_from_json(const json& j, const BoardSchema& board);
// Rebuilds a request on the agent side. `board` is the agent's view of the schema.
DecisionRequest decision_request_from_message(const json& msg, std::shared_ptr<const BoardSchema> board);

// Parses one line; throws ProtocolFault on malformed JSON or a version mismatch.
json parse_message(const std::string& line);

// Hosts an agent on a pair of streams until end of input. Returns the number
// of decisions served.
std::uint64_t serve_agent(Agent& agent, std::istream& in, std::ostream& out);

}  // namespace novopoly
