#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "novopoly/agent.hpp"
#include "novopoly/agents.hpp"
#include "novopoly/engine.hpp"

namespace novopoly::testing {

// Agent driven by a callback; falls back to the conservative action.
class ScriptedAgent : public Agent {
public:
    using Script = std::function<AgentAction(const DecisionRequest&)>;

    explicit ScriptedAgent(Script script = {}) : script_(std::move(script)) {}
    std::string id() const override { return "scripted"; }
    AgentAction decide(const DecisionRequest& r) override {
        requests.push_back(r.point);
        if (script_) return script_(r);
        return AgentAction::of(conservative_action(r.point));
    }

    std::vector<DecisionPoint> requests;

private:
    Script script_;
};

std::shared_ptr<const BoardSchema> share(BoardSchema schema);

// Property checks over one finished game. Returns one line per violation.
std::vector<std::string> ledger_violations(const GameLog& log, const PublicState& final_state);
std::vector<std::string> frame_violations(const GameLog& log, const PublicState& final_state);
std::vector<std::string> post_bankruptcy_violations(const GameLog& log);
std::vector<std::string> improvement_violations(const GameLog& log);

// All of the above.
std::vector<std::string> soundness_violations(const GameLog& log, const PublicState& final_state);

// Agents from built-in ids, one instance per seat.
struct Seats {
    std::vector<AgentPtr> owned;
    std::vector<Agent*> ptrs;
};
Seats make_seats(const std::vector<std::string>& ids, const AgentOptions& options = {});

}  // namespace novopoly::testing
