#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <sys/types.h>

#include "novopoly/agent.hpp"
#include "novopoly/protocol.hpp"

namespace novopoly {

struct Endpoint {
    enum class Kind { exec, tcp };
    Kind kind = Kind::exec;
    std::string command;  // exec: run through /bin/sh -c
    std::string host;     // tcp
    int port = 0;

    // "exec:<command>" or "tcp:<host>:<port>". Throws std::invalid_argument.
    static Endpoint parse(const std::string& spec);
    std::string spec() const;
};

// Line-oriented connection to an agent process or socket, with deadlines on
// both directions so a stuck peer cannot stall the caller.
class Channel {
public:
    Channel() = default;
    ~Channel();
    Channel(const Channel&) = delete;
    Channel& operator=(const Channel&) = delete;

    void open(const Endpoint& endpoint);
    void close();
    bool is_open() const { return read_fd_ >= 0; }

    // Throws ProtocolFault on timeout or a closed peer.
    void send_line(const std::string& line, std::chrono::steady_clock::time_point deadline);
    // Returns false on timeout; throws ProtocolFault if the peer closed.
    bool read_line(std::string& line, std::chrono::steady_clock::time_point deadline);

private:
    int read_fd_ = -1;
    int write_fd_ = -1;
    pid_t child_ = -1;
    std::string buffer_;
};

// An agent living outside the simulator, reached over the line protocol.
// Every failure surfaces as a ProtocolFault from decide(), which the engine
// turns into a substituted action.
class RemoteAgent : public Agent {
public:
    RemoteAgent(Endpoint endpoint, int timeout_ms = 1000, int breaker_threshold = 3);

    std::string id() const override { return endpoint_.spec(); }
    void start_game(const GameStart& start) override;
    AgentAction decide(const DecisionRequest& request) override;
    void end_game(int seat, const GameResult& result) override;
    bool novelty_signaled() const override { return detected_; }

    // Opens the connection now; throws ProtocolFault if the endpoint is unreachable.
    void connect();
    int consecutive_timeouts() const { return timeouts_; }
    bool breaker_open() const { return timeouts_ >= breaker_threshold_; }

private:
    void handle_side_message(const json& msg);
    std::chrono::steady_clock::time_point deadline() const;

    Endpoint endpoint_;
    int timeout_ms_;
    int breaker_threshold_;
    Channel channel_;
    bool schema_visible_ = true;
    bool broken_ = false;
    bool detected_ = false;
    int timeouts_ = 0;
    std::uint64_t next_id_ = 1;
};

}  // namespace novopoly
