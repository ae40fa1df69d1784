#include "novopoly/bridge.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

namespace novopoly {

namespace {

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    return left < 0 ? 0 : static_cast<int>(left);
}

void set_nonblocking(int fd) {
    const int flags = fcntl(fd, F_GETFL, 0);
    fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

void ignore_sigpipe() {
    static const bool once = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)once;
}

}  // namespace

Endpoint Endpoint::parse(const std::string& spec) {
    Endpoint e;
    if (spec.rfind("exec:", 0) == 0) {
        e.kind = Kind::exec;
        e.command = spec.substr(5);
        if (e.command.empty()) throw std::invalid_argument("exec endpoint needs a command");
        return e;
    }
    if (spec.rfind("tcp:", 0) == 0) {
        const std::string rest = spec.substr(4);
        const auto colon = rest.rfind(':');
        if (colon == std::string::npos || colon == 0) throw std::invalid_argument("tcp endpoint must be tcp:<host>:<port>");
        e.kind = Kind::tcp;
        e.host = rest.substr(0, colon);
        try {
            e.port = std::stoi(rest.substr(colon + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad port in '" + spec + "'");
        }
        if (e.port <= 0 || e.port > 65535) throw std::invalid_argument("bad port in '" + spec + "'");
        return e;
    }
    throw std::invalid_argument("unknown endpoint '" + spec + "'");
}

std::string Endpoint::spec() const {
    return kind == Kind::exec ? "exec:" + command : "tcp:" + host + ":" + std::to_string(port);
}

Channel::~Channel() { close(); }

void Channel::open(const Endpoint& endpoint) {
    close();
    ignore_sigpipe();
    if (endpoint.kind == Endpoint::Kind::exec) {
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0) throw ProtocolFault(std::string("pipe: ") + std::strerror(errno));
        if (pipe(from_child) != 0) {
            ::close(to_child[0]);
            ::close(to_child[1]);
            throw ProtocolFault(std::string("pipe: ") + std::strerror(errno));
        }
        const pid_t pid = fork();
        if (pid < 0) throw ProtocolFault(std::string("fork: ") + std::strerror(errno));
        if (pid == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            execl("/bin/sh", "sh", "-c", endpoint.command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        child_ = pid;
        read_fd_ = from_child[0];
        write_fd_ = to_child[1];
        fcntl(read_fd_, F_SETFD, FD_CLOEXEC);
        fcntl(write_fd_, F_SETFD, FD_CLOEXEC);
    } else {
        addrinfo hints{};
        hints.ai_family = AF_UNSPEC;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* res = nullptr;
        const std::string port = std::to_string(endpoint.port);
        if (getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &res) != 0 || !res) {
            throw ProtocolFault("cannot resolve " + endpoint.host);
        }
        int fd = -1;
        for (addrinfo* p = res; p; p = p->ai_next) {
            fd = socket(p->ai_family, p->ai_socktype | SOCK_CLOEXEC, p->ai_protocol);
            if (fd < 0) continue;
            if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
            ::close(fd);
            fd = -1;
        }
        freeaddrinfo(res);
        if (fd < 0) throw ProtocolFault("cannot connect to " + endpoint.spec());
        read_fd_ = fd;
        write_fd_ = dup(fd);
    }
    set_nonblocking(read_fd_);
    set_nonblocking(write_fd_);
    buffer_.clear();
}

void Channel::close() {
    if (write_fd_ >= 0) ::close(write_fd_);
    if (read_fd_ >= 0) ::close(read_fd_);
    write_fd_ = read_fd_ = -1;
    if (child_ > 0) {
        kill(child_, SIGTERM);
        waitpid(child_, nullptr, 0);
        child_ = -1;
    }
    buffer_.clear();
}

void Channel::send_line(const std::string& line, Clock::time_point deadline) {
    if (write_fd_ < 0) throw ProtocolFault("connection closed");
    std::string data = line;
    data += '\n';
    std::size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n = ::write(write_fd_, data.data() + sent, data.size() - sent);
        if (n > 0) {
            sent += static_cast<std::size_t>(n);
            continue;
        }
        if (n < 0 && errno == EINTR) continue;
        if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
            pollfd p{write_fd_, POLLOUT, 0};
            const int ms = remaining_ms(deadline);
            if (ms == 0 || poll(&p, 1, ms) <= 0) throw ProtocolFault("timeout writing to agent");
            continue;
        }
        throw ProtocolFault("connection lost while writing");
    }
}

bool Channel::read_line(std::string& line, Clock::time_point deadline) {
    if (read_fd_ < 0) throw ProtocolFault("connection closed");
    while (true) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return true;
        }
        char chunk[4096];
        const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
        if (n > 0) {
            buffer_.append(chunk, static_cast<std::size_t>(n));
            // A peer that never sends a newline must not grow memory without bound.
            if (buffer_.size() > (1u << 24)) throw ProtocolFault("agent message too long");
            continue;
        }
        if (n == 0) throw ProtocolFault("agent closed the connection");
        if (errno == EINTR) continue;
        if (errno != EAGAIN && errno != EWOULDBLOCK) throw ProtocolFault("connection lost while reading");
        pollfd p{read_fd_, POLLIN, 0};
        const int ms = remaining_ms(deadline);
        if (ms == 0) return false;
        const int ready = poll(&p, 1, ms);
        if (ready == 0) return false;
        if (ready < 0 && errno != EINTR) throw ProtocolFault("poll failed");
    }
}

RemoteAgent::RemoteAgent(Endpoint endpoint, int timeout_ms, int breaker_threshold)
    : endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms), breaker_threshold_(breaker_threshold) {}

Clock::time_point RemoteAgent::deadline() const { return Clock::now() + std::chrono::milliseconds(timeout_ms_); }

void RemoteAgent::connect() {
    if (channel_.is_open() && !broken_) return;
    channel_.open(endpoint_);
    broken_ = false;
}

void RemoteAgent::start_game(const GameStart& start) {
    timeouts_ = 0;
    schema_visible_ = start.schema_visible;
    try {
        connect();
        channel_.send_line(game_start_message(start).dump(), deadline());
    } catch (const ProtocolFault&) {
        // Reported through the first decision instead.
        broken_ = true;
    }
}

void RemoteAgent::handle_side_message(const json& msg) {
    if (msg.value("type", std::string{}) == "novelty-detected") detected_ = true;
}

AgentAction RemoteAgent::decide(const DecisionRequest& request) {
    if (broken_) throw ProtocolFault("agent connection is down");
    if (breaker_open()) throw ProtocolFault("agent skipped after repeated timeouts");
    const std::uint64_t id = next_id_++;
    const auto until = deadline();
    try {
        channel_.send_line(decision_request_message(request, id, false).dump(), until);
    } catch (const ProtocolFault&) {
        broken_ = true;
        throw;
    }
    std::string line;
    while (true) {
        bool got = false;
        try {
            got = channel_.read_line(line, until);
        } catch (const ProtocolFault&) {
            broken_ = true;
            throw;
        }
        if (!got) {
            ++timeouts_;
            throw ProtocolFault("no response within " + std::to_string(timeout_ms_) + " ms");
        }
        json msg = parse_message(line);
        const auto type = msg["type"].get<std::string>();
        if (type != "action-response") {
            handle_side_message(msg);
            continue;
        }
        // Late replies to earlier requests are dropped.
        if (msg.value("request_id", std::uint64_t{0}) != id) continue;
        timeouts_ = 0;
        AgentAction action = action_from_json(msg.value("action", json{}), *request.schema);
        if (msg.value("novelty_detected", false)) detected_ = true;
        action.novelty_detected = action.novelty_detected || detected_;
        return action;
    }
}

void RemoteAgent::end_game(int seat, const GameResult& result) {
    if (broken_ || !channel_.is_open()) return;
    try {
        channel_.send_line(game_end_message(seat, result).dump(), deadline());
    } catch (const ProtocolFault&) {
        broken_ = true;
    }
}

}  // namespace novopoly
