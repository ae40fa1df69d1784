#include "novopoly/service.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "httplib.h"
#include "novopoly/agents.hpp"
#include "novopoly/hash.hpp"
#include "novopoly/novelty.hpp"
#include "novopoly/replay.hpp"
#include "novopoly/tournament.hpp"

namespace novopoly {

json error_body(const std::string& code, const std::string& message) {
    return json{{"error", {{"code", code}, {"message", message}}}};
}

namespace {

struct Reply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
    int retry_after = 0;
};

Reply ok(const json& j, int status = 200) { return Reply{status, j.dump(), "application/json", 0}; }
Reply fail(int status, const std::string& code, const std::string& message) {
    return Reply{status, error_body(code, message).dump(), "application/json", 0};
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

enum class RunKind { game, tournament };
enum class RunStatus { queued, running, finished, failed };

std::string_view to_string(RunKind k) { return k == RunKind::game ? "game" : "tournament"; }
std::string_view to_string(RunStatus s) {
    switch (s) {
        case RunStatus::queued: return "queued";
        case RunStatus::running: return "running";
        case RunStatus::finished: return "finished";
        case RunStatus::failed: return "failed";
    }
    return "?";
}

struct Run {
    std::string id;
    RunKind kind = RunKind::game;
    json config;

    // Guarded by the service mutex.
    RunStatus status = RunStatus::queued;
    std::string created_at;
    std::string started_at;
    std::string finished_at;
    std::string error;
    std::vector<json> frames;
    json result;
    json board;
    std::string log;
    json report;
    std::string report_csv;

    json handle() const {
        json j{{"id", id},
               {"kind", to_string(kind)},
               {"status", to_string(status)},
               {"config", config},
               {"created_at", created_at},
               {"started_at", started_at.empty() ? json(nullptr) : json(started_at)},
               {"finished_at", finished_at.empty() ? json(nullptr) : json(finished_at)}};
        if (!error.empty()) j["error"] = error;
        return j;
    }
};

using Params = std::multimap<std::string, std::string>;

std::optional<int> int_param(const Params& params, const std::string& key, int fallback, bool& bad) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        std::size_t used = 0;
        const int v = std::stoi(it->second, &used);
        if (used != it->second.size() || v < 0) throw std::invalid_argument("bad");
        return v;
    } catch (const std::exception&) {
        bad = true;
        return std::nullopt;
    }
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/') ++i;
        const std::size_t j = path.find('/', i);
        if (i < path.size()) parts.push_back(path.substr(i, j == std::string::npos ? std::string::npos : j - i));
        if (j == std::string::npos) break;
        i = j;
    }
    return parts;
}

std::vector<std::string> read_agents(const json& body, std::string& problem) {
    auto it = body.find("agents");
    if (it == body.end() || !it->is_array() ||
        !std::all_of(it->begin(), it->end(), [](const json& a) { return a.is_string(); })) {
        problem = "'agents' must be a list of agent ids";
        return {};
    }
    auto agents = it->get<std::vector<std::string>>();
    if (agents.size() != static_cast<std::size_t>(kSeats)) {
        problem = "exactly " + std::to_string(kSeats) + " agents are required, got " + std::to_string(agents.size());
        return {};
    }
    for (const auto& a : agents) {
        // The service runs built-in agents only; external endpoints would let clients start processes.
        if (!is_builtin_agent(a)) {
            problem = "unknown agent '" + a + "'";
            return {};
        }
    }
    return agents;
}

}  // namespace

struct SimService::Impl {
    explicit Impl(ServiceOptions o) : options(std::move(o)) {
        std::filesystem::create_directories(options.data_dir);
        for (int i = 0; i < std::max(1, options.workers); ++i) workers.emplace_back([this] { work(); });
    }

    ~Impl() {
        {
            std::lock_guard lock(mu);
            stopping = true;
        }
        cv.notify_all();
        for (auto& t : workers) t.join();
    }

    ServiceOptions options;
    httplib::Server server;

    std::mutex mu;
    std::condition_variable cv;
    std::condition_variable idle_cv;
    std::deque<std::pair<std::shared_ptr<Run>, std::function<void(Run&)>>> queue;
    std::map<std::string, std::shared_ptr<Run>> runs;
    std::vector<std::thread> workers;
    int busy = 0;
    std::uint64_t counter = 0;
    bool stopping = false;

    void work() {
        while (true) {
            std::pair<std::shared_ptr<Run>, std::function<void(Run&)>> job;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [this] { return stopping || !queue.empty(); });
                if (stopping && queue.empty()) return;
                job = std::move(queue.front());
                queue.pop_front();
                ++busy;
                job.first->status = RunStatus::running;
                job.first->started_at = utc_now();
            }
            std::string error;
            try {
                job.second(*job.first);
            } catch (const std::exception& e) {
                error = e.what();
            }
            {
                std::lock_guard lock(mu);
                job.first->status = error.empty() ? RunStatus::finished : RunStatus::failed;
                job.first->error = error;
                job.first->finished_at = utc_now();
                --busy;
                write_file(run_dir(*job.first) / "handle.json", job.first->handle().dump(2));
            }
            idle_cv.notify_all();
        }
    }

    void drain() {
        std::unique_lock lock(mu);
        idle_cv.wait(lock, [this] { return queue.empty() && busy == 0; });
    }

    std::filesystem::path run_dir(const Run& run) const { return options.data_dir / run.id; }

    Reply submit(RunKind kind, json config, std::function<void(Run&)> job) {
        std::lock_guard lock(mu);
        if (static_cast<int>(queue.size()) >= options.queue_limit) {
            Reply r = fail(503, "queue_full", "too many queued runs, retry later");
            r.retry_after = 5;
            return r;
        }
        auto run = std::make_shared<Run>();
        run->kind = kind;
        run->config = std::move(config);
        run->id = std::string(kind == RunKind::game ? "g" : "t") +
                  content_id(run->config.dump() + "#" + std::to_string(++counter) + "#" + utc_now()).substr(0, 12);
        run->created_at = utc_now();
        std::filesystem::create_directories(run_dir(*run));
        write_file(run_dir(*run) / "config.json", run->config.dump(2));
        runs[run->id] = run;
        queue.emplace_back(run, std::move(job));
        cv.notify_one();
        return ok(run->handle(), 202);
    }

    std::shared_ptr<Run> find(const std::string& id, RunKind kind) {
        std::lock_guard lock(mu);
        auto it = runs.find(id);
        if (it == runs.end() || it->second->kind != kind) return nullptr;
        return it->second;
    }

    static std::uint64_t fresh_seed() {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32 | rd()) & 0xffffffffffffULL;
    }

    // ---- handlers ----

    Reply agents() {
        json list = json::array();
        for (const auto& a : agent_catalog()) list.push_back({{"id", a.id}, {"name", a.name}, {"description", a.description}});
        return ok(json{{"agents", list}});
    }

    Reply novelties() {
        json list = json::array();
        for (const auto& d : demo_novelties()) {
            list.push_back({{"key", d.key}, {"label", d.label}, {"description", d.description}, {"form", d.form}});
        }
        return ok(json{{"novelties", list}, {"selection", "single"}});
    }

    Reply start_game(const std::string& text) {
        json body = json::parse(text.empty() ? "{}" : text, nullptr, false);
        if (body.is_discarded() || !body.is_object()) return fail(400, "bad_request", "body must be a JSON object");
        std::string problem;
        auto agents = read_agents(body, problem);
        if (!problem.empty()) return fail(400, "invalid_agents", problem);

        std::optional<NoveltySpec> spec;
        json novelty_echo = nullptr;
        try {
            if (auto it = body.find("novelty"); it != body.end() && !it->is_null()) {
                if (it->is_string()) {
                    spec = demo_spec(it->get<std::string>(), json::object());
                } else if (it->is_object() && it->contains("family")) {
                    spec = spec_from_json(*it);
                } else if (it->is_object() && it->contains("key")) {
                    spec = demo_spec((*it)["key"].get<std::string>(), it->value("params", json::object()));
                } else {
                    return fail(400, "invalid_novelty", "novelty must be a demo key, {key, params}, or a spec");
                }
                if (spec) {
                    if (auto v = validate_spec(*spec); !v.empty()) return fail(400, "invalid_novelty", v.front());
                    novelty_echo = spec_to_json(*spec);
                }
            }
        } catch (const std::exception& e) {
            return fail(400, "invalid_novelty", e.what());
        }

        std::uint64_t seed = 0;
        if (auto it = body.find("seed"); it != body.end() && !it->is_null()) {
            if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
                return fail(400, "invalid_seed", "seed must be a nonnegative integer");
            }
            seed = it->get<std::uint64_t>();
        } else {
            seed = fresh_seed();
        }
        GameLimits limits;
        limits.round_trip_cap = body.value("round_trip_cap", limits.round_trip_cap);
        if (limits.round_trip_cap < 1) return fail(400, "invalid_config", "round_trip_cap must be positive");

        // The sampled instance and board are fixed here so the echo fully determines the game.
        BoardSchema board = default_board();
        json instance_echo = nullptr;
        if (spec) {
            const NoveltyInstance inst = instance_for_game(*spec, seed);
            try {
                std::tie(board, limits) = apply_novelty(board, limits, inst);
            } catch (const InjectionError& e) {
                return fail(400, "invalid_novelty", e.what());
            }
            instance_echo = instance_to_json(inst);
        }
        json echo{{"agents", agents},
                  {"seed", seed},
                  {"novelty", novelty_echo},
                  {"novelty_instance", instance_echo},
                  {"round_trip_cap", limits.round_trip_cap}};
        auto schema = std::make_shared<const BoardSchema>(std::move(board));
        return submit(RunKind::game, echo, [this, agents, schema, seed, limits](Run& run) {
            std::vector<AgentPtr> owned;
            std::vector<Agent*> seats;
            for (const auto& a : agents) {
                owned.push_back(make_agent(a));
                seats.push_back(owned.back().get());
            }
            GameOutcome outcome = run_game(schema, seats, seed, limits);
            outcome.log.seats = agents;
            const std::string log_text = write_log(outcome.log);
            FrameSet fs = build_frames(outcome.log);
            std::vector<json> frames;
            for (const auto& f : fs.frames) frames.push_back(frame_to_json(f));
            const std::filesystem::path dir = run_dir(run);
            write_file(dir / "log.ndjson", log_text);
            write_file(dir / "frames.ndjson", export_frames(fs.frames, "ndjson"));
            write_file(dir / "result.json", result_to_json(outcome.result).dump(2));
            std::lock_guard lock(mu);
            run.log = log_text;
            run.frames = std::move(frames);
            run.result = result_to_json(outcome.result);
            run.board = board_geometry(*schema);
        });
    }

    Reply start_tournament(const std::string& text) {
        json body = json::parse(text.empty() ? "{}" : text, nullptr, false);
        if (body.is_discarded() || !body.is_object()) return fail(400, "bad_request", "body must be a JSON object");
        if (body.contains("board") && body["board"].is_string()) {
            return fail(400, "invalid_config", "board must be given inline, not as a path");
        }
        std::string problem;
        read_agents(body, problem);
        if (!problem.empty()) return fail(400, "invalid_agents", problem);
        if (!body.contains("seed")) body["seed"] = fresh_seed();
        TournamentConfig config;
        try {
            config = tournament_config_from_json(body);
        } catch (const std::exception& e) {
            return fail(400, "invalid_config", e.what());
        }
        if (auto v = validate_config(config); !v.empty()) return fail(400, "invalid_config", v.front());
        return submit(RunKind::tournament, tournament_config_to_json(config), [this, config](Run& run) {
            TournamentReport report = run_tournament(config);
            json doc = report_to_json(report);
            const std::string csv = report_to_csv(report);
            write_file(run_dir(run) / "report.json", doc.dump(2));
            write_file(run_dir(run) / "report.csv", csv);
            std::lock_guard lock(mu);
            run.report = std::move(doc);
            run.report_csv = csv;
        });
    }

    Reply not_ready(const Run& run) {
        if (run.status == RunStatus::failed) return fail(500, "run_failed", run.error);
        return fail(409, "not_ready", "run is " + std::string(to_string(run.status)));
    }

    Reply game_get(const std::string& id, const std::string& what, const Params& params) {
        auto run = find(id, RunKind::game);
        if (!run) return fail(404, "not_found", "no game run '" + id + "'");
        std::lock_guard lock(mu);
        if (what.empty()) return ok(run->handle());
        if (what == "frames") {
            bool bad = false;
            const auto from = int_param(params, "from", 0, bad);
            const auto count = int_param(params, "count", 100, bad);
            if (bad) return fail(400, "bad_request", "from and count must be nonnegative integers");
            const int n = std::min(*count, options.max_page);
            const bool done = run->status == RunStatus::finished;
            json page = json::array();
            const int total = static_cast<int>(run->frames.size());
            for (int i = *from; i < total && i < *from + n; ++i) page.push_back(run->frames[static_cast<std::size_t>(i)]);
            const int next = *from + static_cast<int>(page.size());
            return ok(json{{"run", run->id},
                           {"status", to_string(run->status)},
                           {"from", *from},
                           {"count", page.size()},
                           {"total", done ? json(total) : json(nullptr)},
                           {"frames", page},
                           {"end", done && next >= total},
                           {"failed", run->status == RunStatus::failed}});
        }
        if (run->status != RunStatus::finished) return not_ready(*run);
        if (what == "result") return ok(json{{"run", run->id}, {"config", run->config}, {"result", run->result}});
        if (what == "board") return ok(run->board);
        if (what == "log") return Reply{200, run->log, "application/x-ndjson", 0};
        return fail(404, "not_found", "unknown resource '" + what + "'");
    }

    Reply tournament_get(const std::string& id, const std::string& what, const Params& params) {
        auto run = find(id, RunKind::tournament);
        if (!run) return fail(404, "not_found", "no tournament run '" + id + "'");
        std::lock_guard lock(mu);
        if (what.empty()) return ok(run->handle());
        if (what != "report") return fail(404, "not_found", "unknown resource '" + what + "'");
        if (run->status != RunStatus::finished) return not_ready(*run);
        auto fmt = params.find("format");
        if (fmt != params.end() && fmt->second == "csv") return Reply{200, run->report_csv, "text/csv", 0};
        return ok(run->report);
    }

    Reply remove(const std::string& id) {
        std::lock_guard lock(mu);
        auto it = runs.find(id);
        if (it == runs.end()) return fail(404, "not_found", "no run '" + id + "'");
        if (it->second->status == RunStatus::queued || it->second->status == RunStatus::running) {
            return fail(409, "busy", "run has not finished");
        }
        std::error_code ec;
        std::filesystem::remove_all(run_dir(*it->second), ec);
        runs.erase(it);
        return ok(json{{"deleted", id}});
    }

    Reply route(const std::string& method, const std::string& path, const Params& params, const std::string& body) {
        const auto parts = split_path(path);
        if (parts.empty() || parts[0] != "api") return fail(404, "not_found", "no route for " + path);
        const std::string section = parts.size() > 1 ? parts[1] : "";
        const std::string id = parts.size() > 2 ? parts[2] : "";
        const std::string what = parts.size() > 3 ? parts[3] : "";
        if (parts.size() > 4) return fail(404, "not_found", "no route for " + path);
        if (method == "GET") {
            if (parts.size() == 2 && section == "health") return ok(json{{"status", "ok"}});
            if (parts.size() == 2 && section == "agents") return agents();
            if (parts.size() == 2 && section == "novelties") return novelties();
            if (parts.size() >= 3 && section == "games") return game_get(id, what, params);
            if (parts.size() >= 3 && section == "tournaments") return tournament_get(id, what, params);
        } else if (method == "POST") {
            if (parts.size() == 2 && section == "games") return start_game(body);
            if (parts.size() == 2 && section == "tournaments") return start_tournament(body);
        } else if (method == "DELETE") {
            if (parts.size() == 3 && (section == "games" || section == "tournaments")) return remove(id);
        }
        return fail(404, "not_found", "no route for " + method + " " + path);
    }
};

SimService::SimService(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
    auto& srv = impl_->server;
    if (!impl_->options.static_dir.empty()) srv.set_mount_point("/", impl_->options.static_dir);
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        Params params(req.params.begin(), req.params.end());
        Reply r;
        try {
            r = impl_->route(req.method, req.path, params, req.body);
        } catch (const std::exception& e) {
            r = fail(500, "internal", e.what());
        }
        res.status = r.status;
        if (r.retry_after > 0) res.set_header("Retry-After", std::to_string(r.retry_after));
        res.set_content(r.body, r.content_type);
    };
    srv.Get("/api/.*", forward);
    srv.Post("/api/.*", forward);
    srv.Delete("/api/.*", forward);
    srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (res.body.empty()) res.set_content(error_body("not_found", "no route for " + req.path).dump(), "application/json");
    });
}

SimService::~SimService() { stop(); }

int SimService::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool SimService::listen() { return impl_->server.listen_after_bind(); }

void SimService::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void SimService::drain() { impl_->drain(); }

std::pair<int, std::string> SimService::handle(const std::string& method, const std::string& path_and_query,
                                               const std::string& body) {
    const auto q = path_and_query.find('?');
    const std::string path = path_and_query.substr(0, q);
    httplib::Params params;
    if (q != std::string::npos) httplib::detail::parse_query_text(path_and_query.substr(q + 1), params);
    Reply r = impl_->route(method, path, Params(params.begin(), params.end()), body);
    return {r.status, r.body};
}

}  // namespace novopoly
