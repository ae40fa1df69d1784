#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "novopoly/agents.hpp"
#include "novopoly/engine.hpp"
#include "novopoly/novelty.hpp"
#include "novopoly/protocol.hpp"
#include "novopoly/replay.hpp"
#include "novopoly/service.hpp"
#include "novopoly/tournament.hpp"

namespace novopoly::cli {

namespace fs = std::filesystem;

namespace {

// Bad input from the user: exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

json read_json(const fs::path& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw UsageError(path.string() + " is not valid JSON");
    return j;
}

// A novelty argument: a spec file, a library name or id, or a demo selection.
NoveltySpec resolve_novelty(const json& value) {
    try {
        if (value.is_string()) {
            const std::string s = value.get<std::string>();
            if (fs::exists(s)) {
                auto specs = load_novelties(read_file(s));
                if (specs.size() != 1) throw UsageError(s + " must hold exactly one novelty");
                return specs.front();
            }
            if (auto found = find_novelty(s)) return *found;
            throw UsageError("unknown novelty '" + s + "'");
        }
        if (value.is_object() && value.contains("key")) {
            auto spec = demo_spec(value["key"].get<std::string>(), value.value("params", json::object()));
            if (!spec) throw UsageError("novelty 'none' selects no novelty");
            return *spec;
        }
        return spec_from_json(value);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

std::string fmt(const std::optional<double>& v, int precision = 3) {
    if (!v) return "n/a";
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << *v;
    return s.str();
}

std::vector<std::string> split_agents(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& item : raw) {
        // exec: endpoints may contain commas; only split plain id lists.
        if (item.find(':') != std::string::npos) {
            out.push_back(item);
            continue;
        }
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) out.push_back(part);
        }
    }
    return out;
}

// ---- play ----

struct PlayArgs {
    std::string config;
    std::string board;
    std::vector<std::string> agents;
    std::string novelty;
    std::optional<std::uint64_t> seed;
    std::optional<int> cap;
    int timeout_ms = 0;
    std::string out = "out";
};

int cmd_play(const PlayArgs& a, std::ostream& out) {
    json cfg = a.config.empty() ? json::object() : read_json(a.config);
    if (!cfg.is_object()) throw UsageError("play config must be an object");
    if (!a.agents.empty()) cfg["agents"] = split_agents(a.agents);
    if (!a.board.empty()) cfg["board"] = a.board;
    if (!a.novelty.empty()) cfg["novelty"] = a.novelty;
    if (a.seed) cfg["seed"] = *a.seed;
    if (a.cap) cfg["round_trip_cap"] = *a.cap;
    if (a.timeout_ms > 0) cfg["timeout_ms"] = a.timeout_ms;

    const auto agents = cfg.value("agents", std::vector<std::string>{});
    if (agents.size() != static_cast<std::size_t>(kSeats)) {
        throw UsageError("play needs exactly 4 agents (got " + std::to_string(agents.size()) + ")");
    }
    BoardSchema board = default_board();
    try {
        if (cfg.contains("board") && !cfg["board"].is_null()) {
            board = cfg["board"].is_string() ? load_schema_file(cfg["board"].get<std::string>()) : schema_from_json(cfg["board"]);
        }
    } catch (const std::exception& e) {
        throw UsageError(std::string("board: ") + e.what());
    }
    if (auto v = validate_schema(board); !v.empty()) throw UsageError("board: " + v.front());

    const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
    GameLimits limits;
    limits.round_trip_cap = cfg.value("round_trip_cap", limits.round_trip_cap);
    json instance = nullptr;
    if (cfg.contains("novelty") && !cfg["novelty"].is_null()) {
        const NoveltySpec spec = resolve_novelty(cfg["novelty"]);
        if (auto v = validate_spec(spec); !v.empty()) throw UsageError("novelty: " + v.front());
        const NoveltyInstance inst = instance_for_game(spec, seed);
        try {
            std::tie(board, limits) = apply_novelty(board, limits, inst);
        } catch (const InjectionError& e) {
            throw UsageError(std::string("novelty: ") + e.what());
        }
        cfg["novelty"] = spec_to_json(spec);
        instance = instance_to_json(inst);
    }
    cfg["novelty_instance"] = instance;
    cfg["seed"] = seed;

    AgentOptions options;
    options.timeout_ms = cfg.value("timeout_ms", options.timeout_ms);
    if (cfg.contains("heuristics")) options.heuristics = heuristic_config_from_json(cfg["heuristics"]);
    std::vector<AgentPtr> owned;
    std::vector<Agent*> seats;
    for (const auto& id : agents) {
        try {
            owned.push_back(make_agent(id, options));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        seats.push_back(owned.back().get());
    }
    auto schema = std::make_shared<const BoardSchema>(std::move(board));
    GameOutcome outcome = run_game(schema, seats, seed, limits);
    outcome.log.seats = agents;

    const fs::path dir = a.out;
    const std::string stem = "game-" + std::to_string(seed);
    const FrameSet frames = build_frames(outcome.log);
    write_file(dir / "logs" / (stem + ".ndjson"), write_log(outcome.log));
    write_file(dir / "frames" / (stem + ".ndjson"), export_frames(frames.frames, "ndjson"));
    write_file(dir / "reports" / (stem + ".json"),
               json{{"config", cfg}, {"result", result_to_json(outcome.result)}}.dump(2) + "\n");

    const auto& r = outcome.result;
    out << "seed " << seed << ": " << to_string(r.reason) << ", "
        << (r.winner ? "winner P" + std::to_string(*r.winner) + " (" + agents[static_cast<std::size_t>(*r.winner)] + ")"
                     : std::string("no winner"))
        << ", " << r.turns << " turns, " << r.max_round_trips() << " round trips, " << frames.frames.size()
        << " frames\n";
    out << "wrote " << (dir / "logs" / (stem + ".ndjson")).string() << "\n";
    return kOk;
}

// ---- tournament ----

struct TournamentArgs {
    std::string config;
    int reps = 1;
    int jobs = 0;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::string test = "z";
};

int cmd_tournament(const TournamentArgs& a, std::ostream& out) {
    json doc = read_json(a.config);
    if (a.seed && doc.is_object()) doc["seed"] = *a.seed;
    TournamentConfig base;
    try {
        base = tournament_config_from_json(doc);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (auto v = validate_config(base); !v.empty()) {
        std::string msg = "invalid tournament config:";
        for (const auto& s : v) msg += "\n  " + s;
        throw UsageError(msg);
    }
    if (a.reps < 1) throw UsageError("--reps must be at least 1");
    if (a.test != "z" && a.test != "fisher") throw UsageError("--test must be 'z' or 'fisher'");

    std::vector<TournamentConfig> configs;
    for (int r = 0; r < a.reps; ++r) {
        TournamentConfig c = base;
        c.seed = mix_seed(base.seed, static_cast<std::uint64_t>(r));
        configs.push_back(std::move(c));
    }
    const int cores = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const int jobs = a.jobs > 0 ? std::min(a.jobs, cores) : cores;
    std::vector<TournamentReport> reports;
    try {
        reports = run_tournaments(configs, jobs);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }

    const fs::path dir = fs::path(a.out) / "reports";
    for (std::size_t r = 0; r < reports.size(); ++r) {
        const std::string stem = "tournament-" + std::to_string(r + 1);
        write_file(dir / (stem + ".json"), report_to_json(reports[r]).dump(2) + "\n");
        write_file(dir / (stem + ".csv"), report_to_csv(reports[r]));
    }
    const auto summary = aggregate(reports, a.test == "z" ? SignificanceTest::z_test : SignificanceTest::fisher_exact);
    write_file(dir / "summary.json", summary_to_json(summary).dump(2) + "\n");

    out << reports.size() << " tournament(s) of " << base.games << " games, k = " << base.onset;
    if (base.k_jitter > 0) out << " +/- " << base.k_jitter;
    out << ", novelty " << (base.novelty ? (base.novelty->name.empty() ? base.novelty->id() : base.novelty->name) : "none")
        << "\n";
    out << "seat  agent     pre     post    asym    delta%     p\n";
    for (const auto& s : summary.seats) {
        auto mean = [](const std::optional<MetricSummary>& m) { return m ? std::optional(m->mean) : std::nullopt; };
        auto with_se = [&](const std::optional<MetricSummary>& m, int prec) {
            std::string t = fmt(mean(m), prec);
            if (m && m->se) t += "+/-" + fmt(m->se, prec);
            return t;
        };
        out << "P" << s.seat << "    " << std::left << std::setw(9) << s.agent << " " << std::setw(7)
            << with_se(s.pre_win_ratio, 2) << " " << std::setw(7) << with_se(s.post_win_ratio, 2) << " "
            << std::setw(7) << with_se(s.asymptotic_win_ratio, 2) << " " << std::setw(10)
            << with_se(s.reaction_delta, 1) << " " << fmt(s.significance.p_value, 3) << std::right << "\n";
    }
    if (summary.tournaments < 2) out << "standard errors need at least 2 repetitions\n";
    out << "wrote " << (dir / "summary.json").string() << "\n";
    return kOk;
}

// ---- novelty ----

int cmd_novelty_list(bool as_json, std::ostream& out) {
    if (as_json) {
        json list = json::array();
        for (const auto& s : enumerate_library()) list.push_back(spec_to_json(s));
        out << list.dump(2) << "\n";
        return kOk;
    }
    for (const auto& s : enumerate_library()) {
        out << std::left << std::setw(30) << s.name << std::setw(16) << to_string(s.category()) << std::setw(8)
            << s.difficulty << s.id() << std::right << "\n";
    }
    return kOk;
}

int cmd_novelty_describe(const std::string& key, std::ostream& out) {
    auto spec = find_novelty(key);
    if (!spec) throw UsageError("unknown novelty '" + key + "'");
    out << spec_to_json(*spec).dump(2) << "\n";
    return kOk;
}

int cmd_novelty_validate(const std::string& path, std::ostream& out) {
    std::vector<NoveltySpec> specs;
    try {
        specs = load_novelties(read_file(path));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        out << path << ": " << e.what() << "\n";
        return kUsageError;
    }
    int bad = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        auto v = validate_spec(specs[i]);
        if (v.empty()) {
            try {
                apply_novelty(default_board(), fixed_instance(specs[i]));
            } catch (const InjectionError& e) {
                v.push_back(e.what());
            }
        }
        const std::string label = specs[i].name.empty() ? "novelty " + std::to_string(i + 1) : specs[i].name;
        if (v.empty()) {
            out << label << ": ok (" << specs[i].id() << ")\n";
        } else {
            ++bad;
            for (const auto& s : v) out << label << ": " << s << "\n";
        }
    }
    return bad ? kUsageError : kOk;
}

// ---- smoke ----

int cmd_smoke(const std::string& agent, std::uint64_t seed, int cap, int timeout_ms, bool strict, std::ostream& out) {
    AgentOptions options;
    options.timeout_ms = timeout_ms;
    std::vector<AgentPtr> owned;
    try {
        owned.push_back(make_agent(agent, options));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    for (int s = 1; s < kSeats; ++s) owned.push_back(make_agent("h1"));
    std::vector<Agent*> seats;
    for (auto& a : owned) seats.push_back(a.get());
    GameLimits limits;
    limits.round_trip_cap = cap;
    const GameOutcome outcome = run_game(std::make_shared<const BoardSchema>(default_board()), seats, seed, limits);
    const int faults = outcome.result.faults.empty() ? 0 : outcome.result.faults.front();
    const bool ended = !outcome.log.events.empty() && outcome.log.events.back().kind == EventKind::game_end;
    out << json{{"agent", agent},
                {"completed", ended},
                {"faults", faults},
                {"turns", outcome.result.turns},
                {"termination", to_string(outcome.result.reason)}}
               .dump()
        << "\n";
    if (!ended) return kRuntimeError;
    return strict && faults > 0 ? kRuntimeError : kOk;
}

// ---- replay ----

int cmd_replay(const std::string& path, const std::string& format, const std::string& dest, std::ostream& out) {
    GameLog log;
    try {
        log = parse_log(read_file(path));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
    const FrameSet frames = build_frames(log);
    std::string text;
    try {
        text = export_frames(frames.frames, format);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (dest.empty()) {
        out << text;
    } else {
        write_file(dest, text);
        out << frames.frames.size() << " frames" << (frames.truncated ? " (log truncated)" : "") << " -> " << dest << "\n";
    }
    return kOk;
}

// ---- serve ----

int cmd_serve(const std::string& host, int port, const ServiceOptions& options, std::ostream& out) {
    SimService service(options);
    const int bound = service.bind(host, port);
    if (bound < 0) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
    out << "listening on http://" << host << ":" << bound << std::endl;
    return service.listen() ? kOk : kRuntimeError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monopoly simulator with novelty injection and tournament evaluation", "novopoly"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    PlayArgs play;
    auto* play_cmd = app.add_subcommand("play", "Play one game and write its log, frames and result");
    play_cmd->add_option("agents,--agents", play.agents, "Four agent ids or endpoints (comma or space separated)");
    play_cmd->add_option("--config", play.config, "Game config file; flags override its fields");
    play_cmd->add_option("--board", play.board, "Board schema file (default: built-in board)");
    play_cmd->add_option("--novelty", play.novelty, "Novelty spec file or library name");
    play_cmd->add_option("--seed", play.seed, "Game seed (default 1)");
    play_cmd->add_option("--round-trip-cap", play.cap, "Round trips before a draw");
    play_cmd->add_option("--timeout-ms", play.timeout_ms, "Per-decision timeout for external agents");
    play_cmd->add_option("--out", play.out, "Output directory")->capture_default_str();

    TournamentArgs tour;
    auto* tour_cmd = app.add_subcommand("tournament", "Run repeated tournaments and aggregate them");
    tour_cmd->add_option("config", tour.config, "Tournament config file")->required();
    tour_cmd->add_option("--reps", tour.reps, "Number of tournaments")->capture_default_str();
    tour_cmd->add_option("--jobs", tour.jobs, "Parallel tournaments (default: available cores)");
    tour_cmd->add_option("--out", tour.out, "Output directory")->capture_default_str();
    tour_cmd->add_option("--seed", tour.seed, "Override the master seed");
    tour_cmd->add_option("--test", tour.test, "Significance test: z or fisher")->capture_default_str();

    auto* nov_cmd = app.add_subcommand("novelty", "Inspect the novelty library");
    nov_cmd->require_subcommand(1);
    bool list_json = false;
    auto* nov_list = nov_cmd->add_subcommand("list", "List library novelties");
    nov_list->add_flag("--json", list_json, "Print full spec documents");
    std::string describe_key;
    auto* nov_describe = nov_cmd->add_subcommand("describe", "Print one novelty spec");
    nov_describe->add_option("id", describe_key, "Name or id")->required();
    std::string validate_path;
    auto* nov_validate = nov_cmd->add_subcommand("validate", "Check a novelty file");
    nov_validate->add_option("path", validate_path, "Spec file")->required();

    std::string host = "127.0.0.1";
    int port = 8080;
    ServiceOptions service;
    std::string data_dir = service.data_dir.string();
    auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP service");
    serve_cmd->add_option("--host", host)->capture_default_str();
    serve_cmd->add_option("--port", port, "0 picks a free port")->capture_default_str();
    serve_cmd->add_option("--data-dir", data_dir, "Run artifact directory")->capture_default_str();
    serve_cmd->add_option("--workers", service.workers, "Runs executing at once")->capture_default_str();
    serve_cmd->add_option("--queue-limit", service.queue_limit, "Queued runs before 503")->capture_default_str();
    serve_cmd->add_option("--static", service.static_dir, "Directory served at /");

    std::string smoke_agent;
    std::uint64_t smoke_seed = 1;
    int smoke_cap = 20;
    int smoke_timeout = 1000;
    bool smoke_strict = false;
    auto* smoke_cmd = app.add_subcommand("smoke", "Play a short game against an agent and count protocol faults");
    smoke_cmd->add_option("agent", smoke_agent, "Agent id or endpoint (exec:<cmd> or tcp:<host>:<port>)")->required();
    smoke_cmd->add_option("--seed", smoke_seed)->capture_default_str();
    smoke_cmd->add_option("--round-trip-cap", smoke_cap)->capture_default_str();
    smoke_cmd->add_option("--timeout-ms", smoke_timeout)->capture_default_str();
    smoke_cmd->add_flag("--strict", smoke_strict, "Exit 1 if any fault occurred");

    std::string stdio_agent;
    auto* stdio_cmd = app.add_subcommand("agent-stdio", "Host a built-in agent on stdin/stdout");
    stdio_cmd->add_option("agent", stdio_agent, "Built-in agent id")->required();

    std::string replay_log;
    std::string replay_format = "ndjson";
    std::string replay_out;
    auto* replay_cmd = app.add_subcommand("replay", "Convert an event log to replay frames");
    replay_cmd->add_option("log", replay_log, "Event log file")->required();
    replay_cmd->add_option("--format", replay_format, "ndjson or snapshots")->capture_default_str();
    replay_cmd->add_option("--out", replay_out, "Output file (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (*play_cmd) return cmd_play(play, out);
        if (*tour_cmd) return cmd_tournament(tour, out);
        if (*nov_list) return cmd_novelty_list(list_json, out);
        if (*nov_describe) return cmd_novelty_describe(describe_key, out);
        if (*nov_validate) return cmd_novelty_validate(validate_path, out);
        if (*serve_cmd) {
            service.data_dir = data_dir;
            return cmd_serve(host, port, service, out);
        }
        if (*smoke_cmd) return cmd_smoke(smoke_agent, smoke_seed, smoke_cap, smoke_timeout, smoke_strict, out);
        if (*stdio_cmd) {
            if (!is_builtin_agent(stdio_agent)) throw UsageError("unknown built-in agent '" + stdio_agent + "'");
            AgentPtr agent = make_agent(stdio_agent);
            serve_agent(*agent, std::cin, std::cout);
            return kOk;
        }
        if (*replay_cmd) return cmd_replay(replay_log, replay_format, replay_out, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kUsageError;
}

}  // namespace novopoly::cli
