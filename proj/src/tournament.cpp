#include "novopoly/tournament.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "novopoly/bridge.hpp"

namespace novopoly {

namespace {

constexpr std::uint64_t kOnsetStream = 0x6f6e736574ULL;
constexpr std::uint64_t kNoveltyStream = 0x6e6f76656c7479ULL;

const std::set<std::string>& config_keys() {
    static const std::set<std::string> keys{"games", "k", "k_jitter", "novelty", "agents", "board", "seed",
                                            "window", "round_trip_cap", "schema_visible", "heuristics",
                                            "timeout_ms"};
    return keys;
}

template <typename T>
T field(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<double>();
}

std::optional<int> read_optional_int(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<int>();
}

Termination termination_from(const std::string& s) {
    if (s == to_string(Termination::last_player_standing)) return Termination::last_player_standing;
    if (s == to_string(Termination::round_trip_cap)) return Termination::round_trip_cap;
    throw std::invalid_argument("unknown termination '" + s + "'");
}

}  // namespace

// ---- config ----

TournamentConfig tournament_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("tournament config must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!config_keys().contains(key)) throw ConfigError("unknown config field '" + key + "'");
    }
    TournamentConfig c;
    c.games = field(j, "games", c.games);
    c.onset = field(j, "k", c.onset);
    c.k_jitter = field(j, "k_jitter", c.k_jitter);
    c.seed = field(j, "seed", c.seed);
    c.window = field(j, "window", c.window);
    c.limits.round_trip_cap = field(j, "round_trip_cap", c.limits.round_trip_cap);
    c.limits.schema_visible = field(j, "schema_visible", c.limits.schema_visible);
    c.agents = field(j, "agents", std::vector<std::string>{});
    c.agent_options.timeout_ms = field(j, "timeout_ms", c.agent_options.timeout_ms);
    if (auto it = j.find("heuristics"); it != j.end() && !it->is_null()) {
        c.agent_options.heuristics = heuristic_config_from_json(*it);
    }
    try {
        if (auto it = j.find("novelty"); it != j.end() && !it->is_null()) {
            if (it->is_string()) {
                auto found = find_novelty(it->get<std::string>());
                if (!found) throw ConfigError("unknown novelty '" + it->get<std::string>() + "'");
                c.novelty = *found;
            } else {
                c.novelty = spec_from_json(*it);
            }
        }
        if (auto it = j.find("board"); it != j.end() && !it->is_null()) {
            c.board = it->is_string() ? load_schema_file(it->get<std::string>()) : schema_from_json(*it);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return c;
}

json tournament_config_to_json(const TournamentConfig& c) {
    json j{{"games", c.games},
           {"k", c.onset},
           {"k_jitter", c.k_jitter},
           {"agents", c.agents},
           {"seed", c.seed},
           {"window", c.window},
           {"round_trip_cap", c.limits.round_trip_cap},
           {"schema_visible", c.limits.schema_visible},
           {"heuristics", heuristic_config_to_json(c.agent_options.heuristics)},
           {"timeout_ms", c.agent_options.timeout_ms},
           {"novelty", c.novelty ? spec_to_json(*c.novelty) : json(nullptr)}};
    if (!(c.board == default_board())) j["board"] = schema_to_json(c.board);
    return j;
}

std::vector<std::string> validate_config(const TournamentConfig& c) {
    std::vector<std::string> out;
    if (c.games < 1) out.push_back("games must be at least 1");
    if (c.onset < 1 || c.onset > c.games) out.push_back("k must satisfy 1 <= k <= games");
    if (c.k_jitter < 0) out.push_back("k_jitter must be nonnegative");
    if (!(c.window > 0.0 && c.window <= 1.0)) out.push_back("window must be in (0, 1]");
    if (c.limits.round_trip_cap < 1) out.push_back("round_trip_cap must be positive");
    if (c.agents.size() != static_cast<std::size_t>(kSeats)) {
        out.push_back("exactly " + std::to_string(kSeats) + " agents are required");
    }
    for (const auto& a : c.agents) {
        if (is_builtin_agent(a)) continue;
        try {
            Endpoint::parse(a);
        } catch (const std::exception&) {
            out.push_back("unknown agent '" + a + "'");
        }
    }
    for (const auto& v : validate_schema(c.board)) out.push_back("board: " + v);
    if (c.novelty) {
        auto v = validate_spec(*c.novelty);
        for (const auto& s : v) out.push_back("novelty: " + s);
        if (v.empty() && validate_schema(c.board).empty()) {
            // Every possible instance must apply to the base board.
            std::vector<json> variants{c.novelty->params};
            if (c.novelty->sampler) {
                variants.clear();
                for (const auto& choice : c.novelty->sampler->choices) {
                    json p = c.novelty->params;
                    p[c.novelty->sampler->param] = choice;
                    variants.push_back(std::move(p));
                }
            }
            for (const auto& p : variants) {
                NoveltyInstance inst{c.novelty->id(), c.novelty->family, p, 0};
                try {
                    apply_novelty(c.board, c.limits, inst);
                } catch (const InjectionError& e) {
                    out.push_back(std::string("novelty: ") + e.what());
                    break;
                }
            }
        }
    }
    return out;
}

// ---- plan ----

std::string_view to_string(Phase p) { return p == Phase::pre ? "pre" : "post"; }

std::uint64_t game_seed(std::uint64_t master, int index) {
    return mix_seed(master, static_cast<std::uint64_t>(index));
}

int effective_onset(const TournamentConfig& c) {
    if (c.k_jitter <= 0) return c.onset;
    Rng rng(mix_seed(c.seed, kOnsetStream));
    const int k = c.onset - c.k_jitter + static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * c.k_jitter + 1)));
    return std::clamp(k, 1, c.games);
}

std::vector<GamePlan> plan_tournament(const TournamentConfig& c) {
    const int k = effective_onset(c);
    const std::uint64_t novelty_seed = mix_seed(c.seed, kNoveltyStream);
    std::vector<GamePlan> plan;
    plan.reserve(static_cast<std::size_t>(std::max(c.games, 0)));
    for (int g = 1; g <= c.games; ++g) {
        GamePlan p;
        p.index = g;
        p.seed = game_seed(c.seed, g);
        p.phase = g < k ? Phase::pre : Phase::post;
        if (p.phase == Phase::post && c.novelty) {
            // Each game has its own stream so any single game can be replayed alone.
            Rng rng(mix_seed(novelty_seed, static_cast<std::uint64_t>(g)));
            p.novelty = sample_instance(*c.novelty, rng, g);
        }
        plan.push_back(std::move(p));
    }
    return plan;
}

// ---- metrics ----

int TournamentReport::count(Phase p) const {
    return static_cast<int>(std::count_if(games.begin(), games.end(), [p](const GameRecord& g) { return g.phase == p; }));
}

std::optional<double> win_ratio(std::span<const GameRecord> games, int seat) {
    if (games.empty()) return std::nullopt;
    const auto wins = std::count_if(games.begin(), games.end(), [seat](const GameRecord& g) { return g.winner == seat; });
    return static_cast<double>(wins) / static_cast<double>(games.size());
}

std::optional<double> win_ratio(std::span<const GameRecord> games, int seat, Phase phase) {
    std::vector<GameRecord> subset;
    std::copy_if(games.begin(), games.end(), std::back_inserter(subset), [phase](const GameRecord& g) { return g.phase == phase; });
    return win_ratio(subset, seat);
}

int asymptotic_window(int post_games, double window) {
    if (post_games <= 0 || window <= 0.0) return 0;
    // The epsilon keeps exact products like 0.2 * 30 from rounding up.
    const int w = static_cast<int>(std::ceil(window * post_games - 1e-9));
    return std::clamp(w, 0, post_games);
}

std::optional<double> asymptotic_win_ratio(const TournamentReport& report, int seat) {
    std::vector<GameRecord> post;
    for (const auto& g : report.games) {
        if (g.phase == Phase::post) post.push_back(g);
    }
    const int w = asymptotic_window(static_cast<int>(post.size()), report.config.window);
    if (w == 0) return std::nullopt;
    return win_ratio(std::span<const GameRecord>(post).last(static_cast<std::size_t>(w)), seat);
}

std::optional<ReactionDelta> reaction_delta(std::optional<double> pre, std::optional<double> post) {
    if (!pre || !post) return std::nullopt;
    if (*pre > 0.0) return ReactionDelta{100.0 * (*post - *pre) / *pre, false};
    return ReactionDelta{100.0 * (*post - *pre), true};
}

DetectionStats detection_stats(std::span<const GameRecord> games, int seat, int onset) {
    DetectionStats d;
    for (const auto& g : games) {
        const bool flagged = seat >= 0 && static_cast<std::size_t>(seat) < g.detected.size() && g.detected[static_cast<std::size_t>(seat)];
        if (!flagged) continue;
        if (g.index < onset) d.false_alarm = true;
        if (!d.detection_game) d.detection_game = g.index;
    }
    d.detected = d.detection_game.has_value();
    if (d.detection_game && *d.detection_game >= onset) d.latency = *d.detection_game - onset;
    return d;
}

void compute_metrics(TournamentReport& report) {
    report.agents.clear();
    for (int seat = 0; seat < static_cast<int>(report.config.agents.size()); ++seat) {
        AgentMetrics m;
        m.seat = seat;
        m.agent = report.config.agents[static_cast<std::size_t>(seat)];
        m.pre_win_ratio = win_ratio(report.games, seat, Phase::pre);
        m.post_win_ratio = win_ratio(report.games, seat, Phase::post);
        m.asymptotic_win_ratio = asymptotic_win_ratio(report, seat);
        m.reaction = reaction_delta(m.pre_win_ratio, m.post_win_ratio);
        m.detection = detection_stats(report.games, seat, report.onset);
        report.agents.push_back(std::move(m));
    }
}

// ---- running ----

TournamentReport run_tournament(const TournamentConfig& config) {
    if (auto v = validate_config(config); !v.empty()) throw ConfigError(v.front());

    std::vector<AgentPtr> agents;
    for (const auto& spec : config.agents) {
        AgentPtr agent = make_agent(spec, config.agent_options);
        if (auto* remote = dynamic_cast<RemoteAgent*>(agent.get())) {
            try {
                remote->connect();
            } catch (const ProtocolFault& e) {
                throw ConfigError("agent '" + spec + "' is unreachable: " + e.what());
            }
        }
        agents.push_back(std::move(agent));
    }
    std::vector<Agent*> seats;
    for (auto& a : agents) seats.push_back(a.get());

    TournamentReport report;
    report.config = config;
    report.onset = effective_onset(config);

    auto base = std::make_shared<const BoardSchema>(config.board);
    std::map<std::string, std::pair<std::shared_ptr<const BoardSchema>, GameLimits>> noveled;
    for (const auto& plan : plan_tournament(config)) {
        std::shared_ptr<const BoardSchema> schema = base;
        GameLimits limits = config.limits;
        if (plan.novelty) {
            const std::string id = plan.novelty->id();
            auto it = noveled.find(id);
            if (it == noveled.end()) {
                auto [s, l] = apply_novelty(config.board, config.limits, *plan.novelty);
                it = noveled.emplace(id, std::make_pair(std::make_shared<const BoardSchema>(std::move(s)), l)).first;
            }
            schema = it->second.first;
            limits = it->second.second;
        }
        GameOutcome outcome = run_game(schema, seats, plan.seed, limits);
        GameRecord rec;
        rec.index = plan.index;
        rec.phase = plan.phase;
        rec.seed = plan.seed;
        rec.winner = outcome.result.winner;
        rec.termination = outcome.result.reason;
        rec.turns = outcome.result.turns;
        rec.round_trips = outcome.result.max_round_trips();
        if (plan.novelty) {
            rec.novelty_instance = plan.novelty->id();
            rec.novelty_params = plan.novelty->params;
        }
        rec.detected = outcome.result.novelty_detected;
        rec.faults = outcome.result.faults;
        report.games.push_back(std::move(rec));
    }
    compute_metrics(report);
    return report;
}

std::vector<TournamentReport> run_tournaments(const std::vector<TournamentConfig>& configs, int jobs) {
    std::vector<std::optional<TournamentReport>> slots(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                slots[i] = run_tournament(configs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int n = std::clamp(jobs, 1, std::max(1, static_cast<int>(configs.size())));
    std::vector<std::thread> threads;
    for (int t = 1; t < n; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    std::vector<TournamentReport> out;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

// ---- serialization ----

json report_to_json(const TournamentReport& r) {
    json games = json::array();
    for (const auto& g : r.games) {
        games.push_back({{"index", g.index},
                         {"phase", to_string(g.phase)},
                         {"seed", g.seed},
                         {"winner", optional_int(g.winner)},
                         {"termination", to_string(g.termination)},
                         {"turns", g.turns},
                         {"round_trips", g.round_trips},
                         {"novelty_instance", g.novelty_instance ? json(*g.novelty_instance) : json(nullptr)},
                         {"novelty_params", g.novelty_params},
                         {"detected", g.detected},
                         {"faults", g.faults}});
    }
    json agents = json::array();
    for (const auto& m : r.agents) {
        agents.push_back({{"seat", m.seat},
                          {"agent", m.agent},
                          {"pre_win_ratio", optional_number(m.pre_win_ratio)},
                          {"post_win_ratio", optional_number(m.post_win_ratio)},
                          {"asymptotic_win_ratio", optional_number(m.asymptotic_win_ratio)},
                          {"reaction_delta", m.reaction ? json{{"value", m.reaction->value}, {"absolute", m.reaction->absolute}}
                                                        : json(nullptr)},
                          {"detection", {{"detected", m.detection.detected},
                                         {"detection_game", optional_int(m.detection.detection_game)},
                                         {"latency", optional_int(m.detection.latency)},
                                         {"false_alarm", m.detection.false_alarm}}}});
    }
    const int pre = r.count(Phase::pre);
    return json{{"config", tournament_config_to_json(r.config)},
                {"k", r.onset},
                {"phases", {{"pre", {{"first", pre ? json(1) : json(nullptr)}, {"last", pre ? json(pre) : json(nullptr)}, {"games", pre}}},
                            {"post", {{"first", r.onset}, {"last", r.config.games}, {"games", r.count(Phase::post)}}}}},
                {"games", games},
                {"agents", agents}};
}

TournamentReport report_from_json(const json& j) {
    TournamentReport r;
    r.config = tournament_config_from_json(j.at("config"));
    r.onset = j.at("k").get<int>();
    for (const auto& g : j.at("games")) {
        GameRecord rec;
        rec.index = g.at("index").get<int>();
        rec.phase = g.at("phase").get<std::string>() == "pre" ? Phase::pre : Phase::post;
        rec.seed = g.at("seed").get<std::uint64_t>();
        rec.winner = read_optional_int(g, "winner");
        rec.termination = termination_from(g.at("termination").get<std::string>());
        rec.turns = g.at("turns").get<int>();
        rec.round_trips = g.at("round_trips").get<int>();
        if (!g.at("novelty_instance").is_null()) rec.novelty_instance = g["novelty_instance"].get<std::string>();
        rec.novelty_params = g.at("novelty_params");
        rec.detected = g.at("detected").get<std::vector<bool>>();
        rec.faults = g.at("faults").get<std::vector<int>>();
        r.games.push_back(std::move(rec));
    }
    for (const auto& a : j.at("agents")) {
        AgentMetrics m;
        m.seat = a.at("seat").get<int>();
        m.agent = a.at("agent").get<std::string>();
        m.pre_win_ratio = read_optional(a, "pre_win_ratio");
        m.post_win_ratio = read_optional(a, "post_win_ratio");
        m.asymptotic_win_ratio = read_optional(a, "asymptotic_win_ratio");
        if (const auto& rd = a.at("reaction_delta"); !rd.is_null()) {
            m.reaction = ReactionDelta{rd.at("value").get<double>(), rd.at("absolute").get<bool>()};
        }
        const auto& d = a.at("detection");
        m.detection.detected = d.at("detected").get<bool>();
        m.detection.detection_game = read_optional_int(d, "detection_game");
        m.detection.latency = read_optional_int(d, "latency");
        m.detection.false_alarm = d.at("false_alarm").get<bool>();
        r.agents.push_back(std::move(m));
    }
    return r;
}

std::string report_to_csv(const TournamentReport& r) {
    std::ostringstream out;
    const std::size_t seats = r.config.agents.size();
    out << "game,phase,seed,winner,termination,turns,round_trips,novelty_instance";
    for (std::size_t s = 0; s < seats; ++s) out << ",detected_" << s;
    for (std::size_t s = 0; s < seats; ++s) out << ",faults_" << s;
    out << '\n';
    for (const auto& g : r.games) {
        out << g.index << ',' << to_string(g.phase) << ',' << g.seed << ',';
        if (g.winner) out << *g.winner;
        out << ',' << to_string(g.termination) << ',' << g.turns << ',' << g.round_trips << ','
            << g.novelty_instance.value_or("");
        for (std::size_t s = 0; s < seats; ++s) out << ',' << (s < g.detected.size() && g.detected[s] ? 1 : 0);
        for (std::size_t s = 0; s < seats; ++s) out << ',' << (s < g.faults.size() ? g.faults[s] : 0);
        out << '\n';
    }
    return out.str();
}

// ---- aggregation ----

std::optional<MetricSummary> summarize(std::span<const double> values) {
    if (values.empty()) return std::nullopt;
    MetricSummary m;
    m.n = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    m.mean = sum / m.n;
    if (m.n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - m.mean) * (v - m.mean);
        m.se = std::sqrt(ss / (m.n - 1)) / std::sqrt(static_cast<double>(m.n));
    }
    return m;
}

namespace {

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double fisher_p(int x1, int n1, int x2, int n2) {
    const int wins = x1 + x2;
    const int total = n1 + n2;
    const int lo = std::max(0, wins - n2);
    const int hi = std::min(wins, n1);
    const double denom = log_choose(total, n1);
    auto prob = [&](int a) { return std::exp(log_choose(wins, a) + log_choose(total - wins, n1 - a) - denom); };
    const double observed = prob(x1);
    double p = 0.0;
    for (int a = lo; a <= hi; ++a) {
        const double pa = prob(a);
        if (pa <= observed * (1.0 + 1e-7)) p += pa;
    }
    return std::min(1.0, p);
}

}  // namespace

Significance two_proportion_test(int x1, int n1, int x2, int n2, SignificanceTest test) {
    Significance s{test, x1, n1, x2, n2, std::nullopt, std::nullopt};
    if (n1 <= 0 || n2 <= 0) return s;
    if (test == SignificanceTest::fisher_exact) {
        s.p_value = fisher_p(x1, n1, x2, n2);
        return s;
    }
    const double p1 = static_cast<double>(x1) / n1;
    const double p2 = static_cast<double>(x2) / n2;
    const double pooled = static_cast<double>(x1 + x2) / (n1 + n2);
    const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
    if (se == 0.0) {
        s.statistic = 0.0;
        s.p_value = 1.0;
        return s;
    }
    const double z = (p2 - p1) / se;
    s.statistic = z;
    s.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
    return s;
}

AggregateSummary aggregate(std::span<const TournamentReport> reports, SignificanceTest test) {
    if (reports.empty()) throw std::invalid_argument("nothing to aggregate");
    const auto& first = reports.front().config;
    auto spec_id = [](const TournamentConfig& c) { return c.novelty ? std::optional(c.novelty->id()) : std::nullopt; };
    for (const auto& r : reports) {
        if (spec_id(r.config) != spec_id(first)) throw std::invalid_argument("reports use different novelty specs");
        if (r.config.agents != first.agents) throw std::invalid_argument("reports use different agent seatings");
        if (r.config.games != first.games) throw std::invalid_argument("reports use different tournament lengths");
        if (r.agents.size() != first.agents.size()) throw std::invalid_argument("report is missing agent metrics");
    }
    AggregateSummary out;
    out.tournaments = static_cast<int>(reports.size());
    out.novelty_id = spec_id(first);
    for (std::size_t seat = 0; seat < first.agents.size(); ++seat) {
        SeatSummary s;
        s.seat = static_cast<int>(seat);
        s.agent = first.agents[seat];
        std::vector<double> pre, post, asym, delta, latency;
        int pre_wins = 0, pre_games = 0, post_wins = 0, post_games = 0;
        for (const auto& r : reports) {
            const AgentMetrics& m = r.agents[seat];
            if (m.pre_win_ratio) pre.push_back(*m.pre_win_ratio);
            if (m.post_win_ratio) post.push_back(*m.post_win_ratio);
            if (m.asymptotic_win_ratio) asym.push_back(*m.asymptotic_win_ratio);
            if (m.reaction && !m.reaction->absolute) delta.push_back(m.reaction->value);
            if (m.reaction && m.reaction->absolute) ++s.absolute_reactions;
            if (m.detection.latency) latency.push_back(*m.detection.latency);
            if (m.detection.detected) ++s.detections;
            if (m.detection.false_alarm) ++s.false_alarms;
            for (const auto& g : r.games) {
                const bool won = g.winner == static_cast<int>(seat);
                if (g.phase == Phase::pre) {
                    ++pre_games;
                    pre_wins += won;
                } else {
                    ++post_games;
                    post_wins += won;
                }
            }
        }
        s.pre_win_ratio = summarize(pre);
        s.post_win_ratio = summarize(post);
        s.asymptotic_win_ratio = summarize(asym);
        s.reaction_delta = summarize(delta);
        s.detection_latency = summarize(latency);
        s.significance = two_proportion_test(pre_wins, pre_games, post_wins, post_games, test);
        out.seats.push_back(std::move(s));
    }
    return out;
}

json summary_to_json(const AggregateSummary& s) {
    auto metric = [](const std::optional<MetricSummary>& m) {
        if (!m) return json(nullptr);
        return json{{"mean", m->mean}, {"se", m->se ? json(*m->se) : json(nullptr)}, {"n", m->n}};
    };
    json seats = json::array();
    for (const auto& x : s.seats) {
        const auto& sig = x.significance;
        seats.push_back({{"seat", x.seat},
                         {"agent", x.agent},
                         {"pre_win_ratio", metric(x.pre_win_ratio)},
                         {"post_win_ratio", metric(x.post_win_ratio)},
                         {"asymptotic_win_ratio", metric(x.asymptotic_win_ratio)},
                         {"reaction_delta", metric(x.reaction_delta)},
                         {"absolute_reactions", x.absolute_reactions},
                         {"detection_latency", metric(x.detection_latency)},
                         {"detections", x.detections},
                         {"false_alarms", x.false_alarms},
                         {"significance",
                          {{"test", sig.test == SignificanceTest::z_test ? "two-proportion-z" : "fisher-exact"},
                           {"pre_wins", sig.pre_wins},
                           {"pre_games", sig.pre_games},
                           {"post_wins", sig.post_wins},
                           {"post_games", sig.post_games},
                           {"statistic", sig.statistic ? json(*sig.statistic) : json(nullptr)},
                           {"p_value", sig.p_value ? json(*sig.p_value) : json(nullptr)}}}});
    }
    return json{{"tournaments", s.tournaments},
                {"se_available", s.tournaments >= 2},
                {"novelty_id", s.novelty_id ? json(*s.novelty_id) : json(nullptr)},
                {"seats", seats}};
}

}  // namespace novopoly
