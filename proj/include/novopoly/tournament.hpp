#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "novopoly/agents.hpp"
#include "novopoly/board.hpp"
#include "novopoly/engine.hpp"
#include "novopoly/novelty.hpp"

namespace novopoly {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct TournamentConfig {
    int games = 40;    // N
    int onset = 10;    // k, 1-based index of the first game with novelty
    int k_jitter = 0;  // k is drawn uniformly from [onset - k_jitter, onset + k_jitter], clamped to [1, N]
    std::optional<NoveltySpec> novelty;
    std::vector<std::string> agents;  // one per seat
    BoardSchema board = default_board();
    std::uint64_t seed = 1;
    double window = 0.2;  // asymptotic window as a fraction of the post-novelty phase
    GameLimits limits;
    AgentOptions agent_options;
};

// Throws ConfigError. Unknown keys are rejected.
TournamentConfig tournament_config_from_json(const json& j);
json tournament_config_to_json(const TournamentConfig& c);
std::vector<std::string> validate_config(const TournamentConfig& c);

enum class Phase { pre, post };
std::string_view to_string(Phase p);

// One game of a tournament, decided before anything is played.
struct GamePlan {
    int index = 0;  // 1-based
    Phase phase = Phase::pre;
    std::uint64_t seed = 0;
    std::optional<NoveltyInstance> novelty;
};

// Effective onset after jitter.
int effective_onset(const TournamentConfig& c);
std::uint64_t game_seed(std::uint64_t master, int index);
// Pure function of the config: seeds and novelty instances for every game.
std::vector<GamePlan> plan_tournament(const TournamentConfig& c);

struct GameRecord {
    int index = 0;
    Phase phase = Phase::pre;
    std::uint64_t seed = 0;
    std::optional<int> winner;
    Termination termination = Termination::round_trip_cap;
    int turns = 0;
    int round_trips = 0;  // most completed by any player
    std::optional<std::string> novelty_instance;
    json novelty_params;  // null before onset
    std::vector<bool> detected;
    std::vector<int> faults;
};

struct ReactionDelta {
    double value = 0.0;
    bool absolute = false;  // percentage points, because the pre-novelty ratio was 0
};

struct DetectionStats {
    bool detected = false;
    std::optional<int> detection_game;
    std::optional<int> latency;
    bool false_alarm = false;
};

struct AgentMetrics {
    int seat = 0;
    std::string agent;
    std::optional<double> pre_win_ratio;
    std::optional<double> post_win_ratio;
    std::optional<double> asymptotic_win_ratio;
    std::optional<ReactionDelta> reaction;
    DetectionStats detection;
};

struct TournamentReport {
    TournamentConfig config;
    int onset = 0;  // effective k
    std::vector<GameRecord> games;
    std::vector<AgentMetrics> agents;

    int count(Phase p) const;
};

// nullopt for an empty list. Draws count as non-wins.
std::optional<double> win_ratio(std::span<const GameRecord> games, int seat);
std::optional<double> win_ratio(std::span<const GameRecord> games, int seat, Phase phase);
// Number of games in the asymptotic window: ceil(window * post_games).
int asymptotic_window(int post_games, double window);
std::optional<double> asymptotic_win_ratio(const TournamentReport& report, int seat);
std::optional<ReactionDelta> reaction_delta(std::optional<double> pre, std::optional<double> post);
DetectionStats detection_stats(std::span<const GameRecord> games, int seat, int onset);
// Fills report.agents from report.games.
void compute_metrics(TournamentReport& report);

// Creates fresh agents, checks external endpoints, then plays every game in order.
// Throws ConfigError before any game if the config is invalid or an endpoint is unreachable.
TournamentReport run_tournament(const TournamentConfig& config);
// Runs independent tournaments on up to `jobs` threads; results keep input order.
std::vector<TournamentReport> run_tournaments(const std::vector<TournamentConfig>& configs, int jobs);

json report_to_json(const TournamentReport& report);
TournamentReport report_from_json(const json& j);
// One row per game.
std::string report_to_csv(const TournamentReport& report);

struct MetricSummary {
    double mean = 0.0;
    std::optional<double> se;  // needs n >= 2
    int n = 0;
};
// nullopt mean when no sample carries a value.
std::optional<MetricSummary> summarize(std::span<const double> values);

enum class SignificanceTest { z_test, fisher_exact };

struct Significance {
    SignificanceTest test = SignificanceTest::z_test;
    int pre_wins = 0;
    int pre_games = 0;
    int post_wins = 0;
    int post_games = 0;
    std::optional<double> statistic;  // z for the z-test
    std::optional<double> p_value;
};

// Two-sided test of equal win probability in two samples.
Significance two_proportion_test(int x1, int n1, int x2, int n2, SignificanceTest test = SignificanceTest::z_test);

struct SeatSummary {
    int seat = 0;
    std::string agent;
    std::optional<MetricSummary> pre_win_ratio;
    std::optional<MetricSummary> post_win_ratio;
    std::optional<MetricSummary> asymptotic_win_ratio;
    std::optional<MetricSummary> reaction_delta;  // relative deltas only
    int absolute_reactions = 0;                   // tournaments whose delta was in percentage points
    std::optional<MetricSummary> detection_latency;
    int detections = 0;
    int false_alarms = 0;
    Significance significance;
};

struct AggregateSummary {
    int tournaments = 0;
    std::optional<std::string> novelty_id;
    std::vector<SeatSummary> seats;
};

// Throws std::invalid_argument on an empty list or reports of different shape.
AggregateSummary aggregate(std::span<const TournamentReport> reports,
                           SignificanceTest test = SignificanceTest::z_test);
json summary_to_json(const AggregateSummary& s);

}  // namespace novopoly
