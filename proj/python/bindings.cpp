#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "novopoly/agents.hpp"
#include "novopoly/novelty.hpp"
#include "novopoly/replay.hpp"
#include "novopoly/tournament.hpp"

namespace py = pybind11;
using namespace novopoly;

namespace {

// Documents cross the boundary as JSON text; the Python package decodes them.
std::string play_game(const std::vector<std::string>& agents, std::uint64_t seed, const std::string& novelty,
                      int round_trip_cap) {
    BoardSchema board = default_board();
    GameLimits limits;
    limits.round_trip_cap = round_trip_cap;
    json instance = nullptr;
    if (!novelty.empty()) {
        const auto spec = find_novelty(novelty);
        if (!spec) throw std::invalid_argument("unknown novelty '" + novelty + "'");
        const NoveltyInstance inst = instance_for_game(*spec, seed);
        std::tie(board, limits) = apply_novelty(board, limits, inst);
        instance = instance_to_json(inst);
    }
    std::vector<AgentPtr> owned;
    std::vector<Agent*> seats;
    for (const auto& id : agents) {
        owned.push_back(make_agent(id));
        seats.push_back(owned.back().get());
    }
    GameOutcome outcome;
    {
        py::gil_scoped_release release;
        outcome = run_game(std::make_shared<const BoardSchema>(std::move(board)), seats, seed, limits);
    }
    outcome.log.seats = agents;
    return json{{"result", result_to_json(outcome.result)},
                {"novelty_instance", instance},
                {"log", write_log(outcome.log)}}
        .dump();
}

std::string run_tournament_json(const std::string& config) {
    const TournamentConfig c = tournament_config_from_json(json::parse(config));
    if (auto v = validate_config(c); !v.empty()) throw ConfigError(v.front());
    TournamentReport report;
    {
        py::gil_scoped_release release;
        report = run_tournament(c);
    }
    return report_to_json(report).dump();
}

std::string novelty_library() {
    json list = json::array();
    for (const auto& s : enumerate_library()) list.push_back(spec_to_json(s));
    return list.dump();
}

std::string frames(const std::string& log_text, const std::string& format) {
    return export_frames(build_frames(parse_log(log_text)).frames, format);
}

std::vector<std::string> validate_board(const std::string& text) { return validate_schema(load_schema(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    m.def("play_game", &play_game, py::arg("agents"), py::arg("seed") = 1, py::arg("novelty") = "",
          py::arg("round_trip_cap") = GameLimits{}.round_trip_cap);
    m.def("run_tournament", &run_tournament_json, py::arg("config"));
    m.def("novelty_library", &novelty_library);
    m.def("frames", &frames, py::arg("log"), py::arg("format") = "ndjson");
    m.def("default_board", [] { return std::string(default_board_text()); });
    m.def("validate_board", &validate_board, py::arg("text"));
    m.def("agent_ids", [] {
        std::vector<std::string> ids;
        for (const auto& a : agent_catalog()) ids.push_back(a.id);
        return ids;
    });
}
