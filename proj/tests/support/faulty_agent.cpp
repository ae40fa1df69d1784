// Deliberately misbehaving agent speaking the line protocol on stdin/stdout.
//
//   faulty_agent MODE [STATS_FILE]
//
// Modes: garbage (unparseable replies), illegal (legal JSON, illegal action),
// silent (never replies), sleep (replies after 3x the usual timeout),
// crash (exits on the first request), mixed (cycles garbage, illegal, silent,
// unknown kind, valid). STATS_FILE receives {"requests", "bad"} at exit.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "json.hpp"

using nlohmann::json;

namespace {

json reply(const json& request, json action) {
    return json{{"type", "action-response"},
                {"protocol_version", 1},
                {"request_id", request.value("request_id", 0)},
                {"action", std::move(action)}};
}

json first_legal(const json& request) {
    const json& menu = request.at("menu");
    if (menu.empty()) return json{{"kind", "pass"}};
    json action{{"kind", menu[0].at("kind")}};
    if (!menu[0].at("slots").empty()) action["slot"] = menu[0]["slots"][0];
    return action;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "mixed";
    const std::string stats = argc > 2 ? argv[2] : "";
    long requests = 0;
    long bad = 0;
    const auto write_stats = [&] {
        if (stats.empty()) return;
        std::ofstream(stats) << json{{"requests", requests}, {"bad", bad}}.dump() << '\n';
    };

    std::string line;
    while (std::getline(std::cin, line)) {
        json msg = json::parse(line, nullptr, false);
        if (msg.is_discarded() || msg.value("type", "") != "decision-request") continue;
        const long n = requests++;
        std::string choice = mode;
        if (mode == "mixed") {
            static const char* cycle[] = {"garbage", "illegal", "silent", "unknown", "valid"};
            choice = cycle[n % 5];
        }
        if (choice != "valid") ++bad;
        write_stats();
        if (choice == "crash") return 3;
        if (choice == "silent") continue;
        if (choice == "sleep") std::this_thread::sleep_for(std::chrono::milliseconds(150));
        if (choice == "garbage") {
            std::cout << "{not json at all" << std::endl;
        } else if (choice == "illegal") {
            std::cout << reply(msg, json{{"kind", "unmortgage"}, {"slot", "Go"}}).dump() << std::endl;
        } else if (choice == "unknown") {
            std::cout << reply(msg, json{{"kind", "flip_the_table"}}).dump() << std::endl;
        } else {
            std::cout << reply(msg, first_legal(msg)).dump() << std::endl;
        }
    }
    write_stats();
    return 0;
}
