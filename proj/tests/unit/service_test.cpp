#include <algorithm>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "novopoly/service.hpp"

using namespace novopoly;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("novopoly-service-" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

ServiceOptions options(const std::string& name, int workers = 1) {
    ServiceOptions o;
    o.data_dir = scratch(name);
    o.workers = workers;
    return o;
}

json parsed(const std::pair<int, std::string>& r) { return json::parse(r.second); }

const std::string four = R"(["h1", "h2", "simple", "hybrid"])";

}  // namespace

TEST_CASE("catalog endpoints") {
    SimService svc(options("catalog"));
    auto [status, body] = svc.handle("GET", "/api/agents");
    CHECK(status == 200);
    const json agents = json::parse(body)["agents"];
    CHECK(agents.size() >= 4);
    const json novelties = parsed(svc.handle("GET", "/api/novelties"));
    CHECK(novelties["selection"] == "single");
    CHECK(novelties["novelties"].size() == 4);
    CHECK(svc.handle("GET", "/api/health").first == 200);
    CHECK(svc.handle("GET", "/api/nothing").first == 404);
    CHECK(parsed(svc.handle("GET", "/nope"))["error"]["code"] == "not_found");
}

TEST_CASE("game requests are validated") {
    SimService svc(options("validation"));
    auto r = svc.handle("POST", "/api/games", R"({"agents": ["h1", "h2", "simple"]})");
    CHECK(r.first == 400);
    CHECK(parsed(r)["error"]["code"] == "invalid_agents");
    r = svc.handle("POST", "/api/games", R"({"agents": ["h1", "h2", "simple", "exec:/bin/sh"]})");
    CHECK(r.first == 400);
    r = svc.handle("POST", "/api/games", R"({"agents": )" + four + R"(, "novelty": "warp-drive"})");
    CHECK(r.first == 400);
    CHECK(parsed(r)["error"]["code"] == "invalid_novelty");
    r = svc.handle("POST", "/api/games", R"({"agents": )" + four + R"(, "seed": -3})");
    CHECK(r.first == 400);
    CHECK(svc.handle("POST", "/api/games", "not json").first == 400);
}

TEST_CASE("a game run serves frames in pages") {
    const auto opts = options("game");
    SimService svc(opts);
    auto r = svc.handle("POST", "/api/games", R"({"agents": )" + four + R"(, "seed": 12, "novelty": {"key": "dice-count", "params": {"count": 3}}})");
    REQUIRE(r.first == 202);
    const json handle = parsed(r);
    const std::string id = handle["id"];
    CHECK(handle["config"]["seed"] == 12);
    CHECK(handle["config"]["novelty_instance"]["params"]["count"] == 3);
    svc.drain();

    const json result = parsed(svc.handle("GET", "/api/games/" + id + "/result"));
    CHECK(result["result"].contains("winner"));
    const json board = parsed(svc.handle("GET", "/api/games/" + id + "/board"));
    CHECK(board["slot_count"] == 40);

    int from = 0, total = -1, pages = 0;
    json last;
    while (true) {
        const json page = parsed(svc.handle("GET", "/api/games/" + id + "/frames?from=" + std::to_string(from) + "&count=250"));
        total = page["total"];
        for (const auto& f : page["frames"]) {
            CHECK(f["index"] == from);
            CHECK(f["dice"].size() <= 3);
            ++from;
            last = f;
        }
        ++pages;
        if (page["end"]) break;
        REQUIRE(pages < 10000);
    }
    CHECK(from == total);
    CHECK(last["final"] == true);
    CHECK(svc.handle("GET", "/api/games/" + id + "/frames?from=x").first == 400);
    const auto log = svc.handle("GET", "/api/games/" + id + "/log");
    CHECK(log.first == 200);
    CHECK(std::filesystem::exists(opts.data_dir / id / "frames.ndjson"));

    CHECK(svc.handle("DELETE", "/api/games/" + id).first == 200);
    CHECK(svc.handle("GET", "/api/games/" + id).first == 404);
}

TEST_CASE("omitted seed is chosen by the service and echoed") {
    SimService svc(options("seedless"));
    const json handle = parsed(svc.handle("POST", "/api/games", R"({"agents": )" + four + "}"));
    CHECK(handle["config"]["seed"].is_number_unsigned());
    svc.drain();
}

TEST_CASE("results of a queued run are not ready") {
    SimService svc(options("busy"));
    const auto t = svc.handle("POST", "/api/tournaments", R"({"agents": ["h1", "h2", "h1", "h2"], "games": 40, "k": 10, "seed": 3})");
    REQUIRE(t.first == 202);
    const json g = parsed(svc.handle("POST", "/api/games", R"({"agents": )" + four + R"(, "seed": 1})"));
    const std::string id = g["id"];
    const auto r = svc.handle("GET", "/api/games/" + id + "/result");
    CHECK(r.first == 409);
    CHECK(parsed(r)["error"]["code"] == "not_ready");
    const json page = parsed(svc.handle("GET", "/api/games/" + id + "/frames"));
    CHECK(page["end"] == false);
    CHECK(page["total"].is_null());
    CHECK(svc.handle("DELETE", "/api/games/" + id).first == 409);
    svc.drain();
    CHECK(svc.handle("GET", "/api/games/" + id + "/result").first == 200);
}

TEST_CASE("tournament runs") {
    SimService svc(options("tournament"));
    auto r = svc.handle("POST", "/api/tournaments", R"({"agents": ["simple", "simple", "simple", "simple"], "games": 4, "k": 5})");
    CHECK(r.first == 400);
    CHECK(parsed(r)["error"]["code"] == "invalid_config");
    r = svc.handle("POST", "/api/tournaments", R"({"agents": ["simple", "simple", "simple", "simple"], "games": 4, "k": 2, "bogus": 1})");
    CHECK(r.first == 400);
    r = svc.handle("POST", "/api/tournaments",
                   R"({"agents": ["simple", "simple", "simple", "simple"], "games": 4, "k": 2, "seed": 5, "novelty": "dice-count-4"})");
    REQUIRE(r.first == 202);
    const std::string id = parsed(r)["id"];
    svc.drain();
    const json report = parsed(svc.handle("GET", "/api/tournaments/" + id + "/report"));
    CHECK(report["games"].size() == 4);
    const auto csv = svc.handle("GET", "/api/tournaments/" + id + "/report?format=csv");
    CHECK(csv.first == 200);
    CHECK(std::count(csv.second.begin(), csv.second.end(), '\n') == 5);
    CHECK(svc.handle("GET", "/api/games/" + id).first == 404);
}

TEST_CASE("the service answers over HTTP") {
    SimService svc(options("socket"));
    const int port = svc.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread server([&] { svc.listen(); });
    httplib::Client client("127.0.0.1", port);
    auto res = client.Get("/api/agents");
    REQUIRE(res);
    CHECK(res->status == 200);
    res = client.Post("/api/games", R"({"agents": ["h1"]})", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    CHECK(json::parse(res->body)["error"]["code"] == "invalid_agents");
    svc.stop();
    server.join();
}
