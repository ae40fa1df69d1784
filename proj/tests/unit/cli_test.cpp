#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "novopoly/board.hpp"

namespace fs = std::filesystem;

namespace {

struct Call {
    int code = 0;
    std::string out;
    std::string err;
};

Call cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    Call c;
    c.code = novopoly::cli::run(args, out, err);
    c.out = out.str();
    c.err = err.str();
    return c;
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("novopoly-cli-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("play writes the log, frames and result") {
    const auto dir = scratch("play");
    const auto c = cli({"play", "h1,h2,simple,hybrid", "--seed", "7", "--novelty", "dice-count-4", "--out", dir.string()});
    CHECK_MESSAGE(c.code == 0, c.err);
    CHECK(fs::exists(dir / "logs" / "game-7.ndjson"));
    CHECK(fs::exists(dir / "frames" / "game-7.ndjson"));
    CHECK(fs::exists(dir / "reports" / "game-7.json"));
    CHECK(c.out.rfind("seed 7: ", 0) == 0);

    const auto replay = cli({"replay", (dir / "logs" / "game-7.ndjson").string()});
    CHECK(replay.code == 0);
    std::ifstream frames(dir / "frames" / "game-7.ndjson");
    std::stringstream text;
    text << frames.rdbuf();
    CHECK(replay.out == text.str());
}

TEST_CASE("usage errors exit with 2") {
    CHECK(cli({"play", "h1,h2"}).code == 2);
    CHECK(cli({"play", "h1,h2,h1,wizard"}).code == 2);
    CHECK(cli({"novelty", "describe", "no-such-novelty"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"replay", "/nonexistent/log.ndjson"}).code != 0);
    CHECK(cli({}).code == 2);
}

TEST_CASE("novelty list, describe and validate") {
    const auto list = cli({"novelty", "list"});
    CHECK(list.code == 0);
    CHECK(list.out.find("dice-count-4") != std::string::npos);
    const auto describe = cli({"novelty", "describe", "dice-count-4"});
    CHECK(describe.code == 0);
    CHECK(novopoly::json::parse(describe.out)["family"] == "dice-count");

    const auto dir = scratch("validate");
    write(dir / "good.json", R"({"name": "four", "family": "dice-count", "params": {"count": 4}})");
    write(dir / "bad.json", R"({"name": "nine", "family": "dice-count", "params": {"count": 9}})");
    write(dir / "broken.json", "{");
    CHECK(cli({"novelty", "validate", (dir / "good.json").string()}).code == 0);
    const auto bad = cli({"novelty", "validate", (dir / "bad.json").string()});
    CHECK(bad.code == 2);
    CHECK(bad.out.find("count") != std::string::npos);
    CHECK(cli({"novelty", "validate", (dir / "broken.json").string()}).code == 2);
}

TEST_CASE("a single tournament has no standard errors") {
    const auto dir = scratch("tournament");
    write(dir / "t.json", R"({"games": 4, "k": 2, "agents": ["simple", "simple", "simple", "simple"], "seed": 3, "novelty": "dice-count-4"})");
    const auto c = cli({"tournament", (dir / "t.json").string(), "--reps", "1", "--out", dir.string()});
    CHECK_MESSAGE(c.code == 0, c.err);
    CHECK(c.out.find("standard errors need at least 2 repetitions") != std::string::npos);
    CHECK(fs::exists(dir / "reports" / "summary.json"));
    CHECK(fs::exists(dir / "reports" / "tournament-1.csv"));

    write(dir / "bad.json", R"({"games": 4, "k": 9, "agents": ["simple", "simple", "simple", "simple"]})");
    CHECK(cli({"tournament", (dir / "bad.json").string(), "--out", dir.string()}).code == 2);
}

TEST_CASE("smoke reports a clean built-in agent") {
    const auto c = cli({"smoke", "h2", "--round-trip-cap", "20"});
    CHECK(c.code == 0);
    const auto j = novopoly::json::parse(c.out);
    CHECK(j["completed"] == true);
    CHECK(j["faults"] == 0);
}

TEST_CASE("smoke counts faults of a misbehaving agent") {
    const auto c = cli({"smoke", std::string("exec:") + FAULTY_AGENT + " garbage", "--round-trip-cap", "5", "--strict"});
    CHECK(c.code == 1);
    CHECK(novopoly::json::parse(c.out)["faults"].get<int>() > 0);
}
