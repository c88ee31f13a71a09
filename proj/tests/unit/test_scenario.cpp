#include "doctest.h"

#include "pyreline/errors.hpp"
#include "pyreline/scenario.hpp"
#include "pyreline/trace.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace pyreline;
using nlohmann::json;

namespace {

json base()
{
    return {{"schema", 1},
            {"name", "t"},
            {"schedule", {{"kind", "poly"}, {"c", 1.0}, {"alpha", 0.5}}},
            {"builder", "rrt"},
            {"arsonist", "random"},
            {"turns", 200},
            {"seed", 1}};
}

std::string config_message(const json& j)
{
    try {
        scenario_from_json(j);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
        return e.what();
    }
    FAIL("expected a config error");
    return {};
}

bool contains(const std::string& s, const std::string& part)
{
    return s.find(part) != std::string::npos;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("pyreline-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("scenario validation names the offending field")
{
    json j = base();
    j["turns"] = 0;
    CHECK(contains(config_message(j), "scenario.turns"));

    j = base();
    j["colour"] = "red";
    CHECK(contains(config_message(j), "scenario.colour"));

    j = base();
    j.erase("schema");
    CHECK(contains(config_message(j), "scenario.schema"));

    j = base();
    j["schema"] = 2;
    CHECK(contains(config_message(j), "scenario.schema"));

    j = base();
    j["arsonist"] = "human";
    CHECK(contains(config_message(j), "scenario.arsonist"));

    j = base();
    j["schedule"] = {{"kind", "poly"}, {"alpha", -1}};
    CHECK(contains(config_message(j), "scenario.schedule"));

    j = base();
    j["checkpoints"] = {10, 500};
    CHECK(contains(config_message(j), "scenario.checkpoints[1]"));

    j = base();
    j["assertions"] = {{{"metric", "phase_boundary_min"}, {"op", ">="}, {"threshold", 0.5}}};
    CHECK(contains(config_message(j), "scenario.assertions[0]"));

    j = base();
    j["arsonist_params"] = {{"warmup", 0}};
    CHECK(contains(config_message(j), "scenario.arsonist_params.warmup"));

    try {
        parse_json_text("{\n  \"schema\": 1,\n  oops\n}", "bad.json");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
        CHECK(contains(e.what(), "bad.json:3:"));
    }
}

TEST_CASE("scenario JSON round trip")
{
    json j = base();
    j["checkpoints"] = {10, 100};
    j["assertions"] = {{{"metric", "tail_max"}, {"op", "<="}, {"threshold", 0.9}}};
    const Scenario s = scenario_from_json(j);
    const Scenario t = scenario_from_json(scenario_to_json(s));
    CHECK(t.name == s.name);
    CHECK(t.turns == s.turns);
    CHECK(t.checkpoints == s.checkpoints);
    CHECK(t.assertions.size() == 1);
    CHECK(t.schedule == s.schedule);
}

TEST_CASE("one turn of one vertex burns it")
{
    json j = base();
    j["schedule"] = {{"kind", "constant"}, {"count", 1}};
    j["turns"] = 1;
    const ScenarioResult r = run_scenario(scenario_from_json(j));
    CHECK(r.summary.at("final_density") == 1.0);
    CHECK(r.trace.size() == 1);
    CHECK(r.passed);
}

TEST_CASE("assertions are evaluated")
{
    json j = base();
    j["builder"] = "path";
    j["arsonist"] = "greedy";
    j["schedule"] = {{"kind", "linear"}, {"c", 1.0}};
    j["turns"] = 300;
    j["checkpoints"] = {300};
    j["assertions"] = {{{"metric", "tail_max"}, {"op", "<="}, {"threshold", 0.85}},
                       {{"metric", "checkpoint"}, {"op", ">"}, {"threshold", 0.99}, {"horizon", 300}}};
    const ScenarioResult r = run_scenario(scenario_from_json(j));
    REQUIRE(r.assertions.size() == 2);
    CHECK(r.assertions[0].passed);
    CHECK_FALSE(r.assertions[1].passed);
    CHECK_FALSE(r.passed);
    CHECK(r.summary.at("assertions").size() == 2);
}

TEST_CASE("same seed gives byte-identical outputs")
{
    const Scenario s = scenario_from_json(base());
    const auto a = scratch("a"), b = scratch("b");
    write_outputs(run_scenario(s), s.name, a);
    write_outputs(run_scenario(s), s.name, b);
    CHECK(slurp(a / "t.trace.csv") == slurp(b / "t.trace.csv"));
    CHECK(slurp(a / "t.summary.json") == slurp(b / "t.summary.json"));
    CHECK_FALSE(slurp(a / "t.trace.csv").empty());
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST_CASE("sweeps")
{
    CHECK_THROWS_AS(expand_grid(base(), json::object()), Error);
    CHECK_THROWS_AS(expand_grid(base(), {{"seed", json::array()}}), Error);

    const auto seeds = sweep(base(), {{"seed", {1, 2, 3}}}, 2);
    REQUIRE(seeds.size() == 3);
    std::set<std::string> traces;
    for (const SweepRow& row : seeds) {
        std::stringstream out;
        write_trace_csv(out, row.result.trace);
        traces.insert(out.str());
    }
    CHECK(traces.size() == 3);

    const auto grid = expand_grid(base(), {{"schedule.alpha", {0.3, 0.5}}, {"turns", {50, 60}}});
    REQUIRE(grid.size() == 4);
    std::set<std::string> names;
    for (const json& g : grid)
        names.insert(g.at("name").get<std::string>());
    CHECK(names.size() == 4);

    const auto alphas = sweep(base(), {{"schedule.alpha", {0.3, 0.5, 0.75}}}, 3);
    REQUIRE(alphas.size() == 3);
    std::stringstream csv;
    write_sweep_csv(csv, alphas);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "schedule.alpha,name,turns,final_density,tail_min,tail_max,passed");
    int lines = 0;
    for (std::string line; std::getline(csv, line);)
        ++lines;
    CHECK(lines == 3);
}

TEST_CASE("presets parse")
{
    const auto names = preset_names();
    CHECK(names.size() >= 8);
    for (const std::string& n : names) {
        const json j = preset_json(n);
        if (j.contains("kind"))
            continue;
        CAPTURE(n);
        CHECK_NOTHROW(scenario_from_json(j));
    }
    CHECK_THROWS_AS(preset_json("nope"), Error);
}
