#include "doctest.h"

#include "pyreline/service.hpp"

#include "httplib.h"

#include <filesystem>
#include <thread>

using namespace pyreline;
using nlohmann::json;

namespace {

json path_vs_human(std::uint64_t count)
{
    return {{"schedule", {{"kind", "constant"}, {"count", count}}}, {"human_role", "arsonist"}, {"builder", "path"}};
}

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
}

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("pyreline-service-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("a human arsonist plays against the path builder")
{
    GameService svc;
    const json created = svc.create(path_vs_human(2));
    const std::string id = created.at("id");
    CHECK(created.at("vertex_count") == 2);
    CHECK(created.at("awaiting") == "arsonist-move");
    CHECK(created.at("roles").at("human") == "arsonist");

    const json after = svc.move(id, {{"vertex", 0}});
    CHECK(after.at("turn") == 1);
    CHECK(after.at("vertex_count") == 4);
    CHECK(after.at("burning_count") == 2);
    CHECK(after.at("awaiting") == "arsonist-move");

    try {
        svc.move(id, {{"vertex", 0}});
        FAIL("expected an error");
    } catch (const ServiceError& e) {
        CHECK(e.code() == ErrorCode::StrategyReturnedBurnedVertex);
        CHECK(http_status(e.code()) == 409);
        CHECK(error_json(e).at("detail").at("vertex") == 0);
    }
    CHECK(code_of([&] { svc.move(id, {{"vertex", 3}, {"extra", 1}}); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { svc.step(id, {{"turns", 1}}); }) == ErrorCode::InvalidStage);
    CHECK(svc.move(id, {{"vertex", 3}}).at("turn") == 2);
}

TEST_CASE("a human builder submits moves")
{
    GameService svc;
    const json created = svc.create({{"schedule", {{"kind", "constant"}, {"count", 2}}}, {"human_role", "builder"}});
    const std::string id = created.at("id");
    CHECK(created.at("awaiting") == "builder-move");
    CHECK(code_of([&] { svc.move(id, {{"count", 2}, {"edges", json::array()}}); }) == ErrorCode::ResultDisconnected);
    const json after = svc.move(id, {{"count", 2}, {"edges", {{0, 1}}}});
    CHECK(after.at("turn") == 1);
    CHECK(after.at("awaiting") == "builder-move");
    CHECK(code_of([&] { svc.move(id, {{"vertex", 0}}); }) == ErrorCode::ConfigError);
    CHECK(http_status(ErrorCode::ResultDisconnected) == 400);
}

TEST_CASE("engine-only games advance by step")
{
    GameService svc;
    const json created = svc.create({{"schedule", {{"kind", "constant"}, {"count", 1}}}, {"seed", 4}});
    const std::string id = created.at("id");
    CHECK(created.at("roles").at("builder") == "path");
    CHECK(created.at("roles").at("arsonist") == "greedy");
    const Turn t0 = created.at("turn");
    CHECK(svc.state(id).at("turn") == t0);
    const json s = svc.step(id, {{"turns", 10}});
    CHECK(s.at("turn") == t0 + 10);
    const json delta = svc.state(id, s.at("turn").get<Turn>());
    CHECK(delta.at("vertices").empty());
    CHECK(delta.at("edges").empty());
    CHECK(delta.at("series").empty());
    CHECK(code_of([&] { svc.step(id, {{"turns", 0}}); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { svc.move(id, {{"vertex", 0}}); }) == ErrorCode::NotYourTurn);
}

TEST_CASE("request validation")
{
    GameService svc;
    CHECK(code_of([&] { svc.create({{"schedule", {{"kind", "constant"}, {"count", 1}}}, {"arsonist", "human"}}); }) ==
          ErrorCode::RoleMismatch);
    CHECK(code_of([&] { svc.create({{"schedule", {{"kind", "bogus"}}}}); }) == ErrorCode::BadSchedule);
    CHECK(code_of([&] { svc.create({{"schedule", {{"kind", "constant"}, {"count", 1}}}, {"builder", "maze"}}); }) ==
          ErrorCode::BadStrategy);
    CHECK(code_of([&] { svc.state("missing"); }) == ErrorCode::UnknownGame);
    CHECK(http_status(ErrorCode::UnknownGame) == 404);
    CHECK(http_status(ErrorCode::NotYourTurn) == 409);
    CHECK(GameService::presets().size() >= 1);
}

TEST_CASE("logs replay to an identical game")
{
    const auto dir = scratch("replay");
    std::string human_id, engine_id, csv_human, csv_engine;
    {
        GameService svc(dir);
        human_id = svc.create(path_vs_human(3)).at("id");
        for (VertexId v : {0U, 5U, 8U})
            svc.move(human_id, {{"vertex", v}});
        engine_id = svc.create({{"schedule", {{"kind", "poly"}, {"c", 1.0}, {"alpha", 0.5}}},
                                {"builder", "rrt"},
                                {"arsonist", "random"},
                                {"seed", 9}})
                        .at("id");
        svc.step(engine_id, {{"turns", 50}});
        csv_human = svc.trace_csv(human_id);
        csv_engine = svc.trace_csv(engine_id);
    }
    GameService back(dir);
    CHECK(back.restore() == 2);
    CHECK(back.session_count() == 2);
    CHECK(back.trace_csv(human_id) == csv_human);
    CHECK(back.trace_csv(engine_id) == csv_engine);
    CHECK(back.state(human_id).at("awaiting") == "arsonist-move");
    // The restored game keeps going.
    CHECK(back.step(engine_id, {{"turns", 1}}).at("turn") == 51);
    std::filesystem::remove_all(dir);
}

TEST_CASE("HTTP routes")
{
    GameService svc;
    httplib::Server server;
    mount_routes(server, svc);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto presets = client.Get("/api/presets");
    REQUIRE(presets);
    CHECK(presets->status == 200);
    CHECK(presets->get_header_value("Access-Control-Allow-Origin") == "*");

    auto pre = client.Options("/api/games");
    REQUIRE(pre);
    CHECK(pre->status == 204);

    auto created = client.Post("/api/games", path_vs_human(2).dump(), "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    const std::string id = json::parse(created->body).at("id");

    auto moved = client.Post("/api/games/" + id + "/move", json{{"vertex", 1}}.dump(), "application/json");
    REQUIRE(moved);
    CHECK(moved->status == 200);

    auto again = client.Post("/api/games/" + id + "/move", json{{"vertex", 1}}.dump(), "application/json");
    REQUIRE(again);
    CHECK(again->status == 409);
    const json err = json::parse(again->body);
    CHECK(err.at("code") == "StrategyReturnedBurnedVertex");
    CHECK(err.at("detail").at("vertex") == 1);

    auto state = client.Get("/api/games/" + id + "?since=1");
    REQUIRE(state);
    CHECK(state->status == 200);
    CHECK(json::parse(state->body).at("since") == 1);

    auto missing = client.Get("/api/games/nope");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    auto bad = client.Post("/api/games", "{not json", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    auto csv = client.Get("/api/games/" + id + "/trace.csv");
    REQUIRE(csv);
    CHECK(csv->body.rfind("n,added,vertices,burning,density,source\n", 0) == 0);

    server.stop();
    worker.join();
}
