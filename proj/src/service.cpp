#include "pyreline/service.hpp"

#include "pyreline/scenario.hpp"
#include "pyreline/strategies.hpp"
#include "pyreline/trace.hpp"

#include "httplib.h"

#include <algorithm>
#include <iostream>
#include <random>
#include <sstream>

namespace pyreline {

using nlohmann::json;

int http_status(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::UnknownGame: return 404;
    case ErrorCode::NotYourTurn:
    case ErrorCode::InvalidStage:
    case ErrorCode::StrategyReturnedBurnedVertex: return 409;
    default: return 400;
    }
}

json error_json(const Error& e)
{
    std::string message = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    if (message.rfind(prefix, 0) == 0)
        message.erase(0, prefix.size());
    json detail = json::object();
    if (const auto* se = dynamic_cast<const ServiceError*>(&e))
        detail = se->detail();
    return {{"code", to_string(e.code())}, {"message", message}, {"detail", detail}};
}

namespace {

const char* role_name(HumanRole r)
{
    switch (r) {
    case HumanRole::Builder: return "builder";
    case HumanRole::Arsonist: return "arsonist";
    default: return "none";
    }
}

const char* stage_name(Stage s)
{
    switch (s) {
    case Stage::AwaitBuilder: return "await-builder";
    case Stage::AwaitArsonist: return "await-arsonist";
    default: return "between-turns";
    }
}

const char* awaiting(const GameSession& s)
{
    const Stage st = s.game->stage();
    if (s.role == HumanRole::Builder && st == Stage::AwaitBuilder)
        return "builder-move";
    if (s.role == HumanRole::Arsonist && st == Stage::AwaitArsonist)
        return "arsonist-move";
    return "none";
}

bool is_count(const json& j)
{
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

void log_line(GameSession& s, const json& j)
{
    if (s.log.is_open()) {
        s.log << j.dump() << '\n';
        s.log.flush();
    }
}

json record_json(const TurnRecord& r)
{
    return {{"n", r.turn},
            {"added", r.added},
            {"vertices", r.vertex_total},
            {"burning", r.burning_total},
            {"density", density(r.burning_total, r.vertex_total)},
            {"source", r.source == kPass ? json("PASS") : json(r.source)}};
}

void finish_turn(GameSession& s, VertexId v, const char* actor)
{
    const TurnRecord& r = s.game->submit_ignition(v);
    log_line(s, {{"type", "ignite"}, {"actor", actor}, {"turn", r.turn},
                 {"vertex", v == kPass ? json(nullptr) : json(v)}});
    json turn = record_json(r);
    turn["type"] = "turn";
    turn["actor"] = "system";
    log_line(s, turn);
}

void begin(GameSession& s)
{
    const std::uint64_t count = s.game->begin_turn();
    log_line(s, {{"type", "begin"}, {"actor", "system"}, {"turn", s.game->turn() + 1}, {"count", count}});
}

void engine_builder(GameSession& s, const char* actor)
{
    Game& g = *s.game;
    const BuilderMove m = s.role == HumanRole::Builder ? BuilderMove{} : g.builder_move();
    g.submit_builder_move(m);
    log_line(s, {{"type", "builder"}, {"actor", actor}, {"turn", g.turn() + 1}, {"count", m.count},
                 {"edge_count", m.edges.size()}});
}

// Plays engine sub-steps until the human has a real decision, or until a turn
// completes without any human input in it.
void advance(GameSession& s, bool human_in_turn)
{
    if (s.role == HumanRole::None)
        return;
    Game& g = *s.game;
    for (;;) {
        switch (g.stage()) {
        case Stage::BetweenTurns:
            begin(s);
            break;
        case Stage::AwaitBuilder:
            if (s.role == HumanRole::Builder) {
                if (g.pending_count() > 0)
                    return;
                engine_builder(s, "auto");
            } else {
                engine_builder(s, "engine");
            }
            break;
        case Stage::AwaitArsonist:
            if (s.role == HumanRole::Arsonist) {
                if (g.burn().burning_count() < g.graph().vertex_count())
                    return;
                finish_turn(s, kPass, "auto");
            } else {
                finish_turn(s, g.arsonist_choice(), "engine");
            }
            if (!human_in_turn)
                return;
            human_in_turn = false;
            break;
        }
    }
}

BuilderMove parse_builder_move(const json& body)
{
    for (const auto& [key, value] : body.items())
        if (key != "count" && key != "edges")
            fail(ErrorCode::ConfigError, "move." + key + ": unknown field");
    BuilderMove m;
    if (!body.contains("count") || !is_count(body.at("count")))
        fail(ErrorCode::ConfigError, "move.count: expected a nonnegative integer");
    m.count = body.at("count").get<std::uint64_t>();
    const json edges = body.value("edges", json::array());
    if (!edges.is_array())
        fail(ErrorCode::ConfigError, "move.edges: expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const json& e = edges[i];
        json u, v;
        if (e.is_array() && e.size() == 2) {
            u = e[0];
            v = e[1];
        } else if (e.is_object() && e.contains("u") && e.contains("v")) {
            u = e.at("u");
            v = e.at("v");
        }
        if (!is_count(u) || !is_count(v) || u.get<std::uint64_t>() >= kNoVertex ||
            v.get<std::uint64_t>() >= kNoVertex)
            fail(ErrorCode::ConfigError,
                 "move.edges[" + std::to_string(i) + "]: expected [u, v] with nonnegative vertex ids");
        m.edges.push_back({u.get<VertexId>(), v.get<VertexId>()});
    }
    return m;
}

const char* move_field(ErrorCode code)
{
    return code == ErrorCode::WrongCount ? "count" : "edges";
}

// Applies a human move; shared by live requests and log replay.
void apply_move(GameSession& s, const json& body)
{
    Game& g = *s.game;
    if (s.role == HumanRole::Builder && g.stage() == Stage::AwaitBuilder) {
        const BuilderMove m = parse_builder_move(body);
        try {
            g.submit_builder_move(m);
        } catch (const Error& e) {
            throw ServiceError(e, {{"field", move_field(e.code())}});
        }
        json edges = json::array();
        for (const Edge& e : m.edges)
            edges.push_back({e.u, e.v});
        log_line(s, {{"type", "builder"}, {"actor", "human"}, {"turn", g.turn() + 1}, {"count", m.count},
                     {"edges", edges}});
        advance(s, true);
        return;
    }
    if (s.role == HumanRole::Arsonist && g.stage() == Stage::AwaitArsonist) {
        for (const auto& [key, value] : body.items())
            if (key != "vertex")
                fail(ErrorCode::ConfigError, "move." + key + ": unknown field");
        if (!body.contains("vertex") || !is_count(body.at("vertex")) ||
            body.at("vertex").get<std::uint64_t>() >= kNoVertex)
            fail(ErrorCode::ConfigError, "move.vertex: expected a vertex id");
        const auto v = body.at("vertex").get<VertexId>();
        try {
            finish_turn(s, v, "human");
        } catch (const Error& e) {
            throw ServiceError(e, {{"vertex", v}});
        }
        advance(s, false);
        return;
    }
    fail(ErrorCode::NotYourTurn, std::string("the game is awaiting ") + awaiting(s));
}

constexpr Turn kMaxStep = 100000;

void apply_step(GameSession& s, Turn turns)
{
    if (s.role != HumanRole::None)
        fail(ErrorCode::InvalidStage, "step is only for games without a human player");
    if (turns < 1 || turns > kMaxStep)
        fail(ErrorCode::ConfigError, "step.turns: must lie in 1.." + std::to_string(kMaxStep));
    log_line(s, {{"type", "step"}, {"actor", "human"}, {"turns", turns}});
    Game& g = *s.game;
    for (Turn i = 0; i < turns; ++i) {
        begin(s);
        engine_builder(s, "engine");
        finish_turn(s, g.arsonist_choice(), "engine");
    }
}

Turn step_turns(const json& body)
{
    for (const auto& [key, value] : body.items())
        if (key != "turns")
            fail(ErrorCode::ConfigError, "step." + key + ": unknown field");
    if (!body.contains("turns"))
        return 1;
    if (!body.at("turns").is_number_integer())
        fail(ErrorCode::ConfigError, "step.turns: expected an integer");
    return body.at("turns").get<Turn>();
}

json state_json(const GameSession& s, Turn since)
{
    const Game& g = *s.game;
    if (since < 0 || since > g.turn())
        fail(ErrorCode::OutOfRange, "since must lie in 0.." + std::to_string(g.turn()));
    const GrowingGraph& graph = g.graph();
    const VertexId v0 = since == 0 ? 0 : graph.vertices_through(since);
    const EdgeId e0 = since == 0 ? 0 : graph.edges_through(since);

    json vertices = json::array();
    for (VertexId v = v0; v < graph.vertex_count(); ++v)
        vertices.push_back({{"id", v}, {"generation", graph.generation(v)}, {"burning", g.burn().is_burning(v)}});
    json edges = json::array();
    for (EdgeId e = e0; e < graph.edge_count(); ++e) {
        const Edge ed = graph.edge(e);
        edges.push_back({{"u", ed.u}, {"v", ed.v}, {"generation", graph.edge_generation(e)}});
    }

    const auto& trace = g.trace();
    auto first = std::upper_bound(trace.begin(), trace.end(), since,
                                  [](Turn t, const TurnRecord& r) { return t < r.turn; });
    const std::size_t burn_from = first == trace.begin() ? 0 : static_cast<std::size_t>((first - 1)->burning_total);
    const auto log = g.burn().burn_log();
    json newly = json::array();
    for (std::size_t i = burn_from; i < log.size(); ++i)
        newly.push_back(log[i]);
    json series = json::array();
    for (auto it = first; it != trace.end(); ++it)
        series.push_back(record_json(*it));

    return {{"id", s.id},
            {"game_id", s.id},
            {"turn", g.turn()},
            {"stage", stage_name(g.stage())},
            {"awaiting", awaiting(s)},
            {"pending_count", g.pending_count()},
            {"roles",
             {{"human", role_name(s.role)},
              {"builder", s.request.at("builder")},
              {"arsonist", s.request.at("arsonist")}}},
            {"seed", s.request.at("seed")},
            {"schedule", s.request.at("schedule")},
            {"vertex_count", graph.vertex_count()},
            {"edge_count", graph.edge_count()},
            {"burning_count", g.burn().burning_count()},
            {"density", density(g.burn().burning_count(), graph.vertex_count())},
            {"since", since},
            {"vertices", vertices},
            {"edges", edges},
            {"newly_burning", newly},
            {"series", series}};
}

json normalize_request(const json& r)
{
    if (!r.is_object())
        fail(ErrorCode::ConfigError, "request: expected an object");
    for (const auto& [key, value] : r.items())
        if (key != "schedule" && key != "human_role" && key != "builder" && key != "arsonist" && key != "seed")
            fail(ErrorCode::ConfigError, "request." + key + ": unknown field");
    if (!r.contains("schedule"))
        fail(ErrorCode::BadSchedule, "request.schedule: missing");
    const json schedule = GrowthSchedule::from_json(r.at("schedule")).to_json();

    const std::string role = r.value("human_role", std::string("none"));
    if (role != "builder" && role != "arsonist" && role != "none")
        fail(ErrorCode::ConfigError, "request.human_role: expected builder, arsonist or none");
    auto name = [&](const char* key, bool human) {
        if (!r.contains(key))
            return std::string(human ? "human" : (std::string(key) == "builder" ? "path" : "greedy"));
        if (!r.at(key).is_string())
            fail(ErrorCode::BadStrategy, std::string("request.") + key + ": expected a strategy name");
        return r.at(key).get<std::string>();
    };
    const std::string builder = name("builder", role == "builder");
    const std::string arsonist = name("arsonist", role == "arsonist");
    if (!is_builder_name(builder))
        fail(ErrorCode::BadStrategy, "request.builder: unknown strategy '" + builder + "'");
    if (!is_arsonist_name(arsonist))
        fail(ErrorCode::BadStrategy, "request.arsonist: unknown strategy '" + arsonist + "'");
    if ((builder == "human") != (role == "builder"))
        fail(ErrorCode::RoleMismatch, "request.builder: 'human' must match human_role");
    if ((arsonist == "human") != (role == "arsonist"))
        fail(ErrorCode::RoleMismatch, "request.arsonist: 'human' must match human_role");

    std::uint64_t seed = 1;
    if (r.contains("seed")) {
        if (!is_count(r.at("seed")))
            fail(ErrorCode::ConfigError, "request.seed: expected a nonnegative integer");
        seed = r.at("seed").get<std::uint64_t>();
    }
    return {{"schedule", schedule}, {"human_role", role}, {"builder", builder}, {"arsonist", arsonist},
            {"seed", seed}};
}

} // namespace

GameService::GameService(std::filesystem::path data_dir) : data_dir_(std::move(data_dir))
{
    std::random_device rd;
    id_state_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    if (!data_dir_.empty())
        std::filesystem::create_directories(data_dir_);
}

std::string GameService::fresh_id()
{
    std::lock_guard lock(id_mutex_);
    for (;;) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(derive_seed(id_state_++, 7)));
        std::shared_lock registry(registry_mutex_);
        if (!sessions_.count(buf))
            return buf;
    }
}

std::shared_ptr<GameSession> GameService::build(const json& request, const std::string& id) const
{
    auto s = std::make_shared<GameSession>();
    s->id = id;
    s->request = normalize_request(request);
    const std::string role = s->request.at("human_role");
    s->role = role == "builder" ? HumanRole::Builder : role == "arsonist" ? HumanRole::Arsonist : HumanRole::None;
    const auto seed = s->request.at("seed").get<std::uint64_t>();
    s->game = std::make_unique<Game>(GrowthSchedule::from_json(s->request.at("schedule")),
                                     make_builder(s->request.at("builder").get<std::string>(), seed),
                                     make_arsonist(s->request.at("arsonist").get<std::string>(), seed), seed);
    if (!data_dir_.empty())
        s->log_path = data_dir_ / (id + ".jsonl");
    return s;
}

json GameService::create(const json& request)
{
    auto s = build(request, fresh_id());
    if (!s->log_path.empty()) {
        s->log.open(s->log_path, std::ios::app);
        if (!s->log)
            fail(ErrorCode::IoError, "cannot write " + s->log_path.string());
    }
    std::lock_guard lock(s->mutex);
    json create = s->request;
    create["type"] = "create";
    create["actor"] = "system";
    create["id"] = s->id;
    log_line(*s, create);
    advance(*s, false);
    {
        std::unique_lock registry(registry_mutex_);
        sessions_[s->id] = s;
    }
    return state_json(*s, 0);
}

std::shared_ptr<GameSession> GameService::find(const std::string& id) const
{
    std::shared_lock lock(registry_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end())
        fail(ErrorCode::UnknownGame, "no game '" + id + "'");
    return it->second;
}

json GameService::state(const std::string& id, Turn since)
{
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    return state_json(*s, since);
}

json GameService::move(const std::string& id, const json& body)
{
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    if (!body.is_object())
        fail(ErrorCode::ConfigError, "move: expected an object");
    const Turn before = s->game->turn();
    apply_move(*s, body);
    return state_json(*s, before);
}

json GameService::step(const std::string& id, const json& body)
{
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    if (!body.is_object())
        fail(ErrorCode::ConfigError, "step: expected an object");
    const Turn before = s->game->turn();
    apply_step(*s, step_turns(body));
    return state_json(*s, before);
}

std::string GameService::trace_csv(const std::string& id)
{
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    std::ostringstream out;
    write_trace_csv(out, s->game->trace());
    return out.str();
}

json GameService::presets()
{
    json list = json::array();
    for (const std::string& name : preset_names())
        list.push_back({{"name", name}, {"scenario", preset_json(name)}});
    return {{"presets", list},
            {"builders", {"path", "star", "rrt", "human"}},
            {"arsonists", {"phase", "greedy", "random", "human"}},
            {"schedules", {"constant", "poly", "linear", "example1", "example2", "example3", "table"}}};
}

std::size_t GameService::session_count() const
{
    std::shared_lock lock(registry_mutex_);
    return sessions_.size();
}

std::size_t GameService::restore()
{
    if (data_dir_.empty() || !std::filesystem::exists(data_dir_))
        return 0;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(data_dir_))
        if (entry.path().extension() == ".jsonl")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::size_t loaded = 0;
    for (const auto& path : files) {
        try {
            std::ifstream in(path);
            std::vector<json> lines;
            for (std::string text; std::getline(in, text);) {
                if (text.empty())
                    continue;
                try {
                    lines.push_back(json::parse(text));
                } catch (const json::parse_error&) {
                    if (in.peek() != std::char_traits<char>::eof())
                        throw;
                    // A torn final line from a crash; the move it held never returned.
                }
            }
            if (lines.empty() || lines.front().value("type", "") != "create")
                fail(ErrorCode::IoError, "log does not start with a create entry");
            json request = lines.front();
            const std::string id = request.at("id");
            for (const char* k : {"type", "actor", "id"})
                request.erase(k);
            auto s = build(request, id);
            advance(*s, false);
            std::vector<TurnRecord> logged;
            for (std::size_t i = 1; i < lines.size(); ++i) {
                const json& l = lines[i];
                const std::string type = l.at("type");
                const std::string actor = l.value("actor", "");
                if (type == "builder" && actor == "human") {
                    apply_move(*s, {{"count", l.at("count")}, {"edges", l.at("edges")}});
                } else if (type == "ignite" && actor == "human") {
                    apply_move(*s, {{"vertex", l.at("vertex")}});
                } else if (type == "step") {
                    apply_step(*s, l.at("turns").get<Turn>());
                } else if (type == "turn") {
                    logged.push_back({l.at("n").get<Turn>(), l.at("added").get<std::uint64_t>(),
                                      l.at("vertices").get<std::uint64_t>(), l.at("burning").get<std::uint64_t>(),
                                      l.at("source").is_string() ? kPass : l.at("source").get<VertexId>()});
                }
            }
            if (logged != s->game->trace())
                fail(ErrorCode::IoError, "replayed trace differs from the logged turns");
            s->log.open(s->log_path, std::ios::app);
            std::unique_lock registry(registry_mutex_);
            sessions_[id] = s;
            ++loaded;
        } catch (const std::exception& e) {
            std::cerr << "skipping " << path.string() << ": " << e.what() << '\n';
        }
    }
    return loaded;
}

void mount_routes(httplib::Server& server, GameService& service)
{
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    auto guarded = [](auto fn) {
        return [fn](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const Error& e) {
                res.status = http_status(e.code());
                res.set_content(error_json(e).dump(), "application/json");
            } catch (const json::exception& e) {
                res.status = 400;
                res.set_content(error_json(Error(ErrorCode::ConfigError, e.what())).dump(), "application/json");
            }
        };
    };
    auto body_json = [](const httplib::Request& req) {
        return req.body.empty() ? json::object() : parse_json_text(req.body, "body");
    };
    auto send = [](httplib::Response& res, const json& j, int status = 200) {
        res.status = status;
        res.set_content(j.dump(), "application/json");
    };

    server.Get("/api/presets", guarded([send](const httplib::Request&, httplib::Response& res) {
                   send(res, GameService::presets());
               }));
    server.Post("/api/games", guarded([&service, body_json, send](const httplib::Request& req, httplib::Response& res) {
                    send(res, service.create(body_json(req)), 201);
                }));
    server.Get(R"(/api/games/([A-Za-z0-9_-]+))",
               guarded([&service, send](const httplib::Request& req, httplib::Response& res) {
                   Turn since = 0;
                   if (req.has_param("since")) {
                       const std::string text = req.get_param_value("since");
                       std::size_t used = 0;
                       try {
                           since = std::stoll(text, &used);
                       } catch (const std::exception&) {
                           used = 0;
                       }
                       if (used == 0 || used != text.size())
                           fail(ErrorCode::ConfigError, "since: expected an integer");
                   }
                   send(res, service.state(req.matches[1], since));
               }));
    server.Post(R"(/api/games/([A-Za-z0-9_-]+)/move)",
                guarded([&service, body_json, send](const httplib::Request& req, httplib::Response& res) {
                    send(res, service.move(req.matches[1], body_json(req)));
                }));
    server.Post(R"(/api/games/([A-Za-z0-9_-]+)/step)",
                guarded([&service, body_json, send](const httplib::Request& req, httplib::Response& res) {
                    send(res, service.step(req.matches[1], body_json(req)));
                }));
    server.Get(R"(/api/games/([A-Za-z0-9_-]+)/trace\.csv)",
               guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   res.set_content(service.trace_csv(req.matches[1]), "text/csv");
               }));
}

} // namespace pyreline
