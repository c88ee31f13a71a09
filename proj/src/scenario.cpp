#include "pyreline/scenario.hpp"

#include "pyreline/errors.hpp"
#include "pyreline/metrics.hpp"
#include "pyreline/trace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace pyreline {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& message)
{
    fail(ErrorCode::ConfigError, path + ": " + message);
}

std::int64_t integer_at(const json& j, const std::string& path, std::int64_t min)
{
    if (j.is_number_integer() || j.is_number_unsigned()) {
        const auto v = j.get<std::int64_t>();
        if (v < min)
            bad(path, "must be at least " + std::to_string(min));
        return v;
    }
    if (j.is_number_float()) {
        const double d = j.get<double>();
        if (d == std::floor(d) && d >= static_cast<double>(min) && d < 9.2e18)
            return static_cast<std::int64_t>(d);
    }
    bad(path, "expected an integer");
}

double number_at(const json& j, const std::string& path)
{
    if (!j.is_number())
        bad(path, "expected a number");
    return j.get<double>();
}

std::string string_at(const json& j, const std::string& path)
{
    if (!j.is_string())
        bad(path, "expected a string");
    return j.get<std::string>();
}

const std::vector<std::string> kMetrics = {"tail_min", "tail_max", "checkpoint", "phase_boundary_min"};
const std::vector<std::string> kOps = {"<=", "<", ">=", ">"};

bool compare(double value, const std::string& op, double threshold)
{
    if (op == "<=")
        return value <= threshold;
    if (op == "<")
        return value < threshold;
    if (op == ">=")
        return value >= threshold;
    return value > threshold;
}

} // namespace

json parse_json_text(const std::string& text, const std::string& origin)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        fail(ErrorCode::ConfigError,
             origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": invalid JSON");
    }
}

Scenario scenario_from_json(const json& j)
{
    if (!j.is_object())
        bad("scenario", "expected an object");
    static const std::vector<std::string> known = {"schema",     "name",          "schedule",     "builder",
                                                   "arsonist",   "arsonist_params", "turns",      "seed",
                                                   "tail_fraction", "fast_forward", "checkpoints", "assertions"};
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            bad("scenario." + key, "unknown field");

    if (!j.contains("schema"))
        bad("scenario.schema", "missing");
    if (integer_at(j.at("schema"), "scenario.schema", 0) != kScenarioSchema)
        bad("scenario.schema", "unsupported version (expected " + std::to_string(kScenarioSchema) + ")");

    Scenario s;
    if (j.contains("name"))
        s.name = string_at(j.at("name"), "scenario.name");
    if (!j.contains("schedule"))
        bad("scenario.schedule", "missing");
    try {
        s.schedule = GrowthSchedule::from_json(j.at("schedule")).to_json();
    } catch (const Error& e) {
        bad("scenario.schedule", e.what());
    }

    if (j.contains("builder"))
        s.builder = string_at(j.at("builder"), "scenario.builder");
    if (j.contains("arsonist"))
        s.arsonist = string_at(j.at("arsonist"), "scenario.arsonist");
    if (!is_builder_name(s.builder) || s.builder == "human")
        bad("scenario.builder", "unknown or interactive-only strategy '" + s.builder + "'");
    if (!is_arsonist_name(s.arsonist) || s.arsonist == "human")
        bad("scenario.arsonist", "unknown or interactive-only strategy '" + s.arsonist + "'");

    if (j.contains("arsonist_params")) {
        const json& p = j.at("arsonist_params");
        if (!p.is_object())
            bad("scenario.arsonist_params", "expected an object");
        for (const auto& [key, value] : p.items()) {
            const std::string path = "scenario.arsonist_params." + key;
            if (key == "warmup")
                s.phase.warmup = integer_at(value, path, 1);
            else if (key == "exact_cap")
                s.phase.planner.exact_cap = static_cast<std::size_t>(integer_at(value, path, 0));
            else if (key == "greedy_cap")
                s.phase.planner.greedy_cap = static_cast<std::size_t>(integer_at(value, path, 0));
            else
                bad(path, "unknown field");
        }
    }

    if (!j.contains("turns"))
        bad("scenario.turns", "missing");
    s.turns = integer_at(j.at("turns"), "scenario.turns", 1);
    if (j.contains("seed"))
        s.seed = static_cast<std::uint64_t>(integer_at(j.at("seed"), "scenario.seed", 0));
    if (j.contains("tail_fraction")) {
        s.tail_fraction = number_at(j.at("tail_fraction"), "scenario.tail_fraction");
        if (!(s.tail_fraction > 0.0 && s.tail_fraction <= 1.0))
            bad("scenario.tail_fraction", "must lie in (0, 1]");
    }
    if (j.contains("fast_forward")) {
        if (!j.at("fast_forward").is_boolean())
            bad("scenario.fast_forward", "expected true or false");
        s.fast_forward = j.at("fast_forward").get<bool>();
    }
    if (j.contains("checkpoints")) {
        const json& c = j.at("checkpoints");
        if (!c.is_array())
            bad("scenario.checkpoints", "expected an array");
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Turn n = integer_at(c[i], "scenario.checkpoints[" + std::to_string(i) + "]", 1);
            if (n > s.turns)
                bad("scenario.checkpoints[" + std::to_string(i) + "]", "beyond the last turn");
            s.checkpoints.push_back(n);
        }
    }
    if (j.contains("assertions")) {
        const json& a = j.at("assertions");
        if (!a.is_array())
            bad("scenario.assertions", "expected an array");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string path = "scenario.assertions[" + std::to_string(i) + "]";
            if (!a[i].is_object())
                bad(path, "expected an object");
            Assertion as;
            for (const auto& [key, value] : a[i].items()) {
                if (key == "metric")
                    as.metric = string_at(value, path + ".metric");
                else if (key == "op")
                    as.op = string_at(value, path + ".op");
                else if (key == "threshold")
                    as.threshold = number_at(value, path + ".threshold");
                else if (key == "horizon")
                    as.horizon = integer_at(value, path + ".horizon", 0);
                else
                    bad(path + "." + key, "unknown field");
            }
            if (std::find(kMetrics.begin(), kMetrics.end(), as.metric) == kMetrics.end())
                bad(path + ".metric", "expected tail_min, tail_max, checkpoint or phase_boundary_min");
            if (std::find(kOps.begin(), kOps.end(), as.op) == kOps.end())
                bad(path + ".op", "expected <=, <, >= or >");
            if (!a[i].contains("threshold"))
                bad(path + ".threshold", "missing");
            if (as.horizon > s.turns)
                bad(path + ".horizon", "beyond the last turn");
            if (as.metric == "checkpoint" && as.horizon < 1)
                bad(path + ".horizon", "checkpoint assertions need the turn as horizon");
            if (as.metric == "phase_boundary_min" && s.arsonist != "phase")
                bad(path + ".metric", "phase_boundary_min needs the phase arsonist");
            s.assertions.push_back(as);
        }
    }
    return s;
}

json scenario_to_json(const Scenario& s)
{
    json assertions = json::array();
    for (const Assertion& a : s.assertions)
        assertions.push_back({{"metric", a.metric}, {"op", a.op}, {"threshold", a.threshold}, {"horizon", a.horizon}});
    return {
        {"schema", kScenarioSchema},
        {"name", s.name},
        {"schedule", s.schedule},
        {"builder", s.builder},
        {"arsonist", s.arsonist},
        {"arsonist_params",
         {{"warmup", s.phase.warmup},
          {"exact_cap", s.phase.planner.exact_cap},
          {"greedy_cap", s.phase.planner.greedy_cap}}},
        {"turns", s.turns},
        {"seed", s.seed},
        {"tail_fraction", s.tail_fraction},
        {"fast_forward", s.fast_forward},
        {"checkpoints", s.checkpoints},
        {"assertions", assertions},
    };
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::IoError, "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(parse_json_text(buf.str(), path.string()));
}

ScenarioResult run_scenario(const Scenario& s)
{
    GameOptions options;
    options.fast_forward = s.fast_forward;
    Game game(GrowthSchedule::from_json(s.schedule), make_builder(s.builder, s.seed),
              make_arsonist(s.arsonist, s.seed, s.phase), s.seed, options);
    const DensitySeries series = game.run(s.turns);

    ScenarioResult result;
    result.trace = game.trace();
    result.summary = summary_json(series, s.tail_fraction, s.checkpoints);
    result.summary["name"] = s.name;
    result.summary["vertices"] = game.graph().vertex_count();

    const auto* phase = dynamic_cast<const PhaseArsonist*>(&game.arsonist());
    if (phase) {
        json phases = json::array();
        for (const PhaseRecord& p : phase->phases()) {
            const DensityRecord* r = series.find(p.start);
            phases.push_back({{"k", p.k},
                              {"n", p.start},
                              {"vertices", p.snapshot_vertices},
                              {"rounds", p.rounds},
                              {"planner", to_string(p.planner)},
                              {"budget", p.budget},
                              {"budget_violation", p.budget_violation},
                              {"invariant_ok", p.invariant_ok},
                              {"density", r ? r->density() : 0.0}});
        }
        result.summary["phases"] = phases;
    }
    if (!game.schedule().cycles().empty()) {
        json cycles = json::array();
        for (const CycleRecord& c : game.schedule().cycles()) {
            const DensityRecord* r = series.find(c.n2);
            json entry{{"n0", c.n0}, {"n1", c.n1}, {"n2", c.n2}, {"vertices_at_n1", c.vertices_at_n1},
                       {"vertices_at_n2", c.vertices_at_n2}};
            if (r)
                entry["density_at_n2"] = r->density();
            cycles.push_back(entry);
        }
        result.summary["cycles"] = cycles;
    }

    json checks = json::array();
    for (const Assertion& a : s.assertions) {
        AssertionResult ar{a, std::numeric_limits<double>::quiet_NaN(), false};
        const Turn horizon = a.horizon == 0 ? s.turns : a.horizon;
        if (a.metric == "tail_min" || a.metric == "tail_max") {
            DensitySeries window;
            for (const DensityRecord& r : series.records())
                if (r.n <= horizon)
                    window.push(r);
            const TailExtrema t = tail_extrema(window, s.tail_fraction);
            ar.value = a.metric == "tail_min" ? t.min : t.max;
        } else if (a.metric == "checkpoint") {
            const Turn n = horizon;
            ar.value = checkpoint_densities(series, std::span(&n, 1)).front();
        } else if (phase) {
            double lowest = std::numeric_limits<double>::infinity();
            for (const PhaseRecord& p : phase->phases())
                if (p.start >= a.horizon)
                    if (const DensityRecord* r = series.find(p.start))
                        lowest = std::min(lowest, r->density());
            if (std::isfinite(lowest))
                ar.value = lowest;
        }
        ar.passed = !std::isnan(ar.value) && compare(ar.value, a.op, a.threshold);
        result.passed = result.passed && ar.passed;
        checks.push_back({{"metric", a.metric},
                          {"op", a.op},
                          {"threshold", a.threshold},
                          {"horizon", a.horizon},
                          {"value", std::isnan(ar.value) ? json(nullptr) : json(ar.value)},
                          {"passed", ar.passed}});
        result.assertions.push_back(ar);
    }
    result.summary["assertions"] = checks;
    result.summary["passed"] = result.passed;
    return result;
}

void write_outputs(const ScenarioResult& result, const std::string& name, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    std::ofstream trace(dir / (name + ".trace.csv"));
    if (!trace)
        fail(ErrorCode::IoError, "cannot write " + (dir / (name + ".trace.csv")).string());
    write_trace_csv(trace, result.trace, true);
    std::ofstream summary(dir / (name + ".summary.json"));
    if (!summary)
        fail(ErrorCode::IoError, "cannot write " + (dir / (name + ".summary.json")).string());
    summary << result.summary.dump(2) << '\n';
}

// ---- presets ----

namespace {

json base_preset(const std::string& name, json schedule, const std::string& builder, const std::string& arsonist,
                 Turn turns)
{
    return {{"schema", kScenarioSchema}, {"name", name},   {"schedule", std::move(schedule)},
            {"builder", builder},        {"arsonist", arsonist}, {"turns", turns},
            {"seed", 1},                 {"tail_fraction", 0.5}};
}

json assertion(const std::string& metric, const std::string& op, double threshold, Turn horizon = 0)
{
    return {{"metric", metric}, {"op", op}, {"threshold", threshold}, {"horizon", horizon}};
}

const std::map<std::string, json>& presets()
{
    static const std::map<std::string, json> table = [] {
        std::map<std::string, json> m;
        auto poly = [](double alpha) { return json{{"kind", "poly"}, {"c", 1.0}, {"alpha", alpha}}; };

        json p = base_preset("prop31-poly", poly(0.5), "path", "phase", 100000);
        p["assertions"] = {assertion("phase_boundary_min", ">=", 0.85, 50000)};
        m["prop31-poly"] = p;

        p = base_preset("prop31-poly-0.3", poly(0.3), "path", "phase", 100000);
        p["assertions"] = {assertion("phase_boundary_min", ">=", 0.85, 50000)};
        m["prop31-poly-0.3"] = p;

        // f = n^0.75 reaches ~2e7 vertices by turn 2e4.
        m["prop31-poly-0.75"] = base_preset("prop31-poly-0.75", poly(0.75), "path", "phase", 20000);

        p = base_preset("prop32-linear", {{"kind", "linear"}, {"c", 1.0}}, "path", "greedy", 10000);
        p["assertions"] = {assertion("tail_max", "<=", 0.85)};
        m["prop32-linear"] = p;

        p = base_preset("prop32-3n", {{"kind", "linear"}, {"c", 3.0}}, "path", "greedy", 5000);
        p["assertions"] = {assertion("tail_max", "<=", 0.72)};
        m["prop32-3n"] = p;

        // Zero phases grow like V^4; fast-forward skips them.
        p = base_preset("ex1", {{"kind", "example1"}, {"alpha", 0.25}}, "path", "greedy", 2000000000000000LL);
        p["fast_forward"] = true;
        m["ex1"] = p;

        m["ex2"] = base_preset("ex2", {{"kind", "example2"}, {"alpha", 0.75}, {"eps", 0.1}}, "path", "greedy", 20000);

        m["ex3"] = base_preset("ex3", {{"kind", "example3"}, {"alpha", 0.5}, {"beta", 1.0}, {"eps", 0.25}}, "path",
                               "phase", 7000);

        m["rrt-random"] = base_preset("rrt-random", poly(0.5), "rrt", "random", 10000);

        m["tree-dominance"] = {{"kind", "tree-dominance"}, {"samples", 100}, {"turns", 100}, {"seed", 1}};
        return m;
    }();
    return table;
}

} // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    for (const auto& [name, j] : presets())
        names.push_back(name);
    return names;
}

json preset_json(const std::string& name)
{
    const auto& table = presets();
    auto it = table.find(name);
    if (it == table.end())
        fail(ErrorCode::ConfigError, "unknown preset '" + name + "'");
    return it->second;
}

// ---- sweeps ----

std::vector<json> expand_grid(const json& base, const json& grid)
{
    if (!grid.is_object() || grid.empty())
        fail(ErrorCode::ConfigError, "grid: expected a nonempty object of dotted paths to value lists");
    std::vector<std::pair<std::string, json>> axes;
    for (const auto& [key, values] : grid.items()) {
        if (!values.is_array() || values.empty())
            fail(ErrorCode::ConfigError, "grid." + key + ": expected a nonempty list");
        axes.emplace_back(key, values);
    }
    std::vector<json> out;
    std::vector<std::size_t> index(axes.size(), 0);
    while (true) {
        json scenario = base;
        json params = json::object();
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const json& value = axes[a].second[index[a]];
            std::string pointer = "/" + axes[a].first;
            std::replace(pointer.begin(), pointer.end(), '.', '/');
            scenario[json::json_pointer(pointer)] = value;
            params[axes[a].first] = value;
        }
        scenario["name"] = base.value("name", std::string("sweep")) + "-" + std::to_string(out.size());
        scenario["sweep_params"] = params;
        out.push_back(std::move(scenario));

        std::size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++index[a] < axes[a].second.size())
                break;
            index[a] = 0;
            if (a == 0)
                return out;
        }
        if (axes.empty())
            return out;
    }
}

unsigned default_workers()
{
    if (const char* env = std::getenv("PYRELINE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return static_cast<unsigned>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

std::vector<SweepRow> sweep(const json& base, const json& grid, unsigned workers)
{
    std::vector<json> jobs = expand_grid(base, grid);
    std::vector<Scenario> scenarios;
    std::vector<SweepRow> rows(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        rows[i].params = jobs[i]["sweep_params"];
        jobs[i].erase("sweep_params");
        scenarios.push_back(scenario_from_json(jobs[i]));
    }
    if (workers == 0)
        workers = default_workers();
    workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) {
            try {
                rows[i].result = run_scenario(scenarios[i]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
    if (rows.empty())
        return;
    std::vector<std::string> keys;
    for (const auto& [key, value] : rows.front().params.items())
        keys.push_back(key);
    for (const auto& k : keys)
        out << k << ',';
    out << "name,turns,final_density,tail_min,tail_max,passed\n";
    for (const SweepRow& row : rows) {
        for (const auto& k : keys)
            out << row.params.at(k).dump() << ',';
        const json& s = row.result.summary;
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g", s.at("final_density").get<double>(),
                      s.at("tail_min").get<double>(), s.at("tail_max").get<double>());
        out << s.at("name").get<std::string>() << ',' << s.at("turns").get<Turn>() << ',' << buf << ','
            << (row.result.passed ? "true" : "false") << '\n';
    }
}

} // namespace pyreline
