#pragma once

#include "pyreline/engine.hpp"
#include "pyreline/growth_schedule.hpp"
#include "pyreline/strategies.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pyreline {

inline constexpr int kScenarioSchema = 1;

struct Assertion {
    std::string metric; // tail_min, tail_max, checkpoint, phase_boundary_min
    std::string op;     // <=, <, >=, >
    double threshold = 0.0;
    /// tail_*: last turn of the window (0 = whole run); checkpoint: the turn;
    /// phase_boundary_min: smallest N_k considered.
    Turn horizon = 0;
};

struct Scenario {
    std::string name = "scenario";
    nlohmann::json schedule;
    std::string builder = "path";
    std::string arsonist = "greedy";
    PhaseOptions phase;
    Turn turns = 1;
    std::uint64_t seed = 1;
    double tail_fraction = 0.5;
    bool fast_forward = false;
    std::vector<Turn> checkpoints;
    std::vector<Assertion> assertions;
};

/// Validates and converts; errors name the offending field path.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
/// Parses text; syntax errors report line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);
Scenario load_scenario(const std::filesystem::path& path);

struct AssertionResult {
    Assertion assertion;
    double value = 0.0;
    bool passed = false;
};

struct ScenarioResult {
    nlohmann::json summary;
    std::vector<TurnRecord> trace;
    std::vector<AssertionResult> assertions;
    bool passed = true;
};

ScenarioResult run_scenario(const Scenario& s);

/// Writes <name>.trace.csv and <name>.summary.json into `dir`.
void write_outputs(const ScenarioResult& result, const std::string& name, const std::filesystem::path& dir);

// ---- presets ----

std::vector<std::string> preset_names();
/// Scenario JSON for a preset (the tree-dominance preset has its own form).
nlohmann::json preset_json(const std::string& name);

// ---- sweeps ----

/// Grid keys are dotted paths into the scenario JSON, each mapped to a list
/// of values; every combination becomes one scenario.
std::vector<nlohmann::json> expand_grid(const nlohmann::json& base, const nlohmann::json& grid);

struct SweepRow {
    nlohmann::json params; // grid key -> value
    ScenarioResult result;
};

/// Runs every combination on a worker pool (PYRELINE_THREADS caps workers).
std::vector<SweepRow> sweep(const nlohmann::json& base, const nlohmann::json& grid, unsigned workers = 0);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Worker count from PYRELINE_THREADS, else hardware concurrency.
unsigned default_workers();

} // namespace pyreline
