#include "pyreline/burning_number.hpp"
#include "pyreline/errors.hpp"
#include "pyreline/graph.hpp"
#include "pyreline/scenario.hpp"
#include "pyreline/service.hpp"
#include "pyreline/tree_reduction.hpp"

#include "CLI11.hpp"
#include "httplib.h"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace pyreline;
using nlohmann::json;

namespace {

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::IoError, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

int report(const ScenarioResult& result, const std::string& name, const std::string& out_dir)
{
    write_outputs(result, name, out_dir);
    for (const AssertionResult& a : result.assertions)
        std::cout << (a.passed ? "PASS " : "FAIL ") << a.assertion.metric << ' ' << a.assertion.op << ' '
                  << a.assertion.threshold << " (value " << a.value << ")\n";
    std::cout << "final_density " << result.summary.at("final_density").get<double>() << "\n"
              << "wrote " << out_dir << '/' << name << ".{trace.csv,summary.json}\n";
    return result.passed ? 0 : 1;
}

int tree_dominance(std::size_t samples, std::uint64_t seed, Turn turns)
{
    const DominanceSummary s = verify_tree_dominance(samples, seed, turns);
    std::cout << "samples " << s.samples << "\nviolations " << s.violations << "\nstrict_runs " << s.strict_runs
              << '\n';
    return s.violations == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Adversarial graph-burning game: engine, strategies and experiment harness"};
    app.require_subcommand(1);

    std::string out_dir = "out";

    std::string scenario_path;
    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("scenario", scenario_path, "Scenario JSON")->required();
    run->add_option("--out", out_dir, "Output directory");

    std::string template_path, grid_path, sweep_csv = "sweep.csv";
    unsigned workers = 0;
    auto* sw = app.add_subcommand("sweep", "Run every combination of a parameter grid");
    sw->add_option("template", template_path, "Scenario JSON")->required();
    sw->add_option("grid", grid_path, "Grid JSON: dotted path -> list of values")->required();
    sw->add_option("--csv", sweep_csv, "Combined CSV output");
    sw->add_option("--workers", workers, "Worker threads (default PYRELINE_THREADS or all cores)");

    std::string preset_name;
    bool list = false, print_only = false;
    auto* preset = app.add_subcommand("preset", "Run a built-in scenario");
    preset->add_option("name", preset_name, "Preset name");
    preset->add_flag("--list", list, "List presets");
    preset->add_flag("--print", print_only, "Print the scenario JSON instead of running it");
    preset->add_option("--out", out_dir, "Output directory");

    std::string edge_list;
    std::size_t cap = kDefaultExactCap;
    auto* exact = app.add_subcommand("exact", "Exact burning number of an edge-list graph");
    exact->add_option("graph", edge_list, "Edge list: header 'n m', then one 'u v' pair per line")->required();
    exact->add_option("--cap", cap, "Largest graph the solver accepts");

    std::size_t samples = 100;
    std::uint64_t seed = 1;
    Turn turns = 100;
    auto* dom = app.add_subcommand("verify-tree-dominance", "Fuzz spanning-tree dominance");
    dom->add_option("--samples", samples, "Random constructions");
    dom->add_option("--seed", seed, "Seed");
    dom->add_option("--turns", turns, "Turns per construction");

    int port = 8080;
    std::string host = "0.0.0.0";
    auto* serve = app.add_subcommand("serve", "Start the HTTP game service");
    serve->add_option("--port", port, "Port");
    serve->add_option("--host", host, "Bind address");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const Scenario s = load_scenario(scenario_path);
            return report(run_scenario(s), s.name, out_dir);
        }
        if (*sw) {
            const json base = read_json_file(template_path);
            const auto rows = sweep(base, read_json_file(grid_path), workers);
            std::ofstream csv(sweep_csv);
            if (!csv)
                fail(ErrorCode::IoError, "cannot write " + sweep_csv);
            write_sweep_csv(csv, rows);
            bool passed = true;
            for (const SweepRow& row : rows) {
                write_outputs(row.result, row.result.summary.at("name"), out_dir);
                passed = passed && row.result.passed;
            }
            std::cout << rows.size() << " runs, wrote " << sweep_csv << '\n';
            return passed ? 0 : 1;
        }
        if (*preset) {
            if (list || preset_name.empty()) {
                for (const std::string& n : preset_names())
                    std::cout << n << '\n';
                return 0;
            }
            const json j = preset_json(preset_name);
            if (print_only) {
                std::cout << j.dump(2) << '\n';
                return 0;
            }
            if (j.value("kind", "") == "tree-dominance")
                return tree_dominance(j.at("samples"), j.at("seed"), j.at("turns"));
            const Scenario s = scenario_from_json(j);
            return report(run_scenario(s), s.name, out_dir);
        }
        if (*exact) {
            std::ifstream in(edge_list);
            if (!in)
                fail(ErrorCode::IoError, "cannot open " + edge_list);
            const GrowingGraph g = read_edge_list(in);
            const ExactResult r = exact_burning_number(GraphView(g), cap);
            std::cout << "b=" << r.burning_number << "\nsources";
            for (VertexId v : r.schedule.sources)
                std::cout << ' ' << v;
            std::cout << '\n';
            return 0;
        }
        if (*dom)
            return tree_dominance(samples, seed, turns);
        if (*serve) {
            const char* dir = std::getenv("PYRELINE_DATA_DIR");
            GameService service(dir ? dir : "pyreline-data");
            std::cout << "restored " << service.restore() << " games\n";
            httplib::Server server;
            mount_routes(server, service);
            std::cout << "listening on " << host << ':' << port << std::endl;
            if (!server.listen(host, port))
                fail(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
