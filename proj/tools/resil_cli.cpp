#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resil/io/graph_report.hpp"
#include "resil/io/report_json.hpp"
#include "resil/io/scenario_json.hpp"
#include "resil/io/topology_json.hpp"
#include "resil/io/trace_csv.hpp"
#include "resil/resil.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    for (const auto& s : split(text, ','))
        out.push_back(resil::parse_number(s));
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw resil::InvalidInput("cannot write " + path.string());
    out << content;
}

void emit(const std::string& out_path, const nlohmann::ordered_json& doc) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        write_file(out_path, text);
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed) {
    auto cfg = resil::io::load_scenario(scenario_path);
    if (seed)
        cfg.seed = *seed;
    fs::create_directories(out_dir);

    const fs::path slots_path = fs::path(out_dir) / cfg.output.per_slot_csv;
    std::ofstream slots(slots_path, std::ios::binary);
    if (!slots)
        throw resil::InvalidInput("cannot write " + slots_path.string());
    auto report = resil::run_scenario(cfg, &slots);
    report.per_slot_trace = cfg.output.per_slot_csv;
    if (cfg.predictor.kind != resil::PolicyKind::oracle) {
        auto oracle_cfg = cfg;
        oracle_cfg.predictor.kind = resil::PolicyKind::oracle;
        report.overhead_vs_oracle =
            resil::overhead_ratio(report, resil::run_scenario(oracle_cfg));
    }
    emit((fs::path(out_dir) / cfg.output.summary_json).string(), resil::io::to_json(report));
    std::cout << resil::to_string(report.kind) << ": achieved_outage="
              << resil::format_number(report.achieved_outage)
              << " mean_allocation=" << resil::format_number(report.mean_allocation) << '\n';
    return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& kinds_text, int reps,
              const std::string& out_dir, unsigned threads) {
    const auto cfg = resil::io::load_scenario(scenario_path);
    std::vector<resil::PolicyKind> kinds;
    for (const auto& name : split(kinds_text, ',')) {
        const auto k = resil::parse_policy(name);
        if (!k)
            throw resil::InvalidInput("unknown kind '" + name + "'");
        kinds.push_back(*k);
    }
    const auto table = resil::run_sweep(cfg, kinds, reps, {threads});
    fs::create_directories(out_dir);
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : table)
        rows.push_back(resil::io::to_json(r));
    emit((fs::path(out_dir) / "sweep.json").string(), rows);
    if (!table.empty())
        write_file(fs::path(out_dir) / cfg.output.plot_csv, resil::emit_plot_data(table));
    std::cout << table.size() << " reports written to " << out_dir << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resilience simulator and metrics toolkit for wireless links and networks"};
    app.require_subcommand(1);

    std::string scenario, out, kinds = "oracle,markov,average,worst_state";
    std::optional<std::uint64_t> seed;
    int reps = 1;
    unsigned threads = 0;

    auto* run = app.add_subcommand("run", "Simulate one scenario");
    run->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "Output directory")->required();
    run->add_option("--seed", seed, "Override the scenario seed");

    auto* sweep = app.add_subcommand("sweep", "Compare allocation policies over replications");
    sweep->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sweep->add_option("--kinds", kinds, "Comma-separated policies");
    sweep->add_option("--reps", reps, "Replications")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out, "Output directory")->required();
    sweep->add_option("--threads", threads, "Worker threads (0 = serial)");

    std::string trace, weights_text;
    resil::io::MetricsOptions mopt;
    auto* metrics = app.add_subcommand("metrics", "Resilience metrics of a service trace");
    metrics->add_option("--trace", trace, "Trace CSV with header t,s")
        ->required()
        ->check(CLI::ExistingFile);
    metrics->add_option("--alpha", mopt.alpha, "Adoption threshold in (0,1)");
    metrics->add_option("--tau", mopt.tau, "Phase decay constant");
    metrics->add_option("--weights", weights_text, "Phase weights a,b,c summing to 1");
    metrics->add_option("--survival", mopt.survival_time, "Survival time in samples");
    metrics->add_option("--out", out, "Output JSON (default stdout)");

    std::string topology, analysis, region_circle, region_nodes, remove_nodes, flows_path;
    resil::NodeId source = 0, dest = 0;
    double capacity = 0.0;
    auto* graph = app.add_subcommand("graph", "Topology resilience analyses");
    graph->add_option("--topology", topology, "Topology JSON")->required()->check(CLI::ExistingFile);
    graph->add_option("--analysis", analysis, "connectivity|critical|reroute|shed|isolate")
        ->required()
        ->check(CLI::IsMember({"connectivity", "critical", "reroute", "shed", "isolate"}));
    graph->add_option("--source", source, "Reroute source node id");
    graph->add_option("--dest", dest, "Reroute destination node id");
    graph->add_option("--region-circle", region_circle, "Disruption disc x,y,r");
    graph->add_option("--region-nodes", region_nodes, "Disrupted node ids a,b,...");
    graph->add_option("--remove", remove_nodes, "Node ids to isolate a,b,...");
    graph->add_option("--flows", flows_path, "Flow/tier JSON for shedding");
    graph->add_option("--capacity", capacity, "Available capacity for shedding");
    graph->add_option("--out", out, "Output JSON (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return cmd_run(scenario, out, seed);
        if (*sweep)
            return cmd_sweep(scenario, kinds, reps, out, threads);
        if (*metrics) {
            if (!weights_text.empty()) {
                const auto w = parse_numbers(weights_text);
                if (w.size() != 3)
                    throw resil::InvalidInput("--weights needs three values");
                mopt.weights = {w[0], w[1], w[2]};
            }
            emit(out, resil::io::metrics_report(resil::io::read_trace_csv(trace), mopt));
            return 0;
        }
        if (*graph) {
            const auto g = resil::io::load_topology(topology);
            auto ids = [](const std::string& text) {
                std::vector<resil::NodeId> out_ids;
                for (double v : parse_numbers(text))
                    out_ids.push_back(static_cast<resil::NodeId>(v));
                return out_ids;
            };
            if (analysis == "connectivity") {
                emit(out, resil::io::connectivity_report(g));
            } else if (analysis == "critical") {
                emit(out, resil::io::critical_report(g));
            } else if (analysis == "isolate") {
                emit(out, resil::io::isolate_report(g, ids(remove_nodes)));
            } else if (analysis == "reroute") {
                if (graph->count("--source") == 0 || graph->count("--dest") == 0)
                    throw resil::InvalidInput("reroute needs --source and --dest");
                auto region = resil::DisruptionRegion::none();
                if (!region_circle.empty()) {
                    const auto c = parse_numbers(region_circle);
                    if (c.size() != 3)
                        throw resil::InvalidInput("--region-circle needs x,y,r");
                    region = resil::DisruptionRegion::circle(c[0], c[1], c[2]);
                } else if (!region_nodes.empty()) {
                    const auto v = ids(region_nodes);
                    region = resil::DisruptionRegion::nodes({v.begin(), v.end()});
                }
                emit(out, resil::io::reroute_report(g, source, dest, region));
            } else {
                if (flows_path.empty())
                    throw resil::InvalidInput("shed needs --flows");
                const auto flows = resil::io::parse_flows(resil::io::load_json_file(flows_path));
                emit(out, resil::io::shed_report(flows, capacity));
            }
            return 0;
        }
    } catch (const resil::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
