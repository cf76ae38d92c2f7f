// sodsim command line front end.
//
//   sodsim run      --config scenario.json [--seed N] [--out DIR] [--decision-log FILE]
//   sodsim sweep    --config scenario.json --sweep field=v1,v2,... [--jobs N] [--out DIR]
//   sodsim validate --config scenario.json
//
// Exit codes: 0 success, 1 user/config error, 2 internal invariant breach.
// The default output directory is ./out, overridable with SODSIM_OUT_DIR;
// an explicit --out wins over both.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sodsim/errors.hpp"
#include "sodsim/network_sim.hpp"
#include "sodsim/sweep.hpp"

namespace {

std::string default_out_dir(const std::string& cli_value, bool cli_given) {
    if (cli_given) return cli_value;
    if (const char* env = std::getenv("SODSIM_OUT_DIR"); env && *env) return env;
    return "out";
}

const char* action_name(sodsim::ForwardAction action) {
    switch (action) {
    case sodsim::ForwardAction::Forward: return "forward";
    case sodsim::ForwardAction::Cache: return "cache";
    case sodsim::ForwardAction::Drop: return "drop";
    }
    return "?";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sodsim - energy-aware wireless ad-hoc network simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    std::string decision_log_path;
    std::vector<std::string> sweep_specs;
    int jobs = 1;

    CLI::App* run_cmd = app.add_subcommand("run", "Execute one scenario");
    run_cmd->add_option("--config", config_path, "Scenario JSON file")->required();
    run_cmd->add_option("--seed", seed_override, "Override the scenario seed");
    auto* run_out = run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--decision-log", decision_log_path,
                        "Write per-packet forwarding decisions (NDJSON)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep_cmd->add_option("--config", config_path, "Scenario JSON file")->required();
    sweep_cmd->add_option("--sweep", sweep_specs, "Axis spec field=v1,v2,... (repeatable)")
        ->required();
    sweep_cmd->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
    auto* sweep_out = sweep_cmd->add_option("--out", out_dir, "Output directory");

    CLI::App* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
    validate_cmd->add_option("--config", config_path, "Scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        sodsim::Scenario scenario = sodsim::Scenario::from_json_file(config_path);

        if (validate_cmd->parsed()) {
            std::cout << "OK: " << config_path << " is a valid scenario\n";
            return 0;
        }

        if (run_cmd->parsed()) {
            if (seed_override) scenario.seed = *seed_override;
            const std::string dir = default_out_dir(out_dir, run_out->count() > 0);

            sodsim::NetworkSim sim(scenario);
            std::ofstream decision_log;
            if (!decision_log_path.empty()) {
                const auto parent = std::filesystem::path(decision_log_path).parent_path();
                if (!parent.empty()) std::filesystem::create_directories(parent);
                decision_log.open(decision_log_path, std::ios::binary);
                if (!decision_log) {
                    std::cerr << "error: cannot write " << decision_log_path << "\n";
                    return 1;
                }
                sim.set_decision_log([&decision_log](const sodsim::DecisionLogRecord& rec) {
                    nlohmann::json line{{"t_s", rec.t_s},
                                        {"node", rec.node},
                                        {"packet_id", rec.packet_id},
                                        {"decision", action_name(rec.action)},
                                        {"residual_j", rec.residual_j}};
                    if (rec.sigma_valid) line["sigma"] = rec.sigma;
                    decision_log << line.dump() << "\n";
                });
            }
            sim.spawn_default_flows();
            const sodsim::RunResult result = sim.run();
            sodsim::emit_run_outputs(result, scenario, dir);
            std::cout << "run complete: " << result.metrics.totals.generated
                      << " packets generated, " << result.metrics.totals.delivered
                      << " delivered, outputs in " << dir << "\n";
            return 0;
        }

        if (sweep_cmd->parsed()) {
            const std::string dir = default_out_dir(out_dir, sweep_out->count() > 0);
            std::vector<sodsim::SweepAxis> axes;
            axes.reserve(sweep_specs.size());
            for (const std::string& spec : sweep_specs)
                axes.push_back(sodsim::parse_sweep_axis(spec));
            const sodsim::SweepResult result = sodsim::run_sweep(scenario, axes, dir, jobs);
            std::cout << "sweep complete: " << result.points.size() << " points, outputs in "
                      << dir << "\n";
            return 0;
        }
    } catch (const sodsim::SimInvariantError& e) {
        std::cerr << "internal invariant breach: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
