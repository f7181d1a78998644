#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "novelty/agent.hpp"
#include "novelty/cartpole.hpp"
#include "novelty/classifier.hpp"
#include "novelty/config_io.hpp"
#include "novelty/framework.hpp"
#include "novelty/measures.hpp"
#include "novelty/prng.hpp"
#include "novelty/sweep.hpp"
#include "novelty/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitCompute = 4;

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_manifest(const std::string& command, std::uint64_t master_seed,
                    const nlohmann::json& config, const std::vector<std::string>& outputs) {
    nlohmann::json manifest = nlohmann::json::object();
    manifest["command"] = command;
    manifest["version"] = novelty::kVersion;
    manifest["master_seed"] = master_seed;
    manifest["config"] = config;
    manifest["outputs"] = outputs;
    novelty::write_text_file(outputs.front() + ".manifest.json", manifest.dump(2) + "\n");
}

struct SimulateOptions {
    std::string world_path;
    std::string agent_path;
    std::string out_path = "trajectory.csv";
    int steps = 200;
};

int cmd_simulate(const SimulateOptions& options, std::uint64_t seed, bool quiet) {
    const novelty::WorldParams world =
        options.world_path.empty() ? novelty::WorldParams{} : novelty::load_world_params(options.world_path);
    const novelty::AgentState agent =
        options.agent_path.empty() ? novelty::AgentState{} : novelty::load_agent(options.agent_path);

    const novelty::EpisodeResult episode = novelty::run_episode(world, agent, seed, options.steps, true);

    std::string csv = "t,z,zdot,phi,phidot,action,loss,detector_flag\n";
    for (const novelty::StepRecord& record : episode.steps) {
        csv += std::to_string(record.t);
        csv += ',';
        csv += format_double(record.observation.z);
        csv += ',';
        csv += format_double(record.observation.zdot);
        csv += ',';
        csv += format_double(record.observation.phi);
        csv += ',';
        csv += format_double(record.observation.phidot);
        csv += ',';
        csv += novelty::to_string(record.action);
        csv += ',';
        csv += std::to_string(record.loss);
        csv += ',';
        csv += record.detector_flag ? "1" : "0";
        csv += '\n';
    }
    novelty::write_text_file(options.out_path, csv);

    nlohmann::json config = nlohmann::json::object();
    config["world"] = novelty::world_to_document(world);
    config["agent"] = novelty::agent_to_document(agent);
    config["steps"] = options.steps;
    write_manifest("simulate", seed, config, {options.out_path});

    if (!quiet) {
        std::cout << "simulate: " << episode.steps.size() << " steps written to " << options.out_path
                  << (episode.failed ? " (episode failed)" : "") << "\n";
    }
    return kExitOk;
}

struct SweepOptions {
    std::string spec_path;
    std::string out_path = "sweep.csv";
    std::string svg_path;
    int threads = 1;
};

int cmd_sweep(const SweepOptions& options, std::optional<std::uint64_t> seed_override, bool quiet) {
    novelty::SweepSpec spec = novelty::load_sweep(options.spec_path);
    if (seed_override) spec.config.master_seed = *seed_override;

    const novelty::HeatmapGrid grid = novelty::run_sweep(spec, options.threads);
    novelty::write_text_file(options.out_path, novelty::grid_to_csv(grid));
    std::vector<std::string> outputs{options.out_path};
    if (!options.svg_path.empty()) {
        novelty::write_text_file(options.svg_path, novelty::grid_to_svg(grid));
        outputs.push_back(options.svg_path);
    }
    write_manifest("sweep", spec.config.master_seed, novelty::sweep_to_document(spec), outputs);

    if (!quiet) {
        std::cout << "sweep: " << spec.assumed_grid.size() << "x" << spec.actual_grid.size()
                  << " grid written to " << options.out_path << "\n";
    }
    return kExitOk;
}

struct ClassifyOptions {
    std::string baseline_path;
    std::string test_path;
    std::string agent_path;
    std::string thresholds_path;
    std::string out_path = "report.json";
};

int cmd_classify(const ClassifyOptions& options, std::uint64_t seed, bool quiet) {
    const novelty::WorldParams baseline = novelty::load_world_params(options.baseline_path);
    const novelty::WorldParams test = novelty::load_world_params(options.test_path);
    const novelty::AgentState agent =
        options.agent_path.empty() ? novelty::AgentState{} : novelty::load_agent(options.agent_path);
    const novelty::Thresholds thresholds =
        options.thresholds_path.empty() ? novelty::Thresholds{} : novelty::load_thresholds(options.thresholds_path);

    novelty::MeasureConfig config;
    config.master_seed = seed;

    const novelty::NoveltyReport report = novelty::classify_scenario(baseline, test, agent, thresholds, config);
    novelty::write_text_file(options.out_path, novelty::report_to_json(report));

    nlohmann::json manifest_config = nlohmann::json::object();
    manifest_config["baseline"] = novelty::world_to_document(baseline);
    manifest_config["test"] = novelty::world_to_document(test);
    manifest_config["agent"] = novelty::agent_to_document(agent);
    manifest_config["thresholds"] = novelty::thresholds_to_document(thresholds);
    manifest_config["n_samples"] = config.n_samples;
    manifest_config["horizon"] = config.horizon;
    write_manifest("classify", seed, manifest_config, {options.out_path});

    std::cout << report.cell_name << "\n";
    if (!quiet) {
        std::cout << "classify: report written to " << options.out_path << "\n";
    }
    return kExitOk;
}

bool check(bool condition, const char* name, int& failures) {
    std::cout << (condition ? "[ OK ] " : "[FAIL] ") << name << "\n";
    if (!condition) ++failures;
    return condition;
}

// Built-in sanity battery: a frozen one-step golden, the diagonal-zero
// property of both dissimilarities, and the full taxonomy enumeration.
int cmd_selftest() {
    int failures = 0;

    {
        novelty::WorldState world;
        world.params = novelty::WorldParams{};
        world.phi = 0.05;
        const novelty::WorldState next = novelty::step(world, novelty::Action::Right);
        const bool golden =
            next.z == 0.0 &&
            std::fabs(next.zdot - 0.19437054660530101) < 1e-15 &&
            next.phi == 0.05 &&
            std::fabs(next.phidot - (-0.27649757528715507)) < 1e-15;
        check(golden, "one-step transition matches frozen golden", failures);
    }
    {
        novelty::MeasureConfig config;
        config.n_samples = 5;
        config.horizon = 50;
        config.master_seed = 11;
        novelty::WorldParams world;
        world.push_force = 17.0;
        world.gravity = 11.0;
        const bool diag_o = novelty::observation_dissimilarity(world, world, config) <= 1e-12;
        const bool diag_w = novelty::world_dissimilarity(world, world, config) <= 1e-12;
        check(diag_o && diag_w, "self-dissimilarity is zero in both spaces", failures);
    }
    {
        bool table_ok = true;
        for (int row = 0; row < 8; ++row) {
            novelty::NoveltyFlags flags;
            flags.world_novel = row < 4;
            flags.observation_novel = (row % 4) < 2;
            flags.agent_novel = (row % 2) == 0;
            for (int column = 0; column < 4; ++column) {
                novelty::RegretValues regrets;
                regrets.world_regret = column < 2 ? 1.0 : 0.0;
                regrets.observation_regret = (column % 2) == 0 ? 1.0 : 0.0;
                const novelty::NoveltyReport report = novelty::classify(flags, regrets, novelty::Thresholds{});
                const std::size_t r = static_cast<std::size_t>(novelty::subtype_row(flags));
                const std::size_t c = static_cast<std::size_t>(
                    novelty::subtype_column(report.world_regret_high, report.observation_regret_high));
                table_ok = table_ok && report.cell_name == novelty::kSubtypeCells[r][c];
            }
        }
        check(table_ok, "all 32 taxonomy combinations classify to their cell", failures);
    }

    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return failures == 0 ? kExitOk : kExitCompute;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CartPole novelty framework: simulation, sweeps, and scenario classification"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_override;
    bool quiet = false;
    app.add_option("--seed", seed_override, "Override every config-provided seed");
    app.add_flag("--quiet", quiet, "Suppress human-readable summaries");

    SimulateOptions simulate_options;
    CLI::App* simulate = app.add_subcommand("simulate", "Roll one agent episode and write the trajectory CSV");
    simulate->fallthrough();
    simulate->add_option("--world", simulate_options.world_path, "World config file (defaults if omitted)");
    simulate->add_option("--agent", simulate_options.agent_path, "Agent config file (defaults if omitted)");
    simulate->add_option("--steps", simulate_options.steps, "Episode horizon")->check(CLI::NonNegativeNumber);
    simulate->add_option("--out", simulate_options.out_path, "Trajectory CSV path");

    SweepOptions sweep_options;
    CLI::App* sweep = app.add_subcommand("sweep", "Run an (assumed x actual) grid experiment");
    sweep->fallthrough();
    sweep->add_option("--spec", sweep_options.spec_path, "Sweep spec file")->required();
    sweep->add_option("--out", sweep_options.out_path, "Grid CSV path");
    sweep->add_option("--svg", sweep_options.svg_path, "Also render the grid to this SVG path");
    sweep->add_option("--threads", sweep_options.threads, "Worker threads (results are identical for any count)")
        ->check(CLI::PositiveNumber);

    ClassifyOptions classify_options;
    CLI::App* classify = app.add_subcommand("classify", "Classify a (baseline, test) scenario");
    classify->fallthrough();
    classify->add_option("--world", classify_options.baseline_path, "Baseline world config")->required();
    classify->add_option("--test", classify_options.test_path, "Test world config")->required();
    classify->add_option("--agent", classify_options.agent_path, "Agent config file (defaults if omitted)");
    classify->add_option("--thresholds", classify_options.thresholds_path, "Thresholds config file (defaults if omitted)");
    classify->add_option("--out", classify_options.out_path, "Report JSON path");

    CLI::App* selftest = app.add_subcommand("selftest", "Run built-in sanity checks");
    selftest->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(simulate_options, seed_override.value_or(1), quiet);
        if (sweep->parsed()) return cmd_sweep(sweep_options, seed_override, quiet);
        if (classify->parsed()) return cmd_classify(classify_options, seed_override.value_or(1), quiet);
        return cmd_selftest();
    } catch (const novelty::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const novelty::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const novelty::NoveltyError& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    }
}
