// Acceptance battery. Each criterion prints one [ OK ]/[FAIL] line with its
// elapsed time; the binary exits nonzero if any criterion fails. Criteria
// with a stated time budget also fail when they run over it. argv[1] is the
// path to the command line tool, exercised end to end by the later criteria.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "novelty/agent.hpp"
#include "novelty/cartpole.hpp"
#include "novelty/classifier.hpp"
#include "novelty/framework.hpp"
#include "novelty/measures.hpp"
#include "novelty/prng.hpp"
#include "novelty/sweep.hpp"
#include "oracle.hpp"

namespace {

std::string g_cli;
std::filesystem::path g_dir;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

int run_cli(const std::string& args, std::string& out) {
    const std::filesystem::path out_path = g_dir / "stdout.txt";
    const std::string command =
        g_cli + " " + args + " > " + out_path.string() + " 2> " + (g_dir / "stderr.txt").string();
    const int status = std::system(command.c_str());
    out = read_file(out_path);
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

novelty::MeasureConfig make_config(int n_samples, int horizon, std::uint64_t master_seed) {
    novelty::MeasureConfig config;
    config.n_samples = n_samples;
    config.horizon = horizon;
    config.master_seed = master_seed;
    return config;
}

// The two frozen 13-value grids used by the dissimilarity and reward
// criteria. Each contains its parameter's default.
const std::vector<double> kPushGrid{1.0,  2.5,  5.0,  7.5,  10.0, 12.5, 15.0,
                                    20.0, 25.0, 30.0, 35.0, 40.0, 45.0};
constexpr std::size_t kPushDefaultIndex = 4;  // 10.0
const std::vector<double> kDriftGrid{-15.0, -12.5, -10.0, -7.5, -5.0, -2.5, 0.0,
                                     2.5,   5.0,   7.5,   10.0, 12.5, 15.0};
constexpr std::size_t kDriftDefaultIndex = 6;  // 0.0

bool criterion_physics_oracle(std::string& detail) {
    novelty::Xoshiro256pp rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        novelty::WorldParams params;
        params.gravity = rng.uniform(1.0, 20.0);
        params.cart_mass = rng.uniform(0.1, 5.0);
        params.pole_mass_per_length = rng.uniform(0.01, 1.0);
        params.pole_length = rng.uniform(0.2, 3.0);
        params.push_force = rng.uniform(0.5, 30.0);
        params.horizontal_force = rng.uniform(-15.0, 15.0);
        params.tau = rng.uniform(0.001, 0.05);

        novelty::WorldState state;
        state.params = params;
        state.z = rng.uniform(-2.4, 2.4);
        state.zdot = rng.uniform(-3.0, 3.0);
        state.phi = rng.uniform(-0.5, 0.5);
        state.phidot = rng.uniform(-3.0, 3.0);

        const novelty::Action action =
            rng.uniform01() < 0.5 ? novelty::Action::Left : novelty::Action::Right;
        const novelty::WorldState next = novelty::step(state, action);

        oracle::Physical physical;
        physical.gravity = params.gravity;
        physical.cart_mass = params.cart_mass;
        physical.pole_mass_per_length = params.pole_mass_per_length;
        physical.pole_length = params.pole_length;
        physical.push_force = params.push_force;
        physical.horizontal_force = params.horizontal_force;
        physical.tau = params.tau;
        oracle::Vec4 vec;
        vec.z = state.z;
        vec.zdot = state.zdot;
        vec.phi = state.phi;
        vec.phidot = state.phidot;
        const oracle::Vec4 expected =
            oracle::step(physical, vec, action == novelty::Action::Right ? 1 : -1);

        worst = std::max(worst, oracle::relative_error(next.z, expected.z));
        worst = std::max(worst, oracle::relative_error(next.zdot, expected.zdot));
        worst = std::max(worst, oracle::relative_error(next.phi, expected.phi));
        worst = std::max(worst, oracle::relative_error(next.phidot, expected.phidot));
    }
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "worst relative error %.3g", worst);
    detail = buffer;
    return worst <= 1e-12;
}

bool criterion_self_dissimilarity(std::string& detail) {
    novelty::Xoshiro256pp rng(515);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        novelty::WorldParams params;
        params.gravity = rng.uniform(2.0, 18.0);
        params.cart_mass = rng.uniform(0.2, 4.0);
        params.pole_mass_per_length = rng.uniform(0.02, 0.5);
        params.pole_length = rng.uniform(0.3, 2.5);
        params.push_force = rng.uniform(1.0, 25.0);
        params.horizontal_force = rng.uniform(-8.0, 8.0);
        if (trial % 3 == 0) params.hidden = {rng.uniform(-5.0, 5.0)};

        const novelty::MeasureConfig config = make_config(5, 50, 1000 + static_cast<std::uint64_t>(trial));
        worst = std::max(worst, novelty::observation_dissimilarity(params, params, config));
        worst = std::max(worst, novelty::world_dissimilarity(params, params, config));
    }
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "worst self-dissimilarity %.3g", worst);
    detail = buffer;
    return worst <= 1e-12;
}

// Spearman correlation between |actual - assumed| and the measured mean,
// over one half of the assumed-default row (center included).
double half_row_trend(const novelty::HeatmapGrid& grid, std::size_t row,
                      const std::vector<double>& values, std::size_t center, bool left_half) {
    std::vector<double> distances;
    std::vector<double> means;
    const std::size_t begin = left_half ? 0 : center;
    const std::size_t end = left_half ? center + 1 : values.size();
    for (std::size_t j = begin; j < end; ++j) {
        distances.push_back(std::fabs(values[j] - values[center]));
        means.push_back(grid.at(row, j).mean);
    }
    return oracle::spearman(distances, means);
}

bool criterion_dissimilarity_trend(std::string& detail) {
    double worst_rho = 1.0;
    for (int which = 0; which < 2; ++which) {
        novelty::SweepSpec spec;
        spec.parameter = which == 0 ? novelty::SweepParameter::PushForce
                                    : novelty::SweepParameter::HorizontalForce;
        spec.measure = novelty::SweepMeasure::DissimilarityO;
        spec.assumed_grid = which == 0 ? kPushGrid : kDriftGrid;
        spec.actual_grid = spec.assumed_grid;
        spec.config = make_config(20, 200, 1);
        const std::size_t center = which == 0 ? kPushDefaultIndex : kDriftDefaultIndex;

        const novelty::HeatmapGrid grid = novelty::run_sweep(spec, 4);
        worst_rho = std::min(worst_rho, half_row_trend(grid, center, spec.actual_grid, center, true));
        worst_rho = std::min(worst_rho, half_row_trend(grid, center, spec.actual_grid, center, false));
    }
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "worst half-row Spearman %.4f", worst_rho);
    detail = buffer;
    return worst_rho >= 0.9;
}

bool criterion_reward_flat_under_push_and_gravity(std::string& detail) {
    novelty::SweepSpec push_spec;
    push_spec.parameter = novelty::SweepParameter::PushForce;
    push_spec.measure = novelty::SweepMeasure::Reward;
    push_spec.assumed_grid = {10.0};
    push_spec.actual_grid = {0.001, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0};
    push_spec.config = make_config(20, 700, 1);
    const novelty::HeatmapGrid push_grid = novelty::run_sweep(push_spec, 4);

    const double push_reference = push_grid.at(0, 3).mean;  // actual == default
    double worst_drop = 0.0;
    for (std::size_t j = 1; j < push_spec.actual_grid.size(); ++j) {
        worst_drop = std::max(worst_drop, std::fabs(push_grid.at(0, j).mean - push_reference));
    }
    const double stall_reward = push_grid.at(0, 0).mean;

    novelty::SweepSpec gravity_spec;
    gravity_spec.parameter = novelty::SweepParameter::Gravity;
    gravity_spec.measure = novelty::SweepMeasure::Reward;
    gravity_spec.assumed_grid = {9.8};
    gravity_spec.actual_grid = {5.0, 7.5, 9.8, 12.5, 15.0};
    gravity_spec.config = make_config(20, 700, 1);
    const novelty::HeatmapGrid gravity_grid = novelty::run_sweep(gravity_spec, 4);

    const double gravity_reference = gravity_grid.at(0, 2).mean;
    for (std::size_t j = 0; j < gravity_spec.actual_grid.size(); ++j) {
        worst_drop = std::max(worst_drop, std::fabs(gravity_grid.at(0, j).mean - gravity_reference));
    }

    char buffer[96];
    std::snprintf(buffer, sizeof(buffer), "worst in-range deviation %.4f, stall reward %.4f",
                  worst_drop, stall_reward);
    detail = buffer;
    return worst_drop <= 0.05 && stall_reward <= 0.1;
}

bool criterion_reward_collapse_under_drift(std::string& detail) {
    novelty::SweepSpec spec;
    spec.parameter = novelty::SweepParameter::HorizontalForce;
    spec.measure = novelty::SweepMeasure::Reward;
    spec.assumed_grid = {0.0};
    spec.actual_grid = kDriftGrid;
    spec.config = make_config(20, 1000, 1);
    const novelty::HeatmapGrid grid = novelty::run_sweep(spec, 4);

    double worst_tail = 0.0;
    for (std::size_t j = 0; j < spec.actual_grid.size(); ++j) {
        if (std::fabs(spec.actual_grid[j]) > 10.0) {
            worst_tail = std::max(worst_tail, grid.at(0, j).mean);
        }
    }
    const double rho_left = half_row_trend(grid, 0, spec.actual_grid, kDriftDefaultIndex, true);
    const double rho_right = half_row_trend(grid, 0, spec.actual_grid, kDriftDefaultIndex, false);
    const double worst_rho = std::max(rho_left, rho_right);

    char buffer[96];
    std::snprintf(buffer, sizeof(buffer), "worst overwhelmed reward %.4f, worst Spearman %.4f",
                  worst_tail, worst_rho);
    detail = buffer;
    return worst_tail <= 0.1 && worst_rho <= -0.9;
}

bool criterion_taxonomy_table(std::string& detail) {
    // Local transcription of the eight-row subtype table, kept separate from
    // the library's copy on purpose.
    static const std::array<std::array<const char*, 4>, 8> expected{{
        {"Unanimous w/ Regret", "Unanimous Nuisance", "Unanimous Nuisance", "Unanimous Managed"},
        {"Ignored", "Ignored Nuisance", "Ignored Nuisance", "Ignored Managed"},
        {"Imperceptible", "Imperceptible Nuis.", "Imperceptible Nuis.", "Managed Imperceptible"},
        {"Imperceptible Ignored", "Imper. Ignored Nuis.", "Imper. Ignored Nuis.", "Managed Imperceptible"},
        {"Faux", "Faux Nuis.", "Faux Nuis.", "Managed Faux"},
        {"Faux Ignored", "Faux Ignored Nuis.", "Faux Ignored Nuis.", "Managed Faux"},
        {"Faux", "Faux Nuis.", "Faux Nuis.", "Managed Faux"},
        {"No novelty", "No novelty Nuis.", "No novelty Nuis.", "No Novelty"},
    }};

    int mismatches = 0;
    for (int row = 0; row < 8; ++row) {
        novelty::NoveltyFlags flags;
        flags.world_novel = (row & 4) == 0;
        flags.observation_novel = (row & 2) == 0;
        flags.agent_novel = (row & 1) == 0;
        for (int column = 0; column < 4; ++column) {
            novelty::RegretValues regrets;
            regrets.world_regret = (column & 2) == 0 ? 1.0 : 0.0;
            regrets.observation_regret = (column & 1) == 0 ? 1.0 : 0.0;
            const novelty::NoveltyReport report =
                novelty::classify(flags, regrets, novelty::Thresholds{});
            const bool cell_ok =
                report.cell_name == expected[static_cast<std::size_t>(row)][static_cast<std::size_t>(column)];
            const bool index_ok = novelty::subtype_row(flags) == row &&
                                  novelty::subtype_column(report.world_regret_high,
                                                          report.observation_regret_high) == column;
            if (!cell_ok || !index_ok) ++mismatches;
        }
    }
    detail = std::to_string(32 - mismatches) + "/32 cells match";
    return mismatches == 0;
}

bool criterion_regret_identity(std::string& detail) {
    std::vector<novelty::WorldParams> environments(5);
    environments[1].horizontal_force = 12.0;
    environments[2].gravity = 15.0;
    environments[3].push_force = 5.0;
    environments[4].pole_length = 2.0;

    const novelty::MeasureConfig config = make_config(20, 200, 777);
    const novelty::AgentState agent;
    long steps_checked = 0;
    for (const novelty::WorldParams& environment : environments) {
        for (int k = 0; k < config.n_samples; ++k) {
            const std::uint64_t seed =
                novelty::derive_seed(config.master_seed, static_cast<std::uint64_t>(k));
            const novelty::detail::PaddedLosses losses =
                novelty::detail::padded_losses(environment, agent, seed, config.horizon);
            if (losses.world != losses.observation) {
                detail = "per-step losses diverge between spaces";
                return false;
            }
        }
        const novelty::EpisodeRegretDetail regret =
            novelty::episode_regret_detail(environment, agent, environment, config);
        for (const novelty::EpisodeRegretSample& sample : regret.samples) {
            if (sample.world_step_regret != sample.observation_step_regret) {
                detail = "per-step regret diverges between spaces";
                return false;
            }
            if (sample.world_regret != sample.observation_regret) {
                detail = "per-episode regret diverges between spaces";
                return false;
            }
            steps_checked += static_cast<long>(sample.world_step_regret.size());
        }
        if (regret.values.world_regret != regret.values.observation_regret) {
            detail = "aggregate regret diverges between spaces";
            return false;
        }
    }
    detail = std::to_string(steps_checked) + " steps identical in both spaces";
    return true;
}

bool criterion_imperceptible_signature(std::string& detail) {
    novelty::WorldParams baseline;
    baseline.hidden = {0.0};
    novelty::WorldParams shifted;
    shifted.hidden = {3.0};
    const novelty::MeasureConfig config = make_config(5, 50, 2);

    const double d_o = novelty::observation_dissimilarity(baseline, shifted, config);
    const double d_w = novelty::world_dissimilarity(baseline, shifted, config);
    if (!(d_o <= 1e-12 && d_w > 0.0)) {
        detail = "dissimilarity signature wrong";
        return false;
    }

    write_file(g_dir / "baseline.toml", "hidden = [0]\n");
    write_file(g_dir / "shifted.toml", "hidden = [3]\n");
    std::string out;
    const int code = run_cli("classify --quiet --world " + (g_dir / "baseline.toml").string() +
                                 " --test " + (g_dir / "shifted.toml").string() + " --out " +
                                 (g_dir / "report.json").string(),
                             out);
    const bool printed = out.rfind("Managed Imperceptible\n", 0) == 0;
    char buffer[96];
    std::snprintf(buffer, sizeof(buffer), "D_o %.3g, D_w %.3g, classify exit %d", d_o, d_w, code);
    detail = buffer;
    return code == 0 && printed;
}

bool criterion_thread_determinism(std::string& detail) {
    write_file(g_dir / "det_spec.toml",
               "parameter = \"horizontal_force\"\n"
               "measure = \"reward\"\n"
               "assumed_grid = [-5, 0, 5]\n"
               "actual_grid = [-10, -5, 0, 5, 10]\n"
               "n_samples = 4\n"
               "horizon = 60\n"
               "master_seed = 31\n");
    const std::string spec = (g_dir / "det_spec.toml").string();

    std::string out;
    const int first = run_cli("sweep --quiet --spec " + spec + " --threads 1 --out " +
                                  (g_dir / "det_a.csv").string(),
                              out);
    const int second = run_cli("sweep --quiet --spec " + spec + " --threads 1 --out " +
                                   (g_dir / "det_b.csv").string(),
                               out);
    const int third = run_cli("sweep --quiet --spec " + spec + " --threads 4 --out " +
                                  (g_dir / "det_c.csv").string(),
                              out);
    if (first != 0 || second != 0 || third != 0) {
        detail = "sweep command failed";
        return false;
    }
    const std::string a = read_file(g_dir / "det_a.csv");
    const std::string b = read_file(g_dir / "det_b.csv");
    const std::string c = read_file(g_dir / "det_c.csv");
    detail = "3 runs, " + std::to_string(a.size()) + " bytes each";
    return !a.empty() && a == b && a == c;
}

bool criterion_baseline_survival(std::string& detail) {
    const novelty::WorldParams environment;
    const novelty::AgentState agent;
    int survived = 0;
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t seed = novelty::derive_seed(99, static_cast<std::uint64_t>(i));
        if (novelty::run_episode(environment, agent, seed, 200).survived == 200) ++survived;
    }
    detail = std::to_string(survived) + "/100 full-horizon episodes";
    return survived >= 95;
}

struct Criterion {
    const char* name;
    bool (*run)(std::string&);
    double budget_seconds;  // 0 means no stated budget
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::printf("usage: acceptance <path-to-novelty-cli>\n");
        return 2;
    }
    g_cli = argv[1];
    g_dir = std::filesystem::temp_directory_path() / "novelty_acceptance";
    std::filesystem::create_directories(g_dir);

    const std::array<Criterion, 10> criteria{{
        {"one-step physics matches the independent transcription", criterion_physics_oracle, 1.0},
        {"self-dissimilarity is zero in both spaces", criterion_self_dissimilarity, 30.0},
        {"dissimilarity grows with parameter distance", criterion_dissimilarity_trend, 120.0},
        {"reward stays flat under push and gravity novelty, except stall", criterion_reward_flat_under_push_and_gravity, 180.0},
        {"reward collapses once drift exceeds the push force", criterion_reward_collapse_under_drift, 120.0},
        {"all 32 taxonomy combinations match the transcription", criterion_taxonomy_table, 1.0},
        {"world regret equals observation regret on every step", criterion_regret_identity, 0.0},
        {"hidden-only change is imperceptible and classified as such", criterion_imperceptible_signature, 0.0},
        {"sweep output is byte-identical across thread counts", criterion_thread_determinism, 0.0},
        {"depth-1 correct-model agent survives 95% of episodes", criterion_baseline_survival, 0.0},
    }};

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        const auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criteria[i].budget_seconds > 0.0 && elapsed > criteria[i].budget_seconds) {
            ok = false;
            detail += " (over time budget)";
        }
        std::printf("%s criterion %zu: %s (%s, %.2fs)\n", ok ? "[ OK ]" : "[FAIL]", i + 1,
                    criteria[i].name, detail.c_str(), elapsed);
        if (!ok) ++failures;
    }

    if (failures == 0) {
        std::printf("all %zu acceptance criteria satisfied\n", criteria.size());
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", failures);
    return 1;
}
