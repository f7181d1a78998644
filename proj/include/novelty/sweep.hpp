#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "novelty/classifier.hpp"
#include "novelty/framework.hpp"
#include "novelty/measures.hpp"
#include "novelty/prng.hpp"

namespace novelty {

enum class SweepParameter {
    PushForce,
    HorizontalForce,
    Gravity,
    PoleLength,
    CartMass,
    PoleMassPerLength,
};

enum class SweepMeasure {
    DissimilarityO,
    DissimilarityW,
    Reward,
    Regret,
};

inline const char* to_string(SweepParameter p) noexcept {
    switch (p) {
        case SweepParameter::PushForce: return "push_force";
        case SweepParameter::HorizontalForce: return "horizontal_force";
        case SweepParameter::Gravity: return "gravity";
        case SweepParameter::PoleLength: return "pole_length";
        case SweepParameter::CartMass: return "cart_mass";
        case SweepParameter::PoleMassPerLength: return "pole_mass_per_length";
    }
    return "unknown";
}

inline const char* to_string(SweepMeasure m) noexcept {
    switch (m) {
        case SweepMeasure::DissimilarityO: return "dissimilarity_o";
        case SweepMeasure::DissimilarityW: return "dissimilarity_w";
        case SweepMeasure::Reward: return "reward";
        case SweepMeasure::Regret: return "regret";
    }
    return "unknown";
}

inline SweepParameter parse_sweep_parameter(const std::string& name) {
    for (SweepParameter p : {SweepParameter::PushForce, SweepParameter::HorizontalForce,
                             SweepParameter::Gravity, SweepParameter::PoleLength,
                             SweepParameter::CartMass, SweepParameter::PoleMassPerLength}) {
        if (name == to_string(p)) return p;
    }
    throw NoveltyError(ErrorCode::InvalidParams, "unknown sweep parameter: " + name);
}

inline SweepMeasure parse_sweep_measure(const std::string& name) {
    for (SweepMeasure m : {SweepMeasure::DissimilarityO, SweepMeasure::DissimilarityW,
                           SweepMeasure::Reward, SweepMeasure::Regret}) {
        if (name == to_string(m)) return m;
    }
    throw NoveltyError(ErrorCode::InvalidParams, "unknown sweep measure: " + name);
}

inline void set_parameter(WorldParams& params, SweepParameter which, double value) noexcept {
    switch (which) {
        case SweepParameter::PushForce: params.push_force = value; break;
        case SweepParameter::HorizontalForce: params.horizontal_force = value; break;
        case SweepParameter::Gravity: params.gravity = value; break;
        case SweepParameter::PoleLength: params.pole_length = value; break;
        case SweepParameter::CartMass: params.cart_mass = value; break;
        case SweepParameter::PoleMassPerLength: params.pole_mass_per_length = value; break;
    }
}

/// Grid experiment description: one world parameter varied along two axes,
/// the value the agent assumes and the value the environment actually has.
struct SweepSpec {
    SweepParameter parameter = SweepParameter::PushForce;
    SweepMeasure measure = SweepMeasure::DissimilarityO;
    std::vector<double> assumed_grid;
    std::vector<double> actual_grid;
    MeasureConfig config;

    void require_valid() const {
        config.require_valid();
        for (const std::vector<double>* grid : {&assumed_grid, &actual_grid}) {
            const char* which = grid == &assumed_grid ? "assumed_grid" : "actual_grid";
            if (grid->empty()) {
                throw NoveltyError(ErrorCode::InvalidParams, std::string(which) + " must be non-empty");
            }
            for (std::size_t k = 0; k < grid->size(); ++k) {
                if (k > 0 && !((*grid)[k] > (*grid)[k - 1])) {
                    throw NoveltyError(ErrorCode::InvalidParams, std::string(which) + " must be strictly increasing");
                }
                WorldParams probe;
                set_parameter(probe, parameter, (*grid)[k]);
                if (!probe.valid()) {
                    throw NoveltyError(ErrorCode::InvalidParams,
                                       std::string(which) + " value violates world parameter invariants");
                }
            }
        }
    }
};

struct HeatmapCell {
    double mean = 0.0;
    double standard_error = 0.0;
    int n = 0;
};

/// Sweep result: |assumed_grid| x |actual_grid| cells, row-major with the
/// assumed index outermost.
struct HeatmapGrid {
    SweepSpec spec;
    std::vector<HeatmapCell> cells;

    const HeatmapCell& at(std::size_t assumed_index, std::size_t actual_index) const {
        return cells[assumed_index * spec.actual_grid.size() + actual_index];
    }
};

namespace detail {

inline double standard_error_of_mean(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return sd / std::sqrt(static_cast<double>(n));
}

// One cell: assumed value binds the agent model, actual value binds the
// environment, everything else stays at defaults. The cell owns a seed
// derived from (master_seed, assumed index, actual index), so results do
// not depend on evaluation order.
inline HeatmapCell evaluate_cell(const SweepSpec& spec, std::size_t assumed_index, std::size_t actual_index) {
    WorldParams assumed;
    set_parameter(assumed, spec.parameter, spec.assumed_grid[assumed_index]);
    WorldParams actual;
    set_parameter(actual, spec.parameter, spec.actual_grid[actual_index]);

    MeasureConfig config = spec.config;
    config.master_seed = derive_seed(derive_seed(spec.config.master_seed, assumed_index), actual_index);

    HeatmapCell cell;
    cell.n = config.n_samples;
    std::vector<double> per_sample;
    switch (spec.measure) {
        case SweepMeasure::DissimilarityO:
        case SweepMeasure::DissimilarityW: {
            const DissimilaritySpace space = spec.measure == SweepMeasure::DissimilarityO
                                                 ? DissimilaritySpace::Observation
                                                 : DissimilaritySpace::World;
            const PooledValue value = pooled_dissimilarity(assumed, actual, config, space);
            cell.mean = value.pooled;
            per_sample = value.per_sample;
            break;
        }
        case SweepMeasure::Reward: {
            AgentState agent = config.reference_agent;
            agent.model = assumed;
            const RewardDetail detail = average_reward_detail(actual, agent, config);
            cell.mean = detail.mean;
            per_sample = detail.per_sample;
            break;
        }
        case SweepMeasure::Regret: {
            AgentState agent = config.reference_agent;
            agent.model = assumed;
            const EpisodeRegretDetail detail = episode_regret_detail(actual, agent, actual, config);
            cell.mean = detail.values.world_regret;
            per_sample.reserve(detail.samples.size());
            for (const EpisodeRegretSample& s : detail.samples) per_sample.push_back(s.world_regret);
            break;
        }
    }
    cell.standard_error = standard_error_of_mean(per_sample);
    return cell;
}

}  // namespace detail

/// Evaluate every (assumed, actual) cell. The thread count affects wall
/// time only; per-cell seed derivation makes the grid bit-identical for
/// any schedule. A failing cell aborts the sweep with its coordinates.
inline HeatmapGrid run_sweep(const SweepSpec& spec, int threads = 1) {
    spec.require_valid();
    const std::size_t rows = spec.assumed_grid.size();
    const std::size_t cols = spec.actual_grid.size();
    const std::size_t total = rows * cols;

    HeatmapGrid grid;
    grid.spec = spec;
    grid.cells.resize(total);

    const int worker_count = std::max(1, std::min<int>(threads, static_cast<int>(total)));
    std::atomic<std::size_t> cursor{0};
    std::vector<std::exception_ptr> failures(total);

    auto worker = [&]() {
        for (;;) {
            const std::size_t index = cursor.fetch_add(1);
            if (index >= total) return;
            const std::size_t i = index / cols;
            const std::size_t j = index % cols;
            try {
                grid.cells[index] = detail::evaluate_cell(spec, i, j);
            } catch (const NoveltyError& e) {
                char where[160];
                std::snprintf(where, sizeof(where), " [cell assumed_index=%zu actual_index=%zu assumed=%.17g actual=%.17g]",
                              i, j, spec.assumed_grid[i], spec.actual_grid[j]);
                failures[index] = std::make_exception_ptr(NoveltyError(e.code(), e.what() + std::string(where)));
            } catch (...) {
                failures[index] = std::current_exception();
            }
        }
    };

    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(worker_count));
        for (int k = 0; k < worker_count; ++k) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (const std::exception_ptr& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return grid;
}

/// End-to-end classification of a (baseline, test) scenario: dissimilarity
/// predicates against an experience holding the baseline, detector episodes
/// and paired regret episodes in the test world, then the taxonomy lookup.
/// The detector gate comes from thresholds.theta_detect, which replaces the
/// configured agent's own setting for the detection episodes.
inline NoveltyReport classify_scenario(const WorldParams& baseline, const WorldParams& test,
                                       const AgentState& agent, const Thresholds& thresholds,
                                       const MeasureConfig& config) {
    baseline.require_valid();
    test.require_valid();
    agent.require_valid();
    thresholds.require_valid();
    config.require_valid();

    WorldState baseline_world;
    baseline_world.params = baseline;
    WorldState test_world;
    test_world.params = test;
    ExperienceTensor experience = append_experience(ExperienceTensor{}, baseline_world);

    NoveltyFlags flags;
    flags.world_novel = is_world_novel(
        test_world, experience,
        [&config](const WorldState& remembered, const WorldState& candidate) {
            return world_dissimilarity(remembered.params, candidate.params, config);
        },
        thresholds.delta_w);
    flags.observation_novel = is_observation_novel(
        test_world, experience,
        [&config](const WorldState& remembered, const WorldState& candidate) {
            return observation_dissimilarity(remembered.params, candidate.params, config);
        },
        thresholds.delta_o);

    AgentState detecting_agent = agent;
    detecting_agent.theta_detect = thresholds.theta_detect;
    for (int i = 0; i < config.n_samples && !flags.agent_novel; ++i) {
        const std::uint64_t seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(i));
        const EpisodeResult episode = run_episode(test, detecting_agent, seed, config.horizon);
        flags.agent_novel = episode.detector_flag;
    }

    const RegretValues regrets = episode_regret(test, agent, test, config);
    return classify(flags, regrets, thresholds);
}

namespace detail {

inline void append_double(std::string& out, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    out += buffer;
}

}  // namespace detail

/// Serialize a grid to CSV: fixed header, one row per cell, row-major with
/// the assumed index outermost, 17 significant digits, LF line endings.
inline std::string grid_to_csv(const HeatmapGrid& grid) {
    std::string out = "parameter,measure,assumed,actual,mean,stderr,n\n";
    const char* parameter = to_string(grid.spec.parameter);
    const char* measure = to_string(grid.spec.measure);
    for (std::size_t i = 0; i < grid.spec.assumed_grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.spec.actual_grid.size(); ++j) {
            const HeatmapCell& cell = grid.at(i, j);
            out += parameter;
            out += ',';
            out += measure;
            out += ',';
            detail::append_double(out, grid.spec.assumed_grid[i]);
            out += ',';
            detail::append_double(out, grid.spec.actual_grid[j]);
            out += ',';
            detail::append_double(out, cell.mean);
            out += ',';
            detail::append_double(out, cell.standard_error);
            out += ',';
            out += std::to_string(cell.n);
            out += '\n';
        }
    }
    return out;
}

namespace detail {

// Five-anchor approximation of a perceptually monotone palette; linear
// interpolation between anchors.
inline std::string palette_color(double t) {
    static constexpr double anchors[5][3] = {
        {68.0, 1.0, 84.0},
        {59.0, 82.0, 139.0},
        {33.0, 145.0, 140.0},
        {94.0, 201.0, 98.0},
        {253.0, 231.0, 37.0},
    };
    t = std::clamp(t, 0.0, 1.0);
    const double scaled = t * 4.0;
    const int low = std::min(3, static_cast<int>(scaled));
    const double frac = scaled - low;
    char buffer[8];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x",
                  static_cast<int>(std::lround(anchors[low][0] + frac * (anchors[low + 1][0] - anchors[low][0]))),
                  static_cast<int>(std::lround(anchors[low][1] + frac * (anchors[low + 1][1] - anchors[low][1]))),
                  static_cast<int>(std::lround(anchors[low][2] + frac * (anchors[low + 1][2] - anchors[low][2]))));
    return buffer;
}

inline std::string short_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

}  // namespace detail

/// Render a grid as a standalone SVG heatmap: one rectangle per cell,
/// color mapped linearly from the min mean to the max mean, assumed values
/// down the left edge and actual values along the bottom. Deterministic
/// bytes for identical input; a flat grid renders in the mid palette.
inline std::string grid_to_svg(const HeatmapGrid& grid) {
    const std::size_t rows = grid.spec.assumed_grid.size();
    const std::size_t cols = grid.spec.actual_grid.size();
    constexpr int cell = 40;
    constexpr int margin_left = 90;
    constexpr int margin_top = 40;
    constexpr int margin_bottom = 70;
    constexpr int margin_right = 20;
    const int width = margin_left + static_cast<int>(cols) * cell + margin_right;
    const int height = margin_top + static_cast<int>(rows) * cell + margin_bottom;

    double lo = grid.cells.empty() ? 0.0 : grid.cells[0].mean;
    double hi = lo;
    for (const HeatmapCell& c : grid.cells) {
        lo = std::min(lo, c.mean);
        hi = std::max(hi, c.mean);
    }
    const bool degenerate = !(hi > lo);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += std::string("<text x=\"") + std::to_string(margin_left) + "\" y=\"24\" font-family=\"monospace\" font-size=\"14\">" +
           to_string(grid.spec.measure) + " over " + to_string(grid.spec.parameter) + "</text>\n";

    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double mean = grid.at(i, j).mean;
            const double t = degenerate ? 0.5 : (mean - lo) / (hi - lo);
            const int x = margin_left + static_cast<int>(j) * cell;
            const int y = margin_top + static_cast<int>(i) * cell;
            svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
                   "\" width=\"" + std::to_string(cell) + "\" height=\"" + std::to_string(cell) +
                   "\" fill=\"" + detail::palette_color(t) + "\"><title>" +
                   detail::short_double(mean) + "</title></rect>\n";
        }
    }

    for (std::size_t i = 0; i < rows; ++i) {
        const int y = margin_top + static_cast<int>(i) * cell + cell / 2 + 4;
        svg += "<text x=\"" + std::to_string(margin_left - 8) + "\" y=\"" + std::to_string(y) +
               "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" +
               detail::short_double(grid.spec.assumed_grid[i]) + "</text>\n";
    }
    for (std::size_t j = 0; j < cols; ++j) {
        const int x = margin_left + static_cast<int>(j) * cell + cell / 2;
        const int y = margin_top + static_cast<int>(rows) * cell + 14;
        svg += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
               "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\" transform=\"rotate(45 " +
               std::to_string(x) + " " + std::to_string(y) + ")\">" +
               detail::short_double(grid.spec.actual_grid[j]) + "</text>\n";
    }

    svg += "<text x=\"" + std::to_string(margin_left + static_cast<int>(cols) * cell / 2) + "\" y=\"" +
           std::to_string(height - 12) + "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">actual</text>\n";
    svg += "<text x=\"16\" y=\"" + std::to_string(margin_top + static_cast<int>(rows) * cell / 2) +
           "\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 16 " +
           std::to_string(margin_top + static_cast<int>(rows) * cell / 2) + ")\" text-anchor=\"middle\">assumed</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace novelty
