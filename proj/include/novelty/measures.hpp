#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "novelty/agent.hpp"
#include "novelty/cartpole.hpp"
#include "novelty/error.hpp"
#include "novelty/prng.hpp"

namespace novelty {

/// Observation-space task loss: the bounds check applied to a projected
/// state. Equals loss() whenever the observation came from the same world,
/// since the bounds only involve observable components.
inline int loss_from_observation(const Observation& observation, const WorldParams& params) noexcept {
    const bool out = observation.z < params.z_min || observation.z > params.z_max ||
                     observation.phi < params.phi_min || observation.phi > params.phi_max;
    return out ? 1 : 0;
}

/// Shared marginalization settings for dissimilarity, regret, and reward:
/// how many seeded initial states, how long each rollout may run, and the
/// reference-agent template whose model gets bound per call.
struct MeasureConfig {
    int n_samples = 20;
    int horizon = 200;
    std::uint64_t master_seed = 1;
    AgentState reference_agent;

    void require_valid() const {
        if (n_samples < 1) throw NoveltyError(ErrorCode::InvalidParams, "n_samples must be at least 1");
        if (horizon < 1) throw NoveltyError(ErrorCode::InvalidParams, "horizon must be at least 1");
    }
};

/// Regret in each of the three spaces. For this domain world and
/// observation regret are computed from the same rollouts through the
/// world-space and observation-space loss respectively, and agree exactly.
struct RegretValues {
    double world_regret = 0.0;
    double observation_regret = 0.0;
    double agent_regret = 0.0;

    friend bool operator==(const RegretValues&, const RegretValues&) = default;
};

/// One step of an episode rollout: the state the agent saw, what it did,
/// and what came of it.
struct StepRecord {
    std::int64_t t = 0;
    Observation observation;
    Action action = Action::Left;
    Observation next_observation;
    int loss = 0;
    bool detector_flag = false;
};

struct EpisodeResult {
    int survived = 0;     // steps completed with loss 0, capped at horizon
    bool failed = false;  // true if the rollout hit loss 1 within the horizon
    bool detector_flag = false;
    std::vector<StepRecord> steps;
};

/// Roll the agent in the environment for at most `horizon` steps, stopping
/// at the first loss. The detector runs every step; its flag is sticky.
inline EpisodeResult run_episode(const WorldParams& environment, AgentState agent,
                                 std::uint64_t seed, int horizon, bool record_steps = false) {
    environment.require_valid();
    agent.require_valid();
    EpisodeResult result;
    WorldState world = init_world(environment, seed);
    for (int t = 0; t < horizon; ++t) {
        const Observation observation = observe(world);
        const Action action = select_action(agent, observation);
        const WorldState next = step(world, action);
        const Observation next_observation = observe(next);
        const int step_loss = loss(next);
        agent = update_detector(agent, observation, action, next_observation);
        if (record_steps) {
            result.steps.push_back(StepRecord{t, observation, action, next_observation,
                                              step_loss, agent.novelty_flag});
        }
        if (step_loss == 1) {
            result.failed = true;
            break;
        }
        ++result.survived;
        world = next;
    }
    result.detector_flag = agent.novelty_flag;
    return result;
}

namespace detail {

enum class DissimilaritySpace { Observation, World };

struct PooledValue {
    double pooled = 0.0;                // sum of contributions / total steps
    std::vector<double> per_sample;     // each sample's own mean contribution
};

// Common trajectory-conditioned rollout. The reference agent is optimal in
// the first world; the trajectory unfolds in the second world under that
// agent's actions; each step compares the one-step futures the two worlds
// produce from the same observed state and the same action.
inline PooledValue pooled_dissimilarity(const WorldParams& first, const WorldParams& second,
                                        const MeasureConfig& config, DissimilaritySpace space) {
    first.require_valid();
    second.require_valid();
    config.require_valid();
    if (space == DissimilaritySpace::World && first.hidden.size() != second.hidden.size()) {
        throw NoveltyError(ErrorCode::WorldShapeMismatch, "world state vectors differ in dimension");
    }

    AgentState reference = config.reference_agent;
    reference.model = first;
    reference.require_valid();

    WorldState expected_base;
    expected_base.params = first;

    PooledValue out;
    out.per_sample.reserve(static_cast<std::size_t>(config.n_samples));
    double total_sum = 0.0;
    std::int64_t total_steps = 0;

    for (int i = 0; i < config.n_samples; ++i) {
        WorldState actual = init_world(second, derive_seed(config.master_seed, static_cast<std::uint64_t>(i)));
        double sample_sum = 0.0;
        std::int64_t sample_steps = 0;
        for (int t = 0; t < config.horizon; ++t) {
            const Observation observed = observe(actual);
            const Action action = select_action(reference, observed);
            const WorldState expected_next = step(substitute_observation(expected_base, observed), action);
            const WorldState actual_next = step(actual, action);
            if (space == DissimilaritySpace::Observation) {
                sample_sum += squared_distance(observe(expected_next), observe(actual_next));
            } else {
                sample_sum += squared_distance(world_vector(expected_next), world_vector(actual_next));
            }
            ++sample_steps;
            actual = actual_next;
            if (loss(actual) == 1) break;
        }
        out.per_sample.push_back(sample_steps > 0 ? sample_sum / static_cast<double>(sample_steps) : 0.0);
        total_sum += sample_sum;
        total_steps += sample_steps;
    }

    if (total_steps == 0) {
        throw NoveltyError(ErrorCode::EmptyTrajectory, "dissimilarity rollouts accumulated no steps");
    }
    out.pooled = total_sum / static_cast<double>(total_steps);
    return out;
}

}  // namespace detail

/// Expected squared prediction error, in observation space, of the agent
/// optimal in `first` while living in `second`.
inline double observation_dissimilarity(const WorldParams& first, const WorldParams& second,
                                        const MeasureConfig& config) {
    return detail::pooled_dissimilarity(first, second, config, detail::DissimilaritySpace::Observation).pooled;
}

/// Same construction over full world-state vectors, so parameter and hidden
/// differences register even when nothing observable changes.
inline double world_dissimilarity(const WorldParams& first, const WorldParams& second,
                                  const MeasureConfig& config) {
    return detail::pooled_dissimilarity(first, second, config, detail::DissimilaritySpace::World).pooled;
}

/// Loss of the taken action minus loss of the reference-optimal action,
/// both evaluated on one-step successors of the same true environment
/// state. `reference_template` supplies the reference agent's scoring
/// configuration; its model is replaced by `reference_model`.
inline int step_regret(const WorldState& environment, Action taken, const WorldParams& reference_model,
                       int depth = 1, const AgentState& reference_template = AgentState{}) {
    AgentState reference = reference_template;
    reference.model = reference_model;
    const Action optimal = whatif_optimal_action(reference, observe(environment), depth);
    return loss(step(environment, taken)) - loss(step(environment, optimal));
}

namespace detail {

// Per-step losses of one episode, padded with 1 after failure so every
// episode covers the full horizon. The world series reads the bounds check
// off the full successor state; the observation series recomputes it from
// the projected successor. They agree because every bounded component is
// observable here.
struct PaddedLosses {
    std::vector<int> world;
    std::vector<int> observation;
    int survived = 0;
};

inline PaddedLosses padded_losses(const WorldParams& environment, const AgentState& agent,
                                  std::uint64_t seed, int horizon) {
    const EpisodeResult episode = run_episode(environment, agent, seed, horizon, true);
    PaddedLosses out;
    out.survived = episode.survived;
    out.world.assign(static_cast<std::size_t>(horizon), 1);
    out.observation.assign(static_cast<std::size_t>(horizon), 1);
    for (const StepRecord& record : episode.steps) {
        out.world[static_cast<std::size_t>(record.t)] = record.loss;
        out.observation[static_cast<std::size_t>(record.t)] =
            loss_from_observation(record.next_observation, environment);
    }
    return out;
}

}  // namespace detail

/// Step-resolved regret of one acting-agent episode against the reference
/// rollout from the same seed, in both spaces, plus the per-episode means.
struct EpisodeRegretSample {
    std::vector<int> world_step_regret;
    std::vector<int> observation_step_regret;
    double world_regret = 0.0;
    double observation_regret = 0.0;
};

struct EpisodeRegretDetail {
    RegretValues values;
    std::vector<EpisodeRegretSample> samples;          // world/observation, per seed
    std::vector<double> per_sample_agent_regret;       // self-estimated, per seed
};

/// Mean per-step regret of the acting agent against a reference agent that
/// knows `reference_model`, over paired seeded episodes in `environment`.
/// Losses after an episode's failure count as 1 for the rest of the
/// horizon, so the value equals the reference's average reward minus the
/// acting agent's. The agent-space value repeats the aggregate with the
/// acting agent's own model as the reference, a self-estimate.
inline EpisodeRegretDetail episode_regret_detail(const WorldParams& environment, const AgentState& acting_agent,
                                                 const WorldParams& reference_model, const MeasureConfig& config) {
    environment.require_valid();
    acting_agent.require_valid();
    config.require_valid();

    AgentState reference = config.reference_agent;
    reference.model = reference_model;
    reference.require_valid();

    AgentState self_reference = config.reference_agent;
    self_reference.model = acting_agent.model;
    self_reference.require_valid();

    EpisodeRegretDetail out;
    out.samples.reserve(static_cast<std::size_t>(config.n_samples));
    double world_total = 0.0;
    double observation_total = 0.0;
    double agent_total = 0.0;

    for (int i = 0; i < config.n_samples; ++i) {
        const std::uint64_t seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(i));
        const detail::PaddedLosses acting = detail::padded_losses(environment, acting_agent, seed, config.horizon);
        const detail::PaddedLosses ref = detail::padded_losses(environment, reference, seed, config.horizon);
        const detail::PaddedLosses self = detail::padded_losses(environment, self_reference, seed, config.horizon);

        EpisodeRegretSample sample;
        sample.world_step_regret.resize(static_cast<std::size_t>(config.horizon));
        sample.observation_step_regret.resize(static_cast<std::size_t>(config.horizon));
        long world_sum = 0;
        long observation_sum = 0;
        long agent_sum = 0;
        for (int t = 0; t < config.horizon; ++t) {
            const std::size_t u = static_cast<std::size_t>(t);
            sample.world_step_regret[u] = acting.world[u] - ref.world[u];
            sample.observation_step_regret[u] = acting.observation[u] - ref.observation[u];
            world_sum += sample.world_step_regret[u];
            observation_sum += sample.observation_step_regret[u];
            agent_sum += acting.world[u] - self.world[u];
        }
        sample.world_regret = static_cast<double>(world_sum) / static_cast<double>(config.horizon);
        sample.observation_regret = static_cast<double>(observation_sum) / static_cast<double>(config.horizon);
        world_total += sample.world_regret;
        observation_total += sample.observation_regret;
        const double agent_value = static_cast<double>(agent_sum) / static_cast<double>(config.horizon);
        out.per_sample_agent_regret.push_back(agent_value);
        agent_total += agent_value;
        out.samples.push_back(std::move(sample));
    }

    out.values.world_regret = world_total / static_cast<double>(config.n_samples);
    out.values.observation_regret = observation_total / static_cast<double>(config.n_samples);
    out.values.agent_regret = agent_total / static_cast<double>(config.n_samples);
    return out;
}

inline RegretValues episode_regret(const WorldParams& environment, const AgentState& acting_agent,
                                   const WorldParams& reference_model, const MeasureConfig& config) {
    return episode_regret_detail(environment, acting_agent, reference_model, config).values;
}

namespace detail {

struct RewardDetail {
    double mean = 0.0;
    std::vector<double> per_sample;
};

inline RewardDetail average_reward_detail(const WorldParams& environment, const AgentState& agent,
                                          const MeasureConfig& config) {
    environment.require_valid();
    agent.require_valid();
    config.require_valid();
    RewardDetail out;
    out.per_sample.reserve(static_cast<std::size_t>(config.n_samples));
    double total = 0.0;
    for (int i = 0; i < config.n_samples; ++i) {
        const std::uint64_t seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(i));
        const EpisodeResult episode = run_episode(environment, agent, seed, config.horizon);
        const double reward = static_cast<double>(episode.survived) / static_cast<double>(config.horizon);
        out.per_sample.push_back(reward);
        total += reward;
    }
    out.mean = total / static_cast<double>(config.n_samples);
    return out;
}

}  // namespace detail

/// One minus the mean per-step loss over seeded episodes, counting every
/// step after a failure as loss 1: the average fraction of the horizon
/// survived. Always in [0, 1].
inline double average_reward(const WorldParams& environment, const AgentState& agent,
                             const MeasureConfig& config) {
    return detail::average_reward_detail(environment, agent, config).mean;
}

}  // namespace novelty
