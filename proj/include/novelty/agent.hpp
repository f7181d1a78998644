#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "novelty/cartpole.hpp"
#include "novelty/error.hpp"

namespace novelty {

// How the one-step preference score folds the weighted deviation from the
// target state into a scalar. AbsInnerProduct is the default; WeightedNorm
// is the alternative reading, selectable via configuration.
enum class ScoreRule { AbsInnerProduct, WeightedNorm };

inline const char* to_string(ScoreRule rule) noexcept {
    return rule == ScoreRule::AbsInnerProduct ? "abs_inner_product" : "weighted_norm";
}

/// Non-adaptive lookahead agent. `model` is what the agent believes the
/// world parameters are; it may disagree with the actual environment and is
/// never updated. The detector flag is sticky for an episode once raised.
struct AgentState {
    WorldParams model;
    std::array<double, 4> beta{0.0, 0.0, 1.0, 0.005};
    std::array<double, 4> target{0.0, 0.0, 0.0, 0.0};
    double theta_detect = std::numeric_limits<double>::infinity();
    int lookahead_depth = 1;
    ScoreRule score_rule = ScoreRule::AbsInnerProduct;
    bool novelty_flag = false;
    std::optional<Observation> last_prediction;

    void require_valid() const {
        model.require_valid();
        if (!(theta_detect >= 0.0)) {
            throw NoveltyError(ErrorCode::InvalidParams, "theta_detect must be non-negative");
        }
        if (lookahead_depth < 1) {
            throw NoveltyError(ErrorCode::InvalidParams, "lookahead_depth must be at least 1");
        }
    }
};

/// Scalar preference for a candidate next observation; lower is better.
inline double score_observation(const AgentState& agent, const Observation& next) noexcept {
    const std::array<double, 4> x = next.to_array();
    if (agent.score_rule == ScoreRule::AbsInnerProduct) {
        double dot = 0.0;
        for (int i = 0; i < 4; ++i) dot += agent.beta[i] * (x[i] - agent.target[i]);
        return std::fabs(dot);
    }
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double term = agent.beta[i] * (x[i] - agent.target[i]);
        sum += term * term;
    }
    return std::sqrt(sum);
}

namespace detail {

// Imagined transition: place the observation into a world carrying the
// agent's assumed parameters and advance one step. No finiteness gate here;
// callers decide whether a blowup is an error or just a bad prediction.
inline WorldState imagine_step(const WorldParams& model, const Observation& observation, Action action) noexcept {
    WorldState world;
    world.params = model;
    const WorldState grounded = substitute_observation(world, observation);
    return step_unchecked(grounded, action);
}

inline double checked_score(const AgentState& agent, const WorldState& predicted) {
    const double s = score_observation(agent, observe(predicted));
    if (!std::isfinite(s)) {
        throw NoveltyError(ErrorCode::ModelBlowup, "agent model produced a non-finite score");
    }
    return s;
}

}  // namespace detail

/// Single-lookahead policy: simulate one step per action under the agent's
/// model and keep the action with the smaller score. Ties go to Left.
inline Action choose_action(const AgentState& agent, const Observation& observation) {
    const double score_left = detail::checked_score(agent, detail::imagine_step(agent.model, observation, Action::Left));
    const double score_right = detail::checked_score(agent, detail::imagine_step(agent.model, observation, Action::Right));
    return score_right < score_left ? Action::Right : Action::Left;
}

/// Exhaustive depth-n search under the agent's model. Sequences are ranked
/// by survived steps (more is better), then by the terminal state's score
/// (less is better), then by lexicographic action order with Left < Right;
/// the winner's first action is returned. Enumeration is lexicographic, with
/// sequence index bit (depth-1) holding the first action, so the first
/// strict improvement encountered also settles the final tie-break.
inline Action whatif_optimal_action(const AgentState& agent, const Observation& observation, int depth) {
    if (depth < 1) throw NoveltyError(ErrorCode::InvalidParams, "lookahead depth must be at least 1");
    if (depth >= 63) throw NoveltyError(ErrorCode::InvalidParams, "lookahead depth too large to enumerate");

    WorldState start;
    start.params = agent.model;
    start = substitute_observation(start, observation);

    const std::uint64_t sequence_count = std::uint64_t{1} << depth;
    int best_survived = -1;
    double best_score = std::numeric_limits<double>::infinity();
    Action best_first = Action::Left;

    for (std::uint64_t sequence = 0; sequence < sequence_count; ++sequence) {
        WorldState world = start;
        int survived = 0;
        for (int k = 0; k < depth; ++k) {
            const bool bit = (sequence >> (depth - 1 - k)) & 1u;
            world = detail::step_unchecked(world, bit ? Action::Right : Action::Left);
            if (loss(world) == 1) break;
            ++survived;
        }
        const double terminal_score = detail::checked_score(agent, world);
        if (survived > best_survived || (survived == best_survived && terminal_score < best_score)) {
            best_survived = survived;
            best_score = terminal_score;
            best_first = ((sequence >> (depth - 1)) & 1u) ? Action::Right : Action::Left;
        }
    }
    return best_first;
}

/// The action the agent actually takes: depth 1 is the plain one-step
/// policy, deeper agents run the exhaustive search.
inline Action select_action(const AgentState& agent, const Observation& observation) {
    if (agent.lookahead_depth <= 1) return choose_action(agent, observation);
    return whatif_optimal_action(agent, observation, agent.lookahead_depth);
}

/// Compare what the model predicted for the taken action against what the
/// environment produced. A squared prediction error above theta_detect
/// raises the sticky novelty flag; theta_detect = +inf never raises it.
inline AgentState update_detector(AgentState agent, const Observation& previous_observation,
                                  Action taken_action, const Observation& new_observation) {
    const Observation predicted = observe(detail::imagine_step(agent.model, previous_observation, taken_action));
    const double error = squared_distance(new_observation, predicted);
    if (error > agent.theta_detect) agent.novelty_flag = true;
    agent.last_prediction = predicted;
    return agent;
}

/// Agent-space novelty: whether the agent's recognition state has entered
/// its designated novel set, i.e. the detector flag is raised.
inline bool is_agent_novel(const AgentState& agent, const Observation& /*observation*/) noexcept {
    return agent.novelty_flag;
}

}  // namespace novelty
