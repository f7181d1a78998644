#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "novelty/cartpole.hpp"
#include "novelty/error.hpp"

namespace novelty {

/// Append-only record of every world the agent has lived in; the reference
/// set all novelty predicates compare against.
struct ExperienceTensor {
    std::vector<WorldState> worlds;
    std::vector<std::int64_t> timestamps;

    bool empty() const noexcept { return worlds.empty(); }
    std::size_t size() const noexcept { return worlds.size(); }
};

inline ExperienceTensor append_experience(ExperienceTensor experience, const WorldState& world) {
    experience.worlds.push_back(world);
    experience.timestamps.push_back(static_cast<std::int64_t>(experience.timestamps.size()));
    return experience;
}

/// Dissimilarity and regret thresholds. delta_* gate the dissimilarity
/// predicates, eps_* decide when a regret counts as high, theta_detect is
/// the agent detector's squared prediction-error gate.
struct Thresholds {
    double delta_w = 0.0;
    double delta_o = 0.0;
    double eps_w = 0.0;
    double eps_o = 0.0;
    double eps_f = 0.0;
    double theta_detect = std::numeric_limits<double>::infinity();

    bool valid() const noexcept {
        return delta_w >= 0.0 && delta_o >= 0.0 && eps_w >= 0.0 &&
               eps_o >= 0.0 && eps_f >= 0.0 && theta_detect >= 0.0;
    }

    void require_valid() const {
        if (!valid()) throw NoveltyError(ErrorCode::InvalidParams, "thresholds must be non-negative");
    }

    friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

/// The three primary novelty verdicts, one per space.
struct NoveltyFlags {
    bool world_novel = false;
    bool observation_novel = false;
    bool agent_novel = false;

    bool any() const noexcept { return world_novel || observation_novel || agent_novel; }

    friend bool operator==(const NoveltyFlags&, const NoveltyFlags&) = default;
};

namespace detail {

// Smallest dissimilarity from any remembered world to the candidate. The
// measure runs with the remembered world first, since the operators are
// asymmetric (the reference agent is optimal in the remembered world).
// A measure that throws or yields a non-finite value cannot support a
// verdict either way, so that surfaces as an error rather than a default.
template <typename Measure>
double min_dissimilarity(const WorldState& candidate, const ExperienceTensor& experience, Measure&& measure) {
    if (experience.empty()) {
        throw NoveltyError(ErrorCode::NoExperience, "novelty is undefined against empty experience");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const WorldState& remembered : experience.worlds) {
        double d = 0.0;
        try {
            d = measure(remembered, candidate);
        } catch (const NoveltyError&) {
            throw;
        } catch (const std::exception& e) {
            throw NoveltyError(ErrorCode::MeasureFailure, e.what());
        }
        if (!std::isfinite(d)) {
            throw NoveltyError(ErrorCode::MeasureFailure, "dissimilarity produced a non-finite value");
        }
        if (d < best) best = d;
    }
    return best;
}

}  // namespace detail

/// World novelty: the candidate is strictly farther than delta_w from every
/// remembered world under the world-space measure.
template <typename Measure>
bool is_world_novel(const WorldState& candidate, const ExperienceTensor& experience,
                    Measure&& measure, double delta_w) {
    return detail::min_dissimilarity(candidate, experience, measure) > delta_w;
}

/// Observation novelty: same predicate through an observation-space measure.
template <typename Measure>
bool is_observation_novel(const WorldState& candidate, const ExperienceTensor& experience,
                          Measure&& measure, double delta_o) {
    return detail::min_dissimilarity(candidate, experience, measure) > delta_o;
}

}  // namespace novelty
