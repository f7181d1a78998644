#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "novelty/error.hpp"
#include "novelty/prng.hpp"

namespace novelty {

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double degrees) noexcept { return degrees * kPi / 180.0; }

// Observation x = (z, zdot, phi, phidot):
// z: cart position (m)
// zdot: cart velocity (m/s)
// phi: pole angle from vertical (rad), 0 = upright
// phidot: pole angular velocity (rad/s)
struct Observation {
    double z = 0.0;
    double zdot = 0.0;
    double phi = 0.0;
    double phidot = 0.0;

    std::array<double, 4> to_array() const noexcept { return {z, zdot, phi, phidot}; }

    friend bool operator==(const Observation&, const Observation&) = default;
};

inline double squared_distance(const Observation& a, const Observation& b) noexcept {
    const double dz = a.z - b.z;
    const double dzd = a.zdot - b.zdot;
    const double dp = a.phi - b.phi;
    const double dpd = a.phidot - b.phidot;
    return dz * dz + dzd * dzd + dp * dp + dpd * dpd;
}

// Binary push direction. Left < Right; every tie in the library resolves to
// the smaller member so runs are reproducible.
enum class Action : int { Left = 0, Right = 1 };

inline constexpr std::array<Action, 2> kActions{Action::Left, Action::Right};

inline const char* to_string(Action a) noexcept { return a == Action::Left ? "Left" : "Right"; }

/// Static world configuration. `hidden` holds task-irrelevant components
/// that the dynamics never read; they exist so a world can change without
/// any observable consequence.
struct WorldParams {
    double gravity = 9.8;                 // G, m/s^2
    double cart_mass = 1.0;               // M_c, kg
    double pole_mass_per_length = 0.1;    // M_p, kg/m
    double pole_length = 1.0;             // L, m
    double push_force = 10.0;             // F_p, N
    double horizontal_force = 0.0;        // F_h, N, constant external force
    double z_min = -2.4;
    double z_max = 2.4;
    double phi_min = -deg_to_rad(12.0);
    double phi_max = deg_to_rad(12.0);
    double tau = 0.02;                    // integration step, s
    std::vector<double> hidden;

    bool valid() const noexcept {
        return cart_mass > 0.0 && pole_length > 0.0 && tau > 0.0 &&
               pole_mass_per_length >= 0.0 && push_force >= 0.0 &&
               z_min < z_max && phi_min < phi_max &&
               std::isfinite(gravity) && std::isfinite(horizontal_force) &&
               std::isfinite(cart_mass) && std::isfinite(pole_length) &&
               std::isfinite(pole_mass_per_length) && std::isfinite(push_force) &&
               std::isfinite(tau);
    }

    void require_valid() const {
        if (!valid()) throw NoveltyError(ErrorCode::InvalidParams, "world parameters violate invariants");
    }

    friend bool operator==(const WorldParams&, const WorldParams&) = default;
};

/// Full world state: parameters plus the dynamic 4-vector and step counter.
struct WorldState {
    WorldParams params;
    double z = 0.0;
    double zdot = 0.0;
    double phi = 0.0;
    double phidot = 0.0;
    std::int64_t time_step = 0;

    friend bool operator==(const WorldState&, const WorldState&) = default;
};

/// Draw the initial dynamic state, each component i.i.d. uniform on
/// [-0.05, 0.05], from the deterministic generator seeded by `seed`.
inline WorldState init_world(const WorldParams& params, std::uint64_t seed) {
    params.require_valid();
    Xoshiro256pp rng(seed);
    WorldState world;
    world.params = params;
    world.z = rng.uniform(-0.05, 0.05);
    world.zdot = rng.uniform(-0.05, 0.05);
    world.phi = rng.uniform(-0.05, 0.05);
    world.phidot = rng.uniform(-0.05, 0.05);
    world.time_step = 0;
    return world;
}

namespace detail {

// One explicit-Euler update without the finiteness gate. Net force is
// s*F_p + F_h (s = +1 for Right, -1 for Left); the pole enters with
// half-length l = L/2 and mass m_p = M_p * L. Hidden components are not read.
inline WorldState step_unchecked(const WorldState& world, Action action) noexcept {
    const WorldParams& p = world.params;
    const double direction = action == Action::Right ? 1.0 : -1.0;
    const double force = direction * p.push_force + p.horizontal_force;
    const double half_length = 0.5 * p.pole_length;
    const double pole_mass = p.pole_mass_per_length * p.pole_length;
    const double total_mass = p.cart_mass + pole_mass;

    const double sin_phi = std::sin(world.phi);
    const double cos_phi = std::cos(world.phi);
    const double temp = (force + pole_mass * half_length * world.phidot * world.phidot * sin_phi) / total_mass;
    const double phi_acc = (p.gravity * sin_phi - cos_phi * temp) /
                           (half_length * (4.0 / 3.0 - pole_mass * cos_phi * cos_phi / total_mass));
    const double z_acc = temp - pole_mass * half_length * phi_acc * cos_phi / total_mass;

    WorldState next = world;
    next.z = world.z + p.tau * world.zdot;
    next.zdot = world.zdot + p.tau * z_acc;
    next.phi = world.phi + p.tau * world.phidot;
    next.phidot = world.phidot + p.tau * phi_acc;
    next.time_step = world.time_step + 1;
    return next;
}

}  // namespace detail

/// Transition T(w, a).
inline WorldState step(const WorldState& world, Action action) {
    WorldState next = detail::step_unchecked(world, action);
    if (!std::isfinite(next.z) || !std::isfinite(next.zdot) ||
        !std::isfinite(next.phi) || !std::isfinite(next.phidot)) {
        throw NoveltyError(ErrorCode::NumericBlowup, "non-finite state after transition");
    }
    return next;
}

/// Perceptual projection: the dynamic components only. Parameters and
/// hidden values never leak through.
inline Observation observe(const WorldState& world) noexcept {
    return Observation{world.z, world.zdot, world.phi, world.phidot};
}

/// Per-step 0/1 task loss, evaluated on the given (post-transition) state.
inline int loss(const WorldState& world) noexcept {
    const WorldParams& p = world.params;
    const bool out = world.z < p.z_min || world.z > p.z_max ||
                     world.phi < p.phi_min || world.phi > p.phi_max;
    return out ? 1 : 0;
}

/// M(w, x): replace the observed components of `world` with `observation`;
/// parameters, hidden values and the step counter stay untouched, so
/// observe(substitute_observation(w, x)) == x exactly.
inline WorldState substitute_observation(const WorldState& world, const Observation& observation) noexcept {
    WorldState out = world;
    out.z = observation.z;
    out.zdot = observation.zdot;
    out.phi = observation.phi;
    out.phidot = observation.phidot;
    return out;
}

/// Flatten a world state to its full vector representation:
/// dynamic components, then static parameters, then hidden components.
/// The step counter is bookkeeping, not part of the state vector.
inline std::vector<double> world_vector(const WorldState& world) {
    const WorldParams& p = world.params;
    std::vector<double> v;
    v.reserve(15 + p.hidden.size());
    v.insert(v.end(), {world.z, world.zdot, world.phi, world.phidot,
                       p.gravity, p.cart_mass, p.pole_mass_per_length, p.pole_length,
                       p.push_force, p.horizontal_force, p.z_min, p.z_max,
                       p.phi_min, p.phi_max, p.tau});
    v.insert(v.end(), p.hidden.begin(), p.hidden.end());
    return v;
}

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw NoveltyError(ErrorCode::WorldShapeMismatch, "state vectors differ in dimension");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

}  // namespace novelty
