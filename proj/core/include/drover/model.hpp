#pragma once

#include <string>
#include <vector>

#include "drover/vec2.hpp"

namespace drover {

// Circumvention control: off, or one of the two turn directions.
// kappa = +1 steers the driver clockwise around the evader (initially below
// the line of sight for the default geometry), which rotates the evader's
// escape heading counterclockwise.
enum class Kappa : int {
    minus = -1,
    off = 0,
    plus = 1,
};

constexpr int kappa_value(Kappa k) { return static_cast<int>(k); }

constexpr Kappa kappa_negate(Kappa k) { return static_cast<Kappa>(-static_cast<int>(k)); }

// Throws ValidationError unless v is -1, 0 or +1.
Kappa kappa_from_int(int v);

constexpr Kappa kappa_sign(double a) {
    return a > 0.0 ? Kappa::plus : (a < 0.0 ? Kappa::minus : Kappa::off);
}

struct ModelParams {
    double m_d = 0.4;        // driver mass
    double m_e = 1.0;        // evader mass
    double nu_d = 1.0;       // driver friction coefficient
    double nu_e = 2.0;       // evader friction coefficient
    double c_attract = 3.0;  // driver's attraction-repulsion coupling to the evader
    double c_repel = 2.0;    // evader's repulsion coupling to the driver
    double c_circ = 0.5;     // circumvention force coupling
    double delta_c = 2.0;    // attraction/repulsion balance distance
    double delta_1 = 2.0;    // circumvention effectiveness distance
    double delta_2 = 2.0;    // circumvention standoff distance
};

// The reference dataset: the struct defaults above.
ModelParams default_params();

// Returns violated constraints as human-readable messages, empty when valid.
// The damping balance m_d/nu_d < m_e/nu_e is required only when the
// free-agent decay diagnostics are meaningful; pass check_damping = false
// to skip it for synthetic parameter sets.
std::vector<std::string> check_params(const ModelParams& p, bool check_damping = true);

// Throws ValidationError listing every violated constraint.
void validate_params(const ModelParams& p, bool check_damping = true);

struct SystemState {
    double t = 0.0;
    Vec2 u_d;  // driver position
    Vec2 u_e;  // evader position
    Vec2 v_d;  // driver velocity
    Vec2 v_e;  // evader velocity
};

inline double separation(const SystemState& s) { return dist(s.u_d, s.u_e); }

inline bool state_is_finite(const SystemState& s) {
    return std::isfinite(s.t) && is_finite(s.u_d) && is_finite(s.u_e) &&
           is_finite(s.v_d) && is_finite(s.v_e);
}

// Reflection across the x-axis. Conjugating the dynamics with this map
// negates kappa.
SystemState mirror_x(const SystemState& s);

inline Vec2 mirror_x(Vec2 v) { return {v.x, -v.y}; }

struct Scenario {
    ModelParams params;
    SystemState initial;
    Vec2 target{1.0, 1.0};  // u_T
    double rho = 1e-4;      // target ball radius for hit detection
    double t0 = 0.0;
    double tf = 100.0;
};

// Reference initial condition: driver at (-6,0), evader at (6,0), both at
// rest, target (1,1).
Scenario default_scenario(double tf = 100.0);

// Violated constraints, empty when valid. When for_control is true the
// scenario must also keep the target off the driver-evader line of sight,
// otherwise the turn direction at t0 is undefined.
std::vector<std::string> check_scenario(const Scenario& sc, bool for_control = false);

void validate_scenario(const Scenario& sc, bool for_control = false);

}  // namespace drover
