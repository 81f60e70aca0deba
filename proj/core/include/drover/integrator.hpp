#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "drover/control.hpp"
#include "drover/dynamics.hpp"
#include "drover/model.hpp"

namespace drover {

enum class Method {
    explicit_euler,
    fixed_rk4,
};

struct StepperConfig {
    double dt = 1e-3;
    Method method = Method::fixed_rk4;
    // Store every record_stride-th accepted step; the initial and final
    // states are always stored.
    int record_stride = 100;
    double separation_floor = kSeparationFloor;
};

// One accepted step. kappa is the control active on the step that produced
// this state; for the first sample it is the control of the first step.
struct TrajectorySample {
    SystemState state;
    Kappa kappa;
};

struct TrajectoryEvents {
    // First entry of the evader into the closed rho-ball around the target,
    // located exactly on the straight segment between consecutive steps.
    std::optional<double> t_hit;

    // Smallest evader-target distance over all inter-step segments, with the
    // time and the linearly interpolated state where it is attained.
    double min_target_dist = std::numeric_limits<double>::infinity();
    double t_min_target_dist = 0.0;
    SystemState state_at_min_target;

    // First time the evader's horizontal velocity turns negative, linearly
    // refined within the crossing step.
    std::optional<double> t_b;

    // Control transitions as realized by the stepper, starting with the
    // control of the first step.
    std::vector<ControlPoint> realized_schedule;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    TrajectoryEvents events;

    const SystemState& final_state() const { return samples.back().state; }
};

// Single explicit step of the chosen method. Does not touch events.
SystemState step(const SystemState& s, const ModelParams& p, Kappa kappa, double h,
                 Method method, double separation_floor = kSeparationFloor);

struct SimulateOptions {
    // Stop once the evader's distance to the target is <= stop_radius at a
    // step endpoint.
    std::optional<double> stop_radius;

    // Called after every accepted step with the new state and the control
    // used on that step; return false to stop the run.
    std::function<bool(const SystemState&, Kappa)> observer;

    // When false, only the initial and final samples are stored; events are
    // still tracked at full step resolution.
    bool record_samples = true;
};

// Fixed-step integration of the scenario under the given control. Steps are
// split at schedule breakpoints and at tf, so switch times enter the flow
// exactly and the map from switch times to trajectories is continuous.
// Events are evaluated after every step regardless of record_stride.
// Throws ModelError on non-finite states or collision-level separations.
Trajectory simulate(const Scenario& sc, const ControlSource& control,
                    const StepperConfig& cfg, const SimulateOptions& opts = {});

// Componentwise linear interpolation between two states (t included).
SystemState state_lerp(const SystemState& a, const SystemState& b, double s);

// Time at which the predicate first changes truth value between consecutive
// recorded samples, refined by bisection on linearly interpolated states.
// Throws ModelError when the predicate never flips.
double refine_event_time(const Trajectory& traj,
                         const std::function<bool(const SystemState&)>& predicate);

}  // namespace drover
