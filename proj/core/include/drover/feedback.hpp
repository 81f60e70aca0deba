#pragma once

#include <optional>
#include <vector>

#include "drover/control.hpp"
#include "drover/integrator.hpp"
#include "drover/model.hpp"
#include "drover/openloop.hpp"

namespace drover {

// Half-plane indicator: cross(u_e - u_d, target - u_d). Zero when the target
// sits on the driver-evader line of sight; its sign names the side the
// target is on, and the matching turn direction.
double alignment_a(const SystemState& s, Vec2 target);

// Positive when the driver sits on the same side of the evader as the
// target (the push drives the evader away from it), negative when the
// driver pushes the evader toward the target.
double same_side(const SystemState& s, Vec2 target);

// Engagement gate: 0 once the agents are so far apart that steering is
// ineffective, 1 otherwise. The gate opens (returns 1) at the boundary
// r^3 == far_factor * delta_2; only a strictly larger separation disables
// steering.
int chi_far(const SystemState& s, const ModelParams& p, double far_factor);

enum class SignFallback {
    plus,
    minus,
    previous,  // last nonzero sign; +1 when there is none yet
};

struct OverrideWindow {
    double t_begin;
    double t_end;  // exclusive; the law resumes at t_end
    Kappa kappa;
};

struct FeedbackConfig {
    double a_bar = 0.4;      // alignment dead-band half-width
    double far_factor = 1.5; // engagement gate: off when r^3 > far_factor * delta_2
    double rho_reach = 0.2;  // arrival radius that ends a run
    SignFallback sign_fallback = SignFallback::previous;
    std::vector<OverrideWindow> overrides;  // forced control, checked before the law
};

// One evaluation of the law. prev is the control applied on the previous
// step; it only matters for the previous-sign fallback when the alignment
// is exactly zero.
Kappa feedback_kappa(const SystemState& s, Vec2 target, const ModelParams& p,
                     const FeedbackConfig& cfg, Kappa prev);

// Stateful rule for the integrator: applies override windows first, then
// the law, and remembers the last nonzero control for the fallback.
// last_nonzero seeds that memory (off = no history).
FeedbackRule make_feedback_rule(Vec2 target, const ModelParams& p,
                                const FeedbackConfig& cfg,
                                Kappa last_nonzero = Kappa::off);

struct ActiveSegment {
    double t_begin;
    double t_end;
    Kappa kappa;
};

struct PathLeg {
    int target_index = 0;
    Vec2 target;
    std::optional<double> t_reach;  // empty when the horizon ran out first
};

struct FeedbackRunResult {
    Trajectory trajectory;
    std::vector<ControlPoint> realized;  // merged control history
    std::vector<ActiveSegment> segments;
    CostBreakdown cost;
    std::vector<PathLeg> legs;
    bool all_reached = false;
};

// Closed-loop run toward the scenario target; stops on arrival within
// rho_reach or at tf.
FeedbackRunResult run_feedback(const Scenario& sc, const FeedbackConfig& cfg,
                               const StepperConfig& stepper, double sigma1 = 1.0,
                               double sigma2 = 1.0);

// Closed-loop run through a target sequence; each leg inherits the state
// and control memory of the previous one. Legs after the first unreached
// target are reported unreached.
FeedbackRunResult run_path(const Scenario& sc, const std::vector<Vec2>& targets,
                           const FeedbackConfig& cfg, const StepperConfig& stepper,
                           double sigma1 = 1.0, double sigma2 = 1.0);

}  // namespace drover
