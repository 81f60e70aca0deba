#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "drover/control.hpp"
#include "drover/integrator.hpp"
#include "drover/model.hpp"

namespace drover {

struct CostBreakdown {
    int n_ig = 0;         // ignitions: off -> active transitions
    double c_active = 0;  // integral of |kappa| over the horizon
    double sigma1 = 1.0;  // ignition weight
    double sigma2 = 1.0;  // activation-time weight
    double total = 0;     // sigma1 * n_ig + sigma2 * c_active
};

// Transitions from off to an active value. A schedule that starts active
// contributes no ignition, and a direct sign flip is not an ignition.
int ignition_count(const ControlSchedule& sched);

// Integral of |kappa(t)| over [t0, tf] under the schedule's clamping
// semantics.
double cost_active(const ControlSchedule& sched, double t0, double tf);

CostBreakdown cost_of_schedule(const ControlSchedule& sched, double t0, double tf,
                               double sigma1 = 1.0, double sigma2 = 1.0);

// Alignment indicator: cross(v_e, target - u_e). Zero when the evader's
// velocity points straight at the target; its sign tells which side the
// current heading passes the target on.
double alignment_alpha(const SystemState& s, Vec2 target);

// Turn direction whose alignment sign matches the target's half-plane at
// the initial state. Throws ValidationError when the target sits on the
// line of sight.
Kappa auto_turn_direction(const Scenario& sc);

// Classification of one switch-off candidate.
//   hit         evader passes within rho of the target, aligned at closest
//               approach: converged.
//   aligned     heading settles inside the alignment band until the horizon
//               without ever crossing it: converged (the pass lies beyond
//               the horizon).
//   underturned no turnaround, or still heading short of the target at the
//               horizon: switch off later.
//   overturned  heading crossed past the target: switch off sooner.
enum class ShotVerdict { hit, aligned, underturned, overturned };

const char* to_string(ShotVerdict v);

struct ShotAssessment {
    ShotVerdict verdict;
    double min_target_dist;
    double t_min_target_dist;
    double alpha_at_closest;  // orientation-corrected alignment there
    double alpha_min;         // smallest orientation-corrected alpha past t_b
    double alpha_final;       // orientation-corrected alpha where the run ended
    std::optional<double> t_b;  // first time the evader's v_x turns negative
    double t_end;
};

// Runs the schedule and classifies the shot. orientation (+1 or -1) is the
// turn direction; it flips the alignment sign so mirrored geometries share
// the same classification logic. The run aborts as soon as the verdict is
// decided to be overturned.
ShotAssessment assess_shot(const Scenario& sc, const ControlSchedule& sched,
                           const StepperConfig& stepper, double epsilon_align,
                           double rho, Kappa orientation);

struct ShootConfig {
    double epsilon_align = 1e-6;
    double rho = 1e-4;  // target ball radius for the hit criterion
    // Initial switch-off bracket; grown by factor 1.5 toward the domain ends
    // when the verdicts at its ends do not straddle the root. Defaults to
    // the full (t_on, tf] range.
    std::optional<std::pair<double, double>> bracket;
    int max_iters = 80;
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    StepperConfig stepper{};
};

struct StepControlResult {
    Kappa kappa0;
    double tau;  // switch-off time of the converged step control
    CostBreakdown cost;
    int iterations;  // shot evaluations spent
    double miss_distance;
    ShotVerdict verdict;
    Trajectory trajectory;  // converged run over the full horizon
};

// Bisects the switch-off time of the control that is active from t0 until
// tau and off afterwards. Throws ShootingError when the target is not
// reachable within the horizon or the bracket cannot straddle the root.
StepControlResult shoot_step_control(const Scenario& sc, const ShootConfig& cfg,
                                     std::optional<Kappa> kappa0 = std::nullopt);

struct WindowOffResult {
    Kappa kappa0;
    double t_on;
    double t_off;  // tf when the maneuver cannot complete by the horizon
    bool complete;
    CostBreakdown cost;
    int iterations;
    double miss_distance;
    ShotVerdict verdict;  // verdict of the returned t_off
};

// Bisects the switch-off time of the window control (off, active from t_on,
// off from t_off). A maneuver that cannot complete by the horizon is
// reported with t_off = tf and complete = false rather than an error.
WindowOffResult shoot_window_off(const Scenario& sc, double t_on, const ShootConfig& cfg,
                                 std::optional<Kappa> kappa0 = std::nullopt);

struct CostCurvePoint {
    double t_on;
    double t_off;
    double activation;  // t_off - t_on, the active control time
    double cost;        // sigma1 * n_ig + sigma2 * activation
    bool complete;
    int iterations;
};

// shoot_window_off over each grid point, reusing the integrated pursuit
// prefix between consecutive points. The grid must lie inside (t0, tf).
std::vector<CostCurvePoint> cost_curve(const Scenario& sc, const std::vector<double>& grid,
                                       const ShootConfig& cfg,
                                       std::optional<Kappa> kappa0 = std::nullopt);

struct GridSpec {
    double t_min;
    double t_max;
    double coarse_step = 0.25;
    double refine_radius = 1.0;
    double refine_step = 0.01;
    bool refine = true;
};

struct WindowOptimum {
    Kappa kappa0;
    double t_on;
    double t_off;
    CostBreakdown cost;
    bool complete;
    std::vector<CostCurvePoint> coarse_curve;
    std::vector<CostCurvePoint> refined_curve;  // empty when refine is off
};

// Coarse grid scan followed by a local refinement around the best complete
// point. Ties within 1e-3 of the minimum cost resolve to the earliest t_on,
// so a flat cost plateau reports its onset. Throws ShootingError when no
// grid point completes.
WindowOptimum optimize_window(const Scenario& sc, const GridSpec& grid,
                              const ShootConfig& cfg,
                              std::optional<Kappa> kappa0 = std::nullopt);

// Final heading angle atan2(v_e_y, v_e_x) after running the step control
// with switch-off tau over the full horizon.
double escape_angle(const Scenario& sc, Kappa kappa0, double tau,
                    const StepperConfig& stepper);

}  // namespace drover
