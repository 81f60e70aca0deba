#pragma once

#include "drover/integrator.hpp"
#include "drover/model.hpp"

namespace drover {

// Long-run pursuit equilibrium: the driver settles behind the evader at
// separation delta_as while both move at speed v_as.
struct PursuitAsymptotics {
    double delta_as;
    double v_as;
};

// Closed form for the pursuit equilibrium. Throws ValidationError when the
// parameters give no real equilibrium (non-positive radicand or denominator).
PursuitAsymptotics pursuit_asymptotics(const ModelParams& p);

// Quantities measured from a sustained circumvention run.
struct CircumventionMeasurement {
    double period;     // mean time between successive driver-height peaks
    double omega;      // 2*pi / period
    double mean_separation;
    int peaks_used;
};

// Measures the circumvention cycle from samples with t >= window_start.
// Peaks of the driver's y-coordinate are refined with a three-point
// parabolic fit; at least three peaks are required. Throws ModelError when
// the window holds fewer.
CircumventionMeasurement measure_circumvention(const Trajectory& traj,
                                               double window_start);

// Free-agent diagnostics. The potential decays when the agents are far
// apart and the evader's weighted kinetic term does not dominate; the
// conditions below gate where the decay claim applies.
double free_agent_potential(const SystemState& s, const ModelParams& p);
double potential_derivative(const SystemState& s, const ModelParams& p);

// Damping balance required for the decay argument: m_d/nu_d < m_e/nu_e.
bool damping_balance_holds(const ModelParams& p);

struct PotentialAudit {
    long pairs_considered = 0;   // consecutive sample pairs inside the gate
    long derivative_violations = 0;  // potential_derivative > tolerance
    long rise_violations = 0;        // potential rise above the allowance
    double max_derivative = 0.0;
    double max_rise = 0.0;
};

// Checks the decay claim along a trajectory: on consecutive samples that
// both satisfy r >= delta_free and (nu_e/c_repel)|v_e|^2 <=
// (nu_d/c_attract)|v_d|^2, the sampled derivative must stay <= tol and the
// potential must not rise by more than rise_allowance.
PotentialAudit potential_audit(const Trajectory& traj, const ModelParams& p,
                               double delta_free, double tol = 1e-9,
                               double rise_allowance = 0.0);

struct BoundsAudit {
    double max_separation = 0.0;
    double max_driver_speed = 0.0;
    double max_evader_speed = 0.0;
};

BoundsAudit bounds_audit(const Trajectory& traj);

}  // namespace drover
