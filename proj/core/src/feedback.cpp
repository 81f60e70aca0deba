#include "drover/feedback.hpp"

#include <cmath>

#include "drover/errors.hpp"

namespace drover {

double alignment_a(const SystemState& s, Vec2 target) {
    return cross(s.u_e - s.u_d, target - s.u_d);
}

double same_side(const SystemState& s, Vec2 target) {
    return dot(s.u_e - target, s.u_e - s.u_d);
}

int chi_far(const SystemState& s, const ModelParams& p, double far_factor) {
    const double r = separation(s);
    return (r * r * r > far_factor * p.delta_2) ? 0 : 1;
}

namespace {

Kappa fallback_sign(SignFallback mode, Kappa prev) {
    switch (mode) {
        case SignFallback::plus: return Kappa::plus;
        case SignFallback::minus: return Kappa::minus;
        case SignFallback::previous:
            return prev == Kappa::off ? Kappa::plus : prev;
    }
    return Kappa::plus;
}

void validate_feedback_config(const FeedbackConfig& cfg) {
    if (!(cfg.a_bar >= 0.0)) throw ValidationError("a_bar must be >= 0");
    if (!(cfg.far_factor > 0.0)) throw ValidationError("far_factor must be > 0");
    if (!(cfg.rho_reach > 0.0)) throw ValidationError("rho_reach must be > 0");
    for (const auto& w : cfg.overrides) {
        if (!(w.t_begin < w.t_end)) {
            throw ValidationError("override window must have t_begin < t_end");
        }
    }
}

}  // namespace

Kappa feedback_kappa(const SystemState& s, Vec2 target, const ModelParams& p,
                     const FeedbackConfig& cfg, Kappa prev) {
    if (chi_far(s, p, cfg.far_factor) == 0) return Kappa::off;
    const double a = alignment_a(s, target);
    if (std::abs(a) <= cfg.a_bar && same_side(s, target) < 0.0) return Kappa::off;
    if (a == 0.0) return fallback_sign(cfg.sign_fallback, prev);
    return kappa_sign(a);
}

FeedbackRule make_feedback_rule(Vec2 target, const ModelParams& p,
                                const FeedbackConfig& cfg, Kappa last_nonzero) {
    validate_feedback_config(cfg);
    return [target, p, cfg, memory = last_nonzero](const SystemState& s,
                                                   Kappa) mutable -> Kappa {
        Kappa k = Kappa::off;
        bool forced = false;
        for (const auto& w : cfg.overrides) {
            if (s.t >= w.t_begin && s.t < w.t_end) {
                k = w.kappa;
                forced = true;
                break;
            }
        }
        if (!forced) k = feedback_kappa(s, target, p, cfg, memory);
        if (k != Kappa::off) memory = k;
        return k;
    };
}

namespace {

void append_realized(std::vector<ControlPoint>& merged,
                     const std::vector<ControlPoint>& leg) {
    for (const auto& pt : leg) {
        if (!merged.empty()) {
            if (pt.t <= merged.back().t) {
                if (pt.kappa != merged.back().kappa) merged.back().kappa = pt.kappa;
                continue;
            }
            if (pt.kappa == merged.back().kappa) continue;
        }
        merged.push_back(pt);
    }
}

std::vector<ActiveSegment> segments_from_realized(const std::vector<ControlPoint>& pts,
                                                  double t_end) {
    std::vector<ActiveSegment> segs;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].kappa == Kappa::off) continue;
        const double end = i + 1 < pts.size() ? pts[i + 1].t : t_end;
        if (end > pts[i].t) segs.push_back({pts[i].t, end, pts[i].kappa});
    }
    return segs;
}

CostBreakdown cost_from_realized(const std::vector<ControlPoint>& pts, double t0,
                                 double t_end, double sigma1, double sigma2) {
    const ControlSchedule sched(pts);
    CostBreakdown c;
    c.n_ig = ignition_count(sched);
    c.c_active = cost_active(sched, t0, t_end);
    c.sigma1 = sigma1;
    c.sigma2 = sigma2;
    c.total = sigma1 * c.n_ig + sigma2 * c.c_active;
    return c;
}

}  // namespace

FeedbackRunResult run_feedback(const Scenario& sc, const FeedbackConfig& cfg,
                               const StepperConfig& stepper, double sigma1,
                               double sigma2) {
    return run_path(sc, {sc.target}, cfg, stepper, sigma1, sigma2);
}

FeedbackRunResult run_path(const Scenario& sc, const std::vector<Vec2>& targets,
                           const FeedbackConfig& cfg, const StepperConfig& stepper,
                           double sigma1, double sigma2) {
    validate_scenario(sc);
    validate_feedback_config(cfg);
    if (targets.empty()) throw ValidationError("target list must not be empty");

    FeedbackRunResult out;
    SystemState state = sc.initial;
    state.t = sc.t0;
    Kappa memory = Kappa::off;
    bool time_left = true;
    TrajectoryEvents tail_events;

    for (std::size_t i = 0; i < targets.size(); ++i) {
        PathLeg leg;
        leg.target_index = static_cast<int>(i);
        leg.target = targets[i];
        if (!time_left) {
            out.legs.push_back(leg);
            continue;
        }

        Scenario leg_sc = sc;
        leg_sc.initial = state;
        leg_sc.t0 = state.t;
        leg_sc.target = targets[i];

        SimulateOptions opts;
        opts.stop_radius = cfg.rho_reach;
        const Trajectory traj = simulate(
            leg_sc, make_feedback_rule(targets[i], sc.params, cfg, memory), stepper, opts);

        state = traj.final_state();
        tail_events = traj.events;
        for (const auto& pt : traj.events.realized_schedule) {
            if (pt.kappa != Kappa::off) memory = pt.kappa;
        }
        append_realized(out.realized, traj.events.realized_schedule);

        const bool skip_first = !out.trajectory.samples.empty();
        for (std::size_t j = skip_first ? 1 : 0; j < traj.samples.size(); ++j) {
            out.trajectory.samples.push_back(traj.samples[j]);
        }

        const bool reached = dist(state.u_e, targets[i]) <= cfg.rho_reach;
        if (reached) {
            leg.t_reach = state.t;
        } else {
            time_left = false;  // the horizon ran out on this leg
        }
        out.legs.push_back(leg);
        if (state.t >= sc.tf) time_left = false;
    }

    const double t_end = out.trajectory.samples.empty()
                             ? sc.t0
                             : out.trajectory.final_state().t;
    out.segments = segments_from_realized(out.realized, t_end);
    out.cost = cost_from_realized(out.realized, sc.t0, t_end, sigma1, sigma2);
    out.all_reached = true;
    for (const auto& leg : out.legs) {
        if (!leg.t_reach) out.all_reached = false;
    }

    // Target-approach events refer to the last simulated leg, whose target is
    // the path terminus; the realized control history spans the whole run.
    out.trajectory.events = tail_events;
    out.trajectory.events.realized_schedule = out.realized;
    return out;
}

}  // namespace drover
