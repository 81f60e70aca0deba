#include "drover/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "drover/errors.hpp"

namespace drover {

namespace {

SystemState advance(const SystemState& s, const StateDerivative& d, double h) {
    SystemState out = s;
    out.t = s.t + h;
    out.u_d += h * d.du_d;
    out.u_e += h * d.du_e;
    out.v_d += h * d.dv_d;
    out.v_e += h * d.dv_e;
    return out;
}

StateDerivative combine_rk4(const StateDerivative& k1, const StateDerivative& k2,
                            const StateDerivative& k3, const StateDerivative& k4) {
    StateDerivative d;
    d.du_d = (k1.du_d + 2.0 * k2.du_d + 2.0 * k3.du_d + k4.du_d) / 6.0;
    d.du_e = (k1.du_e + 2.0 * k2.du_e + 2.0 * k3.du_e + k4.du_e) / 6.0;
    d.dv_d = (k1.dv_d + 2.0 * k2.dv_d + 2.0 * k3.dv_d + k4.dv_d) / 6.0;
    d.dv_e = (k1.dv_e + 2.0 * k2.dv_e + 2.0 * k3.dv_e + k4.dv_e) / 6.0;
    return d;
}

// Earliest s in [0, 1] with |p0 + s (p1 - p0) - target| <= rho, if any.
std::optional<double> segment_ball_entry(Vec2 p0, Vec2 p1, Vec2 target, double rho) {
    const Vec2 f = p0 - target;
    if (norm(f) <= rho) return 0.0;
    const Vec2 w = p1 - p0;
    const double ww = norm_sq(w);
    if (ww == 0.0) return std::nullopt;
    const double b = dot(f, w);
    const double c = norm_sq(f) - rho * rho;
    const double disc = b * b - ww * c;
    if (disc < 0.0) return std::nullopt;
    const double s = (-b - std::sqrt(disc)) / ww;
    if (s < 0.0 || s > 1.0) return std::nullopt;
    return s;
}

// Parameter of the closest point to target on the segment p0 -> p1.
double segment_closest_param(Vec2 p0, Vec2 p1, Vec2 target) {
    const Vec2 w = p1 - p0;
    const double ww = norm_sq(w);
    if (ww == 0.0) return 0.0;
    return std::clamp(dot(target - p0, w) / ww, 0.0, 1.0);
}

}  // namespace

SystemState step(const SystemState& s, const ModelParams& p, Kappa kappa, double h,
                 Method method, double separation_floor) {
    switch (method) {
        case Method::explicit_euler: {
            return advance(s, derivatives(s, p, kappa, separation_floor), h);
        }
        case Method::fixed_rk4: {
            const StateDerivative k1 = derivatives(s, p, kappa, separation_floor);
            const StateDerivative k2 =
                derivatives(advance(s, k1, 0.5 * h), p, kappa, separation_floor);
            const StateDerivative k3 =
                derivatives(advance(s, k2, 0.5 * h), p, kappa, separation_floor);
            const StateDerivative k4 =
                derivatives(advance(s, k3, h), p, kappa, separation_floor);
            return advance(s, combine_rk4(k1, k2, k3, k4), h);
        }
    }
    throw ModelError("unknown integration method");
}

SystemState state_lerp(const SystemState& a, const SystemState& b, double s) {
    SystemState out;
    out.t = a.t + s * (b.t - a.t);
    out.u_d = lerp(a.u_d, b.u_d, s);
    out.u_e = lerp(a.u_e, b.u_e, s);
    out.v_d = lerp(a.v_d, b.v_d, s);
    out.v_e = lerp(a.v_e, b.v_e, s);
    return out;
}

Trajectory simulate(const Scenario& sc, const ControlSource& control,
                    const StepperConfig& cfg, const SimulateOptions& opts) {
    if (!(cfg.dt > 0.0)) throw ModelError("dt must be > 0");
    if (cfg.record_stride < 1) throw ModelError("record_stride must be >= 1");
    if (!(sc.tf > sc.t0)) throw ModelError("tf must be > t0");
    if (!state_is_finite(sc.initial)) throw ModelError("initial state must be finite");

    const ControlSchedule* schedule = std::get_if<ControlSchedule>(&control);
    const FeedbackRule* rule = std::get_if<FeedbackRule>(&control);
    if (rule != nullptr && !*rule) throw ModelError("feedback rule is empty");

    SystemState state = sc.initial;
    state.t = sc.t0;

    Trajectory traj;
    TrajectoryEvents& ev = traj.events;

    Kappa kappa = schedule != nullptr ? schedule->at(sc.t0) : (*rule)(state, Kappa::off);
    Kappa first_kappa = kappa;
    ev.realized_schedule.push_back({sc.t0, kappa});

    ev.min_target_dist = dist(state.u_e, sc.target);
    ev.t_min_target_dist = sc.t0;
    ev.state_at_min_target = state;
    if (ev.min_target_dist <= sc.rho) ev.t_hit = sc.t0;
    if (state.v_e.x < 0.0) ev.t_b = sc.t0;

    traj.samples.push_back({state, kappa});

    // Steps never straddle tf or a schedule breakpoint; the tail guard keeps
    // roundoff from spawning a dust step after the nominal last one.
    const double t_end = sc.tf;
    const double tail = 1e-12 * std::max(1.0, std::abs(t_end));

    bool stopped =
        opts.stop_radius && dist(state.u_e, sc.target) <= *opts.stop_radius;
    long step_index = 0;
    while (!stopped && state.t < t_end - tail) {
        double h = std::min(cfg.dt, t_end - state.t);
        if (schedule != nullptr) {
            if (auto br = schedule->next_change_after(state.t)) {
                if (*br < state.t + h) h = *br - state.t;
            }
        }
        if (rule != nullptr && step_index > 0) {
            kappa = (*rule)(state, kappa);
        } else if (schedule != nullptr) {
            kappa = schedule->at(state.t);
        }
        if (kappa != ev.realized_schedule.back().kappa) {
            ev.realized_schedule.push_back({state.t, kappa});
        }

        const SystemState prev = state;
        state = step(prev, sc.params, kappa, h, cfg.method, cfg.separation_floor);
        if (state.t > t_end || t_end - state.t < tail) state.t = t_end;
        if (!state_is_finite(state)) {
            std::ostringstream os;
            os << "state became non-finite at t = " << state.t;
            throw ModelError(os.str());
        }
        ++step_index;

        // Events at full step resolution.
        const double s_min = segment_closest_param(prev.u_e, state.u_e, sc.target);
        const double d_min = dist(lerp(prev.u_e, state.u_e, s_min), sc.target);
        if (d_min < ev.min_target_dist) {
            ev.min_target_dist = d_min;
            ev.t_min_target_dist = prev.t + s_min * h;
            ev.state_at_min_target = state_lerp(prev, state, s_min);
        }
        if (!ev.t_hit) {
            if (auto s_hit = segment_ball_entry(prev.u_e, state.u_e, sc.target, sc.rho)) {
                ev.t_hit = prev.t + *s_hit * h;
            }
        }
        if (!ev.t_b && state.v_e.x < 0.0) {
            const double dv = prev.v_e.x - state.v_e.x;
            const double s_b = dv > 0.0 ? std::clamp(prev.v_e.x / dv, 0.0, 1.0) : 1.0;
            ev.t_b = prev.t + s_b * h;
        }

        if (opts.stop_radius && dist(state.u_e, sc.target) <= *opts.stop_radius) {
            stopped = true;
        }
        if (opts.observer && !opts.observer(state, kappa)) {
            stopped = true;
        }

        const bool at_end = stopped || !(state.t < t_end - tail);
        if (at_end || (opts.record_samples && step_index % cfg.record_stride == 0)) {
            traj.samples.push_back({state, kappa});
        }
    }

    if (traj.samples.size() == 1) {
        traj.samples.push_back({state, first_kappa});
    }
    return traj;
}

double refine_event_time(const Trajectory& traj,
                         const std::function<bool(const SystemState&)>& predicate) {
    const auto& samples = traj.samples;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const bool before = predicate(samples[i].state);
        const bool after = predicate(samples[i + 1].state);
        if (before == after) continue;

        double lo = 0.0, hi = 1.0;
        for (int iter = 0; iter < 60; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const SystemState m = state_lerp(samples[i].state, samples[i + 1].state, mid);
            if (predicate(m) == before) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return state_lerp(samples[i].state, samples[i + 1].state, hi).t;
    }
    throw ModelError("predicate never changes value along the trajectory");
}

}  // namespace drover
