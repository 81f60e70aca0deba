#include "drover/openloop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "drover/errors.hpp"
#include "drover/feedback.hpp"

namespace drover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimum gap kept between t_on and switch-off candidates.
constexpr double kMinOnTime = 1e-9;

// Cost ties within this margin resolve to the earliest t_on, so a flat
// plateau reports its onset rather than an arbitrary interior point.
constexpr double kTieTolerance = 1e-3;

}  // namespace

int ignition_count(const ControlSchedule& sched) {
    const auto& pts = sched.points();
    int count = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i - 1].kappa == Kappa::off && pts[i].kappa != Kappa::off) ++count;
    }
    return count;
}

double cost_active(const ControlSchedule& sched, double t0, double tf) {
    if (!(tf >= t0)) throw ModelError("cost_active requires tf >= t0");
    const auto& pts = sched.points();
    double total = 0.0;
    double t = t0;
    while (t < tf) {
        double t_next = tf;
        if (auto br = sched.next_change_after(t); br && *br < tf) t_next = *br;
        total += std::abs(kappa_value(sched.at(t))) * (t_next - t);
        t = t_next;
    }
    return total;
}

CostBreakdown cost_of_schedule(const ControlSchedule& sched, double t0, double tf,
                               double sigma1, double sigma2) {
    CostBreakdown c;
    c.n_ig = ignition_count(sched);
    c.c_active = cost_active(sched, t0, tf);
    c.sigma1 = sigma1;
    c.sigma2 = sigma2;
    c.total = sigma1 * c.n_ig + sigma2 * c.c_active;
    return c;
}

double alignment_alpha(const SystemState& s, Vec2 target) {
    return cross(s.v_e, target - s.u_e);
}

Kappa auto_turn_direction(const Scenario& sc) {
    const double a = alignment_a(sc.initial, sc.target);
    if (a == 0.0) {
        throw ValidationError(
            "target lies on the initial line of sight; pass the turn "
            "direction explicitly");
    }
    return kappa_sign(a);
}

const char* to_string(ShotVerdict v) {
    switch (v) {
        case ShotVerdict::hit: return "hit";
        case ShotVerdict::aligned: return "aligned";
        case ShotVerdict::underturned: return "underturned";
        case ShotVerdict::overturned: return "overturned";
    }
    return "unknown";
}

namespace {

// Events carried over from an already integrated pursuit prefix, so the
// switch-off solver only integrates the suffix of each candidate.
struct PrefixEvents {
    bool valid = false;
    double min_target_dist = kInf;
    double t_min_target_dist = 0.0;
    SystemState state_at_min_target{};
    std::optional<double> t_b;
};

PrefixEvents merge_prefix(const PrefixEvents& acc, const TrajectoryEvents& ev) {
    PrefixEvents out = acc;
    out.valid = true;
    if (ev.min_target_dist < out.min_target_dist) {
        out.min_target_dist = ev.min_target_dist;
        out.t_min_target_dist = ev.t_min_target_dist;
        out.state_at_min_target = ev.state_at_min_target;
    }
    if (!out.t_b) out.t_b = ev.t_b;
    return out;
}

ShotAssessment assess_internal(const Scenario& sc, const ControlSchedule& sched,
                               const StepperConfig& stepper, double eps, double rho,
                               Kappa orientation, const PrefixEvents& prefix) {
    if (orientation == Kappa::off) {
        throw ValidationError("shot assessment needs a turn direction of +1 or -1");
    }
    const double orient = kappa_value(orientation);

    Scenario run = sc;
    run.rho = rho;

    bool tb_seen = prefix.t_b.has_value() || run.initial.v_e.x < 0.0;
    double alpha_min = kInf;
    double alpha_final = orient * alignment_alpha(run.initial, run.target);
    bool aborted_overturn = false;

    SimulateOptions opts;
    opts.record_samples = false;
    opts.observer = [&](const SystemState& s, Kappa) {
        if (!tb_seen && s.v_e.x < 0.0) tb_seen = true;
        const double ab = orient * alignment_alpha(s, run.target);
        alpha_final = ab;
        if (tb_seen) {
            alpha_min = std::min(alpha_min, ab);
            if (ab < -eps) {
                aborted_overturn = true;
                return false;
            }
        }
        return true;
    };

    const Trajectory traj = simulate(run, sched, stepper, opts);
    const TrajectoryEvents& ev = traj.events;

    ShotAssessment out;
    out.t_end = traj.final_state().t;
    out.alpha_min = alpha_min;
    out.alpha_final = alpha_final;

    out.min_target_dist = ev.min_target_dist;
    out.t_min_target_dist = ev.t_min_target_dist;
    SystemState closest = ev.state_at_min_target;
    out.t_b = prefix.t_b ? prefix.t_b : ev.t_b;
    if (prefix.valid && prefix.min_target_dist < out.min_target_dist) {
        out.min_target_dist = prefix.min_target_dist;
        out.t_min_target_dist = prefix.t_min_target_dist;
        closest = prefix.state_at_min_target;
    }
    out.alpha_at_closest = orient * alignment_alpha(closest, run.target);

    if (out.min_target_dist < rho && std::abs(out.alpha_at_closest) < eps) {
        out.verdict = ShotVerdict::hit;
    } else if (aborted_overturn || alpha_min < -eps) {
        out.verdict = ShotVerdict::overturned;
    } else if (!out.t_b) {
        out.verdict = ShotVerdict::underturned;
    } else if (alpha_final < eps) {
        out.verdict = ShotVerdict::aligned;
    } else {
        out.verdict = ShotVerdict::underturned;
    }
    return out;
}

struct SwitchOffSolution {
    double t_off;
    bool complete;
    int iterations;
    ShotAssessment assessment;
};

// Bisection on the switch-off time of the active window starting at t_on.
// The scenario's initial state is the system at t_on; prefix carries the
// events of the already integrated [original t0, t_on] pursuit.
// When allow_incomplete is set, an underturned verdict at t_off = tf
// resolves to an incomplete maneuver instead of an error.
SwitchOffSolution solve_switch_off(const Scenario& at_on, double t_on, Kappa kappa0,
                                   const ShootConfig& cfg, const PrefixEvents& prefix,
                                   bool allow_incomplete) {
    const double tf = at_on.tf;
    const double lo_min = t_on + kMinOnTime;
    if (!(lo_min < tf)) throw ShootingError("switch-on time leaves no room before tf");

    int iterations = 0;
    auto eval = [&](double t_off) {
        ++iterations;
        if (iterations > cfg.max_iters) {
            std::ostringstream os;
            os << "switch-off search exceeded " << cfg.max_iters << " shot evaluations";
            throw ShootingError(os.str());
        }
        const auto sched = ControlSchedule::step(t_on, kappa0, t_off);
        return assess_internal(at_on, sched, cfg.stepper, cfg.epsilon_align, cfg.rho,
                               kappa0, prefix);
    };

    double lo = lo_min;
    double hi = tf;
    if (cfg.bracket) {
        lo = std::clamp(cfg.bracket->first, lo_min, tf);
        hi = std::clamp(cfg.bracket->second, lo_min, tf);
        if (!(lo < hi)) throw ShootingError("switch-off bracket is empty");
    }

    auto converged = [](const ShotAssessment& a) {
        return a.verdict == ShotVerdict::hit || a.verdict == ShotVerdict::aligned;
    };

    ShotAssessment a_lo = eval(lo);
    if (converged(a_lo)) return {lo, true, iterations, a_lo};
    while (a_lo.verdict == ShotVerdict::overturned && lo > lo_min) {
        const double width = std::max(hi - lo, 1e-3);
        hi = lo;
        lo = std::max(lo_min, lo - 1.5 * width);
        a_lo = eval(lo);
        if (converged(a_lo)) return {lo, true, iterations, a_lo};
    }
    if (a_lo.verdict == ShotVerdict::overturned) {
        throw ShootingError(
            "even an immediate switch-off overturns the heading; no root in "
            "(t_on, tf]");
    }

    ShotAssessment a_hi = eval(hi);
    if (converged(a_hi)) return {hi, true, iterations, a_hi};
    while (a_hi.verdict == ShotVerdict::underturned && hi < tf) {
        const double width = std::max(hi - lo, 1e-3);
        lo = hi;
        hi = std::min(tf, hi + 1.5 * width);
        a_hi = eval(hi);
        if (converged(a_hi)) return {hi, true, iterations, a_hi};
    }
    if (a_hi.verdict == ShotVerdict::underturned) {
        if (allow_incomplete) return {tf, false, iterations, a_hi};
        throw ShootingError("target not reachable within the horizon");
    }

    // Verdicts straddle the root: underturned at lo, overturned at hi.
    while (iterations < cfg.max_iters) {
        const double mid = 0.5 * (lo + hi);
        if (!(lo < mid && mid < hi)) {
            // Bracket shrank to machine resolution without entering the
            // alignment band; report the closer end honestly.
            throw ShootingError(
                "switch-off bracket collapsed without meeting the convergence "
                "criteria");
        }
        const ShotAssessment a = eval(mid);
        if (converged(a)) return {mid, true, iterations, a};
        if (a.verdict == ShotVerdict::underturned) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    std::ostringstream os;
    os << "switch-off search exceeded " << cfg.max_iters << " shot evaluations";
    throw ShootingError(os.str());
}

// Integrates the uncontrolled pursuit from `from` to t_end and returns the
// arrival state plus the accumulated events.
std::pair<SystemState, PrefixEvents> advance_pursuit(const Scenario& sc,
                                                     const SystemState& from,
                                                     double t_end,
                                                     const StepperConfig& stepper,
                                                     double rho,
                                                     const PrefixEvents& acc) {
    Scenario leg = sc;
    leg.initial = from;
    leg.t0 = from.t;
    leg.tf = t_end;
    leg.rho = rho;
    SimulateOptions opts;
    opts.record_samples = false;
    const Trajectory traj =
        simulate(leg, ControlSchedule::constant(Kappa::off, from.t), stepper, opts);
    return {traj.final_state(), merge_prefix(acc, traj.events)};
}

CostBreakdown window_cost(int n_ig, double activation, const ShootConfig& cfg) {
    CostBreakdown c;
    c.n_ig = n_ig;
    c.c_active = activation;
    c.sigma1 = cfg.sigma1;
    c.sigma2 = cfg.sigma2;
    c.total = cfg.sigma1 * n_ig + cfg.sigma2 * activation;
    return c;
}

}  // namespace

ShotAssessment assess_shot(const Scenario& sc, const ControlSchedule& sched,
                           const StepperConfig& stepper, double epsilon_align,
                           double rho, Kappa orientation) {
    return assess_internal(sc, sched, stepper, epsilon_align, rho, orientation,
                           PrefixEvents{});
}

StepControlResult shoot_step_control(const Scenario& sc, const ShootConfig& cfg,
                                     std::optional<Kappa> kappa0) {
    validate_scenario(sc, !kappa0.has_value());
    const Kappa k0 = kappa0 ? *kappa0 : auto_turn_direction(sc);
    if (k0 == Kappa::off) throw ValidationError("kappa0 must be +1 or -1");

    Scenario run = sc;
    run.initial.t = sc.t0;
    const SwitchOffSolution sol =
        solve_switch_off(run, sc.t0, k0, cfg, PrefixEvents{}, false);

    StepControlResult out;
    out.kappa0 = k0;
    out.tau = sol.t_off;
    out.iterations = sol.iterations;
    out.miss_distance = sol.assessment.min_target_dist;
    out.verdict = sol.assessment.verdict;
    const auto sched = ControlSchedule::step(sc.t0, k0, sol.t_off);
    out.cost = cost_of_schedule(sched, sc.t0, sc.tf, cfg.sigma1, cfg.sigma2);
    Scenario rec = sc;
    rec.rho = cfg.rho;
    out.trajectory = simulate(rec, sched, cfg.stepper);
    return out;
}

WindowOffResult shoot_window_off(const Scenario& sc, double t_on, const ShootConfig& cfg,
                                 std::optional<Kappa> kappa0) {
    validate_scenario(sc, !kappa0.has_value());
    if (!(t_on >= sc.t0 && t_on < sc.tf)) {
        throw ValidationError("t_on must lie in [t0, tf)");
    }
    const Kappa k0 = kappa0 ? *kappa0 : auto_turn_direction(sc);
    if (k0 == Kappa::off) throw ValidationError("kappa0 must be +1 or -1");

    SystemState start = sc.initial;
    start.t = sc.t0;
    PrefixEvents prefix;
    if (t_on > sc.t0) {
        std::tie(start, prefix) =
            advance_pursuit(sc, start, t_on, cfg.stepper, cfg.rho, prefix);
    }

    Scenario at_on = sc;
    at_on.initial = start;
    at_on.t0 = t_on;

    const SwitchOffSolution sol = solve_switch_off(at_on, t_on, k0, cfg, prefix, true);

    WindowOffResult out;
    out.kappa0 = k0;
    out.t_on = t_on;
    out.t_off = sol.t_off;
    out.complete = sol.complete;
    out.iterations = sol.iterations;
    out.miss_distance = sol.assessment.min_target_dist;
    out.verdict = sol.assessment.verdict;
    out.cost = window_cost(1, sol.t_off - t_on, cfg);
    return out;
}

std::vector<CostCurvePoint> cost_curve(const Scenario& sc, const std::vector<double>& grid,
                                       const ShootConfig& cfg,
                                       std::optional<Kappa> kappa0) {
    validate_scenario(sc, !kappa0.has_value());
    const Kappa k0 = kappa0 ? *kappa0 : auto_turn_direction(sc);
    if (k0 == Kappa::off) throw ValidationError("kappa0 must be +1 or -1");

    std::vector<double> pts = grid;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (double t : pts) {
        if (!(t >= sc.t0 && t < sc.tf)) {
            throw ValidationError("cost-curve grid points must lie in [t0, tf)");
        }
    }

    std::vector<CostCurvePoint> out;
    out.reserve(pts.size());

    SystemState cp = sc.initial;
    cp.t = sc.t0;
    PrefixEvents prefix;
    for (double t_on : pts) {
        if (t_on > cp.t) {
            std::tie(cp, prefix) =
                advance_pursuit(sc, cp, t_on, cfg.stepper, cfg.rho, prefix);
        }
        Scenario at_on = sc;
        at_on.initial = cp;
        at_on.t0 = t_on;
        const SwitchOffSolution sol = solve_switch_off(at_on, t_on, k0, cfg, prefix, true);

        CostCurvePoint p;
        p.t_on = t_on;
        p.t_off = sol.t_off;
        p.activation = sol.t_off - t_on;
        p.cost = cfg.sigma1 * 1.0 + cfg.sigma2 * p.activation;
        p.complete = sol.complete;
        p.iterations = sol.iterations;
        out.push_back(p);
    }
    return out;
}

namespace {

std::vector<double> make_grid(double lo, double hi, double step) {
    std::vector<double> g;
    if (!(step > 0.0)) throw ValidationError("grid step must be > 0");
    const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    g.reserve(static_cast<std::size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
    return g;
}

const CostCurvePoint* best_complete(const std::vector<CostCurvePoint>& pts) {
    const CostCurvePoint* best = nullptr;
    double min_cost = kInf;
    for (const auto& p : pts) {
        if (!p.complete) continue;
        min_cost = std::min(min_cost, p.cost);
    }
    for (const auto& p : pts) {
        if (!p.complete) continue;
        if (p.cost <= min_cost + kTieTolerance) {
            best = &p;  // grid is sorted, first qualifying point is earliest
            break;
        }
    }
    return best;
}

}  // namespace

WindowOptimum optimize_window(const Scenario& sc, const GridSpec& grid,
                              const ShootConfig& cfg, std::optional<Kappa> kappa0) {
    if (!(grid.t_min >= sc.t0 && grid.t_max < sc.tf && grid.t_min <= grid.t_max)) {
        throw ValidationError("grid range must lie inside [t0, tf)");
    }

    WindowOptimum out;
    out.coarse_curve = cost_curve(sc, make_grid(grid.t_min, grid.t_max, grid.coarse_step),
                                  cfg, kappa0);
    const CostCurvePoint* best = best_complete(out.coarse_curve);
    if (best == nullptr) {
        throw ShootingError("no grid point completes the maneuver within the horizon");
    }

    const CostCurvePoint* chosen = best;
    if (grid.refine) {
        const double lo = std::max(grid.t_min, best->t_on - grid.refine_radius);
        const double hi = std::min(grid.t_max, best->t_on + grid.refine_radius);
        out.refined_curve = cost_curve(sc, make_grid(lo, hi, grid.refine_step), cfg, kappa0);
        const CostCurvePoint* refined = best_complete(out.refined_curve);
        if (refined != nullptr) chosen = refined;
    }

    out.kappa0 = kappa0 ? *kappa0 : auto_turn_direction(sc);
    out.t_on = chosen->t_on;
    out.t_off = chosen->t_off;
    out.complete = chosen->complete;
    out.cost = window_cost(1, chosen->activation, cfg);
    return out;
}

double escape_angle(const Scenario& sc, Kappa kappa0, double tau,
                    const StepperConfig& stepper) {
    SimulateOptions opts;
    opts.record_samples = false;
    const auto sched = ControlSchedule::step(sc.t0, kappa0, tau);
    const Trajectory traj = simulate(sc, sched, stepper, opts);
    const Vec2 v = traj.final_state().v_e;
    return std::atan2(v.y, v.x);
}

}  // namespace drover
