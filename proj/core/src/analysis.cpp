#include "drover/analysis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "drover/errors.hpp"

namespace drover {

PursuitAsymptotics pursuit_asymptotics(const ModelParams& p) {
    validate_params(p, false);
    const double d1_4 = (p.delta_1 * p.delta_1) * (p.delta_1 * p.delta_1);
    const double numer = p.nu_e * (p.c_attract * p.delta_c * p.delta_c - p.c_circ * d1_4);
    const double denom = p.nu_e * p.c_attract - p.nu_d * p.c_repel;
    if (!(denom > 0.0)) {
        std::ostringstream os;
        os << "no pursuit equilibrium: nu_e*c_attract - nu_d*c_repel = " << denom
           << " must be > 0";
        throw ValidationError(os.str());
    }
    const double radicand = numer / denom;
    if (!(radicand > 0.0)) {
        std::ostringstream os;
        os << "no pursuit equilibrium: radicand " << radicand << " must be > 0";
        throw ValidationError(os.str());
    }
    PursuitAsymptotics out;
    out.delta_as = std::sqrt(radicand);
    out.v_as = p.c_repel / (p.nu_e * out.delta_as);
    return out;
}

CircumventionMeasurement measure_circumvention(const Trajectory& traj,
                                               double window_start) {
    std::vector<double> ts, ys, seps;
    for (const auto& sample : traj.samples) {
        if (sample.state.t < window_start) continue;
        ts.push_back(sample.state.t);
        ys.push_back(sample.state.u_d.y);
        seps.push_back(separation(sample.state));
    }

    // Local maxima of the driver height, refined with the vertex of the
    // parabola through the three bracketing samples (spacing may differ at
    // split steps, so the general vertex formula is used).
    std::vector<double> peak_times;
    for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
        if (!(ys[i] > ys[i - 1] && ys[i] >= ys[i + 1])) continue;
        const double t0 = ts[i - 1], t1 = ts[i], t2 = ts[i + 1];
        const double y0 = ys[i - 1], y1 = ys[i], y2 = ys[i + 1];
        const double d01 = (y1 - y0) / (t1 - t0);
        const double d12 = (y2 - y1) / (t2 - t1);
        const double curv = (d12 - d01) / (t2 - t0);
        double t_peak = t1;
        if (curv < 0.0) {
            t_peak = 0.5 * (t0 + t1) - d01 / (2.0 * curv);
        }
        peak_times.push_back(t_peak);
    }

    if (peak_times.size() < 3) {
        std::ostringstream os;
        os << "circumvention window holds " << peak_times.size()
           << " driver-height peaks; at least 3 are required";
        throw ModelError(os.str());
    }

    double period_sum = 0.0;
    for (std::size_t i = 1; i < peak_times.size(); ++i) {
        period_sum += peak_times[i] - peak_times[i - 1];
    }
    CircumventionMeasurement out;
    out.peaks_used = static_cast<int>(peak_times.size());
    out.period = period_sum / static_cast<double>(peak_times.size() - 1);
    out.omega = 2.0 * std::numbers::pi / out.period;
    double sep_sum = 0.0;
    for (double s : seps) sep_sum += s;
    out.mean_separation = sep_sum / static_cast<double>(seps.size());
    return out;
}

double free_agent_potential(const SystemState& s, const ModelParams& p) {
    return std::log(separation(s)) +
           p.m_d / (2.0 * p.c_attract) * norm_sq(s.v_d) -
           p.m_e / (2.0 * p.c_repel) * norm_sq(s.v_e);
}

double potential_derivative(const SystemState& s, const ModelParams& p) {
    return -(p.nu_d / p.c_attract) * norm_sq(s.v_d) +
           (p.nu_e / p.c_repel) * norm_sq(s.v_e);
}

bool damping_balance_holds(const ModelParams& p) {
    return p.m_d / p.nu_d < p.m_e / p.nu_e;
}

PotentialAudit potential_audit(const Trajectory& traj, const ModelParams& p,
                               double delta_free, double tol,
                               double rise_allowance) {
    PotentialAudit audit;
    auto gated = [&](const SystemState& s) {
        return separation(s) >= delta_free &&
               (p.nu_e / p.c_repel) * norm_sq(s.v_e) <=
                   (p.nu_d / p.c_attract) * norm_sq(s.v_d);
    };
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        const SystemState& a = traj.samples[i].state;
        const SystemState& b = traj.samples[i + 1].state;
        if (!gated(a) || !gated(b)) continue;
        ++audit.pairs_considered;
        const double pd = potential_derivative(a, p);
        audit.max_derivative = std::max(audit.max_derivative, pd);
        if (pd > tol) ++audit.derivative_violations;
        const double rise = free_agent_potential(b, p) - free_agent_potential(a, p);
        audit.max_rise = std::max(audit.max_rise, rise);
        if (rise > rise_allowance) ++audit.rise_violations;
    }
    return audit;
}

BoundsAudit bounds_audit(const Trajectory& traj) {
    BoundsAudit audit;
    for (const auto& sample : traj.samples) {
        audit.max_separation = std::max(audit.max_separation, separation(sample.state));
        audit.max_driver_speed = std::max(audit.max_driver_speed, norm(sample.state.v_d));
        audit.max_evader_speed = std::max(audit.max_evader_speed, norm(sample.state.v_e));
    }
    return audit;
}

}  // namespace drover
