#include "drover/dynamics.hpp"

#include <sstream>

#include "drover/errors.hpp"

namespace drover {

namespace {

[[noreturn]] void throw_collision(double t, double r, double floor) {
    std::ostringstream os;
    os << "separation " << r << " at t = " << t << " is at or below the floor "
       << floor;
    throw ModelError(os.str());
}

constexpr double pow4(double v) { return (v * v) * (v * v); }

}  // namespace

Vec2 driver_accel(const SystemState& s, const ModelParams& p, Kappa kappa,
                  double separation_floor) {
    const Vec2 d = s.u_d - s.u_e;
    const double r2 = norm_sq(d);
    const double r = std::sqrt(r2);
    if (!(r > separation_floor)) throw_collision(s.t, r, separation_floor);

    const double inv_r2 = 1.0 / r2;
    const double d1_4 = pow4(p.delta_1);

    // Radial coupling: the bare attraction-repulsion plus the collinear part
    // of the circumvention force, which pushes outward regardless of kappa.
    // Grouped so zeroed couplings stay zero instead of forming 0/0.
    const double radial =
        -inv_r2 / p.m_d *
        (p.c_attract +
         inv_r2 * (p.c_circ * d1_4 - p.c_attract * p.delta_c * p.delta_c));

    // Tangential coupling: only the steered part depends on kappa.
    const double tangential =
        kappa_value(kappa) * p.c_circ * d1_4 * p.delta_2 / (p.m_d * r2 * r2 * r);

    return radial * d + tangential * perp(d) - (p.nu_d / p.m_d) * s.v_d;
}

Vec2 evader_accel(const SystemState& s, const ModelParams& p, double separation_floor) {
    const Vec2 d = s.u_e - s.u_d;
    const double r2 = norm_sq(d);
    const double r = std::sqrt(r2);
    if (!(r > separation_floor)) throw_collision(s.t, r, separation_floor);

    return (p.c_repel / p.m_e) / r2 * d - (p.nu_e / p.m_e) * s.v_e;
}

StateDerivative derivatives(const SystemState& s, const ModelParams& p, Kappa kappa,
                            double separation_floor) {
    StateDerivative dv;
    dv.du_d = s.v_d;
    dv.du_e = s.v_e;
    dv.dv_d = driver_accel(s, p, kappa, separation_floor);
    dv.dv_e = evader_accel(s, p, separation_floor);
    return dv;
}

}  // namespace drover
