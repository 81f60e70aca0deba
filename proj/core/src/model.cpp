#include "drover/model.hpp"

#include <sstream>

#include "drover/errors.hpp"

namespace drover {

Kappa kappa_from_int(int v) {
    if (v < -1 || v > 1) {
        throw ValidationError("kappa must be -1, 0 or 1, got " + std::to_string(v));
    }
    return static_cast<Kappa>(v);
}

ModelParams default_params() { return ModelParams{}; }

std::vector<std::string> check_params(const ModelParams& p, bool check_damping) {
    std::vector<std::string> bad;
    auto positive = [&bad](double v, const char* name) {
        if (!(v > 0.0)) {
            std::ostringstream os;
            os << name << " must be > 0, got " << v;
            bad.push_back(os.str());
        }
    };
    positive(p.m_d, "m_d");
    positive(p.m_e, "m_e");
    positive(p.nu_d, "nu_d");
    positive(p.nu_e, "nu_e");
    positive(p.c_attract, "c_attract");
    positive(p.c_repel, "c_repel");
    positive(p.delta_c, "delta_c");
    positive(p.delta_1, "delta_1");
    positive(p.delta_2, "delta_2");
    if (!(p.c_circ >= 0.0)) {
        bad.push_back("c_circ must be >= 0");
    }
    if (check_damping && !(p.m_d / p.nu_d < p.m_e / p.nu_e)) {
        std::ostringstream os;
        os << "damping balance violated: m_d/nu_d = " << p.m_d / p.nu_d
           << " must be < m_e/nu_e = " << p.m_e / p.nu_e;
        bad.push_back(os.str());
    }
    return bad;
}

namespace {

void throw_if_nonempty(const std::vector<std::string>& bad) {
    if (bad.empty()) return;
    std::string joined;
    for (const auto& m : bad) {
        if (!joined.empty()) joined += "; ";
        joined += m;
    }
    throw ValidationError(joined);
}

}  // namespace

void validate_params(const ModelParams& p, bool check_damping) {
    throw_if_nonempty(check_params(p, check_damping));
}

SystemState mirror_x(const SystemState& s) {
    return {s.t, mirror_x(s.u_d), mirror_x(s.u_e), mirror_x(s.v_d), mirror_x(s.v_e)};
}

Scenario default_scenario(double tf) {
    Scenario sc;
    sc.params = default_params();
    sc.initial.t = 0.0;
    sc.initial.u_d = {-6.0, 0.0};
    sc.initial.u_e = {6.0, 0.0};
    sc.initial.v_d = {0.0, 0.0};
    sc.initial.v_e = {0.0, 0.0};
    sc.target = {1.0, 1.0};
    sc.rho = 1e-4;
    sc.t0 = 0.0;
    sc.tf = tf;
    return sc;
}

std::vector<std::string> check_scenario(const Scenario& sc, bool for_control) {
    std::vector<std::string> bad = check_params(sc.params, false);
    if (!(sc.tf > sc.t0)) {
        bad.push_back("tf must be > t0");
    }
    if (!(sc.rho > 0.0)) {
        bad.push_back("rho must be > 0");
    }
    if (!state_is_finite(sc.initial)) {
        bad.push_back("initial state must be finite");
    }
    if (!is_finite(sc.target)) {
        bad.push_back("target must be finite");
    }
    if (separation(sc.initial) <= 0.0) {
        bad.push_back("initial driver and evader positions must differ");
    }
    if (for_control) {
        const Vec2 sight = sc.initial.u_e - sc.initial.u_d;
        const Vec2 to_target = sc.target - sc.initial.u_d;
        if (cross(sight, to_target) == 0.0) {
            bad.push_back(
                "target lies on the initial driver-evader line of sight; "
                "turn direction is undefined");
        }
    }
    return bad;
}

void validate_scenario(const Scenario& sc, bool for_control) {
    throw_if_nonempty(check_scenario(sc, for_control));
}

}  // namespace drover
