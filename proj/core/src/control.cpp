#include "drover/control.hpp"

#include <algorithm>
#include <cmath>

#include "drover/errors.hpp"

namespace drover {

ControlSchedule::ControlSchedule(std::vector<ControlPoint> points)
    : points_(std::move(points)) {
    if (points_.empty()) {
        throw ModelError("control schedule must have at least one point");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].t)) {
            throw ModelError("control schedule times must be finite");
        }
        if (i > 0 && !(points_[i - 1].t < points_[i].t)) {
            throw ModelError("control schedule times must be strictly increasing");
        }
    }
}

ControlSchedule ControlSchedule::constant(Kappa k, double t0) {
    return ControlSchedule({{t0, k}});
}

ControlSchedule ControlSchedule::step(double t0, Kappa k0, double tau) {
    if (!(tau > t0)) {
        throw ModelError("step control requires tau > t0");
    }
    return ControlSchedule({{t0, k0}, {tau, Kappa::off}});
}

ControlSchedule ControlSchedule::window(double t0, Kappa k0, double t_on, double t_off) {
    if (!(t0 <= t_on)) {
        throw ModelError("window control requires t_on >= t0");
    }
    if (!(t_on < t_off)) {
        throw ModelError("window control requires t_off > t_on");
    }
    if (t_on == t0) {
        return step(t0, k0, t_off);
    }
    return ControlSchedule({{t0, Kappa::off}, {t_on, k0}, {t_off, Kappa::off}});
}

Kappa ControlSchedule::at(double t) const {
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double v, const ControlPoint& p) { return v < p.t; });
    if (it == points_.begin()) return it->kappa;
    return std::prev(it)->kappa;
}

std::optional<double> ControlSchedule::next_change_after(double t) const {
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double v, const ControlPoint& p) { return v < p.t; });
    if (it == points_.end()) return std::nullopt;
    return it->t;
}

}  // namespace drover
