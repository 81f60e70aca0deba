#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "drover/model.hpp"

namespace drover {

struct ControlPoint {
    double t;
    Kappa kappa;
};

// Piecewise-constant open-loop control. kappa(t) takes the value of the last
// point at or before t; times before the first point clamp to it.
class ControlSchedule {
  public:
    ControlSchedule() : points_{{0.0, Kappa::off}} {}

    // Throws ModelError unless times are finite and strictly increasing and
    // the list is nonempty.
    explicit ControlSchedule(std::vector<ControlPoint> points);

    static ControlSchedule constant(Kappa k, double t0 = 0.0);

    // k0 from t0 until tau, off afterwards. Requires tau > t0.
    static ControlSchedule step(double t0, Kappa k0, double tau);

    // Off on [t0, t_on), k0 on [t_on, t_off), off afterwards.
    // Requires t0 <= t_on < t_off.
    static ControlSchedule window(double t0, Kappa k0, double t_on, double t_off);

    Kappa at(double t) const;

    const std::vector<ControlPoint>& points() const { return points_; }

    // Earliest breakpoint strictly after t, if any. The integrator splits
    // steps there so switch times enter the flow exactly.
    std::optional<double> next_change_after(double t) const;

  private:
    std::vector<ControlPoint> points_;
};

// Closed-loop rule: control for the next step from the current state and the
// control applied on the step that produced it. Implementations may carry
// internal state (e.g. the last nonzero sign).
using FeedbackRule = std::function<Kappa(const SystemState&, Kappa prev)>;

using ControlSource = std::variant<ControlSchedule, FeedbackRule>;

}  // namespace drover
