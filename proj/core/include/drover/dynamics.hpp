#pragma once

#include "drover/model.hpp"

namespace drover {

// Agents closer than this are treated as collided; the dynamics reject the
// state rather than integrate through the singularity.
inline constexpr double kSeparationFloor = 1e-6;

struct StateDerivative {
    Vec2 du_d;
    Vec2 du_e;
    Vec2 dv_d;
    Vec2 dv_e;
};

// Driver acceleration: attraction-repulsion toward the evader with the
// radial part of the circumvention force folded in, the kappa-steered
// tangential part, and friction. Throws ModelError when the separation is
// at or below the floor.
Vec2 driver_accel(const SystemState& s, const ModelParams& p, Kappa kappa,
                  double separation_floor = kSeparationFloor);

// Evader acceleration: inverse-square repulsion from the driver plus friction.
Vec2 evader_accel(const SystemState& s, const ModelParams& p,
                  double separation_floor = kSeparationFloor);

StateDerivative derivatives(const SystemState& s, const ModelParams& p, Kappa kappa,
                            double separation_floor = kSeparationFloor);

}  // namespace drover
