#pragma once

#include <string>
#include <vector>

#include "drover/integrator.hpp"
#include "drover/openloop.hpp"

namespace drover {

// All numeric output uses 17 significant digits so doubles survive a
// text round-trip bit-exactly and regression diffs are meaningful.
std::string format_double(double v);

// Throws IoError when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

// t,udx,udy,uex,uey,vdx,vdy,vex,vey,kappa,r
std::string trajectory_csv(const Trajectory& traj);

// t,evader_speed,driver_speed,separation
std::string speed_csv(const Trajectory& traj);

// t_on,t_off,activation,cost,complete,iterations
std::string cost_curve_csv(const std::vector<CostCurvePoint>& pts);

// t,u_e_x,u_e_y
std::string evader_path_csv(const Trajectory& traj);

// Machine-readable failure report used by the CLI on any error.
std::string error_json(const std::string& command, int exit_code,
                       const std::string& kind, const std::string& message);

// Validates an emitted summary against the documented schema: exact
// top-level keys {command, status, config_overrides, artifacts, results},
// status "ok", a known command name, and string arrays for overrides and
// artifacts. Throws ValidationError describing the first violation.
void validate_summary(const std::string& summary_json_text);

}  // namespace drover
