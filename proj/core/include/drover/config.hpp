#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drover/control.hpp"
#include "drover/feedback.hpp"
#include "drover/model.hpp"
#include "drover/openloop.hpp"

namespace drover {

// Tuning keys shared by the shooting commands. Absent keys fall back to the
// ShootConfig defaults; rho falls back to the scenario's target-ball radius.
struct ShootTuning {
    std::optional<double> epsilon_align;
    std::optional<double> rho;
    std::optional<double> sigma1;
    std::optional<double> sigma2;
    std::optional<int> max_iters;
    std::optional<Kappa> kappa0;  // absent: orient from the initial geometry
};

struct Shoot0Section {
    ShootTuning tuning;
    std::vector<double> sample_taus;  // extra evader-path exports per switch-off
};

struct Shoot1Section {
    ShootTuning tuning;
    double t_on = 0.0;
};

struct CostCurveSection {
    ShootTuning tuning;
    double t_min = 0.0;
    double t_max = 0.0;
    double coarse_step = 0.25;
    double refine_radius = 1.0;
    double refine_step = 0.01;
    bool refine = true;
};

struct RandomTargets {
    int count = 0;
    double radius = 0.0;
    std::optional<Vec2> center;  // defaults to the evader's start
};

struct PathSection {
    std::vector<Vec2> targets;            // exactly one of the two is set
    std::optional<RandomTargets> random;  // drawn with the top-level seed
};

// One fully validated run description. Sections a command does not use may
// be absent; run_command rejects a command whose required section is missing.
struct RunConfig {
    Scenario scenario;
    StepperConfig stepper;
    std::uint64_t seed = 0;

    std::optional<ControlSchedule> simulate_schedule;
    std::optional<Shoot0Section> shoot0;
    std::optional<Shoot1Section> shoot1;
    std::optional<CostCurveSection> cost_curve;
    std::optional<FeedbackConfig> feedback;
    std::optional<PathSection> path;
};

// Parses and validates the JSON run configuration. The `preset`
// "paper-default" expands to the reference dataset and initial geometry;
// explicit scenario keys then override preset values. Every object is checked
// against its allowed keys, so typos fail loudly instead of being ignored.
// Throws ConfigParseError on malformed JSON (with position context) and
// ValidationError naming the violated invariant otherwise.
RunConfig parse_config(const std::string& text);

// Applies `key=value` overrides (dotted paths, JSON-typed values, e.g.
// "stepper.dt=1e-4" or "feedback.a_bar=0.1") to the raw JSON text and
// returns the amended text. Values that do not parse as JSON are taken as
// strings. Throws ConfigParseError on malformed text or override syntax.
std::string apply_config_overrides(const std::string& text,
                                   const std::vector<std::string>& sets);

}  // namespace drover
