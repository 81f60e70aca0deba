#include "drover/runner.hpp"

#include <filesystem>

#include <nlohmann/json.hpp>

#include "drover/analysis.hpp"
#include "drover/errors.hpp"
#include "drover/feedback.hpp"
#include "drover/io.hpp"
#include "drover/openloop.hpp"
#include "drover/rng.hpp"

namespace drover {
namespace {

using nlohmann::json;

const char* error_kind(ErrorCode code) {
    switch (code) {
        case ErrorCode::config_parse: return "config_parse";
        case ErrorCode::config_invalid: return "config_invalid";
        case ErrorCode::model_runtime: return "model_runtime";
        case ErrorCode::shooting_failed: return "shooting_failed";
        case ErrorCode::io_failed: return "io_failed";
    }
    return "internal";
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

json cost_json(const CostBreakdown& c) {
    return {{"n_ig", c.n_ig},
            {"c_active", c.c_active},
            {"sigma1", c.sigma1},
            {"sigma2", c.sigma2},
            {"total", c.total}};
}

json events_json(const TrajectoryEvents& ev) {
    json out{{"min_target_dist", ev.min_target_dist},
             {"t_min_target_dist", ev.t_min_target_dist}};
    out["t_hit"] = ev.t_hit ? json(*ev.t_hit) : json();
    out["t_b"] = ev.t_b ? json(*ev.t_b) : json();
    return out;
}

// Artifacts land in out_dir; the summary lists their bare names.
class Emitter {
  public:
    Emitter(std::string out_dir, std::string command,
            std::vector<std::string> overrides)
        : out_dir_(std::move(out_dir)), command_(std::move(command)),
          overrides_(std::move(overrides)) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir_, ec);
        if (ec)
            throw IoError("cannot create output directory " + out_dir_ + ": " +
                          ec.message());
    }

    void write(const std::string& name, const std::string& content) {
        write_text_file(out_dir_ + "/" + name, content);
        artifacts_.push_back(name);
    }

    RunOutcome finish(json results) {
        json doc{{"command", command_},
                 {"status", "ok"},
                 {"config_overrides", overrides_},
                 {"artifacts", artifacts_},
                 {"results", std::move(results)}};
        std::string text = doc.dump(2) + "\n";
        validate_summary(text);
        write("summary.json", text);
        return {0, text, artifacts_};
    }

    const std::string& out_dir() const { return out_dir_; }

  private:
    std::string out_dir_;
    std::string command_;
    std::vector<std::string> overrides_;
    std::vector<std::string> artifacts_;
};

ShootConfig make_shoot_config(const RunConfig& cfg, const ShootTuning& tn) {
    ShootConfig sc;
    sc.rho = tn.rho.value_or(cfg.scenario.rho);
    if (tn.epsilon_align) sc.epsilon_align = *tn.epsilon_align;
    if (tn.sigma1) sc.sigma1 = *tn.sigma1;
    if (tn.sigma2) sc.sigma2 = *tn.sigma2;
    if (tn.max_iters) sc.max_iters = *tn.max_iters;
    sc.stepper = cfg.stepper;
    return sc;
}

RunOutcome run_simulate(const RunConfig& cfg, Emitter& em) {
    ControlSchedule sched =
        cfg.simulate_schedule.value_or(ControlSchedule::constant(Kappa::off, cfg.scenario.t0));
    Trajectory traj = simulate(cfg.scenario, sched, cfg.stepper);
    em.write("trajectory.csv", trajectory_csv(traj));
    em.write("speed.csv", speed_csv(traj));
    const SystemState& fin = traj.final_state();
    json results{{"t_final", fin.t},
                 {"r_final", separation(fin)},
                 {"u_e_final", vec_json(fin.u_e)},
                 {"v_e_final", vec_json(fin.v_e)},
                 {"evader_speed_final", norm(fin.v_e)},
                 {"events", events_json(traj.events)},
                 {"cost", cost_json(cost_of_schedule(sched, cfg.scenario.t0,
                                                     cfg.scenario.tf))}};
    return em.finish(std::move(results));
}

RunOutcome run_asymptotics(const RunConfig& cfg, Emitter& em) {
    PursuitAsymptotics as = pursuit_asymptotics(cfg.scenario.params);
    return em.finish(json{{"delta_as", as.delta_as}, {"v_as", as.v_as}});
}

RunOutcome run_shoot0(const RunConfig& cfg, Emitter& em) {
    Shoot0Section section = cfg.shoot0.value_or(Shoot0Section{});
    ShootConfig scfg = make_shoot_config(cfg, section.tuning);
    StepControlResult res = shoot_step_control(cfg.scenario, scfg, section.tuning.kappa0);
    em.write("trajectory.csv", trajectory_csv(res.trajectory));
    for (size_t i = 0; i < section.sample_taus.size(); ++i) {
        auto sched = ControlSchedule::step(cfg.scenario.t0, res.kappa0,
                                           section.sample_taus[i]);
        Trajectory traj = simulate(cfg.scenario, sched, cfg.stepper);
        em.write("evader_path_tau_" + std::to_string(i) + ".csv", evader_path_csv(traj));
    }
    json results{{"kappa0", kappa_value(res.kappa0)},
                 {"tau_star", res.tau},
                 {"miss_distance", res.miss_distance},
                 {"verdict", to_string(res.verdict)},
                 {"iterations", res.iterations},
                 {"sample_taus", section.sample_taus},
                 {"cost", cost_json(res.cost)}};
    return em.finish(std::move(results));
}

RunOutcome run_shoot1(const RunConfig& cfg, Emitter& em) {
    if (!cfg.shoot1)
        throw ValidationError("command shoot1 requires a shoot1 config section");
    ShootConfig scfg = make_shoot_config(cfg, cfg.shoot1->tuning);
    WindowOffResult res =
        shoot_window_off(cfg.scenario, cfg.shoot1->t_on, scfg, cfg.shoot1->tuning.kappa0);
    auto sched = res.t_off > res.t_on
                     ? ControlSchedule::window(cfg.scenario.t0, res.kappa0, res.t_on,
                                               res.t_off)
                     : ControlSchedule::constant(Kappa::off, cfg.scenario.t0);
    Trajectory traj = simulate(cfg.scenario, sched, cfg.stepper);
    em.write("trajectory.csv", trajectory_csv(traj));
    json results{{"kappa0", kappa_value(res.kappa0)},
                 {"t_on", res.t_on},
                 {"t_off", res.t_off},
                 {"complete", res.complete},
                 {"activation", res.t_off - res.t_on},
                 {"miss_distance", res.miss_distance},
                 {"verdict", to_string(res.verdict)},
                 {"iterations", res.iterations},
                 {"cost", cost_json(res.cost)}};
    return em.finish(std::move(results));
}

RunOutcome run_cost_curve(const RunConfig& cfg, Emitter& em) {
    if (!cfg.cost_curve)
        throw ValidationError("command cost-curve requires a cost_curve config section");
    const CostCurveSection& cc = *cfg.cost_curve;
    ShootConfig scfg = make_shoot_config(cfg, cc.tuning);
    GridSpec grid{cc.t_min, cc.t_max, cc.coarse_step, cc.refine_radius, cc.refine_step,
                  cc.refine};
    WindowOptimum opt = optimize_window(cfg.scenario, grid, scfg, cc.tuning.kappa0);
    em.write("cost_curve_coarse.csv", cost_curve_csv(opt.coarse_curve));
    if (!opt.refined_curve.empty())
        em.write("cost_curve_refined.csv", cost_curve_csv(opt.refined_curve));
    json results{{"kappa0", kappa_value(opt.kappa0)},
                 {"t_on_star", opt.t_on},
                 {"t_off_star", opt.t_off},
                 {"complete", opt.complete},
                 {"activation", opt.t_off - opt.t_on},
                 {"cost", cost_json(opt.cost)}};
    return em.finish(std::move(results));
}

json feedback_results(const FeedbackRunResult& res) {
    json segments = json::array();
    for (const auto& s : res.segments)
        segments.push_back({{"t_start", s.t_begin},
                            {"t_end", s.t_end},
                            {"kappa", kappa_value(s.kappa)}});
    json legs = json::array();
    for (const auto& leg : res.legs) {
        json l{{"target_index", leg.target_index}, {"target", vec_json(leg.target)}};
        l["t_reach"] = leg.t_reach ? json(*leg.t_reach) : json();
        legs.push_back(std::move(l));
    }
    return json{{"cost", cost_json(res.cost)},
                {"segments", std::move(segments)},
                {"per_target_hits", std::move(legs)},
                {"all_reached", res.all_reached},
                {"t_final", res.trajectory.final_state().t},
                {"events", events_json(res.trajectory.events)}};
}

RunOutcome run_feedback_cmd(const RunConfig& cfg, Emitter& em) {
    FeedbackConfig fc = cfg.feedback.value_or(FeedbackConfig{});
    FeedbackRunResult res = run_feedback(cfg.scenario, fc, cfg.stepper);
    em.write("trajectory.csv", trajectory_csv(res.trajectory));
    return em.finish(feedback_results(res));
}

RunOutcome run_path_cmd(const RunConfig& cfg, Emitter& em) {
    if (!cfg.path) throw ValidationError("command path requires a path config section");
    FeedbackConfig fc = cfg.feedback.value_or(FeedbackConfig{});
    std::vector<Vec2> targets = cfg.path->targets;
    if (cfg.path->random) {
        const RandomTargets& r = *cfg.path->random;
        targets = random_targets_in_disk(r.center.value_or(cfg.scenario.initial.u_e),
                                         r.radius, r.count, cfg.seed);
    }
    FeedbackRunResult res = run_path(cfg.scenario, targets, fc, cfg.stepper);
    em.write("trajectory.csv", trajectory_csv(res.trajectory));
    json results = feedback_results(res);
    json tj = json::array();
    for (Vec2 t : targets) tj.push_back(vec_json(t));
    results["targets"] = std::move(tj);
    return em.finish(std::move(results));
}

}  // namespace

RunOutcome run_command(const RunConfig& cfg, const std::string& command,
                       const std::string& out_dir,
                       const std::vector<std::string>& override_notes) {
    int exit_code = 1;
    std::string kind = "internal";
    std::string message;
    try {
        Emitter em(out_dir, command, override_notes);
        if (command == "simulate") return run_simulate(cfg, em);
        if (command == "asymptotics") return run_asymptotics(cfg, em);
        if (command == "shoot0") return run_shoot0(cfg, em);
        if (command == "shoot1") return run_shoot1(cfg, em);
        if (command == "cost-curve") return run_cost_curve(cfg, em);
        if (command == "feedback") return run_feedback_cmd(cfg, em);
        if (command == "path") return run_path_cmd(cfg, em);
        throw ValidationError("unknown command \"" + command + "\"");
    } catch (const Error& e) {
        exit_code = int(e.code());
        kind = error_kind(e.code());
        message = e.what();
    } catch (const std::exception& e) {
        message = e.what();
    }
    std::string text = error_json(command, exit_code, kind, message);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!ec) {
        try {
            write_text_file(out_dir + "/error.json", text);
        } catch (const Error&) {
            // stdout still carries the report
        }
    }
    return {exit_code, text, {}};
}

}  // namespace drover
