#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "drover/control.hpp"
#include "drover/errors.hpp"
#include "drover/model.hpp"
#include "drover/openloop.hpp"

using namespace drover;

namespace {

StepperConfig fast_stepper() {
    StepperConfig cfg;
    cfg.method = Method::fixed_rk4;
    cfg.dt = 1e-2;
    cfg.record_stride = 100;
    return cfg;
}

ShootConfig fast_shoot() {
    ShootConfig cfg;
    cfg.stepper = fast_stepper();
    return cfg;
}

}  // namespace

TEST_CASE("alignment alpha measures the heading-target cross product") {
    SystemState s;
    s.u_e = {6, 0};
    s.v_e = {-1, 0};
    CHECK(alignment_alpha(s, {1, 1}) == doctest::Approx(-1.0));

    // heading straight at the target is perfectly aligned
    s.v_e = Vec2{1, 1} - s.u_e;
    CHECK(alignment_alpha(s, {1, 1}) == doctest::Approx(0.0));

    // alpha is linear in the speed and keeps its sign
    s.v_e = {-1, 0};
    double a1 = alignment_alpha(s, {1, 1});
    s.v_e = {-3, 0};
    double a3 = alignment_alpha(s, {1, 1});
    CHECK(a3 == doctest::Approx(3.0 * a1));
}

TEST_CASE("ignition count: only off-to-active transitions") {
    // active from t0: no ignition
    CHECK(ignition_count(ControlSchedule::step(0.0, Kappa::plus, 5.0)) == 0);
    // one delayed activation
    CHECK(ignition_count(ControlSchedule::window(0.0, Kappa::plus, 2.0, 5.0)) == 1);
    // off everywhere
    CHECK(ignition_count(ControlSchedule::constant(Kappa::off)) == 0);

    // four activation segments, as in a chattering feedback record; the
    // leading off point matters, a schedule clamps to its first value
    std::vector<ControlPoint> pts{{0.0, Kappa::off}};
    double t = 0.0;
    for (int i = 0; i < 4; ++i) {
        pts.push_back({t + 1.0, i % 2 == 0 ? Kappa::plus : Kappa::minus});
        pts.push_back({t + 1.5, Kappa::off});
        t += 2.0;
    }
    CHECK(ignition_count(ControlSchedule(pts)) == 4);

    // a direct sign flip is not an ignition
    ControlSchedule flip({{0.0, Kappa::plus}, {2.0, Kappa::minus}, {4.0, Kappa::off}});
    CHECK(ignition_count(flip) == 0);
}

TEST_CASE("active cost integrates |kappa| over the horizon") {
    CHECK(cost_active(ControlSchedule::constant(Kappa::off), 0.0, 50.0) == 0.0);

    ControlSchedule w = ControlSchedule::window(0.0, Kappa::plus, 42.0, 45.5337);
    CHECK(cost_active(w, 0.0, 100.0) == doctest::Approx(3.5337).epsilon(1e-12));

    // additivity over disjoint windows
    ControlSchedule two({{0.0, Kappa::off},
                         {10.0, Kappa::plus},
                         {10.38, Kappa::off},
                         {20.0, Kappa::minus},
                         {20.35, Kappa::off}});
    CHECK(cost_active(two, 0.0, 30.0) == doctest::Approx(0.73).epsilon(1e-12));

    // the horizon clips a window that runs past tf
    CHECK(cost_active(w, 0.0, 44.0) == doctest::Approx(2.0).epsilon(1e-12));
    // and a schedule active before t0 counts only the part inside
    ControlSchedule early = ControlSchedule::step(0.0, Kappa::minus, 6.0);
    CHECK(cost_active(early, 5.0, 10.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cost breakdown combines the weighted terms") {
    ControlSchedule w = ControlSchedule::window(0.0, Kappa::plus, 2.0, 5.0);
    CostBreakdown c = cost_of_schedule(w, 0.0, 10.0, 2.0, 0.5);
    CHECK(c.n_ig == 1);
    CHECK(c.c_active == doctest::Approx(3.0));
    CHECK(c.sigma1 == 2.0);
    CHECK(c.sigma2 == 0.5);
    CHECK(c.total == doctest::Approx(2.0 * 1 + 0.5 * 3.0));
}

TEST_CASE("auto turn direction follows the target half-plane") {
    Scenario sc = default_scenario();
    CHECK(auto_turn_direction(sc) == Kappa::plus);  // target above the line of sight

    sc.target = {1, -1};
    CHECK(auto_turn_direction(sc) == Kappa::minus);

    sc.target = {1, 0};  // on the line of sight: no defined direction
    CHECK_THROWS_AS(auto_turn_direction(sc), ValidationError);
}

TEST_CASE("verdict names") {
    CHECK(std::string(to_string(ShotVerdict::hit)) == "hit");
    CHECK(std::string(to_string(ShotVerdict::aligned)) == "aligned");
    CHECK(std::string(to_string(ShotVerdict::underturned)) == "underturned");
    CHECK(std::string(to_string(ShotVerdict::overturned)) == "overturned");
}

TEST_CASE("shot assessment classifies early, optimal and late switch-offs") {
    Scenario sc = default_scenario(100.0);
    StepperConfig stepper = fast_stepper();

    // switching off long before the turn leaves the evader fleeing
    ShotAssessment early = assess_shot(sc, ControlSchedule::step(0.0, Kappa::plus, 20.0),
                                       stepper, 1e-6, 1e-4, Kappa::plus);
    CHECK(early.verdict == ShotVerdict::underturned);

    // never switching off spins the heading past the target
    ShotAssessment late = assess_shot(sc, ControlSchedule::constant(Kappa::plus),
                                      stepper, 1e-6, 1e-4, Kappa::plus);
    CHECK(late.verdict == ShotVerdict::overturned);

    CHECK_THROWS_AS(assess_shot(sc, ControlSchedule::constant(Kappa::plus), stepper,
                                1e-6, 1e-4, Kappa::off),
                    ValidationError);
}

TEST_CASE("step-control shooting finds the reference switch-off time") {
    Scenario sc = default_scenario(100.0);
    ShootConfig cfg = fast_shoot();

    StepControlResult res = shoot_step_control(sc, cfg);
    CHECK(res.kappa0 == Kappa::plus);
    CHECK(std::abs(res.tau - 41.15) < 0.5);
    CHECK(res.verdict == ShotVerdict::hit);
    CHECK(res.miss_distance < 1e-4);
    CHECK(res.cost.n_ig == 0);  // active from t0
    CHECK(res.cost.c_active == doctest::Approx(res.tau - sc.t0));
    CHECK(res.iterations > 0);
    CHECK(res.trajectory.final_state().t == doctest::Approx(100.0));
}

TEST_CASE("step-control shooting is mirror symmetric") {
    Scenario sc = default_scenario(100.0);
    ShootConfig cfg = fast_shoot();
    StepControlResult up = shoot_step_control(sc, cfg);

    Scenario mirrored = sc;
    mirrored.target = {1, -1};
    StepControlResult down = shoot_step_control(mirrored, cfg);

    CHECK(down.kappa0 == Kappa::minus);
    // the mirrored bisection visits mirrored iterates, so tau agrees exactly
    CHECK(down.tau == doctest::Approx(up.tau).epsilon(1e-12));
    CHECK(down.miss_distance == doctest::Approx(up.miss_distance).epsilon(1e-9));
}

TEST_CASE("step-control shooting reports unreachable targets") {
    Scenario sc = default_scenario(20.0);  // horizon ends before any turn completes
    ShootConfig cfg = fast_shoot();
    CHECK_THROWS_AS(shoot_step_control(sc, cfg), ShootingError);
}

TEST_CASE("shooting respects the iteration budget") {
    Scenario sc = default_scenario(100.0);
    ShootConfig cfg = fast_shoot();
    cfg.max_iters = 2;
    CHECK_THROWS_AS(shoot_step_control(sc, cfg), ShootingError);
}

TEST_CASE("window shooting from t_on = t0 degenerates to the step control") {
    Scenario sc = default_scenario(100.0);
    ShootConfig cfg = fast_shoot();

    StepControlResult step_res = shoot_step_control(sc, cfg);
    WindowOffResult win_res = shoot_window_off(sc, sc.t0, cfg);

    CHECK(win_res.complete);
    CHECK(std::abs(win_res.t_off - step_res.tau) < 0.02);
    // the window pays one ignition that the step control does not
    CHECK(win_res.cost.n_ig == 1);
    CHECK(step_res.cost.n_ig == 0);
}

TEST_CASE("window shooting rejects bad arguments") {
    Scenario sc = default_scenario(100.0);
    ShootConfig cfg = fast_shoot();
    CHECK_THROWS_AS(shoot_window_off(sc, 100.0, cfg), ValidationError);
    CHECK_THROWS_AS(shoot_window_off(sc, -1.0, cfg), ValidationError);
    CHECK_THROWS_AS(shoot_window_off(sc, 42.0, cfg, Kappa::off), ValidationError);
}

TEST_CASE("late windows cannot complete and are flagged") {
    Scenario sc = default_scenario(50.0);
    ShootConfig cfg = fast_shoot();

    WindowOffResult res = shoot_window_off(sc, 48.0, cfg);
    CHECK_FALSE(res.complete);
    CHECK(res.t_off == doctest::Approx(50.0));
    CHECK(res.miss_distance > sc.rho);
}

TEST_CASE("delayed ignition beats the step control on activation time") {
    Scenario sc = default_scenario(60.0);
    ShootConfig cfg = fast_shoot();

    StepControlResult step_res = shoot_step_control(sc, cfg);
    WindowOffResult win_res = shoot_window_off(sc, 39.0, cfg);
    CHECK(win_res.complete);
    CHECK(win_res.t_off - win_res.t_on < step_res.tau - sc.t0);
}

TEST_CASE("cost curve equals pointwise window shooting") {
    // The curve evaluator reuses the integrated pursuit prefix between grid
    // points; reuse must not change any answer.
    Scenario sc = default_scenario(60.0);
    ShootConfig cfg = fast_shoot();

    std::vector<double> grid{40.0, 42.0, 44.0};
    std::vector<CostCurvePoint> curve = cost_curve(sc, grid, cfg);
    REQUIRE(curve.size() == grid.size());

    for (size_t i = 0; i < grid.size(); ++i) {
        WindowOffResult direct = shoot_window_off(sc, grid[i], cfg);
        CHECK(curve[i].t_on == grid[i]);
        CHECK(curve[i].t_off == doctest::Approx(direct.t_off).epsilon(1e-9));
        CHECK(curve[i].activation ==
              doctest::Approx(direct.t_off - grid[i]).epsilon(1e-9));
        CHECK(curve[i].complete == direct.complete);
        CHECK(curve[i].cost ==
              doctest::Approx(cfg.sigma1 * 1.0 + cfg.sigma2 * curve[i].activation)
                  .epsilon(1e-9));
    }

    CHECK_THROWS_AS(cost_curve(sc, std::vector<double>{61.0}, cfg), ValidationError);
}

TEST_CASE("window optimizer lands on the cost plateau onset") {
    Scenario sc = default_scenario(60.0);
    ShootConfig cfg = fast_shoot();

    GridSpec grid;
    grid.t_min = 36.0;
    grid.t_max = 44.0;
    grid.coarse_step = 0.5;
    grid.refine_radius = 0.5;
    grid.refine_step = 0.05;

    WindowOptimum best = optimize_window(sc, grid, cfg);
    CHECK(best.complete);
    CHECK(std::abs(best.t_on - 38.92) < 0.5);
    CHECK(std::abs((best.t_off - best.t_on) - 3.52) < 0.1);
    CHECK_FALSE(best.coarse_curve.empty());
    CHECK_FALSE(best.refined_curve.empty());
    CHECK(best.cost.n_ig == 1);

    // ties resolve to the earliest t_on, so the plateau onset is reported
    for (const auto& pt : best.coarse_curve) {
        if (!pt.complete) continue;
        CHECK(pt.activation >= best.t_off - best.t_on - 1e-3);
    }
}

TEST_CASE("escape angle grows with the switch-off time in the sensitive range") {
    Scenario sc = default_scenario(100.0);
    StepperConfig stepper = fast_stepper();

    // headings wrap at +-pi; compare through the principal difference
    auto angdiff = [](double a, double b) {
        return std::atan2(std::sin(a - b), std::cos(a - b));
    };

    double th40 = escape_angle(sc, Kappa::plus, 40.0, stepper);
    double th41 = escape_angle(sc, Kappa::plus, 41.0, stepper);
    double th42 = escape_angle(sc, Kappa::plus, 42.0, stepper);
    CHECK(angdiff(th41, th40) > 0.0);
    CHECK(angdiff(th42, th41) > 0.0);

    // before the turn-back window the angle barely moves
    double th34 = escape_angle(sc, Kappa::plus, 34.0, stepper);
    double th36 = escape_angle(sc, Kappa::plus, 36.0, stepper);
    double early = std::abs(angdiff(th36, th34));
    CHECK(early < 0.3);
    CHECK(angdiff(th42, th41) + angdiff(th41, th40) > 5.0 * early);
}
