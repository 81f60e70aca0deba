#include <cmath>

#include "doctest.h"
#include "drover/errors.hpp"
#include "drover/model.hpp"
#include "drover/vec2.hpp"

using namespace drover;

TEST_CASE("perp rotates a quarter turn counterclockwise") {
    CHECK(perp(Vec2{1, 0}) == Vec2{0, 1});
    CHECK(perp(Vec2{0, 0}) == Vec2{0, 0});
    CHECK(perp(Vec2{3, -2}) == Vec2{2, 3});
    // perp^2 = -identity
    CHECK(perp(perp(Vec2{3, -2})) == Vec2{-3, 2});
}

TEST_CASE("vec2 algebra basics") {
    CHECK(dot(Vec2{1, 2}, Vec2{3, 4}) == 11.0);
    CHECK(cross(Vec2{1, 0}, Vec2{0, 1}) == 1.0);
    CHECK(cross(Vec2{2, 3}, Vec2{2, 3}) == 0.0);
    CHECK(norm(Vec2{3, 4}) == doctest::Approx(5.0));
    CHECK(lerp(Vec2{0, 0}, Vec2{2, 4}, 0.5) == Vec2{1, 2});
    CHECK_FALSE(is_finite(Vec2{std::nan(""), 0}));
}

TEST_CASE("separation is the euclidean driver-evader distance") {
    SystemState s;
    s.u_d = {-6, 0};
    s.u_e = {6, 0};
    CHECK(separation(s) == doctest::Approx(12.0));

    s.u_e = s.u_d;
    CHECK(separation(s) == 0.0);

    s.u_d = {0, 3};
    s.u_e = {4, 0};
    CHECK(separation(s) == doctest::Approx(5.0));
}

TEST_CASE("kappa helpers") {
    CHECK(kappa_value(Kappa::minus) == -1);
    CHECK(kappa_value(Kappa::off) == 0);
    CHECK(kappa_value(Kappa::plus) == 1);

    CHECK(kappa_negate(Kappa::plus) == Kappa::minus);
    CHECK(kappa_negate(Kappa::off) == Kappa::off);

    CHECK(kappa_sign(0.3) == Kappa::plus);
    CHECK(kappa_sign(-2.0) == Kappa::minus);
    CHECK(kappa_sign(0.0) == Kappa::off);

    CHECK(kappa_from_int(-1) == Kappa::minus);
    CHECK(kappa_from_int(0) == Kappa::off);
    CHECK(kappa_from_int(1) == Kappa::plus);
    CHECK_THROWS_AS(kappa_from_int(2), ValidationError);
    CHECK_THROWS_AS(kappa_from_int(-7), ValidationError);
}

TEST_CASE("default params match the reference dataset") {
    ModelParams p = default_params();
    CHECK(p.m_d == 0.4);
    CHECK(p.m_e == 1.0);
    CHECK(p.nu_d == 1.0);
    CHECK(p.nu_e == 2.0);
    CHECK(p.c_attract == 3.0);
    CHECK(p.c_repel == 2.0);
    CHECK(p.c_circ == 0.5);
    CHECK(p.delta_c == 2.0);
    CHECK(p.delta_1 == 2.0);
    CHECK(p.delta_2 == 2.0);
    CHECK(check_params(p).empty());
    // effective short-range repulsion holds for the defaults
    CHECK(p.c_circ * std::pow(p.delta_1, 4) - p.c_attract * p.delta_c * p.delta_c < 0);
}

TEST_CASE("parameter validation names the violated constraint") {
    ModelParams p = default_params();
    p.m_d = -1.0;
    auto bad = check_params(p);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].find("m_d must be > 0") != std::string::npos);
    CHECK_THROWS_AS(validate_params(p), ValidationError);

    p = default_params();
    p.c_circ = -0.1;
    bad = check_params(p);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].find("c_circ must be >= 0") != std::string::npos);

    // c_circ = 0 disables circumvention but is a legal parameter point
    p.c_circ = 0.0;
    CHECK(check_params(p).empty());
}

TEST_CASE("damping balance is enforced only when requested") {
    ModelParams p = default_params();
    p.m_d = 1.0;  // m_d/nu_d = 1 >= m_e/nu_e = 0.5
    auto bad = check_params(p, true);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].find("damping balance") != std::string::npos);
    CHECK(check_params(p, false).empty());
    CHECK_NOTHROW(validate_params(p, false));
}

TEST_CASE("default scenario is the reference initial geometry") {
    Scenario sc = default_scenario();
    CHECK(sc.initial.u_d == Vec2{-6, 0});
    CHECK(sc.initial.u_e == Vec2{6, 0});
    CHECK(sc.initial.v_d == Vec2{0, 0});
    CHECK(sc.initial.v_e == Vec2{0, 0});
    CHECK(sc.target == Vec2{1, 1});
    CHECK(sc.rho == 1e-4);
    CHECK(sc.t0 == 0.0);
    CHECK(sc.tf == 100.0);
    CHECK(check_scenario(sc).empty());
    CHECK(default_scenario(60.0).tf == 60.0);
}

TEST_CASE("scenario validation catches each broken invariant") {
    Scenario sc = default_scenario();

    sc.tf = sc.t0;
    CHECK_THROWS_AS(validate_scenario(sc), ValidationError);
    sc = default_scenario();

    sc.rho = 0.0;
    CHECK_THROWS_AS(validate_scenario(sc), ValidationError);
    sc = default_scenario();

    sc.initial.v_e = {std::nan(""), 0};
    CHECK_THROWS_AS(validate_scenario(sc), ValidationError);
    sc = default_scenario();

    sc.target = {INFINITY, 1};
    CHECK_THROWS_AS(validate_scenario(sc), ValidationError);
    sc = default_scenario();

    sc.initial.u_d = sc.initial.u_e;
    CHECK_THROWS_AS(validate_scenario(sc), ValidationError);
}

TEST_CASE("control scenarios reject a target on the line of sight") {
    Scenario sc = default_scenario();
    sc.target = {1, 0};  // collinear with u_d=(-6,0), u_e=(6,0)
    CHECK(check_scenario(sc, false).empty());
    auto bad = check_scenario(sc, true);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].find("line of sight") != std::string::npos);
    CHECK_THROWS_AS(validate_scenario(sc, true), ValidationError);

    sc.target = {1, 1};
    CHECK_NOTHROW(validate_scenario(sc, true));
}

TEST_CASE("mirror_x reflects across the x-axis and is an involution") {
    SystemState s;
    s.t = 3.5;
    s.u_d = {-6, 2};
    s.u_e = {6, -1};
    s.v_d = {0.5, 0.25};
    s.v_e = {-0.125, 1};

    SystemState m = mirror_x(s);
    CHECK(m.t == s.t);
    CHECK(m.u_d == Vec2{-6, -2});
    CHECK(m.u_e == Vec2{6, 1});
    CHECK(m.v_d == Vec2{0.5, -0.25});
    CHECK(m.v_e == Vec2{-0.125, -1});
    CHECK(separation(m) == doctest::Approx(separation(s)));

    SystemState mm = mirror_x(m);
    CHECK(mm.u_d == s.u_d);
    CHECK(mm.v_e == s.v_e);
}
