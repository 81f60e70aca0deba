#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "drover/errors.hpp"
#include "drover/integrator.hpp"
#include "drover/io.hpp"
#include "drover/model.hpp"

using namespace drover;
using nlohmann::json;

namespace {

Trajectory tiny_trajectory() {
    Scenario sc = default_scenario(0.5);
    StepperConfig cfg;
    cfg.dt = 1e-2;
    cfg.record_stride = 10;
    return simulate(sc, ControlSchedule::constant(Kappa::off), cfg);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("format_double survives a text round-trip bit-exactly") {
    const double values[] = {0.0,       -0.0,     1.0 / 3.0, M_PI,       0.1,
                             1e300,     -1e-300,  41.15,     6.19213e-5, std::sqrt(2.0),
                             -123456.75, 2.0 / 3.0};
    for (double v : values) {
        std::string text = format_double(v);
        double back = std::strtod(text.c_str(), nullptr);
        CHECK(std::memcmp(&back, &v, sizeof v) == 0);
    }
}

TEST_CASE("trajectory csv has the documented header and full precision") {
    Trajectory traj = tiny_trajectory();
    std::string csv = trajectory_csv(traj);
    auto lines = split_lines(csv);

    REQUIRE(lines.size() == traj.samples.size() + 1);
    CHECK(lines[0] == "t,udx,udy,uex,uey,vdx,vdy,vex,vey,kappa,r");

    // first data row is the initial state
    CHECK(lines[1].substr(0, 2) == "0,");
    CHECK(lines[1].find("-6,") != std::string::npos);

    // last row round-trips the final separation
    std::istringstream row(lines.back());
    std::string cell;
    std::vector<double> cols;
    while (std::getline(row, cell, ',')) cols.push_back(std::strtod(cell.c_str(), nullptr));
    REQUIRE(cols.size() == 11);
    CHECK(cols[0] == traj.final_state().t);
    CHECK(cols[10] == separation(traj.final_state()));
}

TEST_CASE("speed and evader-path csv headers") {
    Trajectory traj = tiny_trajectory();
    auto speed_lines = split_lines(speed_csv(traj));
    REQUIRE(!speed_lines.empty());
    CHECK(speed_lines[0] == "t,evader_speed,driver_speed,separation");
    CHECK(speed_lines.size() == traj.samples.size() + 1);

    auto path_lines = split_lines(evader_path_csv(traj));
    CHECK(path_lines[0] == "t,u_e_x,u_e_y");
    CHECK(path_lines.size() == traj.samples.size() + 1);
}

TEST_CASE("cost curve csv") {
    // dyadic times so the shortest round-trip form is the literal itself
    std::vector<CostCurvePoint> pts{{38.5, 42.25, 3.75, 4.75, true, 17},
                                    {48.0, 50.0, 2.0, 3.0, false, 3}};
    auto lines = split_lines(cost_curve_csv(pts));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "t_on,t_off,activation,cost,complete,iterations");
    CHECK(lines[1] == "38.5,42.25,3.75,4.75,1,17");
    CHECK(lines[2].find(",0,") != std::string::npos);   // complete flag
}

TEST_CASE("error json carries the command, code, kind and message") {
    json doc = json::parse(error_json("shoot1", 5, "shooting_failed",
                                      "target not reachable within the horizon"));
    CHECK(doc["command"] == "shoot1");
    CHECK(doc["status"] == "error");
    CHECK(doc["error"]["exit_code"] == 5);
    CHECK(doc["error"]["kind"] == "shooting_failed");
    CHECK(doc["error"]["message"] == "target not reachable within the horizon");
}

TEST_CASE("summary validation accepts the documented shape only") {
    json good{{"command", "simulate"},
              {"status", "ok"},
              {"config_overrides", json::array({"stepper.dt=1e-2"})},
              {"artifacts", json::array({"trajectory.csv"})},
              {"results", json::object()}};
    CHECK_NOTHROW(validate_summary(good.dump()));

    CHECK_THROWS_AS(validate_summary("not json"), ValidationError);
    CHECK_THROWS_AS(validate_summary("[1, 2]"), ValidationError);

    json missing = good;
    missing.erase("artifacts");
    CHECK_THROWS_AS(validate_summary(missing.dump()), ValidationError);

    json extra = good;
    extra["bonus"] = 1;
    CHECK_THROWS_AS(validate_summary(extra.dump()), ValidationError);

    json bad_command = good;
    bad_command["command"] = "launch";
    CHECK_THROWS_AS(validate_summary(bad_command.dump()), ValidationError);

    json bad_status = good;
    bad_status["status"] = "error";
    CHECK_THROWS_AS(validate_summary(bad_status.dump()), ValidationError);

    json bad_artifacts = good;
    bad_artifacts["artifacts"] = json::array({1, 2});
    CHECK_THROWS_AS(validate_summary(bad_artifacts.dump()), ValidationError);

    json bad_results = good;
    bad_results["results"] = json::array();
    CHECK_THROWS_AS(validate_summary(bad_results.dump()), ValidationError);
}

TEST_CASE("write_text_file writes bytes and reports unwritable paths") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "drover_io_test";
    fs::create_directories(dir);
    fs::path file = dir / "probe.txt";

    write_text_file(file.string(), "line\n");
    std::ifstream in(file);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    CHECK(content == "line\n");

    CHECK_THROWS_AS(write_text_file((dir / "missing" / "x.txt").string(), "x"),
                    IoError);
    fs::remove_all(dir);
}
