#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drover/config.hpp"
#include "drover/errors.hpp"
#include "drover/io.hpp"
#include "drover/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw drover::IoError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& command, const std::string& config_path,
        const std::string& out_dir, const std::vector<std::string>& sets) {
    std::string text = read_file(config_path);
    text = drover::apply_config_overrides(text, sets);
    drover::RunConfig cfg = drover::parse_config(text);
    drover::RunOutcome outcome = drover::run_command(cfg, command, out_dir, sets);
    std::cout << outcome.summary_text;
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Guidance-by-repulsion toolkit: simulation, switching-time "
                 "optimization, and feedback guidance for the two-agent model"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> sets;
    app.add_option("-c,--config", config_path, "Run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("-o,--out", out_dir, "Output directory for artifacts");
    app.add_option("--set", sets,
                   "Override a config key, e.g. --set stepper.dt=1e-4 "
                   "(repeatable; logged in the summary)");

    static const char* kCommands[] = {"simulate", "asymptotics", "shoot0", "shoot1",
                                      "feedback", "path", "cost-curve"};
    static const char* kDescriptions[] = {
        "Integrate the scenario under an open-loop schedule",
        "Closed-form pursuit equilibrium (separation and speed)",
        "Optimize the switch-off time of the single-ignition step control",
        "Optimize the switch-off of a window control with fixed switch-on",
        "Run the closed-loop guidance law toward the scenario target",
        "Run the guidance law through a target sequence",
        "Sweep switch-on times and report the optimal window control",
    };
    for (size_t i = 0; i < std::size(kCommands); ++i)
        app.add_subcommand(kCommands[i], kDescriptions[i]);

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        return run(command, config_path, out_dir, sets);
    } catch (const drover::Error& e) {
        const char* kind = "internal";
        switch (e.code()) {
            case drover::ErrorCode::config_parse: kind = "config_parse"; break;
            case drover::ErrorCode::config_invalid: kind = "config_invalid"; break;
            case drover::ErrorCode::model_runtime: kind = "model_runtime"; break;
            case drover::ErrorCode::shooting_failed: kind = "shooting_failed"; break;
            case drover::ErrorCode::io_failed: kind = "io_failed"; break;
        }
        std::cout << drover::error_json(command, int(e.code()), kind, e.what());
        return int(e.code());
    } catch (const std::exception& e) {
        std::cout << drover::error_json(command, 1, "internal", e.what());
        return 1;
    }
}
