#include "drover/io.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "drover/errors.hpp"

namespace drover {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed while writing " + path);
}

namespace {

void append_row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += format_double(v);
        first = false;
    }
    out += '\n';
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,udx,udy,uex,uey,vdx,vdy,vex,vey,kappa,r\n";
    for (const auto& s : traj.samples) {
        const SystemState& st = s.state;
        append_row(out, {st.t, st.u_d.x, st.u_d.y, st.u_e.x, st.u_e.y, st.v_d.x,
                         st.v_d.y, st.v_e.x, st.v_e.y, double(kappa_value(s.kappa)),
                         separation(st)});
    }
    return out;
}

std::string speed_csv(const Trajectory& traj) {
    std::string out = "t,evader_speed,driver_speed,separation\n";
    for (const auto& s : traj.samples)
        append_row(out, {s.state.t, norm(s.state.v_e), norm(s.state.v_d),
                         separation(s.state)});
    return out;
}

std::string cost_curve_csv(const std::vector<CostCurvePoint>& pts) {
    std::string out = "t_on,t_off,activation,cost,complete,iterations\n";
    for (const auto& p : pts)
        append_row(out, {p.t_on, p.t_off, p.activation, p.cost, double(p.complete),
                         double(p.iterations)});
    return out;
}

std::string evader_path_csv(const Trajectory& traj) {
    std::string out = "t,u_e_x,u_e_y\n";
    for (const auto& s : traj.samples)
        append_row(out, {s.state.t, s.state.u_e.x, s.state.u_e.y});
    return out;
}

std::string error_json(const std::string& command, int exit_code,
                       const std::string& kind, const std::string& message) {
    json doc{{"command", command},
             {"status", "error"},
             {"error", {{"exit_code", exit_code}, {"kind", kind}, {"message", message}}}};
    return doc.dump(2) + "\n";
}

void validate_summary(const std::string& summary_json_text) {
    json doc;
    try {
        doc = json::parse(summary_json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("summary is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("summary root must be an object");
    static const char* kKeys[] = {"command", "status", "config_overrides", "artifacts",
                                  "results"};
    for (const char* k : kKeys)
        if (!doc.contains(k))
            throw ValidationError(std::string("summary is missing key \"") + k + "\"");
    for (const auto& item : doc.items()) {
        bool ok = false;
        for (const char* k : kKeys) ok = ok || item.key() == k;
        if (!ok)
            throw ValidationError("summary has unexpected key \"" + item.key() + "\"");
    }
    static const char* kCommands[] = {"simulate", "asymptotics", "shoot0", "shoot1",
                                      "feedback", "path", "cost-curve"};
    bool known = false;
    if (doc["command"].is_string())
        for (const char* c : kCommands) known = known || doc["command"] == c;
    if (!known) throw ValidationError("summary command is not a known subcommand");
    if (doc["status"] != "ok") throw ValidationError("summary status must be \"ok\"");
    for (const char* k : {"config_overrides", "artifacts"}) {
        if (!doc[k].is_array())
            throw ValidationError(std::string("summary ") + k + " must be an array");
        for (const auto& e : doc[k])
            if (!e.is_string())
                throw ValidationError(std::string("summary ") + k +
                                      " must hold only strings");
    }
    if (!doc["results"].is_object())
        throw ValidationError("summary results must be an object");
}

}  // namespace drover
