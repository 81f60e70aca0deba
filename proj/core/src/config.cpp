#include "drover/config.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "drover/errors.hpp"

namespace drover {
namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigParseError(e.what());
    }
}

// Unknown keys are rejected per object so a misspelled option cannot
// silently fall back to a default.
void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw ValidationError("unknown key \"" + item.key() + "\" in " + where);
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number())
        throw ValidationError(where + " must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer())
        throw ValidationError(where + " must be an integer");
    return v.get<int>();
}

bool as_bool(const json& v, const std::string& where) {
    if (!v.is_boolean())
        throw ValidationError(where + " must be a boolean");
    return v.get<bool>();
}

Vec2 as_vec2(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ValidationError(where + " must be a [x, y] number pair");
    return {v[0].get<double>(), v[1].get<double>()};
}

Kappa as_kappa(const json& v, const std::string& where) {
    return kappa_from_int(as_int(v, where));
}

void set_if(const json& obj, const char* key, double& out, const std::string& where) {
    if (const json* v = find(obj, key)) out = as_number(*v, where + "." + key);
}

void parse_params(const json& obj, ModelParams& p) {
    check_keys(obj, "scenario.params",
               {"m_d", "m_e", "nu_d", "nu_e", "c_attract", "c_repel", "c_circ",
                "delta_c", "delta_1", "delta_2"});
    const std::string w = "scenario.params";
    set_if(obj, "m_d", p.m_d, w);
    set_if(obj, "m_e", p.m_e, w);
    set_if(obj, "nu_d", p.nu_d, w);
    set_if(obj, "nu_e", p.nu_e, w);
    set_if(obj, "c_attract", p.c_attract, w);
    set_if(obj, "c_repel", p.c_repel, w);
    set_if(obj, "c_circ", p.c_circ, w);
    set_if(obj, "delta_c", p.delta_c, w);
    set_if(obj, "delta_1", p.delta_1, w);
    set_if(obj, "delta_2", p.delta_2, w);
}

void parse_initial(const json& obj, SystemState& s) {
    check_keys(obj, "scenario.initial", {"u_d", "u_e", "v_d", "v_e"});
    if (const json* v = find(obj, "u_d")) s.u_d = as_vec2(*v, "scenario.initial.u_d");
    if (const json* v = find(obj, "u_e")) s.u_e = as_vec2(*v, "scenario.initial.u_e");
    if (const json* v = find(obj, "v_d")) s.v_d = as_vec2(*v, "scenario.initial.v_d");
    if (const json* v = find(obj, "v_e")) s.v_e = as_vec2(*v, "scenario.initial.v_e");
}

// tf is deliberately not defaulted: every run states its horizon.
void parse_scenario(const json& obj, Scenario& sc, bool& tf_given) {
    check_keys(obj, "scenario",
               {"params", "initial", "target", "t0", "tf", "rho"});
    if (const json* v = find(obj, "params")) parse_params(*v, sc.params);
    if (const json* v = find(obj, "initial")) parse_initial(*v, sc.initial);
    if (const json* v = find(obj, "target")) sc.target = as_vec2(*v, "scenario.target");
    if (const json* v = find(obj, "t0")) sc.t0 = as_number(*v, "scenario.t0");
    if (const json* v = find(obj, "tf")) {
        sc.tf = as_number(*v, "scenario.tf");
        tf_given = true;
    }
    if (const json* v = find(obj, "rho")) sc.rho = as_number(*v, "scenario.rho");
}

void parse_stepper(const json& obj, StepperConfig& st) {
    check_keys(obj, "stepper", {"method", "dt", "record_stride"});
    if (const json* v = find(obj, "method")) {
        if (!v->is_string())
            throw ValidationError("stepper.method must be \"rk4\" or \"euler\"");
        const std::string m = v->get<std::string>();
        if (m == "rk4")
            st.method = Method::fixed_rk4;
        else if (m == "euler")
            st.method = Method::explicit_euler;
        else
            throw ValidationError("stepper.method must be \"rk4\" or \"euler\", got \"" +
                                  m + "\"");
    }
    if (const json* v = find(obj, "dt")) {
        st.dt = as_number(*v, "stepper.dt");
        if (!(st.dt > 0.0) || !std::isfinite(st.dt))
            throw ValidationError("stepper.dt must be a positive finite number");
    }
    if (const json* v = find(obj, "record_stride")) {
        st.record_stride = as_int(*v, "stepper.record_stride");
        if (st.record_stride < 1)
            throw ValidationError("stepper.record_stride must be >= 1");
    }
}

ControlSchedule parse_schedule(const json& obj) {
    check_keys(obj, "simulate.schedule",
               {"type", "kappa", "tau", "t_on", "t_off", "t0", "points"});
    const json* type = find(obj, "type");
    if (!type || !type->is_string())
        throw ValidationError("simulate.schedule.type must be one of "
                              "\"constant\", \"step\", \"window\", \"points\"");
    const std::string t = type->get<std::string>();
    auto require = [&](const char* key) -> const json& {
        const json* v = find(obj, key);
        if (!v)
            throw ValidationError("simulate.schedule." + std::string(key) +
                                  " is required for type \"" + t + "\"");
        return *v;
    };
    double t0 = 0.0;
    if (const json* v = find(obj, "t0")) t0 = as_number(*v, "simulate.schedule.t0");
    try {
        if (t == "constant")
            return ControlSchedule::constant(
                as_kappa(require("kappa"), "simulate.schedule.kappa"), t0);
        if (t == "step")
            return ControlSchedule::step(
                t0, as_kappa(require("kappa"), "simulate.schedule.kappa"),
                as_number(require("tau"), "simulate.schedule.tau"));
        if (t == "window")
            return ControlSchedule::window(
                t0, as_kappa(require("kappa"), "simulate.schedule.kappa"),
                as_number(require("t_on"), "simulate.schedule.t_on"),
                as_number(require("t_off"), "simulate.schedule.t_off"));
        if (t == "points") {
            const json& arr = require("points");
            if (!arr.is_array() || arr.empty())
                throw ValidationError("simulate.schedule.points must be a nonempty array");
            std::vector<ControlPoint> pts;
            for (const auto& e : arr) {
                if (!e.is_array() || e.size() != 2)
                    throw ValidationError(
                        "simulate.schedule.points entries must be [t, kappa] pairs");
                pts.push_back({as_number(e[0], "simulate.schedule.points[].t"),
                               as_kappa(e[1], "simulate.schedule.points[].kappa")});
            }
            return ControlSchedule(std::move(pts));
        }
    } catch (const ModelError& e) {
        // Schedule factories validate shape; surface that as a config fault.
        throw ValidationError(std::string("simulate.schedule: ") + e.what());
    }
    throw ValidationError("simulate.schedule.type must be one of "
                          "\"constant\", \"step\", \"window\", \"points\", got \"" +
                          t + "\"");
}

void parse_tuning(const json& obj, ShootTuning& tn, const std::string& where) {
    if (const json* v = find(obj, "epsilon_align")) {
        tn.epsilon_align = as_number(*v, where + ".epsilon_align");
        if (!(*tn.epsilon_align > 0.0))
            throw ValidationError(where + ".epsilon_align must be > 0");
    }
    if (const json* v = find(obj, "rho")) {
        tn.rho = as_number(*v, where + ".rho");
        if (!(*tn.rho > 0.0)) throw ValidationError(where + ".rho must be > 0");
    }
    if (const json* v = find(obj, "sigma1")) tn.sigma1 = as_number(*v, where + ".sigma1");
    if (const json* v = find(obj, "sigma2")) tn.sigma2 = as_number(*v, where + ".sigma2");
    if (const json* v = find(obj, "max_iters")) {
        tn.max_iters = as_int(*v, where + ".max_iters");
        if (*tn.max_iters < 1) throw ValidationError(where + ".max_iters must be >= 1");
    }
    if (const json* v = find(obj, "kappa0")) {
        Kappa k = as_kappa(*v, where + ".kappa0");
        if (k == Kappa::off)
            throw ValidationError(where + ".kappa0 must be -1 or 1");
        tn.kappa0 = k;
    }
}

Shoot0Section parse_shoot0(const json& obj) {
    check_keys(obj, "shoot0",
               {"epsilon_align", "rho", "sigma1", "sigma2", "max_iters", "kappa0",
                "sample_taus"});
    Shoot0Section s;
    parse_tuning(obj, s.tuning, "shoot0");
    if (const json* v = find(obj, "sample_taus")) {
        if (!v->is_array())
            throw ValidationError("shoot0.sample_taus must be an array of times");
        for (const auto& e : *v) s.sample_taus.push_back(as_number(e, "shoot0.sample_taus[]"));
    }
    return s;
}

Shoot1Section parse_shoot1(const json& obj) {
    check_keys(obj, "shoot1",
               {"epsilon_align", "rho", "sigma1", "sigma2", "max_iters", "kappa0", "t_on"});
    Shoot1Section s;
    parse_tuning(obj, s.tuning, "shoot1");
    const json* v = find(obj, "t_on");
    if (!v) throw ValidationError("shoot1.t_on is required");
    s.t_on = as_number(*v, "shoot1.t_on");
    return s;
}

CostCurveSection parse_cost_curve(const json& obj) {
    check_keys(obj, "cost_curve",
               {"epsilon_align", "rho", "sigma1", "sigma2", "max_iters", "kappa0",
                "t_min", "t_max", "coarse_step", "refine_radius", "refine_step",
                "refine"});
    CostCurveSection s;
    parse_tuning(obj, s.tuning, "cost_curve");
    const json* lo = find(obj, "t_min");
    const json* hi = find(obj, "t_max");
    if (!lo || !hi)
        throw ValidationError("cost_curve.t_min and cost_curve.t_max are required");
    s.t_min = as_number(*lo, "cost_curve.t_min");
    s.t_max = as_number(*hi, "cost_curve.t_max");
    if (!(s.t_min < s.t_max))
        throw ValidationError("cost_curve.t_min must be < cost_curve.t_max");
    if (const json* v = find(obj, "coarse_step")) {
        s.coarse_step = as_number(*v, "cost_curve.coarse_step");
        if (!(s.coarse_step > 0.0))
            throw ValidationError("cost_curve.coarse_step must be > 0");
    }
    if (const json* v = find(obj, "refine_radius"))
        s.refine_radius = as_number(*v, "cost_curve.refine_radius");
    if (const json* v = find(obj, "refine_step")) {
        s.refine_step = as_number(*v, "cost_curve.refine_step");
        if (!(s.refine_step > 0.0))
            throw ValidationError("cost_curve.refine_step must be > 0");
    }
    if (const json* v = find(obj, "refine")) s.refine = as_bool(*v, "cost_curve.refine");
    return s;
}

FeedbackConfig parse_feedback(const json& obj) {
    check_keys(obj, "feedback",
               {"a_bar", "far_factor", "rho_reach", "sign_fallback", "overrides"});
    FeedbackConfig fc;
    if (const json* v = find(obj, "a_bar")) {
        fc.a_bar = as_number(*v, "feedback.a_bar");
        if (!(fc.a_bar > 0.0)) throw ValidationError("feedback.a_bar must be > 0");
    }
    if (const json* v = find(obj, "far_factor")) {
        fc.far_factor = as_number(*v, "feedback.far_factor");
        if (!(fc.far_factor >= 1.0))
            throw ValidationError("feedback.far_factor must be >= 1");
    }
    if (const json* v = find(obj, "rho_reach")) {
        fc.rho_reach = as_number(*v, "feedback.rho_reach");
        if (!(fc.rho_reach > 0.0)) throw ValidationError("feedback.rho_reach must be > 0");
    }
    if (const json* v = find(obj, "sign_fallback")) {
        if (!v->is_string())
            throw ValidationError(
                "feedback.sign_fallback must be \"plus\", \"minus\" or \"previous\"");
        const std::string m = v->get<std::string>();
        if (m == "plus")
            fc.sign_fallback = SignFallback::plus;
        else if (m == "minus")
            fc.sign_fallback = SignFallback::minus;
        else if (m == "previous")
            fc.sign_fallback = SignFallback::previous;
        else
            throw ValidationError(
                "feedback.sign_fallback must be \"plus\", \"minus\" or \"previous\", "
                "got \"" + m + "\"");
    }
    if (const json* v = find(obj, "overrides")) {
        if (!v->is_array()) throw ValidationError("feedback.overrides must be an array");
        for (const auto& e : *v) {
            if (!e.is_object())
                throw ValidationError("feedback.overrides entries must be objects");
            check_keys(e, "feedback.overrides[]", {"t_start", "t_end", "kappa"});
            const json* ts = find(e, "t_start");
            const json* te = find(e, "t_end");
            const json* kk = find(e, "kappa");
            if (!ts || !te || !kk)
                throw ValidationError(
                    "feedback.overrides entries need t_start, t_end and kappa");
            OverrideWindow w{as_number(*ts, "feedback.overrides[].t_start"),
                             as_number(*te, "feedback.overrides[].t_end"),
                             as_kappa(*kk, "feedback.overrides[].kappa")};
            if (!(w.t_begin < w.t_end))
                throw ValidationError(
                    "feedback.overrides[].t_start must be < t_end");
            fc.overrides.push_back(w);
        }
    }
    return fc;
}

PathSection parse_path(const json& obj) {
    check_keys(obj, "path", {"targets", "random"});
    PathSection p;
    if (const json* v = find(obj, "targets")) {
        if (!v->is_array() || v->empty())
            throw ValidationError("path.targets must be a nonempty array of [x, y] pairs");
        for (const auto& e : *v) p.targets.push_back(as_vec2(e, "path.targets[]"));
    }
    if (const json* v = find(obj, "random")) {
        if (!v->is_object()) throw ValidationError("path.random must be an object");
        check_keys(*v, "path.random", {"count", "radius", "center"});
        RandomTargets r;
        const json* count = find(*v, "count");
        const json* radius = find(*v, "radius");
        if (!count || !radius)
            throw ValidationError("path.random needs count and radius");
        r.count = as_int(*count, "path.random.count");
        if (r.count < 1) throw ValidationError("path.random.count must be >= 1");
        r.radius = as_number(*radius, "path.random.radius");
        if (!(r.radius > 0.0)) throw ValidationError("path.random.radius must be > 0");
        if (const json* c = find(*v, "center"))
            r.center = as_vec2(*c, "path.random.center");
        p.random = r;
    }
    if (p.targets.empty() == !p.random)
        throw ValidationError("path needs exactly one of targets or random");
    return p;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json doc = parse_json(text);
    if (!doc.is_object())
        throw ValidationError("config root must be a JSON object");
    check_keys(doc, "config",
               {"preset", "seed", "scenario", "stepper", "simulate", "shoot0", "shoot1",
                "cost_curve", "feedback", "path", "asymptotics"});

    RunConfig cfg;
    bool preset = false;
    if (const json* v = find(doc, "preset")) {
        if (!v->is_string() || v->get<std::string>() != "paper-default")
            throw ValidationError("preset must be \"paper-default\"");
        preset = true;  // the reference dataset; also the library defaults
        cfg.scenario = default_scenario();
    }
    const json* scenario = find(doc, "scenario");
    if (!preset && !scenario)
        throw ValidationError("config must give a preset or a scenario section");

    bool tf_given = false;
    if (scenario) parse_scenario(*scenario, cfg.scenario, tf_given);
    if (!tf_given) throw ValidationError("scenario.tf is required");

    if (const json* v = find(doc, "stepper")) parse_stepper(*v, cfg.stepper);
    if (const json* v = find(doc, "seed")) {
        if (!v->is_number_unsigned())
            throw ValidationError("seed must be a nonnegative integer");
        cfg.seed = v->get<std::uint64_t>();
    }

    if (const json* v = find(doc, "simulate")) {
        check_keys(*v, "simulate", {"schedule"});
        if (const json* s = find(*v, "schedule"))
            cfg.simulate_schedule = parse_schedule(*s);
    }
    if (const json* v = find(doc, "shoot0")) cfg.shoot0 = parse_shoot0(*v);
    if (const json* v = find(doc, "shoot1")) cfg.shoot1 = parse_shoot1(*v);
    if (const json* v = find(doc, "cost_curve")) cfg.cost_curve = parse_cost_curve(*v);
    if (const json* v = find(doc, "feedback")) cfg.feedback = parse_feedback(*v);
    if (const json* v = find(doc, "path")) cfg.path = parse_path(*v);
    if (const json* v = find(doc, "asymptotics")) check_keys(*v, "asymptotics", {});

    validate_scenario(cfg.scenario);
    return cfg;
}

std::string apply_config_overrides(const std::string& text,
                                   const std::vector<std::string>& sets) {
    if (sets.empty()) return text;
    json doc = parse_json(text);
    if (!doc.is_object())
        throw ValidationError("config root must be a JSON object");
    for (const std::string& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigParseError("override \"" + s + "\" must look like key.path=value");
        const std::string path = s.substr(0, eq);
        const std::string value = s.substr(eq + 1);
        json parsed = json::parse(value, nullptr, false);
        if (parsed.is_discarded()) parsed = value;  // bare strings stay strings

        json* node = &doc;
        size_t begin = 0;
        while (true) {
            size_t dot = path.find('.', begin);
            const std::string key = path.substr(begin, dot - begin);
            if (key.empty())
                throw ConfigParseError("override \"" + s + "\" has an empty path segment");
            if (dot == std::string::npos) {
                (*node)[key] = parsed;
                break;
            }
            node = &(*node)[key];
            if (!node->is_object() && !node->is_null())
                throw ConfigParseError("override \"" + s + "\" descends into a non-object");
            begin = dot + 1;
        }
    }
    return doc.dump(2);
}

}  // namespace drover
