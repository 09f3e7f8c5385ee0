#include "sigmalab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sigmalab/errors.hpp"

namespace sigmalab {

using nlohmann::json;

SigmaClock ClockSpec::build() const {
    std::vector<Segment> segs = segments;
    if (segs.empty()) segs.push_back({0.0, horizon, 1.0});
    std::vector<Atom> a;
    for (const auto& s : atoms) a.push_back({s.t, s.alpha});
    return SigmaClock(horizon, std::move(segs), std::move(a));
}

std::vector<std::string> preset_names() {
    return {"worked-sigma", "scalar-oracle", "gcc-uniform", "gcc-hetero", "baseline"};
}

RunConfig preset(const std::string& scenario) {
    RunConfig c;
    c.scenario = scenario;
    if (scenario == "worked-sigma") {
        c.clock.horizon = 2.0;
        c.clock.segments = {{0.0, 2.0, 0.0}};
        c.clock.atoms = {{0.30, 0.80}, {0.90, 0.60}};
        c.calibration.kappa = 1.0;
        c.calibration.c_sigma = 0.15;
        c.tolerance = 1e-10;
    } else if (scenario == "scalar-oracle") {
        c.clock.horizon = 4.0;
        c.clock.segments = {{0.0, 1.0, 0.5}, {1.0, 2.0, 0.0}, {2.0, 4.0, 1.0}};
        c.clock.atoms = {{1.5, 0.3}, {3.0, 0.2}};
        c.calibration.kappa = 1.0;
        c.calibration.c_sigma = 0.15;
        c.integrator.dt = 1e-3;
        c.tolerance = 1e-10;
    } else if (scenario == "gcc-uniform" || scenario == "gcc-hetero") {
        c.clock.horizon = 8.0;
        c.clock.atoms = {{2.5, 0.4}, {5.5, 0.3}};
        if (scenario == "gcc-hetero") {
            c.damping.lo = 0.2;
            c.damping.hi = 0.8;
            c.calibration.c0 = 0.4;
        }
    } else if (scenario == "baseline") {
        c.clock.horizon = 8.0;
        c.window.var_sigma = 0.22;
    } else {
        throw ConfigError("scenario", "unknown scenario '" + scenario + "'");
    }
    return c;
}

namespace {

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected a table");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
        if (!known) throw ConfigError(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double num(const json& obj, const std::string& path, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
    return v.get<double>();
}

double req_num(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) throw ConfigError(join(path, key), "missing required field");
    return num(obj, path, key, 0.0);
}

int integer(const json& obj, const std::string& path, const char* key, int dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
    return v.get<int>();
}

bool boolean(const json& obj, const std::string& path, const char* key, bool dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(join(path, key), "expected true or false");
    return v.get<bool>();
}

std::string str(const json& obj, const std::string& path, const char* key, const std::string& dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
    return v.get<std::string>();
}

const json& array_at(const json& obj, const std::string& path, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_array()) throw ConfigError(join(path, key), "expected an array");
    return v;
}

Segment triple(const json& v, const std::string& q) {
    if (v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        throw ConfigError(q, "expected [t0, t1, w]");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

void parse_clock(const json& j, ClockSpec& c) {
    const std::string p = "clock";
    check_keys(j, p, {"horizon", "segments", "atoms"});
    c.horizon = num(j, p, "horizon", c.horizon);
    if (j.contains("segments")) {
        c.segments.clear();
        const json& arr = array_at(j, p, "segments");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string q = p + ".segments[" + std::to_string(i) + "]";
            if (arr[i].is_array()) {
                c.segments.push_back(triple(arr[i], q));
                continue;
            }
            check_keys(arr[i], q, {"t0", "t1", "w"});
            c.segments.push_back({req_num(arr[i], q, "t0"), req_num(arr[i], q, "t1"), req_num(arr[i], q, "w")});
        }
    }
    if (j.contains("atoms")) {
        c.atoms.clear();
        const json& arr = array_at(j, p, "atoms");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string q = p + ".atoms[" + std::to_string(i) + "]";
            AtomSpec a;
            if (arr[i].is_array()) {
                if (arr[i].size() != 2 || !arr[i][0].is_number() || !arr[i][1].is_number())
                    throw ConfigError(q, "expected [t, alpha]");
                a.t = arr[i][0].get<double>();
                a.alpha = arr[i][1].get<double>();
                c.atoms.push_back(a);
                continue;
            }
            check_keys(arr[i], q, {"t", "alpha", "jump", "kind", "theta", "amplitude", "rho"});
            a.t = req_num(arr[i], q, "t");
            a.alpha = req_num(arr[i], q, "alpha");
            if (arr[i].contains("jump") && arr[i].contains("kind"))
                throw ConfigError(q + ".kind", "give either jump or kind, not both");
            const char* kkey = arr[i].contains("kind") ? "kind" : "jump";
            try {
                a.jump = jump_kind_from_string(str(arr[i], q, kkey, "ledger"));
            } catch (const DomainError& e) {
                throw ConfigError(q + "." + std::string(kkey), e.what());
            }
            a.theta = num(arr[i], q, "theta", a.theta);
            if (arr[i].contains("amplitude") && arr[i].contains("rho"))
                throw ConfigError(q + ".rho", "give either amplitude or rho, not both");
            a.amplitude = num(arr[i], q, "amplitude", a.amplitude);
            if (arr[i].contains("rho")) {
                const double rho = req_num(arr[i], q, "rho");
                if (!(rho >= 0.0)) throw ConfigError(q + ".rho", "expected rho >= 0");
                a.amplitude = std::sqrt(rho);
            }
            c.atoms.push_back(a);
        }
    }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("<root>", "expected a table");
    if (!j.contains("scenario")) throw ConfigError("scenario", "missing required field");
    const std::string scenario = str(j, "", "scenario", "");
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), scenario) == names.end())
        throw ConfigError("scenario", "unknown scenario '" + scenario + "'");
    check_keys(j, "", {"scenario", "seed", "clock", "space", "damping", "sat", "integrator", "time", "calibration",
                       "window", "initial", "tolerance", "output"});
    if (j.contains("integrator") && j.contains("time"))
        throw ConfigError("time", "give either integrator or time, not both");

    RunConfig c = preset(scenario);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("clock")) parse_clock(j["clock"], c.clock);
    if (j.contains("space")) {
        const json& s = j["space"];
        check_keys(s, "space", {"n", "L", "order"});
        c.space.n = integer(s, "space", "n", c.space.n);
        c.space.L = num(s, "space", "L", c.space.L);
        c.space.order = integer(s, "space", "order", c.space.order);
        if (c.space.order != 2 && c.space.order != 4) throw ConfigError("space.order", "expected 2 or 4");
        if (c.space.n < 3) throw ConfigError("space.n", "expected at least 3 nodes");
        if (!(c.space.L > 0.0)) throw ConfigError("space.L", "expected a positive length");
    }
    if (j.contains("damping")) {
        const json& s = j["damping"];
        check_keys(s, "damping", {"profile", "a_omega", "omega", "background"});
        const std::string profile = str(s, "damping", "profile", "indicator");
        if (profile != "indicator" && profile != "constant")
            throw ConfigError("damping.profile", "expected constant or indicator");
        if (profile == "constant" && s.contains("omega"))
            throw ConfigError("damping.omega", "a constant profile takes no omega");
        c.damping.a_omega = num(s, "damping", "a_omega", c.damping.a_omega);
        c.damping.background = num(s, "damping", "background", c.damping.background);
        if (s.contains("omega")) {
            const json& o = array_at(s, "damping", "omega");
            if (o.size() != 2 || !o[0].is_number() || !o[1].is_number())
                throw ConfigError("damping.omega", "expected [lo, hi]");
            c.damping.lo = o[0].get<double>();
            c.damping.hi = o[1].get<double>();
        }
        if (profile == "constant") {
            c.damping.lo = 0.0;
            c.damping.hi = c.space.L;
        }
    }
    if (j.contains("sat")) {
        const json& s = j["sat"];
        check_keys(s, "sat", {"tau_scale", "exponent", "sign", "allow_flipped"});
        c.sat.sat.tau_scale = num(s, "sat", "tau_scale", c.sat.sat.tau_scale);
        c.sat.sat.exponent = num(s, "sat", "exponent", c.sat.sat.exponent);
        c.sat.sat.sign = integer(s, "sat", "sign", c.sat.sat.sign);
        if (c.sat.sat.sign != 1 && c.sat.sat.sign != -1) throw ConfigError("sat.sign", "expected 1 or -1");
        c.sat.allow_flipped = boolean(s, "sat", "allow_flipped", c.sat.allow_flipped);
    }
    for (const std::string p : {"integrator", "time"}) {
        if (!j.contains(p)) continue;
        const json& s = j[p];
        const char* kind = p == "time" ? "integrator" : "kind";
        check_keys(s, p, {kind, "dt", "cfl_override", "lambda_max"});
        c.integrator.kind = str(s, p, kind, c.integrator.kind);
        if (c.integrator.kind != "midpoint" && c.integrator.kind != "euler" && c.integrator.kind != "heun")
            throw ConfigError(p + "." + std::string(kind), "expected midpoint, euler or heun");
        c.integrator.dt = num(s, p, "dt", c.integrator.dt);
        if (!(c.integrator.dt > 0.0)) throw ConfigError(p + ".dt", "expected a positive step");
        c.integrator.cfl_override = boolean(s, p, "cfl_override", c.integrator.cfl_override);
        c.integrator.lambda_max = num(s, p, "lambda_max", c.integrator.lambda_max);
    }
    if (j.contains("calibration")) {
        const json& s = j["calibration"];
        check_keys(s, "calibration", {"c0", "kappa", "lambda_omega", "c_sigma"});
        c.calibration.c0 = num(s, "calibration", "c0", c.calibration.c0);
        c.calibration.kappa = num(s, "calibration", "kappa", c.calibration.kappa);
        c.calibration.lambda_omega = num(s, "calibration", "lambda_omega", c.calibration.lambda_omega);
        if (s.contains("c_sigma")) c.calibration.c_sigma = num(s, "calibration", "c_sigma", 0.0);
    }
    if (j.contains("window")) {
        const json& s = j["window"];
        check_keys(s, "window", {"h_min", "h_max", "var_min", "var_max", "var_sigma"});
        c.window.h_min = num(s, "window", "h_min", c.window.h_min);
        c.window.h_max = num(s, "window", "h_max", c.window.h_max);
        c.window.var_min = num(s, "window", "var_min", c.window.var_min);
        c.window.var_max = num(s, "window", "var_max", c.window.var_max);
        if (s.contains("var_sigma")) c.window.var_sigma = num(s, "window", "var_sigma", 0.0);
    }
    c.initial = str(j, "", "initial", c.initial);
    if (c.initial != "mode" && c.initial != "bump") throw ConfigError("initial", "expected mode or bump");
    c.tolerance = num(j, "", "tolerance", c.tolerance);
    if (j.contains("output")) {
        const json& s = j["output"];
        check_keys(s, "output", {"trajectory", "report"});
        c.trajectory_csv = str(s, "output", "trajectory", c.trajectory_csv);
        c.report_csv = str(s, "output", "report", c.report_csv);
    }
    try {
        c.clock.build();
    } catch (const DomainError& e) {
        throw ConfigError("clock", e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

}  // namespace sigmalab
