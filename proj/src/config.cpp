#include "bridge/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace bridge {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(where + ": invalid numeric value for " + key + ": '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v, const std::string& where) {
    const double d = to_double(key, v, where);
    if (d != std::floor(d)) throw ConfigError(where + ": " + key + " must be an integer");
    return static_cast<int>(d);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Config parse_config(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) throw ConfigError(where + ": expected 'key = value'");
        if (kv.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
        kv[key] = val;
    }

    Config cfg;
    auto take = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end())
            throw ConfigError(origin + ": missing required key '" + std::string(key) + "'");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_opt = [&](const char* key, std::string* out) {
        auto it = kv.find(key);
        if (it == kv.end()) return false;
        *out = it->second;
        kv.erase(it);
        return true;
    };

    MechanicalParams& p = cfg.mechanical;
    p.E = 1e6 * to_double("E_MPa", take("E_MPa"), origin);
    p.E_c = 1e6 * to_double("Ec_MPa", take("Ec_MPa"), origin);
    p.G = 1e6 * to_double("G_MPa", take("G_MPa"), origin);
    p.L = to_double("L_m", take("L_m"), origin);
    p.ell = to_double("ell_m", take("ell_m"), origin);
    p.f = to_double("f_m", take("f_m"), origin);
    p.I = to_double("I_m4", take("I_m4"), origin);
    p.K = to_double("K_m4", take("K_m4"), origin);
    p.J = to_double("J_m6", take("J_m6"), origin);
    p.A = to_double("A_m2", take("A_m2"), origin);
    p.M = to_double("M_kg_per_m", take("M_kg_per_m"), origin);
    p.g = to_double("g_m_per_s2", take("g_m_per_s2"), origin);

    std::string v;
    if (take_opt("quad_panels", &v)) cfg.quad_panels = to_int("quad_panels", v, origin);
    if (take_opt("quad_nodes_per_panel", &v))
        cfg.quad_nodes_per_panel = to_int("quad_nodes_per_panel", v, origin);
    if (take_opt("n_w", &v)) cfg.modes.n_w = to_int("n_w", v, origin);
    if (take_opt("n_theta", &v)) cfg.modes.n_theta = to_int("n_theta", v, origin);
    if (take_opt("rel_tol", &v)) cfg.integrator.rel_tol = to_double("rel_tol", v, origin);
    if (take_opt("abs_tol", &v)) cfg.integrator.abs_tol = to_double("abs_tol", v, origin);
    if (take_opt("t_end_s", &v)) cfg.integrator.t_end = to_double("t_end_s", v, origin);
    if (take_opt("output_dt_s", &v))
        cfg.integrator.output_dt = to_double("output_dt_s", v, origin);
    if (take_opt("method", &v)) {
        try {
            cfg.integrator.method = method_from_string(v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(origin + ": " + e.what());
        }
    }

    if (!kv.empty())
        throw ConfigError(origin + ": unknown key '" + kv.begin()->first + "'");

    auto violations = validate(p);
    if (!violations.empty()) {
        std::string msg = origin + ": invalid mechanical parameters:";
        for (const auto& viol : violations) msg += " [" + viol.message + "]";
        throw ConfigError(msg);
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::map<std::string, std::string> Config::resolved() const {
    std::map<std::string, std::string> m;
    m["E_MPa"] = fmt(mechanical.E / 1e6);
    m["Ec_MPa"] = fmt(mechanical.E_c / 1e6);
    m["G_MPa"] = fmt(mechanical.G / 1e6);
    m["L_m"] = fmt(mechanical.L);
    m["ell_m"] = fmt(mechanical.ell);
    m["f_m"] = fmt(mechanical.f);
    m["I_m4"] = fmt(mechanical.I);
    m["K_m4"] = fmt(mechanical.K);
    m["J_m6"] = fmt(mechanical.J);
    m["A_m2"] = fmt(mechanical.A);
    m["M_kg_per_m"] = fmt(mechanical.M);
    m["g_m_per_s2"] = fmt(mechanical.g);
    m["quad_panels"] = std::to_string(quad_panels);
    m["quad_nodes_per_panel"] = std::to_string(quad_nodes_per_panel);
    m["n_w"] = std::to_string(modes.n_w);
    m["n_theta"] = std::to_string(modes.n_theta);
    m["rel_tol"] = fmt(integrator.rel_tol);
    m["abs_tol"] = fmt(integrator.abs_tol);
    m["t_end_s"] = fmt(integrator.t_end);
    m["output_dt_s"] = fmt(integrator.output_dt);
    m["method"] = method_to_string(integrator.method);
    return m;
}

}  // namespace bridge
