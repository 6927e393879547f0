// Batch front door for the bridge simulator: simulate | threshold | sweep |
// energy-audit | params-derive. Exit codes: 0 ok, 1 config error,
// 2 integration failure, 3 invalid threshold bracket, 4 bad sweep parameter.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "bridge/config.hpp"
#include "bridge/kernels.hpp"
#include "bridge/stability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bridge;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::string> modes;  // "Nw,Ntheta"
    std::optional<double> t_end, output_dt, rel_tol, abs_tol;
    std::optional<std::string> method;
};

struct ExciteOpts {
    int mode_j = 9;
    double amplitude = 0.75;
    double background_ratio = 1e-3;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "parameter file (key = value)")->required();
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--modes", o.modes, "mode counts Nw,Ntheta");
    cmd->add_option("--t-end", o.t_end, "integration time [s]");
    cmd->add_option("--output-dt", o.output_dt, "output sampling step [s]");
    cmd->add_option("--rel-tol", o.rel_tol, "relative tolerance");
    cmd->add_option("--abs-tol", o.abs_tol, "absolute tolerance");
    cmd->add_option("--method", o.method, "integrator: explicit_rk | tr_bdf2");
}

void add_excitation(CLI::App* cmd, ExciteOpts& e) {
    cmd->add_option("--mode", e.mode_j, "excited longitudinal mode index");
    cmd->add_option("--amplitude", e.amplitude, "excitation amplitude wbar_j^0 [m]");
    cmd->add_option("--background-ratio", e.background_ratio, "background/amplitude ratio");
}

// config file values overridden by command-line flags
Config resolve_config(const CommonOpts& o) {
    Config cfg = load_config(o.config_path);
    if (o.modes) {
        const auto comma = o.modes->find(',');
        if (comma == std::string::npos) throw ConfigError("--modes expects Nw,Ntheta");
        cfg.modes.n_w = std::stoi(o.modes->substr(0, comma));
        cfg.modes.n_theta = std::stoi(o.modes->substr(comma + 1));
    }
    if (o.t_end) cfg.integrator.t_end = *o.t_end;
    if (o.output_dt) cfg.integrator.output_dt = *o.output_dt;
    if (o.rel_tol) cfg.integrator.rel_tol = *o.rel_tol;
    if (o.abs_tol) cfg.integrator.abs_tol = *o.abs_tol;
    if (o.method) cfg.integrator.method = method_from_string(*o.method);
    cfg.integrator.validate();
    return cfg;
}

class ManifestWriter {
public:
    ManifestWriter(const std::string& command, const Config& cfg, const std::string& out_dir)
        : start_(std::chrono::steady_clock::now()), out_dir_(out_dir) {
        fs::create_directories(out_dir_);
        manifest_["command"] = command;
        manifest_["tool_version"] = kToolVersion;
        manifest_["kernel_backend"] = kernels::backend_name();
        json conf;
        for (const auto& [k, v] : cfg.resolved()) conf[k] = v;
        manifest_["config"] = conf;
        manifest_["outputs"] = json::array();
    }
    std::string path(const std::string& name) {
        manifest_["outputs"].push_back(name);
        return (fs::path(out_dir_) / name).string();
    }
    void set(const std::string& key, const json& v) { manifest_[key] = v; }
    void write() {
        const auto dur = std::chrono::steady_clock::now() - start_;
        manifest_["wall_clock_s"] =
            std::chrono::duration_cast<std::chrono::duration<double>>(dur).count();
        manifest_["outputs"].push_back("manifest.json");
        std::ofstream out(fs::path(out_dir_) / "manifest.json");
        out << manifest_.dump(2) << "\n";
    }

private:
    std::chrono::steady_clock::time_point start_;
    std::string out_dir_;
    json manifest_;
};

json verdict_to_json(const InstabilityVerdict& v) {
    return json{{"unstable", v.unstable},
                {"growth_factor", v.growth_factor},
                {"dominant_torsional_mode", v.dominant_torsional_mode},
                {"onset_time_s", v.onset_time},
                {"growth_per_mode", v.growth_per_mode},
                {"degenerate_reference", v.degenerate_reference}};
}

json solver_settings_json(const IntegratorSettings& s) {
    return json{{"method", method_to_string(s.method)},
                {"rel_tol", s.rel_tol},
                {"abs_tol", s.abs_tol},
                {"t_end_s", s.t_end},
                {"output_dt_s", s.output_dt}};
}

json excitation_json(const ExciteOpts& e) {
    return json{{"mode", e.mode_j},
                {"amplitude_bar_m", e.amplitude},
                {"background_ratio", e.background_ratio}};
}

void write_timeseries_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    out.precision(15);
    out << "t_s";
    for (int k = 1; k <= traj.config.n_w; ++k) out << ",wbar_" << k;
    for (int k = 1; k <= traj.config.n_theta; ++k) out << ",thetabar_" << k;
    out << ",energy_J\n";
    const double conv = std::sqrt(2.0 / traj.span);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << traj.times[i];
        for (int k = 0; k < traj.config.n_w + traj.config.n_theta; ++k)
            out << "," << conv * traj.states[i][k];
        out << "," << traj.energy[i] << "\n";
    }
}

void write_plot_script(const std::string& path, int n_w, int n_theta) {
    std::ofstream out(path);
    out << "#!/usr/bin/env python3\n"
           "\"\"\"Render the longitudinal and torsional mode panels from timeseries.csv.\"\"\"\n"
           "import csv, sys\n"
           "import matplotlib\n"
           "matplotlib.use(\"Agg\")\n"
           "import matplotlib.pyplot as plt\n\n"
           "path = sys.argv[1] if len(sys.argv) > 1 else \"timeseries.csv\"\n"
           "with open(path) as fh:\n"
           "    rows = list(csv.DictReader(fh))\n"
           "t = [float(r[\"t_s\"]) for r in rows]\n"
           "fig, (ax_w, ax_t) = plt.subplots(2, 1, figsize=(12, 8), sharex=True)\n"
        << "for k in range(1, " << n_w + 1 << "):\n"
           "    ax_w.plot(t, [float(r[f\"wbar_{k}\"]) for r in rows], lw=0.7, label=f\"w{k}\")\n"
        << "for k in range(1, " << n_theta + 1 << "):\n"
           "    ax_t.plot(t, [float(r[f\"thetabar_{k}\"]) for r in rows], lw=0.7, "
           "label=f\"th{k}\")\n"
           "ax_w.set_ylabel(\"longitudinal modes [m]\")\n"
           "ax_t.set_ylabel(\"torsional modes [rad]\")\n"
           "ax_t.set_xlabel(\"t [s]\")\n"
           "ax_w.legend(ncol=5, fontsize=7)\n"
           "ax_t.legend(ncol=4, fontsize=7)\n"
           "fig.savefig(\"timeseries.png\", dpi=150)\n";
}

int cmd_simulate(const CommonOpts& co, const ExciteOpts& eo, bool emit_plot) {
    const Config cfg = resolve_config(co);
    ManifestWriter mf("simulate", cfg, co.out_dir);
    mf.set("excitation", excitation_json(eo));
    const DerivedParams dp = derive(cfg.mechanical);
    QuadratureGrid grid(cfg.mechanical.L, cfg.quad_panels, cfg.quad_nodes_per_panel);
    Model model(cfg.mechanical, dp, cfg.modes, grid);
    ExcitationSpec spec{eo.mode_j, eo.amplitude, eo.background_ratio};
    const ModalState ic = build_initial_conditions(spec, cfg.modes, cfg.mechanical.L);
    Trajectory traj = integrate(model, pack(ic, cfg.modes), cfg.integrator);
    write_timeseries_csv(mf.path("timeseries.csv"), traj);
    if (emit_plot) write_plot_script(mf.path("plot_timeseries.py"), cfg.modes.n_w,
                                     cfg.modes.n_theta);
    mf.set("steps", json{{"accepted", traj.stats.accepted},
                         {"rejected", traj.stats.rejected},
                         {"rhs_evals", traj.stats.rhs_evals}});
    mf.write();
    return 0;
}

int cmd_params_derive(const CommonOpts& co) {
    const Config cfg = resolve_config(co);
    const DerivedParams dp = derive(cfg.mechanical);
    json out{{"q_N_per_m", dp.q},
             {"H_N", dp.H},
             {"H_kN", dp.H / 1e3},
             {"L_c_m", dp.L_c},
             {"xi_bar", dp.xi_bar}};
    std::cout << out.dump(2) << "\n";
    ManifestWriter mf("params-derive", cfg, co.out_dir);
    std::ofstream(mf.path("derived.json")) << out.dump(2) << "\n";
    mf.write();
    return 0;
}

int cmd_threshold(const CommonOpts& co, const ExciteOpts& eo, const std::string& bracket,
                  double resolution) {
    const Config cfg = resolve_config(co);
    const auto comma = bracket.find(',');
    if (comma == std::string::npos) throw ConfigError("--bracket expects lo,hi");
    const double lo = std::stod(bracket.substr(0, comma));
    const double hi = std::stod(bracket.substr(comma + 1));

    ManifestWriter mf("threshold", cfg, co.out_dir);
    QuadratureGrid grid(cfg.mechanical.L, cfg.quad_panels, cfg.quad_nodes_per_panel);
    ClassifySettings cs;
    auto probe = [&](double amp) {
        ExcitationSpec spec{eo.mode_j, amp, eo.background_ratio};
        return run_and_classify(cfg.mechanical, spec, cfg.modes, grid, cfg.integrator, cs);
    };
    ThresholdResult res;
    try {
        res = find_threshold(eo.mode_j, lo, hi, resolution, probe);
    } catch (const BracketError& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "  low endpoint:  " << verdict_to_json(e.lo_verdict).dump() << "\n"
                  << "  high endpoint: " << verdict_to_json(e.hi_verdict).dump() << "\n";
        return 3;
    }
    json probes = json::array();
    for (const auto& [amp, verdict] : res.probes)
        probes.push_back(json{{"amplitude_bar_m", amp}, {"verdict", verdict_to_json(verdict)}});
    json out{{"mode_j", res.mode_j},
             {"threshold_bar_m", res.threshold_bar},
             {"bracket_m", {res.stable_amp, res.unstable_amp}},
             {"iterations", res.iterations},
             {"growth_threshold", cs.growth_threshold},
             {"solver_settings", solver_settings_json(cfg.integrator)},
             {"probes", probes}};
    std::cout << out.dump(2) << "\n";
    std::ofstream(mf.path("threshold.json")) << out.dump(2) << "\n";
    mf.write();
    return 0;
}

int cmd_sweep(const CommonOpts& co, const ExciteOpts& eo, const std::string& param,
              const std::string& values_csv) {
    const Config cfg = resolve_config(co);
    std::vector<double> values;
    std::stringstream ss(values_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) values.push_back(std::stod(tok));
    if (values.empty()) throw ConfigError("--values expects a comma-separated list");

    ManifestWriter mf("sweep", cfg, co.out_dir);
    mf.set("excitation", excitation_json(eo));
    QuadratureGrid grid(cfg.mechanical.L, cfg.quad_panels, cfg.quad_nodes_per_panel);
    ExcitationSpec spec{eo.mode_j, eo.amplitude, eo.background_ratio};

    int workers = 1;
    if (const char* env = std::getenv("BRIDGE_SWEEP_WORKERS")) workers = std::atoi(env);

    std::vector<SweepPoint> points;
    try {
        points = sweep(cfg.mechanical, param, values, spec, cfg.modes, grid, cfg.integrator, {},
                       workers);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    std::ofstream csv(mf.path("sweep.csv"));
    csv.precision(15);
    csv << "parameter,value,is_baseline,unstable,growth_factor,dominant_torsional_mode,"
           "onset_time_s\n";
    json jpoints = json::array();
    for (const auto& pt : points) {
        csv << pt.parameter << "," << pt.value << "," << (pt.is_baseline ? 1 : 0) << ","
            << (pt.verdict.unstable ? 1 : 0) << "," << pt.verdict.growth_factor << ","
            << pt.verdict.dominant_torsional_mode << "," << pt.verdict.onset_time << "\n";
        jpoints.push_back(json{{"parameter", pt.parameter},
                               {"value", pt.value},
                               {"is_baseline", pt.is_baseline},
                               {"verdict", verdict_to_json(pt.verdict)}});
    }
    json out{{"parameter", param},
             {"excitation", excitation_json(eo)},
             {"solver_settings", solver_settings_json(cfg.integrator)},
             {"points", jpoints}};
    std::ofstream(mf.path("sweep.json")) << out.dump(2) << "\n";
    mf.write();
    return 0;
}

int cmd_energy_audit(const CommonOpts& co, const ExciteOpts& eo) {
    const Config cfg = resolve_config(co);
    ManifestWriter mf("energy-audit", cfg, co.out_dir);
    mf.set("excitation", excitation_json(eo));
    const DerivedParams dp = derive(cfg.mechanical);
    QuadratureGrid grid(cfg.mechanical.L, cfg.quad_panels, cfg.quad_nodes_per_panel);
    Model model(cfg.mechanical, dp, cfg.modes, grid);
    ExcitationSpec spec{eo.mode_j, eo.amplitude, eo.background_ratio};
    const auto y0 = pack(build_initial_conditions(spec, cfg.modes, cfg.mechanical.L), cfg.modes);

    auto drift_at = [&](double rel, double abs) {
        IntegratorSettings s = cfg.integrator;
        s.rel_tol = rel;
        s.abs_tol = abs;
        s.store_dense = false;
        Trajectory traj = integrate(model, y0, s);
        const double e0 = traj.energy.front();
        const double scale = std::abs(e0 - model.rest_energy());
        double max_drift = 0.0;
        for (double e : traj.energy) max_drift = std::max(max_drift, std::abs(e - e0));
        return std::pair<double, double>(e0, max_drift / scale);
    };

    auto [e0, drift_default] = drift_at(cfg.integrator.rel_tol, cfg.integrator.abs_tol);
    std::cout.precision(12);
    std::cout << "initial energy:       " << e0 << " J\n"
              << "rest-state energy:    " << model.rest_energy() << " J\n"
              << "relative max drift at configured tolerances: " << drift_default << "\n\n"
              << "rel_tol    abs_tol    relative_max_drift\n";
    json table = json::array();
    for (double rel : {1e-4, 1e-6, 1e-8}) {
        const double abs = rel * 1e-2;
        auto [e0i, drift] = drift_at(rel, abs);
        (void)e0i;
        std::cout << rel << "   " << abs << "   " << drift << "\n";
        table.push_back(json{{"rel_tol", rel}, {"abs_tol", abs}, {"relative_max_drift", drift}});
    }
    json out{{"initial_energy_J", e0},
             {"rest_energy_J", model.rest_energy()},
             {"relative_max_drift_default", drift_default},
             {"drift_table", table}};
    std::ofstream(mf.path("energy_audit.json")) << out.dump(2) << "\n";
    mf.write();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral-Galerkin suspension bridge simulator"};
    app.require_subcommand(1);

    CommonOpts co;
    ExciteOpts eo;
    bool emit_plot = false;
    std::string bracket = "0.5,6.0", param, values_csv;
    double resolution = 0.02;

    auto* sim = app.add_subcommand("simulate", "integrate one excitation and write a time series");
    add_common(sim, co);
    add_excitation(sim, eo);
    sim->add_flag("--plot-script", emit_plot, "also emit a matplotlib plot script");

    auto* thr = app.add_subcommand("threshold", "bisect the torsional instability threshold");
    add_common(thr, co);
    add_excitation(thr, eo);
    thr->add_option("--bracket", bracket, "amplitude bracket lo,hi [m]");
    thr->add_option("--resolution", resolution, "bisection resolution [m]");

    auto* swp = app.add_subcommand("sweep", "vary one mechanical parameter at fixed excitation");
    add_common(swp, co);
    add_excitation(swp, eo);
    swp->add_option("--param", param, "parameter name: f | I | K | J | M | A")->required();
    swp->add_option("--values", values_csv, "comma-separated values (SI units)")->required();

    auto* aud = app.add_subcommand("energy-audit", "energy conservation report");
    add_common(aud, co);
    add_excitation(aud, eo);

    auto* der = app.add_subcommand("params-derive", "print derived mechanical constants");
    add_common(der, co);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(co, eo, emit_plot);
        if (thr->parsed()) return cmd_threshold(co, eo, bracket, resolution);
        if (swp->parsed()) return cmd_sweep(co, eo, param, values_csv);
        if (aud->parsed()) return cmd_energy_audit(co, eo);
        if (der->parsed()) return cmd_params_derive(co);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
