// Acceptance suite: one pass/fail line per criterion, pinned tolerances.
// Exit status is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bridge/stability.hpp"

using namespace bridge;

namespace {

int g_failures = 0;

void report(int id, const std::string& label, bool ok, const std::string& detail) {
    std::printf("[%s] %02d %s%s%s\n", ok ? "PASS" : "FAIL", id, label.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct World {
    MechanicalParams p = MechanicalParams::tacoma_narrows();
    DerivedParams dp = derive(p);
    ModalConfig cfg;
    QuadratureGrid grid{p.L, 64, 4};
};

double relative_drift(const Trajectory& traj, double rest) {
    double drift = 0.0;
    for (double e : traj.energy) drift = std::max(drift, std::abs(e - traj.energy.front()));
    return drift / std::abs(traj.energy.front() - rest);
}

void criterion_1_constants(const World& w) {
    const double h_err = std::abs(w.dp.H / 1e3 - 45413.0) / 45413.0;
    const double lc_err = std::abs(w.dp.L_c - 868.815) / 868.815;
    report(1, "derived constants", h_err < 5e-3 && lc_err < 5e-4,
           "H=" + fmt(w.dp.H / 1e3) + " kN (err " + fmt(h_err) + "), L_c=" + fmt(w.dp.L_c) +
               " m (err " + fmt(lc_err) + ")");
}

void criterion_2_equilibrium(const World& w) {
    Model model(w.p, w.dp, w.cfg, w.grid);
    IntegratorSettings s;
    s.store_dense = false;
    const auto traj = integrate(model, std::vector<double>(w.cfg.dim(), 0.0), s);
    double worst = 0.0;
    for (const auto& y : traj.states)
        for (int k = 0; k < w.cfg.n_w + w.cfg.n_theta; ++k)
            worst = std::max(worst, std::abs(coeff_to_bar(y[k], w.p.L)));
    report(2, "equilibrium preservation", worst < 1e-8,
           "max amplitude " + fmt(worst) + " over 120 s");
}

void criterion_3_energy(const World& w) {
    Model model(w.p, w.dp, w.cfg, w.grid);
    ExcitationSpec spec;
    spec.mode_j = 9;
    spec.amplitude_bar = 0.75;
    const auto y0 = pack(build_initial_conditions(spec, w.cfg, w.p.L), w.cfg);

    IntegratorSettings s;
    s.store_dense = false;
    const double default_drift = relative_drift(integrate(model, y0, s), model.rest_energy());

    std::vector<double> drifts;
    for (double tol : {1e-4, 1e-6, 1e-8}) {
        s.rel_tol = tol;
        s.abs_tol = tol * 1e-2;
        drifts.push_back(relative_drift(integrate(model, y0, s), model.rest_energy()));
    }
    const bool monotone = drifts[0] > drifts[1] && drifts[1] > drifts[2];
    report(3, "energy conservation", default_drift < 1e-3 && monotone,
           "drift " + fmt(default_drift) + " at defaults; " + fmt(drifts[0]) + " > " +
               fmt(drifts[1]) + " > " + fmt(drifts[2]) + " across tolerance decades");
}

void criterion_4_variational(const World& w) {
    Model model(w.p, w.dp, w.cfg, w.grid);
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int n_pos = w.cfg.n_w + w.cfg.n_theta;
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> y(w.cfg.dim(), 0.0);
        for (int k = 0; k < w.cfg.n_w; ++k) y[k] = 20.0 * dist(rng);
        for (int k = 0; k < w.cfg.n_theta; ++k) y[w.cfg.n_w + k] = 2.0 * dist(rng);
        std::vector<double> fw, ft;
        model.cable_modal_forces(y, fw, ft);
        double scale = 1e-6 * w.dp.H;
        for (double v : fw) scale = std::max(scale, std::abs(v));
        for (double v : ft) scale = std::max(scale, std::abs(v));
        for (int k = 0; k < n_pos; ++k) {
            const double h = 1e-3 * std::max(1.0, std::abs(y[k]));
            auto yp = y, ym = y;
            yp[k] += h;
            ym[k] -= h;
            const double grad =
                (model.cable_potential(yp) - model.cable_potential(ym)) / (2.0 * h);
            const double force = k < w.cfg.n_w ? fw[k] : ft[k - w.cfg.n_w];
            worst = std::max(worst, std::abs(force + grad) / scale);
        }
    }
    report(4, "variational consistency", worst < 1e-5,
           "max relative force/gradient mismatch " + fmt(worst) + " on 100 states");
}

InstabilityVerdict probe(const World& w, int mode_j, double amp, Method m = Method::explicit_rk) {
    ExcitationSpec spec;
    spec.mode_j = mode_j;
    spec.amplitude_bar = amp;
    IntegratorSettings s;
    s.method = m;
    s.store_dense = false;
    return run_and_classify(w.p, spec, w.cfg, w.grid, s);
}

void criterion_5_stable(const World& w) {
    const auto v = probe(w, 9, 0.75);
    report(5, "stability at 0.75 m", !v.unstable && v.growth_factor < 10.0,
           "growth factor " + fmt(v.growth_factor));
}

void criterion_6_unstable(const World& w) {
    const auto v = probe(w, 9, 3.87);
    int rank2 = 1;  // rank of torsional mode 2 by growth
    for (std::size_t k = 0; k < v.growth_per_mode.size(); ++k)
        if (k != 1 && v.growth_per_mode[k] > v.growth_per_mode[1]) ++rank2;
    const bool onset_ok = v.onset_time >= 60.0 && v.onset_time <= 110.0;
    report(6, "instability at 3.87 m", v.unstable && onset_ok && rank2 <= 2,
           "growth " + fmt(v.growth_factor) + ", onset " + fmt(v.onset_time) +
               " s, mode-2 growth rank " + std::to_string(rank2));
}

void criterion_7_thresholds(const World& w) {
    const double res = 0.02;
    const std::vector<int> modes{7, 8, 9, 10};
    std::vector<double> th_e, th_i;
    std::ostringstream os;
    auto bisect = [&](int j, Method m) {
        try {
            return find_threshold(j, 0.5, 6.0, res,
                                  [&](double a) { return probe(w, j, a, m); })
                .threshold_bar;
        } catch (const BracketError&) {
            return std::nan("");
        }
    };
    for (int j : modes) {
        th_e.push_back(bisect(j, Method::explicit_rk));
        th_i.push_back(bisect(j, Method::tr_bdf2));
        os << " th(" << j << ")=" << fmt(th_e.back()) << "/" << fmt(th_i.back());
    }
    const bool band9 = th_e[2] >= 3.48 && th_e[2] <= 4.26;
    const bool band10 = th_e[3] >= 3.06 && th_e[3] <= 3.74;
    const bool order = th_e[3] < th_e[2] && th_e[2] < th_e[0] && th_e[0] < th_e[1];
    bool agree = true;
    for (std::size_t i = 0; i < modes.size(); ++i)
        agree = agree && std::abs(th_e[i] - th_i[i]) <= res + 0.05 * th_e[i];
    std::ostringstream detail;
    detail << "explicit/implicit" << os.str();
    if (!band9) detail << "; th(9) outside [3.48, 4.26]";
    if (!band10) detail << "; th(10) outside [3.06, 3.74]";
    if (!order) detail << "; ordering th(10) < th(9) < th(7) < th(8) violated";
    if (!agree) detail << "; methods disagree beyond resolution + 5%";
    report(7, "threshold regression", band9 && band10 && order && agree, detail.str());
}

void criterion_8_sensitivity(const World& w) {
    ExcitationSpec spec;
    spec.mode_j = 9;
    spec.amplitude_bar = 3.87;
    IntegratorSettings s;
    s.store_dense = false;
    const double base = probe(w, 9, 3.87).growth_factor;

    auto growth_at = [&](const std::string& param, double value) {
        const auto pts = sweep(w.p, param, {value}, spec, w.cfg, w.grid, s);
        return pts[0].verdict.growth_factor;
    };
    const double g_f = growth_at("f", 106.71);
    const double g_k1 = growth_at("K", 0.1337);
    const double g_k2 = growth_at("K", 0.7171);
    const double g_i = growth_at("I", 1.54);
    const double g_m = growth_at("M", 10077.0);

    std::ostringstream detail;
    detail << "baseline " << fmt(base) << "; f=106.71 -> " << fmt(g_f) << ", K=0.1337 -> "
           << fmt(g_k1) << ", K=0.7171 -> " << fmt(g_k2) << ", I=1.54 -> " << fmt(g_i)
           << ", M=10077 -> " << fmt(g_m);
    if (g_f <= base) detail << "; sag increase did not amplify";
    if (g_k1 >= base) detail << "; K=0.1337 did not reduce growth";
    if (g_k2 >= base) detail << "; K=0.7171 did not reduce growth";
    if (g_i >= base) detail << "; stiffer deck did not reduce growth";
    if (g_m >= base) detail << "; heavier deck did not reduce growth";
    report(8, "sensitivity directions",
           g_f > base && g_k1 < base && g_k2 < base && g_i < base && g_m < base,
           detail.str());
}

void criterion_9_quadrature(const World& w) {
    const double exact = cable_arc_length(w.p.L, w.p.f);
    const double e_len = std::abs(cable_length(w.grid, w.p) - exact) / exact;

    // u = c x (L - x) keeps the total slope linear, so the stretched length
    // has the same closed form as the rest shape
    auto F = [](double t) { return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t)); };
    const double c = 1e-3;
    const double s0 = 4.0 * w.p.f / w.p.L + c * w.p.L;
    const double exact_gamma = (F(s0) - F(-s0)) / (2.0 * s0 / w.p.L) - exact;
    FieldSamples du(w.grid.size());
    for (std::size_t i = 0; i < w.grid.size(); ++i)
        du[i] = c * (w.p.L - 2.0 * w.grid.nodes()[i]);
    const double e_gamma =
        std::abs(gamma(du, w.grid, w.p) - exact_gamma) / std::abs(exact_gamma);

    report(9, "quadrature oracle", e_len < 1e-10 && e_gamma < 1e-10,
           "cable length err " + fmt(e_len) + ", Gamma err " + fmt(e_gamma));
}

void criterion_10_symmetry(const World& w) {
    Model model(w.p, w.dp, w.cfg, w.grid);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> amp(0.5, 4.0);
    std::uniform_int_distribution<int> mode(1, w.cfg.n_w);
    std::uniform_real_distribution<double> bg(-2e-3, 2e-3);

    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> y0(w.cfg.dim(), 0.0);
        y0[mode(rng) - 1] = bar_to_coeff(amp(rng), w.p.L);
        for (int k = 0; k < w.cfg.dim(); ++k) y0[k] += bar_to_coeff(bg(rng), w.p.L);

        auto y0f = y0;
        for (int k = 0; k < w.cfg.n_theta; ++k) {
            y0f[w.cfg.n_w + k] = -y0f[w.cfg.n_w + k];
            y0f[2 * w.cfg.n_w + w.cfg.n_theta + k] = -y0f[2 * w.cfg.n_w + w.cfg.n_theta + k];
        }
        IntegratorSettings s;
        s.t_end = 60.0;
        s.store_dense = false;
        const auto a = integrate(model, y0, s);
        const auto b = integrate(model, y0f, s);
        for (std::size_t i = 0; i < a.times.size(); ++i) {
            double scale = 1e-3;
            for (double v : a.states[i]) scale = std::max(scale, std::abs(v));
            for (int k = 0; k < w.cfg.n_w; ++k)
                worst = std::max(worst,
                                 std::abs(a.states[i][k] - b.states[i][k]) / scale);
            for (int k = 0; k < w.cfg.n_theta; ++k)
                worst = std::max(worst, std::abs(a.states[i][w.cfg.n_w + k] +
                                                 b.states[i][w.cfg.n_w + k]) /
                                            scale);
        }
    }
    report(10, "torsional sign-flip symmetry", worst < 1e-7,
           "max relative mismatch " + fmt(worst) + " on 10 scenarios");
}

}  // namespace

int main() {
    World w;
    criterion_1_constants(w);
    criterion_2_equilibrium(w);
    criterion_3_energy(w);
    criterion_4_variational(w);
    criterion_5_stable(w);
    criterion_6_unstable(w);
    criterion_7_thresholds(w);
    criterion_8_sensitivity(w);
    criterion_9_quadrature(w);
    criterion_10_symmetry(w);
    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
