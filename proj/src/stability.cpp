#include "bridge/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace bridge {

ModalState build_initial_conditions(const ExcitationSpec& spec, const ModalConfig& cfg,
                                    double span) {
    if (spec.mode_j < 1 || spec.mode_j > cfg.n_w)
        throw std::out_of_range("excitation mode index outside 1..N_w");
    if (!(spec.amplitude_bar > 0.0))
        throw std::invalid_argument("excitation amplitude must be positive");
    const double bg = spec.background_ratio * spec.amplitude_bar;
    ModalState s = ModalState::zero(cfg);
    for (int k = 0; k < cfg.n_w; ++k) {
        const double bar = (k + 1 == spec.mode_j) ? spec.amplitude_bar : bg;
        s.w[k] = bar_to_coeff(bar, span);
        s.w_dot[k] = bar_to_coeff(bg, span);
    }
    for (int k = 0; k < cfg.n_theta; ++k) {
        s.theta[k] = bar_to_coeff(bg, span);
        s.theta_dot[k] = bar_to_coeff(bg, span);
    }
    return s;
}

InstabilityVerdict classify(const Trajectory& traj, const ClassifySettings& cs) {
    if (traj.times.size() < 2) throw std::invalid_argument("classify: trajectory too short");
    const int nw = traj.config.n_w;
    const int nt = traj.config.n_theta;
    const double t_end = traj.times.back();
    const double t_ref = cs.reference_window_fraction * t_end;

    InstabilityVerdict v;
    v.growth_per_mode.assign(nt, 0.0);
    v.reference_amplitude.assign(nt, 0.0);
    std::vector<double> peak(nt, 0.0);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        for (int k = 0; k < nt; ++k) {
            const double a = std::abs(traj.states[i][nw + k]);
            if (traj.times[i] <= t_ref)
                v.reference_amplitude[k] = std::max(v.reference_amplitude[k], a);
        }
    }
    for (int k = 0; k < nt; ++k) {
        if (v.reference_amplitude[k] == 0.0) {
            v.reference_amplitude[k] = std::numeric_limits<double>::min();
            v.degenerate_reference = true;
        }
    }
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        for (int k = 0; k < nt; ++k) {
            const double a = std::abs(traj.states[i][nw + k]);
            peak[k] = std::max(peak[k], a);
            const double ratio = a / v.reference_amplitude[k];
            if (v.onset_time < 0.0 && ratio >= cs.growth_threshold)
                v.onset_time = traj.times[i];
        }
    }
    for (int k = 0; k < nt; ++k) {
        v.growth_per_mode[k] = peak[k] / v.reference_amplitude[k];
        if (v.growth_per_mode[k] > v.growth_factor) {
            v.growth_factor = v.growth_per_mode[k];
            v.dominant_torsional_mode = k + 1;
        }
    }
    if (traj.span > 0.0)  // report references in bar units [rad]
        for (auto& a : v.reference_amplitude) a = coeff_to_bar(a, traj.span);
    v.unstable = v.growth_factor >= cs.growth_threshold;
    if (!v.unstable) v.onset_time = -1.0;
    return v;
}

ThresholdResult find_threshold(int mode_j, double bracket_lo, double bracket_hi,
                               double resolution, const ProbeRunner& run_probe,
                               int max_iterations) {
    if (!(bracket_lo > 0.0 && bracket_hi > bracket_lo))
        throw std::invalid_argument("find_threshold: need 0 < lo < hi");
    if (!(resolution > 0.0)) throw std::invalid_argument("find_threshold: resolution must be > 0");

    ThresholdResult res;
    res.mode_j = mode_j;
    InstabilityVerdict lo_v = run_probe(bracket_lo);
    res.probes.emplace_back(bracket_lo, lo_v);
    InstabilityVerdict hi_v = run_probe(bracket_hi);
    res.probes.emplace_back(bracket_hi, hi_v);
    if (lo_v.unstable || !hi_v.unstable)
        throw BracketError("bracket invalid: need stable low endpoint and unstable high endpoint",
                           lo_v, hi_v);
    double lo = bracket_lo, hi = bracket_hi;
    while (hi - lo > resolution) {
        if (res.iterations++ >= max_iterations)
            throw std::runtime_error("find_threshold: iteration cap reached");
        const double mid = 0.5 * (lo + hi);
        InstabilityVerdict mv = run_probe(mid);
        res.probes.emplace_back(mid, mv);
        (mv.unstable ? hi : lo) = mid;
    }
    res.stable_amp = lo;
    res.unstable_amp = hi;
    res.threshold_bar = hi;  // smallest amplitude observed unstable
    return res;
}

InstabilityVerdict run_and_classify(const MechanicalParams& p, const ExcitationSpec& spec,
                                    const ModalConfig& cfg, const QuadratureGrid& grid,
                                    const IntegratorSettings& settings,
                                    const ClassifySettings& cs) {
    const DerivedParams dp = derive(p);
    Model model(p, dp, cfg, grid);
    const ModalState ic = build_initial_conditions(spec, cfg, p.L);
    IntegratorSettings s = settings;
    s.store_dense = false;  // probes only need the sampled output
    Trajectory traj = integrate(model, pack(ic, cfg), s);
    return classify(traj, cs);
}

std::vector<SweepPoint> sweep(const MechanicalParams& base, const std::string& parameter,
                              const std::vector<double>& values, const ExcitationSpec& spec,
                              const ModalConfig& cfg, const QuadratureGrid& grid,
                              const IntegratorSettings& settings, const ClassifySettings& cs,
                              int worker_count) {
    double MechanicalParams::* field = nullptr;
    if (parameter == "f") field = &MechanicalParams::f;
    else if (parameter == "I") field = &MechanicalParams::I;
    else if (parameter == "K") field = &MechanicalParams::K;
    else if (parameter == "J") field = &MechanicalParams::J;
    else if (parameter == "M") field = &MechanicalParams::M;
    else if (parameter == "A") field = &MechanicalParams::A;
    else throw std::invalid_argument("sweep: unknown parameter '" + parameter + "'");

    std::vector<SweepPoint> points(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        points[i].parameter = parameter;
        points[i].value = values[i];
        points[i].is_baseline = values[i] == base.*field;
    }
    auto run_point = [&](std::size_t i) {
        MechanicalParams p = base;
        p.*field = values[i];
        points[i].verdict = run_and_classify(p, spec, cfg, grid, settings, cs);
    };
    if (worker_count <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i) run_point(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        const int nworkers = std::min<std::size_t>(worker_count, values.size());
        for (int w = 0; w < nworkers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < values.size();
                     i = next.fetch_add(1))
                    run_point(i);
            });
        for (auto& th : pool) th.join();
    }
    return points;
}

}  // namespace bridge
