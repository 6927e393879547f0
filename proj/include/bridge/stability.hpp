#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bridge/integrator.hpp"

namespace bridge {

/// Single-mode excitation: amplitude on longitudinal mode j, a uniform small
/// background on every other amplitude and on all velocities (bar units).
struct ExcitationSpec {
    int mode_j = 9;
    double amplitude_bar = 0.75;       // [m]
    double background_ratio = 1e-3;
};

ModalState build_initial_conditions(const ExcitationSpec& spec, const ModalConfig& cfg,
                                    double span);

struct InstabilityVerdict {
    bool unstable = false;
    double growth_factor = 0.0;
    int dominant_torsional_mode = 0;          // 1-based
    double onset_time = -1.0;                 // first time growth exceeded the threshold
    std::vector<double> growth_per_mode;      // per torsional mode
    std::vector<double> reference_amplitude;  // early-window max per mode [rad]
    bool degenerate_reference = false;
};

struct ClassifySettings {
    double growth_threshold = 10.0;
    double reference_window_fraction = 0.1;
};

InstabilityVerdict classify(const Trajectory& traj, const ClassifySettings& cs = {});

struct ThresholdResult {
    int mode_j = 0;
    double threshold_bar = 0.0;                  // [m]
    double stable_amp = 0.0;                     // bracket low end [m]
    double unstable_amp = 0.0;                   // bracket high end [m]
    int iterations = 0;
    std::vector<std::pair<double, InstabilityVerdict>> probes;
};

struct BracketError : std::runtime_error {
    InstabilityVerdict lo_verdict, hi_verdict;
    BracketError(const std::string& msg, InstabilityVerdict lo, InstabilityVerdict hi)
        : std::runtime_error(msg), lo_verdict(std::move(lo)), hi_verdict(std::move(hi)) {}
};

/// Runs one probe integration at a given excitation amplitude and classifies it.
using ProbeRunner = std::function<InstabilityVerdict(double amplitude_bar)>;

/// Bisection on the excitation amplitude between a stable low and an unstable
/// high endpoint; assumes a monotone stable-to-unstable transition.
ThresholdResult find_threshold(int mode_j, double bracket_lo, double bracket_hi,
                               double resolution, const ProbeRunner& run_probe,
                               int max_iterations = 64);

struct SweepPoint {
    std::string parameter;
    double value = 0.0;
    bool is_baseline = false;
    InstabilityVerdict verdict;
};

/// Reruns the same excitation while varying one mechanical parameter
/// (f, I, K, J, M or A); derived quantities are recomputed per value.
/// worker_count <= 1 runs serially.
std::vector<SweepPoint> sweep(const MechanicalParams& base, const std::string& parameter,
                              const std::vector<double>& values, const ExcitationSpec& spec,
                              const ModalConfig& cfg, const QuadratureGrid& grid,
                              const IntegratorSettings& settings, const ClassifySettings& cs = {},
                              int worker_count = 1);

/// Convenience: build the model, integrate the excitation, classify.
InstabilityVerdict run_and_classify(const MechanicalParams& p, const ExcitationSpec& spec,
                                    const ModalConfig& cfg, const QuadratureGrid& grid,
                                    const IntegratorSettings& settings,
                                    const ClassifySettings& cs = {});

}  // namespace bridge
