#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bridge/dynamics.hpp"

namespace bridge {

enum class Method { explicit_rk, tr_bdf2 };

Method method_from_string(const std::string& name);
std::string method_to_string(Method m);

struct IntegratorSettings {
    double rel_tol = 1e-7;
    double abs_tol = 1e-9;
    double t_end = 120.0;
    double max_step = 1.0;
    double output_dt = 0.1;
    Method method = Method::explicit_rk;
    bool store_dense = true;

    void validate() const;
};

struct StepStats {
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
    std::int64_t rhs_evals = 0;
    std::int64_t jacobians = 0;  // TR-BDF2 only
};

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StepSizeUnderflow : IntegrationError {
    double last_good_time;
    explicit StepSizeUnderflow(double t);
};
struct NonFiniteState : IntegrationError {
    int component;
    NonFiniteState(double t, int comp);
};

/// One accepted step's interpolation record; evaluated with the nested form
/// c0 + th*(c1 + (1-th)*(c2 + th*(c3 + (1-th)*c4))), th = (t - t0)/h.
struct DenseStep {
    double t0;
    double h;
    std::vector<double> c0, c1, c2, c3, c4;
};

class Trajectory {
public:
    std::vector<double> times;
    std::vector<std::vector<double>> states;  // packed state vectors
    std::vector<double> energy;
    StepStats stats;
    ModalConfig config;
    double span = 0.0;  // L, for bar-amplitude conversion of stored coefficients
    std::vector<DenseStep> dense;

    double t_end() const { return times.empty() ? 0.0 : times.back(); }

    /// Dense-output state at an arbitrary time in [0, t_end].
    std::vector<double> state_at(double t) const;
    std::vector<std::vector<double>> resample(const std::vector<double>& query_times) const;
};

Trajectory integrate(const Model& model, const std::vector<double>& y0,
                     const IntegratorSettings& settings);

}  // namespace bridge
