#include "bridge/integrator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace bridge {

Method method_from_string(const std::string& name) {
    if (name == "explicit_rk") return Method::explicit_rk;
    if (name == "tr_bdf2") return Method::tr_bdf2;
    throw std::invalid_argument("unknown method '" + name + "' (expected explicit_rk or tr_bdf2)");
}

std::string method_to_string(Method m) {
    return m == Method::explicit_rk ? "explicit_rk" : "tr_bdf2";
}

void IntegratorSettings::validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("rel_tol must be in (0,1)");
    if (!(abs_tol > 0.0 && abs_tol < 1.0)) throw std::invalid_argument("abs_tol must be in (0,1)");
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (!(output_dt > 0.0)) throw std::invalid_argument("output_dt must be positive");
    if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
}

StepSizeUnderflow::StepSizeUnderflow(double t)
    : IntegrationError("step size underflow at t = " + std::to_string(t)), last_good_time(t) {}

NonFiniteState::NonFiniteState(double t, int comp)
    : IntegrationError("non-finite state component " + std::to_string(comp) + " at t = " +
                       std::to_string(t)),
      component(comp) {}

namespace {

using Vec = std::vector<double>;

int first_nonfinite(const Vec& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i])) return static_cast<int>(i);
    return -1;
}

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double atol, double rtol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / sc;
        acc += r * r;
    }
    return std::sqrt(acc / err.size());
}

void eval_dense(const DenseStep& d, double t, Vec& out) {
    const double th = (t - d.t0) / d.h;
    const double om = 1.0 - th;
    out.resize(d.c0.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double inner = d.c2[i] + th * (d.c3[i] + om * d.c4[i]);
        out[i] = d.c0[i] + th * (d.c1[i] + om * inner);
    }
}

struct StepResult {
    Vec y;        // state at t + h
    Vec f;        // rhs at t + h
    double err;   // scaled error norm
    DenseStep dense;
};

class DormandPrince {
public:
    DormandPrince(const Model& model, StepStats& stats) : model_(model), stats_(stats) {}

    void rhs(double t, const Vec& y, Vec& f) {
        model_.rhs(t, y, f);
        ++stats_.rhs_evals;
    }

    bool step(double t, const Vec& y, const Vec& f0, double h, double atol, double rtol,
              StepResult& out) {
        const std::size_t n = y.size();
        auto stage = [&](Vec& yk, std::initializer_list<std::pair<const Vec*, double>> terms) {
            yk = y;
            for (auto& [kv, a] : terms)
                for (std::size_t i = 0; i < n; ++i) yk[i] += h * a * (*kv)[i];
        };
        Vec yt;
        stage(yt, {{&f0, 1.0 / 5}});
        rhs(t + h / 5, yt, k2_);
        stage(yt, {{&f0, 3.0 / 40}, {&k2_, 9.0 / 40}});
        rhs(t + 3 * h / 10, yt, k3_);
        stage(yt, {{&f0, 44.0 / 45}, {&k2_, -56.0 / 15}, {&k3_, 32.0 / 9}});
        rhs(t + 4 * h / 5, yt, k4_);
        stage(yt, {{&f0, 19372.0 / 6561}, {&k2_, -25360.0 / 2187}, {&k3_, 64448.0 / 6561},
                   {&k4_, -212.0 / 729}});
        rhs(t + 8 * h / 9, yt, k5_);
        stage(yt, {{&f0, 9017.0 / 3168}, {&k2_, -355.0 / 33}, {&k3_, 46732.0 / 5247},
                   {&k4_, 49.0 / 176}, {&k5_, -5103.0 / 18656}});
        rhs(t + h, yt, k6_);
        out.y.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out.y[i] = y[i] + h * (35.0 / 384 * f0[i] + 500.0 / 1113 * k3_[i] +
                                   125.0 / 192 * k4_[i] - 2187.0 / 6784 * k5_[i] +
                                   11.0 / 84 * k6_[i]);
        if (first_nonfinite(out.y) >= 0) return false;
        rhs(t + h, out.y, out.f);  // FSAL: becomes the next step's f0
        Vec err(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double y4 = y[i] + h * (5179.0 / 57600 * f0[i] + 7571.0 / 16695 * k3_[i] +
                                          393.0 / 640 * k4_[i] - 92097.0 / 339200 * k5_[i] +
                                          187.0 / 2100 * k6_[i] + 1.0 / 40 * out.f[i]);
            err[i] = out.y[i] - y4;
        }
        out.err = error_norm(err, y, out.y, atol, rtol);

        // continuous extension (Hairer's dopri5 coefficients)
        const double d1 = -12715105075.0 / 11282082432.0;
        const double d3 = 87487479700.0 / 32700410799.0;
        const double d4 = -10690763975.0 / 1880347072.0;
        const double d5 = 701980252875.0 / 199316789632.0;
        const double d6 = -1453857185.0 / 822651844.0;
        const double d7 = 69997945.0 / 29380423.0;
        DenseStep& ds = out.dense;
        ds.t0 = t;
        ds.h = h;
        ds.c0 = y;
        ds.c1.resize(n);
        ds.c2.resize(n);
        ds.c3.resize(n);
        ds.c4.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double dy = out.y[i] - y[i];
            ds.c1[i] = dy;
            ds.c2[i] = h * f0[i] - dy;
            ds.c3[i] = dy - h * out.f[i] - ds.c2[i];
            ds.c4[i] = h * (d1 * f0[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                            d7 * out.f[i]);
        }
        return true;
    }

    static constexpr double order_exponent = 1.0 / 5.0;

private:
    const Model& model_;
    StepStats& stats_;
    Vec k2_, k3_, k4_, k5_, k6_;
};

// Trapezoidal rule + BDF2 composite, gamma = 2 - sqrt(2); both implicit
// stages share the iteration matrix I - (gamma/2) h J.
class TrBdf2 {
public:
    TrBdf2(const Model& model, StepStats& stats)
        : model_(model), stats_(stats), dim_(model.dim()), jac_(dim_, dim_) {}

    void rhs(double t, const Vec& y, Vec& f) {
        model_.rhs(t, y, f);
        ++stats_.rhs_evals;
    }

    bool step(double t, const Vec& y, const Vec& f0, double h, double atol, double rtol,
              StepResult& out) {
        const double g = 2.0 - std::sqrt(2.0);
        const double d = 0.5 * g;  // = (1-g)/(2-g)
        const std::size_t n = y.size();
        if (!jac_valid_ || !lu_valid_ || std::abs(h - h_fact_) > 0.1 * h_fact_) {
            if (!jac_valid_) refresh_jacobian(t, y, f0);
            factor(h, d);
        }

        // stage 1: trapezoid to t + g h
        Vec rhs_const(n);
        for (std::size_t i = 0; i < n; ++i) rhs_const[i] = y[i] + d * h * f0[i];
        Vec z = y, fz(n);
        if (!newton(t + g * h, d * h, rhs_const, z, fz, y, atol, rtol)) {
            if (retry_with_fresh_jacobian(t, y, f0, h, d)) {
                z = y;
                if (!newton(t + g * h, d * h, rhs_const, z, fz, y, atol, rtol)) return false;
            } else {
                return false;
            }
        }

        // stage 2: BDF2 to t + h
        const double c1 = 1.0 / (g * (2.0 - g));
        const double c2 = (1.0 - g) * (1.0 - g) / (g * (2.0 - g));
        for (std::size_t i = 0; i < n; ++i) rhs_const[i] = c1 * z[i] - c2 * y[i];
        out.y = z;
        if (!newton(t + h, d * h, rhs_const, out.y, out.f, y, atol, rtol)) {
            if (retry_with_fresh_jacobian(t, y, f0, h, d)) {
                out.y = z;
                if (!newton(t + h, d * h, rhs_const, out.y, out.f, y, atol, rtol)) return false;
            } else {
                return false;
            }
        }

        // local error ~ k h^3 y''' from the three derivative slopes
        const double kc = (-3.0 * g * g + 4.0 * g - 2.0) / (12.0 * (2.0 - g));
        Eigen::VectorXd est(n);
        for (std::size_t i = 0; i < n; ++i)
            est[i] = 2.0 * kc * h *
                     (f0[i] / g - fz[i] / (g * (1.0 - g)) + out.f[i] / (1.0 - g));
        est = lu_.solve(est);  // damp the estimate through the iteration matrix
        Vec err(est.data(), est.data() + n);
        out.err = error_norm(err, y, out.y, atol, rtol);

        // cubic Hermite dense output
        DenseStep& ds = out.dense;
        ds.t0 = t;
        ds.h = h;
        ds.c0 = y;
        ds.c1.resize(n);
        ds.c2.resize(n);
        ds.c3.resize(n);
        ds.c4.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double dy = out.y[i] - y[i];
            ds.c1[i] = dy;
            ds.c2[i] = h * f0[i] - dy;                  // a
            ds.c3[i] = (dy - h * out.f[i]) - ds.c2[i];  // b - a
        }
        if (++jac_age_ > 25) jac_valid_ = false;  // force a periodic refresh
        return true;
    }

    static constexpr double order_exponent = 1.0 / 3.0;

private:
    void refresh_jacobian(double t, const Vec& y, const Vec& f0) {
        Vec yp = y, fp(dim_);
        for (int j = 0; j < dim_; ++j) {
            const double delta = 1e-8 * std::max(std::abs(y[j]), 1e-5);
            yp[j] = y[j] + delta;
            rhs(t, yp, fp);
            for (int i = 0; i < dim_; ++i) jac_(i, j) = (fp[i] - f0[i]) / delta;
            yp[j] = y[j];
        }
        ++stats_.jacobians;
        jac_valid_ = true;
        jac_age_ = 0;
        lu_valid_ = false;
    }

    void factor(double h, double d) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim_, dim_) - d * h * jac_;
        lu_.compute(m);
        h_fact_ = h;
        lu_valid_ = true;
    }

    bool retry_with_fresh_jacobian(double t, const Vec& y, const Vec& f0, double h, double d) {
        if (fresh_jacobian_) return false;
        refresh_jacobian(t, y, f0);
        factor(h, d);
        fresh_jacobian_ = true;
        return true;
    }

    // solves z = rhs_const + a f(t, z); returns f(t, z) in fz
    bool newton(double t, double a, const Vec& rhs_const, Vec& z, Vec& fz, const Vec& scale_ref,
                double atol, double rtol) {
        fresh_jacobian_ = false;
        Eigen::VectorXd res(dim_);
        for (int it = 0; it < 8; ++it) {
            rhs(t, z, fz);
            if (first_nonfinite(fz) >= 0) return false;
            for (int i = 0; i < dim_; ++i) res[i] = rhs_const[i] + a * fz[i] - z[i];
            Eigen::VectorXd dz = lu_.solve(res);
            double nrm = 0.0;
            for (int i = 0; i < dim_; ++i) {
                const double sc = atol + rtol * std::max(std::abs(scale_ref[i]), std::abs(z[i]));
                const double r = dz[i] / sc;
                nrm += r * r;
            }
            nrm = std::sqrt(nrm / dim_);
            for (int i = 0; i < dim_; ++i) z[i] += dz[i];
            if (nrm < 1e-2) {
                rhs(t, z, fz);
                return first_nonfinite(fz) < 0;
            }
        }
        return false;
    }

    const Model& model_;
    StepStats& stats_;
    int dim_;
    Eigen::MatrixXd jac_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    bool jac_valid_ = false;
    bool lu_valid_ = false;
    int jac_age_ = 0;
    bool fresh_jacobian_ = false;
    double h_fact_ = 0.0;
};

template <class Stepper>
Trajectory run(const Model& model, const Vec& y0, const IntegratorSettings& s) {
    Trajectory traj;
    traj.config = model.config();
    traj.span = model.params().L;
    traj.stats = StepStats{};
    Stepper stepper(model, traj.stats);

    Vec y = y0;
    Vec f0(y.size());
    double t = 0.0;
    stepper.rhs(t, y, f0);
    if (int c = first_nonfinite(f0); c >= 0) throw NonFiniteState(t, c);

    traj.times.push_back(0.0);
    traj.states.push_back(y);
    traj.energy.push_back(model.total_energy(y));

    // initial step guess from the scaled state/derivative magnitudes
    double d0 = error_norm(y, y, y, s.abs_tol, s.rel_tol);
    double d1 = error_norm(f0, y, y, s.abs_tol, s.rel_tol);
    double h = (d0 > 1e-10 && d1 > 1e-10) ? 0.01 * d0 / d1 : 1e-4;
    h = std::min({h, s.max_step, s.t_end});

    std::size_t out_idx = 1;
    StepResult res;
    Vec interp;
    while (t < s.t_end - 1e-12 * s.t_end) {
        h = std::min(h, s.t_end - t);
        if (h < 1e-14 * std::max(1.0, t)) throw StepSizeUnderflow(t);
        const bool ok = stepper.step(t, y, f0, h, s.abs_tol, s.rel_tol, res);
        if (!ok || !std::isfinite(res.err)) {
            ++traj.stats.rejected;
            h *= 0.25;
            continue;
        }
        if (res.err > 1.0) {
            ++traj.stats.rejected;
            h *= std::clamp(0.9 * std::pow(res.err, -Stepper::order_exponent), 0.1, 0.9);
            continue;
        }
        ++traj.stats.accepted;
        if (int c = first_nonfinite(res.y); c >= 0) throw NonFiniteState(t + h, c);

        const double t_new = t + h;
        while (out_idx * s.output_dt <= t_new + 1e-9) {
            const double t_out = std::min(out_idx * s.output_dt, t_new);
            eval_dense(res.dense, t_out, interp);
            traj.times.push_back(t_out);
            traj.states.push_back(interp);
            traj.energy.push_back(model.total_energy(interp));
            ++out_idx;
        }
        if (s.store_dense) traj.dense.push_back(res.dense);
        t = t_new;
        y = res.y;
        f0 = res.f;
        h *= std::clamp(0.9 * std::pow(std::max(res.err, 1e-10), -Stepper::order_exponent), 1.0,
                        5.0);
        h = std::min(h, s.max_step);
    }
    if (traj.times.back() < s.t_end - 1e-9) {
        traj.times.push_back(t);
        traj.states.push_back(y);
        traj.energy.push_back(model.total_energy(y));
    }
    return traj;
}

}  // namespace

std::vector<double> Trajectory::state_at(double t) const {
    if (dense.empty()) throw std::logic_error("state_at: trajectory stored without dense output");
    if (t < 0.0 || t > dense.back().t0 + dense.back().h + 1e-9)
        throw std::out_of_range("state_at: time outside [0, t_end]");
    auto it = std::upper_bound(dense.begin(), dense.end(), t,
                               [](double v, const DenseStep& d) { return v < d.t0; });
    if (it != dense.begin()) --it;
    std::vector<double> out;
    eval_dense(*it, std::min(t, it->t0 + it->h), out);
    return out;
}

std::vector<std::vector<double>> Trajectory::resample(const std::vector<double>& query_times) const {
    std::vector<std::vector<double>> out;
    out.reserve(query_times.size());
    for (double t : query_times) out.push_back(state_at(t));
    return out;
}

Trajectory integrate(const Model& model, const std::vector<double>& y0,
                     const IntegratorSettings& settings) {
    settings.validate();
    if (static_cast<int>(y0.size()) != model.dim())
        throw std::invalid_argument("integrate: initial state dimension mismatch");
    if (settings.method == Method::explicit_rk) return run<DormandPrince>(model, y0, settings);
    return run<TrBdf2>(model, y0, settings);
}

}  // namespace bridge
