#include "bridge/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "bridge/kernels.hpp"

namespace bridge {

ModalState ModalState::zero(const ModalConfig& cfg) {
    ModalState s;
    s.w.assign(cfg.n_w, 0.0);
    s.w_dot.assign(cfg.n_w, 0.0);
    s.theta.assign(cfg.n_theta, 0.0);
    s.theta_dot.assign(cfg.n_theta, 0.0);
    return s;
}

std::vector<double> pack(const ModalState& s, const ModalConfig& cfg) {
    if (static_cast<int>(s.w.size()) != cfg.n_w ||
        static_cast<int>(s.theta.size()) != cfg.n_theta ||
        static_cast<int>(s.w_dot.size()) != cfg.n_w ||
        static_cast<int>(s.theta_dot.size()) != cfg.n_theta)
        throw std::invalid_argument("pack: state dimensions do not match config");
    std::vector<double> y;
    y.reserve(cfg.dim());
    y.insert(y.end(), s.w.begin(), s.w.end());
    y.insert(y.end(), s.theta.begin(), s.theta.end());
    y.insert(y.end(), s.w_dot.begin(), s.w_dot.end());
    y.insert(y.end(), s.theta_dot.begin(), s.theta_dot.end());
    return y;
}

ModalState unpack(const std::vector<double>& y, double t, const ModalConfig& cfg) {
    if (static_cast<int>(y.size()) != cfg.dim())
        throw std::invalid_argument("unpack: vector size does not match config");
    ModalState s;
    auto it = y.begin();
    s.w.assign(it, it + cfg.n_w);
    it += cfg.n_w;
    s.theta.assign(it, it + cfg.n_theta);
    it += cfg.n_theta;
    s.w_dot.assign(it, it + cfg.n_w);
    it += cfg.n_w;
    s.theta_dot.assign(it, it + cfg.n_theta);
    s.t = t;
    return s;
}

Model::Model(const MechanicalParams& p, const DerivedParams& dp, const ModalConfig& cfg,
             const QuadratureGrid& grid)
    : p_(p), dp_(dp), cfg_(cfg), grid_(grid) {
    if (cfg.n_w < 1 || cfg.n_theta < 1)
        throw std::invalid_argument("Model: mode counts must be >= 1");
    const std::size_t n = grid_.size();
    const int kmax = std::max(cfg.n_w, cfg.n_theta);
    const double L = p_.L;
    const double norm = std::sqrt(2.0 / L);

    basis_.resize(kmax);
    basis_deriv_.resize(kmax);
    for (int k = 1; k <= kmax; ++k) {
        auto& e = basis_[k - 1];
        auto& de = basis_deriv_[k - 1];
        e.resize(n);
        de.resize(n);
        const double kf = k * M_PI / L;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid_.nodes()[i];
            e[i] = norm * std::sin(kf * x);
            de[i] = norm * kf * std::cos(kf * x);
        }
    }
    yprime_.resize(n);
    xi_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        yprime_[i] = cable_slope(grid_.nodes()[i], p_);
        xi_[i] = std::sqrt(1.0 + yprime_[i] * yprime_[i]);
    }
    int_e_.resize(kmax);
    kw2_.resize(kmax);
    kw4_.resize(kmax);
    for (int k = 1; k <= kmax; ++k) {
        int_e_[k - 1] = std::sqrt(2.0 * L) * (1.0 - ((k % 2 == 0) ? 1.0 : -1.0)) / (k * M_PI);
        const double kf2 = (k * M_PI / L) * (k * M_PI / L);
        kw2_[k - 1] = kf2;
        kw4_[k - 1] = kf2 * kf2;
    }
    double xi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) xi2 += grid_.weights()[i] * xi_[i] * xi_[i];
    rest_energy_ = 2.0 * dp_.H * xi2;

    auto sized = [n](FieldSamples& f) { f.assign(n, 0.0); };
    sized(scratch_.w_x);
    sized(scratch_.theta);
    sized(scratch_.theta_x);
    sized(scratch_.sin_t);
    sized(scratch_.cos_t);
    sized(scratch_.s_plus);
    sized(scratch_.s_minus);
    sized(scratch_.chi_p);
    sized(scratch_.chi_m);
    sized(scratch_.rmx_p);
    sized(scratch_.rmx_m);
    sized(scratch_.h_sum);
    sized(scratch_.h_diff);
    sized(scratch_.test_fn);
}

void Model::node_fields(const std::vector<double>& y, Scratch& s) const {
    const std::size_t n = grid_.size();
    std::fill(s.w_x.begin(), s.w_x.end(), 0.0);
    std::fill(s.theta.begin(), s.theta.end(), 0.0);
    std::fill(s.theta_x.begin(), s.theta_x.end(), 0.0);
    for (int k = 0; k < cfg_.n_w; ++k)
        kernels::axpy(y[k], basis_deriv_[k].data(), s.w_x.data(), n);
    for (int k = 0; k < cfg_.n_theta; ++k) {
        const double c = y[cfg_.n_w + k];
        kernels::axpy(c, basis_[k].data(), s.theta.data(), n);
        kernels::axpy(c, basis_deriv_[k].data(), s.theta_x.data(), n);
    }
    const double ell = p_.ell;
    for (std::size_t i = 0; i < n; ++i) {
        s.sin_t[i] = std::sin(s.theta[i]);
        s.cos_t[i] = std::cos(s.theta[i]);
        // (l sin th)_x = l cos(th) th_x
        const double dsin = ell * s.cos_t[i] * s.theta_x[i];
        s.s_plus[i] = s.w_x[i] + dsin + yprime_[i];
        s.s_minus[i] = s.w_x[i] - dsin + yprime_[i];
    }
    kernels::cable_terms(s.s_plus.data(), xi_.data(), s.chi_p.data(), s.rmx_p.data(), n);
    kernels::cable_terms(s.s_minus.data(), xi_.data(), s.chi_m.data(), s.rmx_m.data(), n);
}

void Model::deck_fields(const std::vector<double>& y, FieldSamples& w_x, FieldSamples& theta,
                        FieldSamples& theta_x) const {
    if (static_cast<int>(y.size()) != dim())
        throw std::invalid_argument("deck_fields: state dimension mismatch");
    node_fields(y, scratch_);
    w_x = scratch_.w_x;
    theta = scratch_.theta;
    theta_x = scratch_.theta_x;
}

void Model::cable_forces(const std::vector<double>& y, FieldSamples& h_alpha,
                         FieldSamples& h_beta) const {
    Scratch& s = scratch_;
    node_fields(y, s);
    const std::size_t n = grid_.size();
    const double* wt = grid_.weights().data();
    const double cstr = p_.A * p_.E_c / dp_.L_c;
    const double gamma_p = kernels::weighted_sum(wt, s.rmx_p.data(), n);
    const double gamma_m = kernels::weighted_sum(wt, s.rmx_m.data(), n);
    h_alpha.resize(n);
    h_beta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        h_alpha[i] = -(dp_.H * xi_[i] + cstr * gamma_p) * s.chi_p[i];
        h_beta[i] = -(dp_.H * xi_[i] + cstr * gamma_m) * s.chi_m[i];
    }
}

void Model::cable_modal_forces(const std::vector<double>& y, std::vector<double>& force_w,
                               std::vector<double>& force_theta) const {
    Scratch& s = scratch_;
    node_fields(y, s);
    const std::size_t n = grid_.size();
    const double* wt = grid_.weights().data();
    const double cstr = p_.A * p_.E_c / dp_.L_c;
    const double gamma_p = kernels::weighted_sum(wt, s.rmx_p.data(), n);
    const double gamma_m = kernels::weighted_sum(wt, s.rmx_m.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ha = -(dp_.H * xi_[i] + cstr * gamma_p) * s.chi_p[i];
        const double hb = -(dp_.H * xi_[i] + cstr * gamma_m) * s.chi_m[i];
        s.h_sum[i] = ha + hb;
        s.h_diff[i] = ha - hb;
    }
    force_w.resize(cfg_.n_w);
    for (int k = 0; k < cfg_.n_w; ++k)
        force_w[k] = kernels::weighted_dot(wt, s.h_sum.data(), basis_deriv_[k].data(), n);
    force_theta.resize(cfg_.n_theta);
    for (int k = 0; k < cfg_.n_theta; ++k) {
        // (e_k cos th)_x = e_k' cos th - e_k sin th th_x, assembled under
        // quadrature; never differentiate h_a - h_b.
        for (std::size_t i = 0; i < n; ++i)
            s.test_fn[i] =
                basis_deriv_[k][i] * s.cos_t[i] - basis_[k][i] * s.sin_t[i] * s.theta_x[i];
        force_theta[k] =
            p_.ell * kernels::weighted_dot(wt, s.h_diff.data(), s.test_fn.data(), n);
    }
}

void Model::rhs(double /*t*/, const std::vector<double>& y, std::vector<double>& dydt) const {
    if (static_cast<int>(y.size()) != dim())
        throw std::invalid_argument("rhs: state dimension mismatch");
    dydt.resize(y.size());
    const int nw = cfg_.n_w;
    const int nt = cfg_.n_theta;
    static thread_local std::vector<double> fw, ft;
    cable_modal_forces(y, fw, ft);

    const double EI = p_.E * p_.I;
    const double EJ = p_.E * p_.J;
    const double GK = p_.G * p_.K;
    const double Mg = p_.M * p_.g;
    const double torsion_mass = p_.M * p_.ell * p_.ell / 3.0;

    // positions' derivatives are the velocities
    for (int k = 0; k < nw + nt; ++k) dydt[k] = y[nw + nt + k];
    for (int k = 0; k < nw; ++k) {
        const double force = -EI * kw4_[k] * y[k] + fw[k] + Mg * int_e_[k];
        dydt[nw + nt + k] = force / p_.M;
    }
    for (int k = 0; k < nt; ++k) {
        const double stiff = EJ * kw4_[k] + GK * kw2_[k];
        const double force = -stiff * y[nw + k] + ft[k];
        dydt[nw + nt + nw + k] = force / torsion_mass;
    }
}

double Model::cable_potential(const std::vector<double>& y) const {
    Scratch& s = scratch_;
    node_fields(y, s);
    const std::size_t n = grid_.size();
    const double* wt = grid_.weights().data();
    const double cstr = p_.A * p_.E_c / dp_.L_c;
    const double gamma_p = kernels::weighted_sum(wt, s.rmx_p.data(), n);
    const double gamma_m = kernels::weighted_sum(wt, s.rmx_m.data(), n);
    // H int xi (r+ + r-) dx, with r = xi + (r - xi)
    double tension = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        tension += wt[i] * xi_[i] * (2.0 * xi_[i] + s.rmx_p[i] + s.rmx_m[i]);
    tension *= dp_.H;
    const double stretch = 0.5 * cstr * (gamma_p * gamma_p + gamma_m * gamma_m);
    return tension + stretch;
}

EnergyBreakdown Model::energy_breakdown(const std::vector<double>& y) const {
    if (static_cast<int>(y.size()) != dim())
        throw std::invalid_argument("energy: state dimension mismatch");
    const int nw = cfg_.n_w;
    const int nt = cfg_.n_theta;
    EnergyBreakdown e;
    const double EI = p_.E * p_.I;
    const double EJ = p_.E * p_.J;
    const double GK = p_.G * p_.K;
    for (int k = 0; k < nw; ++k) {
        const double wk = y[k];
        const double wdk = y[nw + nt + k];
        e.kinetic += 0.5 * p_.M * wdk * wdk;
        e.bending += 0.5 * EI * kw4_[k] * wk * wk;
        e.gravity -= p_.M * p_.g * int_e_[k] * wk;
    }
    const double rot_mass = p_.M * p_.ell * p_.ell / 6.0;
    for (int k = 0; k < nt; ++k) {
        const double tk = y[nw + k];
        const double tdk = y[nw + nt + nw + k];
        e.kinetic += rot_mass * tdk * tdk;
        e.torsion += 0.5 * EJ * kw4_[k] * tk * tk + 0.5 * GK * kw2_[k] * tk * tk;
    }
    Scratch& s = scratch_;
    node_fields(y, s);
    const std::size_t n = grid_.size();
    const double* wt = grid_.weights().data();
    const double cstr = p_.A * p_.E_c / dp_.L_c;
    const double gamma_p = kernels::weighted_sum(wt, s.rmx_p.data(), n);
    const double gamma_m = kernels::weighted_sum(wt, s.rmx_m.data(), n);
    double tension = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        tension += wt[i] * xi_[i] * (2.0 * xi_[i] + s.rmx_p[i] + s.rmx_m[i]);
    e.cable_tension = dp_.H * tension;
    e.cable_stretch = 0.5 * cstr * (gamma_p * gamma_p + gamma_m * gamma_m);
    return e;
}

double Model::total_energy(const std::vector<double>& y) const {
    return energy_breakdown(y).total();
}

double Model::rest_energy() const { return rest_energy_; }

}  // namespace bridge
