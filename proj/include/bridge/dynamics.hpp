#pragma once

#include <cmath>
#include <vector>

#include "bridge/geometry.hpp"
#include "bridge/params.hpp"

namespace bridge {

struct ModalConfig {
    int n_w = 10;
    int n_theta = 4;
    int dim() const { return 2 * (n_w + n_theta); }
};

/// Modal coefficients and velocities at one time instant. Coefficients are in
/// L2-normalized basis units (carry sqrt(m)); user-facing "bar" amplitudes
/// [m]/[rad] are sqrt(2/L) times the coefficients.
struct ModalState {
    std::vector<double> w;          // N_w
    std::vector<double> w_dot;      // N_w
    std::vector<double> theta;      // N_theta
    std::vector<double> theta_dot;  // N_theta
    double t = 0.0;

    static ModalState zero(const ModalConfig& cfg);
};

/// bar amplitude <-> modal coefficient conversion (Definition of the modes).
inline double bar_to_coeff(double bar, double span) { return std::sqrt(span / 2.0) * bar; }
inline double coeff_to_bar(double coeff, double span) { return std::sqrt(2.0 / span) * coeff; }

/// Flat state vector layout: [w | theta | w_dot | theta_dot].
std::vector<double> pack(const ModalState& s, const ModalConfig& cfg);
ModalState unpack(const std::vector<double>& y, double t, const ModalConfig& cfg);

struct EnergyBreakdown {
    double kinetic = 0.0;        // vertical + rotational
    double bending = 0.0;        // EI term
    double torsion = 0.0;        // GK + EJ terms
    double cable_tension = 0.0;  // H * int xi (r+ + r-)
    double cable_stretch = 0.0;  // (A Ec / 2 Lc)(Gamma+^2 + Gamma-^2)
    double gravity = 0.0;        // -M g int w
    double total() const {
        return kinetic + bending + torsion + cable_tension + cable_stretch + gravity;
    }
};

/// Assembles the modal ODE right-hand side and the conserved energy for one
/// parameter set. Holds precomputed basis tables; rhs reuses internal scratch,
/// so one Model instance serves one trajectory at a time.
class Model {
public:
    Model(const MechanicalParams& p, const DerivedParams& dp, const ModalConfig& cfg,
          const QuadratureGrid& grid);

    const ModalConfig& config() const { return cfg_; }
    const MechanicalParams& params() const { return p_; }
    const DerivedParams& derived() const { return dp_; }
    const QuadratureGrid& grid() const { return grid_; }
    int dim() const { return cfg_.dim(); }

    /// w_x, theta, theta_x at the grid nodes from analytic modal derivatives.
    void deck_fields(const std::vector<double>& y, FieldSamples& w_x, FieldSamples& theta,
                     FieldSamples& theta_x) const;

    /// Pointwise cable force densities h_alpha, h_beta at the grid nodes.
    void cable_forces(const std::vector<double>& y, FieldSamples& h_alpha,
                      FieldSamples& h_beta) const;

    void rhs(double t, const std::vector<double>& y, std::vector<double>& dydt) const;

    EnergyBreakdown energy_breakdown(const std::vector<double>& y) const;
    double total_energy(const std::vector<double>& y) const;

    /// Cable part of the potential (tension + stretch terms); the modal cable
    /// forces are exactly minus its gradient, which the tests check by finite
    /// differences.
    double cable_potential(const std::vector<double>& y) const;

    /// Generalized modal forces from the cables:
    /// force_w[k] = (h_a + h_b, e_k')_2, force_theta[k] = ell (h_a - h_b, (e_k cos th)_x)_2.
    void cable_modal_forces(const std::vector<double>& y, std::vector<double>& force_w,
                            std::vector<double>& force_theta) const;

    double rest_energy() const;  // energy of the zero state, 2 H int xi^2

private:
    struct Scratch;
    void node_fields(const std::vector<double>& y, Scratch& s) const;

    MechanicalParams p_;
    DerivedParams dp_;
    ModalConfig cfg_;
    QuadratureGrid grid_;

    // basis_[k][i] = e_{k+1}(x_i), contiguous per mode; same for derivatives
    std::vector<std::vector<double>> basis_;
    std::vector<std::vector<double>> basis_deriv_;
    std::vector<double> yprime_;   // y'(x_i)
    std::vector<double> xi_;       // xi(x_i)
    std::vector<double> int_e_;    // int e_k dx = sqrt(2L)(1-(-1)^k)/(k pi)
    std::vector<double> kw4_;      // (k pi / L)^4, k = 1..max modes
    std::vector<double> kw2_;      // (k pi / L)^2
    double rest_energy_;

    struct Scratch {
        FieldSamples w_x, theta, theta_x, sin_t, cos_t;
        FieldSamples s_plus, s_minus, chi_p, chi_m, rmx_p, rmx_m;
        FieldSamples h_sum, h_diff, test_fn;
    };
    mutable Scratch scratch_;
};

}  // namespace bridge
