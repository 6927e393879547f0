#include "bridge/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "bridge/kernels.hpp"

namespace bridge {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev estimate of the i-th root.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

QuadratureGrid::QuadratureGrid(double span, int panels, int nodes_per_panel)
    : span_(span), panels_(panels), nodes_per_panel_(nodes_per_panel) {
    if (span <= 0.0) throw std::invalid_argument("QuadratureGrid: span must be positive");
    if (panels < 1 || nodes_per_panel < 1)
        throw std::invalid_argument("QuadratureGrid: panel counts must be >= 1");
    std::vector<double> gx, gw;
    gauss_legendre(nodes_per_panel, gx, gw);
    const double h = span / panels;
    nodes_.reserve(static_cast<std::size_t>(panels) * nodes_per_panel);
    weights_.reserve(nodes_.capacity());
    for (int p = 0; p < panels; ++p) {
        const double a = p * h;
        for (int j = 0; j < nodes_per_panel; ++j) {
            nodes_.push_back(a + 0.5 * h * (gx[j] + 1.0));
            weights_.push_back(0.5 * h * gw[j]);
        }
    }
}

namespace {
void check_domain(double x, double span) {
    if (x < 0.0 || x > span) throw std::domain_error("x outside [0, L]");
}
}  // namespace

double cable_shape(double x, const MechanicalParams& p, double y0) {
    check_domain(x, p.L);
    return -4.0 * p.f / (p.L * p.L) * x * x + 4.0 * p.f / p.L * x - y0;
}

double cable_slope(double x, const MechanicalParams& p) {
    check_domain(x, p.L);
    return 4.0 * p.f / p.L * (1.0 - 2.0 * x / p.L);
}

double xi(double x, const MechanicalParams& p) {
    const double s = cable_slope(x, p);
    return std::sqrt(1.0 + s * s);
}

double cable_length(const QuadratureGrid& grid, const MechanicalParams& p) {
    double acc = 0.0;
    const auto& xs = grid.nodes();
    const auto& ws = grid.weights();
    for (std::size_t i = 0; i < xs.size(); ++i) acc += ws[i] * xi(xs[i], p);
    return acc;
}

double gamma(const FieldSamples& du, const QuadratureGrid& grid, const MechanicalParams& p) {
    if (du.size() != grid.size()) throw std::invalid_argument("gamma: sample/grid size mismatch");
    const auto& xs = grid.nodes();
    const std::size_t n = grid.size();
    std::vector<double> slope(n), xiv(n), chi_buf(n), rmx(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double yp = cable_slope(xs[i], p);
        slope[i] = du[i] + yp;
        xiv[i] = std::sqrt(1.0 + yp * yp);
    }
    kernels::cable_terms(slope.data(), xiv.data(), chi_buf.data(), rmx.data(), n);
    return kernels::weighted_sum(grid.weights().data(), rmx.data(), n);
}

FieldSamples chi(const FieldSamples& du, const QuadratureGrid& grid, const MechanicalParams& p) {
    if (du.size() != grid.size()) throw std::invalid_argument("chi: sample/grid size mismatch");
    const auto& xs = grid.nodes();
    const std::size_t n = grid.size();
    std::vector<double> slope(n), xiv(n), out(n), rmx(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double yp = cable_slope(xs[i], p);
        slope[i] = du[i] + yp;
        xiv[i] = std::sqrt(1.0 + yp * yp);
    }
    kernels::cable_terms(slope.data(), xiv.data(), out.data(), rmx.data(), n);
    return out;
}

}  // namespace bridge
