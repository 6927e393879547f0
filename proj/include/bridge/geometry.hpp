#pragma once

#include <vector>

#include "bridge/params.hpp"

namespace bridge {

/// Composite Gauss-Legendre rule on [0, L]; hosts every span integral.
class QuadratureGrid {
public:
    QuadratureGrid(double span, int panels, int nodes_per_panel);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return nodes_.size(); }
    double span() const { return span_; }
    int panel_count() const { return panels_; }
    int nodes_per_panel() const { return nodes_per_panel_; }

private:
    double span_;
    int panels_;
    int nodes_per_panel_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Gauss-Legendre abscissae/weights on [-1, 1] for an n-point rule.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

using FieldSamples = std::vector<double>;

/// At-rest cable parabola; y0 is the tower height (display offset only).
double cable_shape(double x, const MechanicalParams& p, double y0);

/// y'(x) = (4f/L)(1 - 2x/L); written through the sag so a degenerate H is harmless.
double cable_slope(double x, const MechanicalParams& p);

/// xi(x) = sqrt(1 + y'(x)^2)
double xi(double x, const MechanicalParams& p);

/// Quadrature value of the at-rest cable length; cross-checked against
/// cable_arc_length.
double cable_length(const QuadratureGrid& grid, const MechanicalParams& p);

/// Gamma(u): signed cable length increment for slope samples du of u.
/// du holds u_x at the grid nodes.
double gamma(const FieldSamples& du, const QuadratureGrid& grid, const MechanicalParams& p);

/// chi(u) pointwise at the grid nodes; every value lies strictly in (-1, 1).
FieldSamples chi(const FieldSamples& du, const QuadratureGrid& grid, const MechanicalParams& p);

}  // namespace bridge
