#include "bridge/params.hpp"

#include <cmath>

namespace bridge {

MechanicalParams MechanicalParams::tacoma_narrows() {
    MechanicalParams p;
    p.E = 210000e6;
    p.E_c = 185000e6;
    p.G = 81000e6;
    p.L = 853.44;
    p.ell = 6.0;
    p.f = 70.71;
    p.I = 0.154;
    p.K = 6.07e-6;
    p.J = 5.44;
    p.A = 0.1228;
    p.M = 7198.0;
    p.g = 9.81;
    return p;
}

std::vector<Violation> validate(const MechanicalParams& p) {
    std::vector<Violation> out;
    auto positive = [&out](double v, const char* name) {
        if (!(v > 0.0)) out.push_back({name, std::string(name) + " must be positive"});
    };
    positive(p.E, "E");
    positive(p.E_c, "E_c");
    positive(p.G, "G");
    positive(p.L, "L");
    positive(p.ell, "ell");
    positive(p.f, "f");
    positive(p.I, "I");
    positive(p.K, "K");
    positive(p.J, "J");
    positive(p.A, "A");
    positive(p.M, "M");
    positive(p.g, "g");
    if (p.L > 0.0 && p.ell > 0.0 && !(p.ell < p.L / 10.0))
        out.push_back({"ell", "ell must be much smaller than L (ell < L/10)"});
    if (p.L > 0.0 && p.f > 0.0 && !(p.f < p.L))
        out.push_back({"f", "sag f must be below the span L"});
    return out;
}

double cable_arc_length(double span, double sag) {
    // y' = a (L/2 - x) with a = 8 f / L^2; endpoint slope s = a L / 2 = 4 f / L.
    if (sag == 0.0) return span;
    const double a = 8.0 * sag / (span * span);
    const double s = 4.0 * sag / span;
    return (s * std::sqrt(1.0 + s * s) + std::asinh(s)) / a;
}

DerivedParams derive(const MechanicalParams& p) {
    DerivedParams d;
    d.q = 0.5 * p.M * p.g;
    d.H = p.M * p.g * p.L * p.L / (16.0 * p.f);
    d.L_c = cable_arc_length(p.L, p.f);
    const double s = p.M * p.g * p.L / (4.0 * d.H);  // = 4 f / L
    d.xi_bar = std::sqrt(1.0 + s * s);
    return d;
}

}  // namespace bridge
