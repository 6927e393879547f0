#pragma once

#include <string>
#include <vector>

namespace bridge {

/// Mechanical constants of the two-cable bridge model, in SI base units.
struct MechanicalParams {
    double E;      ///< deck Young modulus [Pa]
    double E_c;    ///< cable Young modulus [Pa]
    double G;      ///< deck shear modulus [Pa]
    double L;      ///< main-span length [m]
    double ell;    ///< half deck width [m]
    double f;      ///< cable sag [m]
    double I;      ///< deck section moment of inertia [m^4]
    double K;      ///< deck torsional constant [m^4]
    double J;      ///< deck warping constant [m^6]
    double A;      ///< cable section area [m^2]
    double M;      ///< deck linear mass density [kg/m]
    double g = 9.81;  ///< gravitational acceleration [m/s^2]

    /// Tacoma Narrows Bridge constants (the baseline configuration).
    static MechanicalParams tacoma_narrows();
};

/// Quantities derived from MechanicalParams.
struct DerivedParams {
    double q;       ///< dead load per cable [N/m], q = M g / 2
    double H;       ///< horizontal cable tension [N], H = M g L^2 / (16 f)
    double L_c;     ///< at-rest cable length [m]
    double xi_bar;  ///< supremum of xi(x)
};

struct Violation {
    std::string field;
    std::string message;
};

/// Checks every invariant; returns an empty list when the parameters are valid.
std::vector<Violation> validate(const MechanicalParams& p);

/// Computes q, H, L_c and xi_bar. L_c uses the closed-form parabola arc length;
/// the quadrature route lives in the geometry module and is tested against this.
DerivedParams derive(const MechanicalParams& p);

/// Closed-form arc length of the cable parabola with sag f over span L.
double cable_arc_length(double span, double sag);

}  // namespace bridge
