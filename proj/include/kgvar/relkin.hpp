#pragma once

#include <array>

#include "kgvar/constants.hpp"
#include "kgvar/grid.hpp"

namespace kgv {

struct Event {
    double t = 0.0;
    std::array<double, 3> x{0.0, 0.0, 0.0};
};

struct BoostVelocity {
    std::array<double, 3> v{0.0, 0.0, 0.0};
};

// Lorentz boost with the axes kept parallel:
//   x_j' = x_j + (1/sqrt(1-v^2/c^2) - 1) (x.v / v^2) v_j - gamma_L t v_j,
//   t'   = gamma_L (t - x.v / c^2).
// Below |v|/c = 1e-6 the (gamma_L - 1)/v^2 factor uses its Taylor value.
Event boost(const Event& e, const BoostVelocity& v, const PhysicalConstants& consts);

// -y0 z0 + sum_{i>=1} y_i z_i.
double minkowski_dot(const std::array<double, 4>& y, const std::array<double, 4>& z);

// Operator-applied fields of the angular momentum decomposition J = S + L.
struct AngularDecomposition {
    ScalarField Jz;
    ScalarField Lz;
    ScalarField Sz;
};

// Angular momentum decomposition about the given spatial axis (2 = z).
// phi is sampled in material coordinates (x, t) and identified with a
// function of the boosted coordinates (X', t'); its derivatives with
// respect to X' and t' are recovered per point by the chain rule through
// the boost-composed Jacobian of r. r has codim 3 (the spatial map X) on
// a space-time grid. Throws ChainRuleError when the Jacobian is singular.
AngularDecomposition angular_decompose(const ScalarField& phi, const VectorField& r,
                                       int axis, const PhysicalConstants& consts);

inline AngularDecomposition angular_decompose_z(const ScalarField& phi, const VectorField& r,
                                                const PhysicalConstants& consts) {
    return angular_decompose(phi, r, 2, consts);
}

// (gamma_L - 1)/v^2 with the small-v series branch.
double boost_kappa(double v2, const PhysicalConstants& consts);

} // namespace kgv
