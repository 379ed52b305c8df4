#pragma once

#include <cmath>
#include <vector>

#include "kgvar/constants.hpp"
#include "kgvar/grid.hpp"

namespace kgv {

// Dirichlet Laplacian eigenpair: -Lap phi2 = lambda phi2, phi2 = 0 on the
// boundary, int |phi2|^2 dx = 1 in the trapezoid quadrature.
struct EigenPair {
    double lambda = 0.0;
    ScalarField phi2;
};

// Roots of (gamma/(2 c^2 hbar^2)) E1^2 + E1 - m c^2 - gamma lambda / 2 = 0.
struct DispersionRoots {
    double E1_plus = 0.0;
    double E1_minus = 0.0;
    double discriminant = 0.0;

    // Root continuous with the lambda -> 0 limit of smaller |E1|.
    double principal() const {
        return std::abs(E1_plus) <= std::abs(E1_minus) ? E1_plus : E1_minus;
    }
};

// k smallest eigenpairs of the second-order Dirichlet Laplacian on the
// interior of a spatial grid, ascending in lambda. Dense solve when the
// interior dimension is <= 2000, Lanczos with full reorthogonalization
// otherwise. Deterministic: fixed seed, fixed reduction order.
std::vector<EigenPair> laplacian_eigs(const Grid& spatial, int k);

// E2 = -gamma E1^2 / (2 c^2 hbar^2) + m c^2 - E1.
double dispersion_E2(double E1, const PhysicalConstants& consts);

// Both real roots of the dispersion relation for E2 = -gamma lambda / 2.
DispersionRoots solve_E1(double lambda, const PhysicalConstants& consts);

// Separable state phi(x, t) = exp(-i E1 t / hbar) phi2(x) sampled on the
// space-time grid with time axis x0 = c t.
ScalarField stationary_state(const EigenPair& pair, double E1, const Axis& time_axis,
                             const PhysicalConstants& consts);

} // namespace kgv
