#pragma once

#include <span>
#include <vector>

#include "kgvar/constants.hpp"
#include "kgvar/geometry.hpp"
#include "kgvar/grid.hpp"

namespace kgv {

// Terms of an action functional, stored with the signs they carry in the
// assembled J so that tests can target individual terms.
struct EnergyBreakdown {
    double kinetic = 0.0;         // signed kinetic / rest-energy term
    double curvature = 0.0;       // +(gamma/2) integral of R^ with metric weight
    double constraint = 0.0;      // max |mass-constraint residual| over time samples
    double multiplier_term = 0.0; // -m int E(t) (int |phi|^2 sqrt(g) - 1) dt

    double total() const { return kinetic + curvature + multiplier_term; }
};

struct Velocity {
    ScalarField speed;  // |dX/dt| per point, real
    VectorField dr_dt;  // spatial components dX_k/dt
};

// Time derivative of the spatial components of r on a space-time grid
// (axis 0 carries x0 = c t). Throws SuperluminalError when v >= c.
Velocity velocity(const VectorField& r, const PhysicalConstants& consts);

// Newtonian action: r has codim 3 on a space-time grid, Euclidean spatial
// metric per time slice.
//   J = -1/2 int m|phi|^2 |r_t|^2 sqrt(g) + (gamma/2) int R^ sqrt(g)
//       - m int E(t) (int |phi|^2 sqrt(g) dx - 1) dt.
EnergyBreakdown newtonian_action(const VectorField& r, const ScalarField& phi,
                                 std::span<const double> E_of_t,
                                 const PhysicalConstants& consts);

// Relativistic action: r = (ct, X1, X2, X3) with codim 4 on a 4-axis
// space-time grid, Minkowski signature.
//   J1 = c^2 int |R|^2 sqrt(1 - v^2/c^2) sqrt(-g) + (gamma/2) int R^ sqrt(-g).
EnergyBreakdown relativistic_action(const VectorField& r, const ScalarField& R,
                                    const PhysicalConstants& consts);

// Per-time-sample residual int |R|^2 sqrt|g| dx - m.
std::vector<double> mass_constraint_residual(const ScalarField& R, const MetricData& m,
                                             const PhysicalConstants& consts);

// Flat-space Klein-Gordon residual
//   (gamma/2)(phi_tt / c^2 - Lap phi) + m c^2 phi - E1(t) phi
// evaluated on interior points only (phi = 0 on the boundary).
ScalarField kg_residual_field(const ScalarField& phi, std::span<const double> E1_of_t,
                              const PhysicalConstants& consts);
double kg_residual(const ScalarField& phi, std::span<const double> E1_of_t,
                   const PhysicalConstants& consts);

// Schroedinger-Klein-Gordon residual
//   (gamma/2)(phi_tt / c^2 - Lap phi) + m c^2 phi - i hbar phi_t.
ScalarField skg_residual_field(const ScalarField& phi, const PhysicalConstants& consts);
double skg_residual(const ScalarField& phi, const PhysicalConstants& consts);

// Scaled l2 norm over interior points: sqrt(sum |f|^2 prod_a h_a).
double interior_l2(const ScalarField& f);

} // namespace kgv
