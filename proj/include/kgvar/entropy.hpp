#pragma once

#include "kgvar/grid.hpp"

namespace kgv {

// Inputs of the entropy functional: an energy density E(x, t) over a
// space-time grid and the normalized spatial wave function it derives from,
// E(x, t) = E1(x, t) - mu |phi(x)|^2.
struct EnergyProfile {
    ScalarField E_field; // real-valued, space-time grid
    ScalarField phi;     // spatial grid matching E_field's spatial axes
    double mu = 0.0;

    void validate() const;
};

EnergyProfile make_profile(const ScalarField& E1_field, const ScalarField& phi, double mu);

// Sublevel measure W(E) = (1/T) int int_{E(x,t) <= E} |phi(x)|^2 dx dt.
double sublevel_W(const EnergyProfile& profile, double E);

// S(E) = -int_{E0}^{E} W ln W dE^, trapezoid over n_levels samples,
// with the convention 0 ln 0 = 0.
double entropy_S(const EnergyProfile& profile, double E0, double E, int n_levels);

// dS/dE = 1/T^ = -W(E) ln W(E); returns 0 where W is 0 or 1.
double inverse_temperature(const EnergyProfile& profile, double E);

} // namespace kgv
