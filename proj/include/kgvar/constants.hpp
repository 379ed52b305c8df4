#pragma once

#include "kgvar/errors.hpp"

namespace kgv {

// Physical constants of the model. gamma is the curvature coupling; in the
// quantum-mechanical convention gamma = hbar^2 / m.
struct PhysicalConstants {
    double m;     // mass [kg]
    double c;     // speed of light [m/s]
    double hbar;  // reduced Planck constant [J s]
    double gamma; // curvature coupling [J m^2]

    // Unit system with m = c = hbar = gamma = 1, used by all desk-scale
    // self-checks (SI scales like mc^2 float poorly against hbar^2 terms).
    static PhysicalConstants nondimensional() { return {1.0, 1.0, 1.0, 1.0}; }

    // SI constants for a particle of the given mass, gamma = hbar^2/m.
    static PhysicalConstants si(double mass) {
        const double c = 299792458.0;
        const double hbar = 1.054571817e-34;
        return {mass, c, hbar, hbar * hbar / mass};
    }

    void validate() const {
        if (!(m > 0.0 && c > 0.0 && hbar > 0.0 && gamma > 0.0))
            throw ArgumentError("physical constants must be strictly positive");
    }
};

} // namespace kgv
