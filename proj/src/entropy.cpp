#include "kgvar/entropy.hpp"

#include <cmath>

namespace kgv {

namespace {

double neg_wlnw(double w) {
    if (w <= 0.0 || w >= 1.0) // 0 ln 0 := 0; W = 1 gives ln 1 = 0
        return 0.0;
    return -w * std::log(w);
}

} // namespace

void EnergyProfile::validate() const {
    if (!E_field.grid.has_time_axis())
        throw ArgumentError("EnergyProfile: E_field must live on a space-time grid");
    if (phi.grid != E_field.grid.spatial())
        throw ArgumentError("EnergyProfile: phi must live on the spatial part of E_field's grid");
}

EnergyProfile make_profile(const ScalarField& E1_field, const ScalarField& phi, double mu) {
    EnergyProfile p{E1_field, phi, mu};
    p.validate();
    for (std::size_t q = 0; q < E1_field.grid.size(); ++q) {
        const std::size_t s = q % E1_field.grid.stride(0);
        p.E_field.values[q] = E1_field.values[q].real() - mu * std::norm(phi.values[s]);
    }
    return p;
}

double sublevel_W(const EnergyProfile& profile, double E) {
    profile.validate();
    const Grid& g = profile.E_field.grid;
    const Grid sg = g.spatial();
    const double T = g.axis(0).hi - g.axis(0).lo; // 1/T cancels the dx0/c scale
    const int nt = g.axis(0).n;
    double acc = 0.0;
    for (int it = 0; it < nt; ++it) {
        const double wt = (it == 0 || it == nt - 1) ? 0.5 * g.spacing(0) : g.spacing(0);
        const std::size_t base = static_cast<std::size_t>(it) * g.stride(0);
        double slice = 0.0;
        for (std::size_t q = 0; q < sg.size(); ++q) {
            if (profile.E_field.values[base + q].real() <= E)
                slice += quadrature_weight(sg, q) * std::norm(profile.phi.values[q]);
        }
        acc += wt * slice;
    }
    return acc / T;
}

double entropy_S(const EnergyProfile& profile, double E0, double E, int n_levels) {
    if (E < E0)
        throw ArgumentError("entropy_S: E must be >= E0");
    if (n_levels < 2)
        throw ArgumentError("entropy_S: n_levels must be >= 2");
    if (E == E0)
        return 0.0;
    const double dE = (E - E0) / (n_levels - 1);
    double s = 0.0;
    for (int i = 0; i < n_levels; ++i) {
        const double w = (i == 0 || i == n_levels - 1) ? 0.5 * dE : dE;
        s += w * neg_wlnw(sublevel_W(profile, E0 + i * dE));
    }
    return s;
}

double inverse_temperature(const EnergyProfile& profile, double E) {
    return neg_wlnw(sublevel_W(profile, E));
}

} // namespace kgv
