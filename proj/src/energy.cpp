#include "kgvar/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kgv {

namespace {

// trapezoid weight along the time axis, in t units (dx0 = c dt)
double time_weight(const Grid& g, int it, double c) {
    const double dt = g.spacing(0) / c;
    return (it == 0 || it == g.axis(0).n - 1) ? 0.5 * dt : dt;
}

bool is_interior(const Grid& g, std::size_t p) {
    for (int a = 0; a < g.dim(); ++a) {
        const auto i = static_cast<int>(p / g.stride(a)) % g.axis(a).n;
        if (i == 0 || i == g.axis(a).n - 1)
            return false;
    }
    return true;
}

} // namespace

Velocity velocity(const VectorField& r, const PhysicalConstants& consts) {
    consts.validate();
    if (!r.grid.has_time_axis())
        throw ArgumentError("velocity: r must live on a space-time grid");
    if (r.codim != 3 && r.codim != 4)
        throw ArgumentError("velocity: r.codim must be 3 or 4");
    const int off = r.codim == 4 ? 1 : 0; // spatial components
    VectorField dr0 = partial(r, 0);      // d/dx0

    Velocity out{ScalarField(r.grid), VectorField(r.grid, 3)};
    for (std::size_t p = 0; p < r.grid.size(); ++p) {
        double v2 = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double vk = consts.c * dr0.at(p)[off + k];
            out.dr_dt.at(p)[k] = vk;
            v2 += vk * vk;
        }
        const double v = std::sqrt(v2);
        if (v >= consts.c)
            throw SuperluminalError("velocity: |v| >= c at point " + std::to_string(p));
        out.speed.values[p] = v;
    }
    return out;
}

EnergyBreakdown newtonian_action(const VectorField& r, const ScalarField& phi,
                                 std::span<const double> E_of_t,
                                 const PhysicalConstants& consts) {
    consts.validate();
    const Grid& g = r.grid;
    if (!g.has_time_axis() || g.dim() != 4)
        throw ArgumentError("newtonian_action: r must live on a 3+1 space-time grid");
    if (r.codim != 3)
        throw ArgumentError("newtonian_action: r.codim must be 3");
    if (phi.grid != g)
        throw ArgumentError("newtonian_action: phi grid mismatch");
    const int nt = g.axis(0).n;
    if (E_of_t.size() != static_cast<std::size_t>(nt))
        throw ArgumentError("newtonian_action: E(t) series length must match time samples");

    VectorField r_t = partial(r, 0); // d/dx0; dX/dt = c * this

    EnergyBreakdown out;
    for (int it = 0; it < nt; ++it) {
        VectorField rs = time_slice(r, it);
        ScalarField ps = time_slice(phi, it);
        auto basis = tangent_basis(rs);
        MetricData m = metric(basis, Signature::Euclidean);
        ChristoffelField gam = christoffel(rs, m);
        ScalarField rhat = curvature_density_first(ps, rs, m, gam);
        ScalarField sqrtg = m.sqrt_abs_det_field();

        // spatial integrals on the slice
        double kin = 0.0, norm = 0.0, curv = 0.0;
        const std::size_t base = static_cast<std::size_t>(it) * g.stride(0);
        for (std::size_t q = 0; q < m.grid.size(); ++q) {
            const double w = quadrature_weight(m.grid, q) * sqrtg.values[q].real();
            const double abs2 = std::norm(ps.values[q]);
            double rt2 = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double vk = consts.c * r_t.at(base + q)[k];
                rt2 += vk * vk;
            }
            kin += w * consts.m * abs2 * rt2;
            norm += w * abs2;
            curv += w * rhat.values[q].real();
        }
        const double wt = time_weight(g, it, consts.c);
        out.kinetic += -0.5 * wt * kin;
        out.curvature += 0.5 * consts.gamma * wt * curv;
        out.multiplier_term += -consts.m * wt * E_of_t[static_cast<std::size_t>(it)] * (norm - 1.0);
        out.constraint = std::max(out.constraint, std::abs(consts.m * norm - consts.m));
    }
    return out;
}

EnergyBreakdown relativistic_action(const VectorField& r, const ScalarField& R,
                                    const PhysicalConstants& consts) {
    consts.validate();
    const Grid& g = r.grid;
    if (!g.has_time_axis() || g.dim() != 4)
        throw ArgumentError("relativistic_action: r must live on a 3+1 space-time grid");
    if (r.codim != 4)
        throw ArgumentError("relativistic_action: r.codim must be 4, r = (ct, X)");
    if (R.grid != g)
        throw ArgumentError("relativistic_action: R grid mismatch");

    auto basis = tangent_basis(r);
    MetricData m = metric(basis, Signature::Minkowski);
    ChristoffelField gam = christoffel(r, m);

    ScalarField phi(g);
    const double sqm = std::sqrt(consts.m);
    for (std::size_t p = 0; p < g.size(); ++p)
        phi.values[p] = R.values[p] / sqm;
    ScalarField rhat = curvature_density_first(phi, r, m, gam);

    Velocity vel = velocity(r, consts);

    EnergyBreakdown out;
    const int nt = g.axis(0).n;
    const Grid sg = g.spatial();
    for (int it = 0; it < nt; ++it) {
        double rest = 0.0, norm = 0.0, curv = 0.0;
        const std::size_t base = static_cast<std::size_t>(it) * g.stride(0);
        for (std::size_t q = 0; q < sg.size(); ++q) {
            const std::size_t p = base + q;
            const double w = quadrature_weight(sg, q) * m.sqrt_abs_det(p);
            const double abs2 = std::norm(R.values[p]);
            const double v = vel.speed.values[p].real();
            rest += w * abs2 * std::sqrt(1.0 - (v * v) / (consts.c * consts.c));
            norm += w * abs2;
            curv += w * rhat.values[p].real();
        }
        const double wt = time_weight(g, it, consts.c);
        out.kinetic += consts.c * consts.c * wt * rest;
        out.curvature += 0.5 * consts.gamma * wt * curv;
        out.constraint = std::max(out.constraint, std::abs(norm - consts.m));
    }
    return out;
}

std::vector<double> mass_constraint_residual(const ScalarField& R, const MetricData& m,
                                             const PhysicalConstants& consts) {
    consts.validate();
    const Grid& g = R.grid;
    if (m.grid != g)
        throw ArgumentError("mass_constraint_residual: metric grid mismatch");
    if (!g.has_time_axis())
        throw ArgumentError("mass_constraint_residual: fields must live on a space-time grid");
    const int nt = g.axis(0).n;
    const Grid sg = g.spatial();
    std::vector<double> res(static_cast<std::size_t>(nt));
    for (int it = 0; it < nt; ++it) {
        const std::size_t base = static_cast<std::size_t>(it) * g.stride(0);
        double norm = 0.0;
        for (std::size_t q = 0; q < sg.size(); ++q)
            norm += quadrature_weight(sg, q) * std::norm(R.values[base + q]) * m.sqrt_abs_det(base + q);
        res[static_cast<std::size_t>(it)] = norm - consts.m;
    }
    return res;
}

namespace {

// (gamma/2)(phi_tt/c^2 - Lap phi) + m c^2 phi on interior points;
// phi_tt/c^2 = d^2 phi / dx0^2 since x0 = c t.
ScalarField kg_operator(const ScalarField& phi, const PhysicalConstants& consts) {
    const Grid& g = phi.grid;
    if (!g.has_time_axis())
        throw ArgumentError("kg residual: phi must live on a space-time grid");
    ScalarField out(g);
    ScalarField wave = second_partial(phi, 0, 0);
    for (int k = 1; k < g.dim(); ++k) {
        ScalarField d2 = second_partial(phi, k, k);
        for (std::size_t p = 0; p < g.size(); ++p)
            wave.values[p] -= d2.values[p];
    }
    const double mc2 = consts.m * consts.c * consts.c;
    for (std::size_t p = 0; p < g.size(); ++p)
        out.values[p] = 0.5 * consts.gamma * wave.values[p] + mc2 * phi.values[p];
    return out;
}

} // namespace

ScalarField kg_residual_field(const ScalarField& phi, std::span<const double> E1_of_t,
                              const PhysicalConstants& consts) {
    consts.validate();
    const Grid& g = phi.grid;
    ScalarField res = kg_operator(phi, consts);
    if (E1_of_t.size() != static_cast<std::size_t>(g.axis(0).n))
        throw ArgumentError("kg_residual: E1(t) series length must match time samples");
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (!is_interior(g, p)) {
            res.values[p] = 0.0;
            continue;
        }
        const auto it = static_cast<std::size_t>(p / g.stride(0));
        res.values[p] -= E1_of_t[it] * phi.values[p];
    }
    return res;
}

double kg_residual(const ScalarField& phi, std::span<const double> E1_of_t,
                   const PhysicalConstants& consts) {
    return interior_l2(kg_residual_field(phi, E1_of_t, consts));
}

ScalarField skg_residual_field(const ScalarField& phi, const PhysicalConstants& consts) {
    consts.validate();
    const Grid& g = phi.grid;
    ScalarField res = kg_operator(phi, consts);
    ScalarField phi_t = partial(phi, 0); // d/dx0; phi_t = c * this
    const Complex ihc(0.0, consts.hbar * consts.c);
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (!is_interior(g, p)) {
            res.values[p] = 0.0;
            continue;
        }
        res.values[p] -= ihc * phi_t.values[p];
    }
    return res;
}

double skg_residual(const ScalarField& phi, const PhysicalConstants& consts) {
    return interior_l2(skg_residual_field(phi, consts));
}

double interior_l2(const ScalarField& f) {
    const Grid& g = f.grid;
    double cell = 1.0;
    for (int a = 0; a < g.dim(); ++a)
        cell *= g.spacing(a);
    double s = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p)
        if (is_interior(g, p))
            s += std::norm(f.values[p]);
    return std::sqrt(s * cell);
}

} // namespace kgv
