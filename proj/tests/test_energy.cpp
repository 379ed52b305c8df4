#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kgvar/energy.hpp"

using namespace kgv;
using std::numbers::pi;

namespace {

const PhysicalConstants kNd = PhysicalConstants::nondimensional();

// space-time grid over the unit cube, x0 = c t with c = 1
Grid st_grid(int nx, int nt, double T = 1.0) {
    return Grid({{0.0, T, nt}, {0.0, 1.0, nx}, {0.0, 1.0, nx}, {0.0, 1.0, nx}}, true);
}

VectorField static_identity(const Grid& st) {
    return VectorField::sample(st, 3, [](std::span<const double> x, std::span<double> out) {
        out[0] = x[1];
        out[1] = x[2];
        out[2] = x[3];
    });
}

// first Dirichlet mode of the unit cube, normalized analytically
Complex mode1(std::span<const double> x) {
    return Complex(std::sqrt(8.0) * std::sin(pi * x[0]) * std::sin(pi * x[1]) *
                   std::sin(pi * x[2]));
}

} // namespace

TEST_CASE("velocity of a static position field is zero") {
    Grid st = st_grid(3, 4);
    Velocity v = velocity(static_identity(st), kNd);
    for (const Complex& s : v.speed.values)
        CHECK(std::abs(s) < 1e-12);
}

TEST_CASE("velocity of a uniform translation is |u| exactly") {
    Grid st = st_grid(3, 5);
    const double u = 0.37;
    VectorField r = VectorField::sample(st, 3, [&](std::span<const double> x, std::span<double> out) {
        out[0] = x[1] + u * x[0];
        out[1] = x[2];
        out[2] = x[3];
    });
    Velocity v = velocity(r, kNd);
    for (const Complex& s : v.speed.values)
        CHECK(s.real() == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("velocity of a circular orbit converges to omega") {
    const double omega = 0.4;
    auto err_at = [&](int nt) {
        Grid st = st_grid(3, nt);
        VectorField r = VectorField::sample(st, 3, [&](std::span<const double> x, std::span<double> out) {
            out[0] = x[1] + 0.1 * std::cos(omega * x[0]);
            out[1] = x[2] + 0.1 * std::sin(omega * x[0]);
            out[2] = x[3];
        });
        Velocity v = velocity(r, kNd);
        double e = 0.0;
        for (const Complex& s : v.speed.values)
            e = std::max(e, std::abs(s.real() - 0.1 * omega));
        return e;
    };
    CHECK(std::log2(err_at(9) / err_at(17)) >= 1.9);
}

TEST_CASE("velocity rejects superluminal motion") {
    Grid st = st_grid(3, 4);
    VectorField r = VectorField::sample(st, 3, [](std::span<const double> x, std::span<double> out) {
        out[0] = x[1] + 2.0 * x[0]; // u = 2 > c = 1
        out[1] = x[2];
        out[2] = x[3];
    });
    CHECK_THROWS_AS(velocity(r, kNd), SuperluminalError);
}

TEST_CASE("newtonian action vanishes for a flat static normalized constant") {
    Grid st = st_grid(6, 4);
    VectorField r = static_identity(st);
    ScalarField phi = ScalarField::sample(st, [](auto) { return Complex(1.0); });
    std::vector<double> E(4, 2.5);
    EnergyBreakdown b = newtonian_action(r, phi, E, kNd);
    CHECK(std::abs(b.kinetic) < 1e-12);
    CHECK(std::abs(b.curvature) < 1e-12);
    CHECK(std::abs(b.multiplier_term) < 1e-12);
    CHECK(b.constraint < 1e-12);
}

TEST_CASE("newtonian curvature term of the first Dirichlet mode is (gamma/2) 3 pi^2 T") {
    const double T = 0.8;
    Grid st = st_grid(24, 5, T);
    VectorField r = static_identity(st);
    ScalarField phi = ScalarField::sample(st, [](std::span<const double> x) {
        return mode1(x.subspan(1));
    });
    std::vector<double> E(5, 0.0);
    EnergyBreakdown b = newtonian_action(r, phi, E, kNd);
    const double want = 0.5 * kNd.gamma * 3.0 * pi * pi * T;
    CHECK(b.curvature == doctest::Approx(want).epsilon(0.01));
    CHECK(std::abs(b.kinetic) < 1e-12);
}

TEST_CASE("flat-limit newtonian J/T matches the Schroedinger functional") {
    const double T = 1.0;
    Grid st = st_grid(20, 4, T);
    VectorField r = static_identity(st);
    ScalarField phi = ScalarField::sample(st, [](std::span<const double> x) {
        return mode1(x.subspan(1));
    });
    const double E0 = 1.7;
    std::vector<double> E(4, E0);
    EnergyBreakdown b = newtonian_action(r, phi, E, kNd);

    // independent quadrature of the reduced functional on one slice
    Grid sg = st.spatial();
    ScalarField ps = time_slice(phi, 0);
    double grad2 = 0.0, norm = 0.0;
    std::vector<ScalarField> d;
    for (int a = 0; a < 3; ++a)
        d.push_back(partial(ps, a));
    for (std::size_t q = 0; q < sg.size(); ++q) {
        const double w = quadrature_weight(sg, q);
        for (int a = 0; a < 3; ++a)
            grad2 += w * std::norm(d[static_cast<std::size_t>(a)].values[q]);
        norm += w * std::norm(ps.values[q]);
    }
    const double jtilde = 0.5 * kNd.gamma * grad2 - E0 * (norm - 1.0);
    CHECK(b.total() / T == doctest::Approx(jtilde).epsilon(1e-10));
}

namespace {

VectorField flat_spacetime(const Grid& st) {
    return VectorField::sample(st, 4, [](std::span<const double> x, std::span<double> out) {
        for (int i = 0; i < 4; ++i)
            out[i] = x[static_cast<std::size_t>(i)];
    });
}

} // namespace

TEST_CASE("relativistic rest term of a normalized static mode is m c^2 T") {
    const double T = 1.0;
    Grid st = st_grid(16, 5, T);
    VectorField r = flat_spacetime(st);
    ScalarField R = ScalarField::sample(st, [](std::span<const double> x) {
        return std::sqrt(kNd.m) * mode1(x.subspan(1));
    });
    EnergyBreakdown b = relativistic_action(r, R, kNd);
    CHECK(b.kinetic == doctest::Approx(kNd.m * kNd.c * kNd.c * T).epsilon(0.01));
    CHECK(b.constraint < 1e-10); // separable sine modes integrate exactly
}

TEST_CASE("relativistic action of R = 0 vanishes") {
    Grid st = st_grid(5, 4);
    EnergyBreakdown b = relativistic_action(flat_spacetime(st), ScalarField(st), kNd);
    CHECK(b.kinetic == 0.0);
    CHECK(b.curvature == 0.0);
    CHECK(b.constraint == doctest::Approx(kNd.m));
}

TEST_CASE("relativistic curvature term of a stationary state") {
    const double T = 1.0, E1 = 1.0;
    Grid st = st_grid(16, 17, T);
    VectorField r = flat_spacetime(st);
    ScalarField R = ScalarField::sample(st, [&](std::span<const double> x) {
        const Complex phase = std::exp(Complex(0.0, -E1 * x[0] / kNd.hbar)); // t = x0, c = 1
        return std::sqrt(kNd.m) * phase * mode1(x.subspan(1));
    });
    EnergyBreakdown b = relativistic_action(r, R, kNd);
    const double c2h2 = kNd.c * kNd.c * kNd.hbar * kNd.hbar;
    const double want = 0.5 * kNd.gamma * T * (-E1 * E1 / c2h2 + 3.0 * pi * pi);
    CHECK(b.curvature == doctest::Approx(want).epsilon(0.02));
}

TEST_CASE("mass constraint residual of a normalized mode is small") {
    Grid st = st_grid(16, 4);
    VectorField r = flat_spacetime(st);
    MetricData m = metric(tangent_basis(r), Signature::Minkowski);
    ScalarField R = ScalarField::sample(st, [](std::span<const double> x) {
        return std::sqrt(kNd.m) * mode1(x.subspan(1));
    });
    for (double res : mass_constraint_residual(R, m, kNd))
        CHECK(std::abs(res) < 1e-4);
}

TEST_CASE("mass constraint residual of R = 0 is -m") {
    Grid st = st_grid(5, 4);
    VectorField r = flat_spacetime(st);
    MetricData m = metric(tangent_basis(r), Signature::Minkowski);
    for (double res : mass_constraint_residual(ScalarField(st), m, kNd))
        CHECK(res == doctest::Approx(-kNd.m));
}

TEST_CASE("mass constraint residual converges at second order") {
    // exponential profile: trapezoid error genuinely O(h^2)
    auto res_at = [](int nx) {
        Grid st({{0.0, 1.0, 3}, {0.0, 1.0, nx}}, true);
        VectorField r = VectorField::sample(st, 2, [](std::span<const double> x, std::span<double> out) {
            out[0] = x[0];
            out[1] = x[1];
        });
        MetricData m = metric(tangent_basis(r), Signature::Minkowski);
        const double norm = (std::exp(2.0) - 1.0) / 2.0;
        ScalarField R = ScalarField::sample(st, [&](std::span<const double> x) {
            return Complex(std::exp(x[1]) / std::sqrt(norm));
        });
        return std::abs(mass_constraint_residual(R, m, kNd)[1]);
    };
    CHECK(res_at(17) / res_at(33) >= 3.5);
}

namespace {

// stationary state phi = exp(-i E1 t / hbar) phi2 with the analytic cube mode
ScalarField analytic_state(const Grid& st, double E1) {
    return ScalarField::sample(st, [&](std::span<const double> x) {
        const Complex phase = std::exp(Complex(0.0, -E1 * x[0] / kNd.hbar));
        return phase * mode1(x.subspan(1));
    });
}

// E1 root of the dispersion relation for lambda = 3 pi^2 (nondimensional):
// E1^2/2 + E1 - 1 - 3 pi^2 / 2 = 0
double analytic_E1() {
    const double disc = 1.0 + 2.0 * (1.0 + 1.5 * pi * pi);
    return -1.0 + std::sqrt(disc);
}

} // namespace

TEST_CASE("kg residual of the manufactured stationary state converges") {
    const double E1 = analytic_E1();
    auto res_at = [&](int n) {
        Grid st = st_grid(n, n);
        std::vector<double> E(static_cast<std::size_t>(n), E1);
        return kg_residual(analytic_state(st, E1), E, kNd);
    };
    const double r8 = res_at(9), r16 = res_at(17), r32 = res_at(33);
    CHECK(r8 / r16 >= 3.5);
    CHECK(r16 / r32 >= 3.5);
}

TEST_CASE("kg residual of phi = 0 is zero") {
    Grid st = st_grid(5, 4);
    std::vector<double> E(4, 1.0);
    CHECK(kg_residual(ScalarField(st), E, kNd) == 0.0);
}

TEST_CASE("kg residual matches an independent direct evaluation") {
    Grid st = st_grid(7, 6);
    ScalarField phi = ScalarField::sample(st, [](std::span<const double> x) {
        return Complex(std::sin(pi * x[1]) * std::sin(pi * x[2]) * std::sin(pi * x[3]) *
                           std::cos(0.5 * x[0]),
                       0.3 * std::sin(2.0 * pi * x[1]) * std::sin(pi * x[2]) *
                           std::sin(pi * x[3]));
    });
    std::vector<double> E1(6, 0.9);
    ScalarField got = kg_residual_field(phi, E1, kNd);

    // second implementation of the same stencil expression:
    // plain 3-point second derivative, evaluated only where it is central
    auto d2 = [&](const std::vector<Complex>& v, int axis) {
        std::vector<Complex> out(v.size());
        const std::size_t s = st.stride(axis);
        const int n = st.axis(axis).n;
        const double h2 = st.spacing(axis) * st.spacing(axis);
        std::vector<int> ix(4);
        for (std::size_t p = 0; p < v.size(); ++p) {
            st.unflatten(p, ix);
            const int i = ix[static_cast<std::size_t>(axis)];
            if (i > 0 && i < n - 1)
                out[p] = (v[p + s] - 2.0 * v[p] + v[p - s]) / h2;
        }
        return out;
    };
    std::vector<int> idx(4);
    double scale = 0.0;
    for (const Complex& v : got.values)
        scale = std::max(scale, std::abs(v));
    std::vector<Complex> tt = d2(phi.values, 0);
    std::vector<std::vector<Complex>> lap;
    for (int a = 1; a < 4; ++a)
        lap.push_back(d2(phi.values, a));
    for (std::size_t p = 0; p < st.size(); ++p) {
        st.unflatten(p, idx);
        bool interior = true;
        for (int a = 0; a < 4; ++a)
            interior = interior && idx[static_cast<std::size_t>(a)] > 0 &&
                       idx[static_cast<std::size_t>(a)] < st.axis(a).n - 1;
        Complex want(0.0);
        if (interior) {
            Complex wave = tt[p];
            for (const auto& l : lap)
                wave -= l[p];
            want = 0.5 * kNd.gamma * wave + kNd.m * kNd.c * kNd.c * phi.values[p] -
                   E1[0] * phi.values[p];
        }
        CHECK(std::abs(got.values[p] - want) <= 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("skg residual of the dispersion-matched state converges") {
    const double E1 = analytic_E1();
    auto res_at = [&](int n) {
        Grid st = st_grid(n, n);
        return skg_residual(analytic_state(st, E1), kNd);
    };
    CHECK(res_at(9) / res_at(17) >= 3.5);
}

TEST_CASE("skg residual of phi = 0 is zero") {
    Grid st = st_grid(5, 4);
    CHECK(skg_residual(ScalarField(st), kNd) == 0.0);
}

TEST_CASE("skg residual is bounded away from zero off the dispersion root") {
    const double E1 = analytic_E1();
    const double omega_off = (E1 + 1.0) / kNd.hbar;
    Grid st = st_grid(17, 17);
    const double on = skg_residual(analytic_state(st, E1), kNd);
    const double off = skg_residual(analytic_state(st, omega_off * kNd.hbar), kNd);
    // the mismatch in the zeroth-order term dominates; it cannot vanish
    CHECK(off > 10.0 * on);
    CHECK(off > 1.0);
}

TEST_CASE("kg and skg residuals agree after the discrete time substitution") {
    const double E1 = analytic_E1();
    Grid st = st_grid(9, 9);
    ScalarField phi = analytic_state(st, E1);
    // i hbar D_t exp(-i E1 t / hbar) = (hbar/h_t) sin(E1 h_t / hbar) phi
    const double ht = st.spacing(0) / kNd.c;
    const double E1_disc = kNd.hbar * std::sin(E1 * ht / kNd.hbar) / ht;
    std::vector<double> E(9, E1_disc);
    ScalarField a = kg_residual_field(phi, E, kNd);
    ScalarField b = skg_residual_field(phi, kNd);
    double scale = 0.0;
    for (const Complex& v : phi.values)
        scale = std::max(scale, std::abs(v));
    for (std::size_t p = 0; p < st.size(); ++p)
        CHECK(std::abs(a.values[p] - b.values[p]) <= 1e-12 * scale);
    CHECK(kg_residual(phi, E, kNd) == doctest::Approx(skg_residual(phi, kNd)).epsilon(1e-12));
}

TEST_CASE("energy terms are invariant under a global phase") {
    Grid st = st_grid(10, 4);
    VectorField r = static_identity(st);
    ScalarField phi = ScalarField::sample(st, [](std::span<const double> x) {
        return Complex(std::sin(pi * x[1]) * std::sin(pi * x[2]) * std::sin(pi * x[3]),
                       0.4 * std::sin(2 * pi * x[1]) * std::sin(pi * x[2]) * std::sin(pi * x[3]));
    });
    ScalarField rotated(st);
    const Complex phase = std::exp(Complex(0.0, 1.234));
    for (std::size_t p = 0; p < st.size(); ++p)
        rotated.values[p] = phase * phi.values[p];
    std::vector<double> E(4, 0.6);
    EnergyBreakdown a = newtonian_action(r, phi, E, kNd);
    EnergyBreakdown b = newtonian_action(r, rotated, E, kNd);
    CHECK(a.curvature == doctest::Approx(b.curvature).epsilon(1e-12));
    CHECK(a.kinetic == doctest::Approx(b.kinetic).epsilon(1e-12));
    CHECK(a.multiplier_term == doctest::Approx(b.multiplier_term).epsilon(1e-12));
}

TEST_CASE("curvature term scales quadratically in the amplitude") {
    Grid st = st_grid(8, 4);
    VectorField r = static_identity(st);
    ScalarField phi = ScalarField::sample(st, [](std::span<const double> x) {
        return Complex(std::sin(pi * x[1]) * std::sin(pi * x[2]) * std::sin(pi * x[3]));
    });
    ScalarField scaled(st);
    for (std::size_t p = 0; p < st.size(); ++p)
        scaled.values[p] = 3.0 * phi.values[p];
    std::vector<double> E(4, 0.0);
    EnergyBreakdown a = newtonian_action(r, phi, E, kNd);
    EnergyBreakdown b = newtonian_action(r, scaled, E, kNd);
    CHECK(b.curvature == doctest::Approx(9.0 * a.curvature).epsilon(1e-12));
}

TEST_CASE("Gateaux derivative matches the discrete Euler-Lagrange inner product") {
    Grid st = st_grid(12, 5);
    VectorField r = static_identity(st);
    std::mt19937 rng(42);
    std::normal_distribution<double> dist;

    // smooth phi, zero on the spatial boundary
    ScalarField phi = ScalarField::sample(st, [](std::span<const double> x) {
        return Complex(std::sin(pi * x[1]) * std::sin(pi * x[2]) * std::sin(pi * x[3]),
                       0.5 * std::sin(2 * pi * x[1]) * std::sin(2 * pi * x[2]) * std::sin(pi * x[3]));
    });
    // random direction supported away from the spatial boundary
    ScalarField psi(st);
    std::vector<int> idx(4);
    for (std::size_t p = 0; p < st.size(); ++p) {
        st.unflatten(p, idx);
        bool deep = true;
        for (int a = 1; a < 4; ++a)
            deep = deep && idx[static_cast<std::size_t>(a)] >= 3 &&
                   idx[static_cast<std::size_t>(a)] <= st.axis(a).n - 4;
        if (deep)
            psi.values[p] = Complex(dist(rng), dist(rng));
    }

    const double E0 = 0.8;
    std::vector<double> E(5, E0);
    auto J = [&](double eps) {
        ScalarField f(st);
        for (std::size_t p = 0; p < st.size(); ++p)
            f.values[p] = phi.values[p] + eps * psi.values[p];
        return newtonian_action(r, f, E, kNd).total();
    };
    const double eps = 1e-3;
    const double fd = (J(eps) - J(-eps)) / (2.0 * eps);

    // <psi, L[phi]> with L = -gamma sum_k D_k D_k phi - 2 m E phi; the
    // composed first-derivative stencil is the exact discrete adjoint here
    ScalarField L(st);
    for (int k = 1; k < 4; ++k) {
        ScalarField d2 = partial(partial(phi, k), k);
        for (std::size_t p = 0; p < st.size(); ++p)
            L.values[p] -= kNd.gamma * d2.values[p];
    }
    for (std::size_t p = 0; p < st.size(); ++p)
        L.values[p] -= 2.0 * kNd.m * E0 * phi.values[p];
    double ip = 0.0;
    for (std::size_t p = 0; p < st.size(); ++p)
        ip += quadrature_weight(st, p) * (std::conj(psi.values[p]) * L.values[p]).real();
    ip /= kNd.c; // dt = dx0 / c

    CHECK(fd == doctest::Approx(ip).epsilon(1e-6));
}
