#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kgvar/energy.hpp"
#include "kgvar/kg_solver.hpp"

using namespace kgv;
using std::numbers::pi;

namespace {

const PhysicalConstants kNd = PhysicalConstants::nondimensional();

Grid unit_box(int dim, int n) {
    std::vector<Axis> axes(static_cast<std::size_t>(dim), Axis{0.0, 1.0, n});
    return Grid(axes);
}

// eigenvalue of the 3-point Dirichlet Laplacian on the unit interval
double lambda_1d(int mode, double h) {
    return 2.0 / (h * h) * (1.0 - std::cos(mode * pi * h));
}

double quad_dot(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t p = 0; p < a.grid.size(); ++p)
        s += quadrature_weight(a.grid, p) * (std::conj(a.values[p]) * b.values[p]).real();
    return s;
}

// max-norm residual of -Lap_h phi = lambda phi over interior points,
// evaluated with an independent stencil loop
double stencil_residual(const EigenPair& ep) {
    const Grid& g = ep.phi2.grid;
    std::vector<int> idx(static_cast<std::size_t>(g.dim()));
    double res = 0.0, scale = 0.0;
    for (const Complex& v : ep.phi2.values)
        scale = std::max(scale, std::abs(v));
    for (std::size_t p = 0; p < g.size(); ++p) {
        g.unflatten(p, idx);
        bool interior = true;
        for (int a = 0; a < g.dim(); ++a)
            interior = interior && idx[static_cast<std::size_t>(a)] > 0 &&
                       idx[static_cast<std::size_t>(a)] < g.axis(a).n - 1;
        if (!interior)
            continue;
        Complex lap(0.0);
        for (int a = 0; a < g.dim(); ++a) {
            const double h2 = g.spacing(a) * g.spacing(a);
            lap += (ep.phi2.values[p + g.stride(a)] - 2.0 * ep.phi2.values[p] +
                    ep.phi2.values[p - g.stride(a)]) /
                   h2;
        }
        res = std::max(res, std::abs(-lap - ep.lambda * ep.phi2.values[p]));
    }
    return res / scale;
}

} // namespace

TEST_CASE("1D spectrum matches the closed form") {
    const int n = 7; // 5 interior points
    Grid g = unit_box(1, n);
    const double h = g.spacing(0);
    auto eigs = laplacian_eigs(g, 5);
    REQUIRE(eigs.size() == 5);
    for (int k = 1; k <= 5; ++k) {
        const auto& ep = eigs[static_cast<std::size_t>(k - 1)];
        CHECK(ep.lambda == doctest::Approx(lambda_1d(k, h)).epsilon(1e-10));
        // eigenvector sqrt(2) sin(k pi x), positive first component
        for (int i = 0; i < n; ++i) {
            const double want = std::sqrt(2.0) * std::sin(k * pi * g.coord(0, i));
            CHECK(std::abs(ep.phi2.values[static_cast<std::size_t>(i)] - want) < 1e-8);
        }
        CHECK(quad_dot(ep.phi2, ep.phi2) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("3D ground state on the dense path") {
    Grid g = unit_box(3, 12); // 1000 interior points, dense solve
    const double h = g.spacing(0);
    auto eigs = laplacian_eigs(g, 1);
    CHECK(eigs[0].lambda == doctest::Approx(3.0 * lambda_1d(1, h)).epsilon(1e-10));
    CHECK(eigs[0].lambda == doctest::Approx(3.0 * pi * pi).epsilon(0.02));
    CHECK(stencil_residual(eigs[0]) < 1e-8);
}

TEST_CASE("degenerate triple above the ground state is orthonormal") {
    Grid g = unit_box(3, 10);
    const double h = g.spacing(0);
    auto eigs = laplacian_eigs(g, 4);
    const double want = lambda_1d(2, h) + 2.0 * lambda_1d(1, h);
    for (int i = 1; i <= 3; ++i)
        CHECK(eigs[static_cast<std::size_t>(i)].lambda == doctest::Approx(want).epsilon(1e-10));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j) {
            const double d = quad_dot(eigs[static_cast<std::size_t>(i)].phi2,
                                      eigs[static_cast<std::size_t>(j)].phi2);
            CHECK(std::abs(d - (i == j ? 1.0 : 0.0)) < 1e-8);
        }
}

TEST_CASE("Lanczos path matches the closed form") {
    Grid g = unit_box(3, 15); // 2197 interior points, above the dense cutoff
    const double h = g.spacing(0);
    auto eigs = laplacian_eigs(g, 4);
    CHECK(eigs[0].lambda == doctest::Approx(3.0 * lambda_1d(1, h)).epsilon(1e-8));
    const double want2 = lambda_1d(2, h) + 2.0 * lambda_1d(1, h);
    for (int i = 1; i <= 3; ++i) {
        CHECK(eigs[static_cast<std::size_t>(i)].lambda == doctest::Approx(want2).epsilon(1e-8));
        CHECK(stencil_residual(eigs[static_cast<std::size_t>(i)]) < 1e-6);
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j)
            CHECK(std::abs(quad_dot(eigs[static_cast<std::size_t>(i)].phi2,
                                    eigs[static_cast<std::size_t>(j)].phi2)) < 1e-8);
}

TEST_CASE("eigensolve is deterministic") {
    Grid g = unit_box(3, 15);
    auto a = laplacian_eigs(g, 2);
    auto b = laplacian_eigs(g, 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].lambda == b[i].lambda);
        for (std::size_t p = 0; p < g.size(); ++p)
            CHECK(a[i].phi2.values[p] == b[i].phi2.values[p]);
    }
}

TEST_CASE("eigensolve argument validation") {
    Grid g = unit_box(2, 6);
    CHECK_THROWS_AS(laplacian_eigs(g, 0), ArgumentError);
    CHECK_THROWS_AS(laplacian_eigs(g, 17), ArgumentError); // 16 interior points
    Grid st({{0.0, 1.0, 4}, {0.0, 1.0, 4}}, true);
    CHECK_THROWS_AS(laplacian_eigs(st, 1), ArgumentError);
}

TEST_CASE("dispersion value at reference points") {
    CHECK(dispersion_E2(0.0, kNd) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dispersion_E2(1.0, kNd) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("dispersion roots at lambda = 0 are -1 +/- sqrt(3)") {
    DispersionRoots r = solve_E1(0.0, kNd);
    CHECK(r.E1_plus == doctest::Approx(-1.0 + std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r.E1_minus == doctest::Approx(-1.0 - std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r.principal() == r.E1_plus);
}

TEST_CASE("both roots satisfy the dispersion relation for random draws") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> lam(0.0, 100.0);
    std::uniform_real_distribution<double> par(0.5, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        PhysicalConstants pc{par(rng), par(rng), par(rng), par(rng)};
        const double lambda = lam(rng);
        DispersionRoots r = solve_E1(lambda, pc);
        const double want = -0.5 * pc.gamma * lambda;
        const double scale = std::max(1.0, std::abs(want));
        CHECK(std::abs(dispersion_E2(r.E1_plus, pc) - want) < 1e-12 * scale);
        CHECK(std::abs(dispersion_E2(r.E1_minus, pc) - want) < 1e-12 * scale);
        CHECK(r.E1_plus > r.E1_minus);
    }
}

TEST_CASE("roots agree with a bisection oracle") {
    const double lambda = 3.0 * pi * pi;
    DispersionRoots r = solve_E1(lambda, kNd);
    auto f = [&](double e) { return dispersion_E2(e, kNd) + 0.5 * kNd.gamma * lambda; };
    auto bisect = [&](double lo, double hi) {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if ((f(lo) > 0.0) == (f(mid) > 0.0))
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    CHECK(r.E1_plus == doctest::Approx(bisect(-1.0, 50.0)).epsilon(1e-10));
    CHECK(r.E1_minus == doctest::Approx(bisect(-50.0, -1.0)).epsilon(1e-10));
}

TEST_CASE("negative lambda is rejected") {
    CHECK_THROWS_AS(solve_E1(-1.0, kNd), ArgumentError);
}

TEST_CASE("stationary state restores phi2 at t = 0 and keeps its modulus") {
    Grid g = unit_box(2, 9);
    auto eigs = laplacian_eigs(g, 1);
    const double E1 = solve_E1(eigs[0].lambda, kNd).principal();
    ScalarField phi = stationary_state(eigs[0], E1, Axis{0.0, 1.0, 6}, kNd);
    CHECK(phi.grid.has_time_axis());
    CHECK(phi.grid.dim() == 3);

    ScalarField s0 = time_slice(phi, 0);
    for (std::size_t q = 0; q < g.size(); ++q)
        CHECK(std::abs(s0.values[q] - eigs[0].phi2.values[q]) < 1e-14);
    for (int it = 1; it < 6; ++it) {
        ScalarField s = time_slice(phi, it);
        for (std::size_t q = 0; q < g.size(); ++q)
            CHECK(std::abs(s.values[q]) ==
                  doctest::Approx(std::abs(eigs[0].phi2.values[q])).epsilon(1e-12));
    }
}

TEST_CASE("skg residual of the solver state converges in the time step") {
    Grid g = unit_box(2, 9);
    auto eigs = laplacian_eigs(g, 1);
    const double E1 = solve_E1(eigs[0].lambda, kNd).principal();
    auto res_at = [&](int nt) {
        ScalarField phi = stationary_state(eigs[0], E1, Axis{0.0, 1.0, nt}, kNd);
        return skg_residual(phi, kNd);
    };
    // spatial part satisfies the discrete eigenproblem exactly, so the
    // residual is pure time discretization error
    CHECK(res_at(9) / res_at(17) >= 3.5);
}
