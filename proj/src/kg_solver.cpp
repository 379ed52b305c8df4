#include "kgvar/kg_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <random>
#include <string>

namespace kgv {

namespace {

constexpr std::size_t kDenseLimit = 2000;
constexpr double kResidualTol = 1e-10;

// Interior-point indexing of a spatial grid (Dirichlet rows dropped).
struct InteriorMap {
    const Grid* grid;
    int dim;
    std::vector<int> ni;            // interior points per axis
    std::vector<std::size_t> strides;
    std::size_t size = 1;

    explicit InteriorMap(const Grid& g) : grid(&g), dim(g.dim()) {
        ni.resize(static_cast<std::size_t>(dim));
        strides.assign(static_cast<std::size_t>(dim), 1);
        for (int a = 0; a < dim; ++a)
            ni[static_cast<std::size_t>(a)] = g.axis(a).n - 2;
        for (int a = dim - 2; a >= 0; --a)
            strides[static_cast<std::size_t>(a)] =
                strides[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(ni[static_cast<std::size_t>(a + 1)]);
        for (int a = 0; a < dim; ++a)
            size *= static_cast<std::size_t>(ni[static_cast<std::size_t>(a)]);
    }

    // flat index in the full grid of interior point q
    std::size_t to_full(std::size_t q) const {
        std::size_t p = 0;
        for (int a = 0; a < dim; ++a) {
            const auto i = static_cast<int>(q / strides[static_cast<std::size_t>(a)]) %
                           ni[static_cast<std::size_t>(a)];
            p += static_cast<std::size_t>(i + 1) * grid->stride(a);
        }
        return p;
    }
};

// y = A x with A = -Lap_h (SPD) on interior points, Dirichlet boundary.
void apply_neg_laplacian(const InteriorMap& im, const double* x, double* y) {
    const Grid& g = *im.grid;
    double diag = 0.0;
    std::vector<double> inv_h2(static_cast<std::size_t>(im.dim));
    for (int a = 0; a < im.dim; ++a) {
        const double h = g.spacing(a);
        inv_h2[static_cast<std::size_t>(a)] = 1.0 / (h * h);
        diag += 2.0 / (h * h);
    }
    for (std::size_t q = 0; q < im.size; ++q) {
        double v = diag * x[q];
        std::size_t rem = q;
        for (int a = 0; a < im.dim; ++a) {
            const std::size_t s = im.strides[static_cast<std::size_t>(a)];
            const auto i = static_cast<int>(rem / s);
            rem %= s;
            if (i > 0)
                v -= inv_h2[static_cast<std::size_t>(a)] * x[q - s];
            if (i < im.ni[static_cast<std::size_t>(a)] - 1)
                v -= inv_h2[static_cast<std::size_t>(a)] * x[q + s];
        }
        y[q] = v;
    }
}

struct RitzPair {
    double lambda;
    Eigen::VectorXd vec; // interior points, unit l2 norm
};

std::vector<RitzPair> dense_eigs(const InteriorMap& im, int k) {
    const auto n = static_cast<Eigen::Index>(im.size);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n), col(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        e[j] = 1.0;
        apply_neg_laplacian(im, e.data(), col.data());
        A.col(j) = col;
        e[j] = 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("laplacian_eigs: dense eigensolve failed", 0.0);
    std::vector<RitzPair> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        out.push_back({es.eigenvalues()[i], es.eigenvectors().col(i)});
    return out;
}

struct LanczosSweep {
    std::vector<RitzPair> pairs; // converged pairs, ascending in lambda(A)
    bool complete = false;       // all k requested pairs converged
};

// One Lanczos sweep with full reorthogonalization on B = sigma I - A,
// restricted to the orthogonal complement of the deflated vectors, so the
// smallest eigenvalues of A become the dominant ones of B.
LanczosSweep lanczos_sweep(const InteriorMap& im, int k, double sigma, double tol,
                           const std::vector<RitzPair>& deflate, std::uint32_t seed) {
    const auto n = static_cast<Eigen::Index>(im.size);
    const int maxit =
        static_cast<int>(std::min<std::size_t>(im.size - deflate.size(), 600));
    std::vector<Eigen::VectorXd> V;
    V.reserve(static_cast<std::size_t>(maxit));
    std::vector<double> alpha, beta;

    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = dist(rng);
    for (int pass = 0; pass < 2; ++pass)
        for (const RitzPair& d : deflate)
            v -= d.vec.dot(v) * d.vec;
    v /= v.norm();
    V.push_back(v);

    Eigen::VectorXd w(n), Av(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes;

    for (int m = 1; m <= maxit; ++m) {
        const Eigen::VectorXd& vm = V.back();
        apply_neg_laplacian(im, vm.data(), Av.data());
        w = sigma * vm - Av;
        const double a = w.dot(vm);
        alpha.push_back(a);
        w -= a * vm;
        if (V.size() > 1)
            w -= beta.back() * V[V.size() - 2];
        // full reorthogonalization, two passes, deflated vectors included
        for (int pass = 0; pass < 2; ++pass) {
            for (const RitzPair& d : deflate)
                w -= d.vec.dot(w) * d.vec;
            for (const Eigen::VectorXd& u : V)
                w -= u.dot(w) * u;
        }
        const double b = w.norm();
        const bool last = b <= 1e-14 * sigma || m == maxit;

        if (m >= k || last) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                T(i, i) = alpha[static_cast<std::size_t>(i)];
                if (i + 1 < m) {
                    T(i, i + 1) = beta[static_cast<std::size_t>(i)];
                    T(i + 1, i) = beta[static_cast<std::size_t>(i)];
                }
            }
            tes.compute(T);
            // top kk of B sit at the end of the ascending Ritz spectrum
            const int kk = std::min(k, m);
            int converged = 0;
            for (int i = 0; i < kk; ++i)
                if (b * std::abs(tes.eigenvectors()(m - 1, m - 1 - i)) <= tol)
                    ++converged;
            if (converged == kk || last) {
                LanczosSweep out;
                out.complete = converged == kk && kk == k;
                for (int i = 0; i < kk; ++i) {
                    if (b * std::abs(tes.eigenvectors()(m - 1, m - 1 - i)) > tol)
                        continue;
                    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
                    for (int j = 0; j < m; ++j)
                        y += tes.eigenvectors()(j, m - 1 - i) * V[static_cast<std::size_t>(j)];
                    y /= y.norm();
                    out.pairs.push_back({sigma - tes.eigenvalues()[m - 1 - i], y});
                }
                std::sort(out.pairs.begin(), out.pairs.end(),
                          [](const RitzPair& x, const RitzPair& y2) { return x.lambda < y2.lambda; });
                return out;
            }
        }

        beta.push_back(b);
        V.push_back(w / b);
    }
    return {};
}

// A Krylov space from a single start vector carries one copy of each
// distinct eigenvalue, so degenerate clusters are collected by deflated
// restarts. A final sweep that finds nothing below the k-th collected value
// certifies the multiplicities.
std::vector<RitzPair> lanczos_eigs(const InteriorMap& im, int k) {
    const Grid& g = *im.grid;
    double sigma = 0.0;
    for (int a = 0; a < im.dim; ++a)
        sigma += 4.0 / (g.spacing(a) * g.spacing(a)); // upper bound on spec(A)
    const double tol = std::max(kResidualTol, 1e-13 * sigma);

    std::vector<RitzPair> collected;
    for (int restart = 0; restart < 8; ++restart) {
        const auto want = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                im.size - collected.size());
        if (want == 0)
            break;
        LanczosSweep sweep = lanczos_sweep(im, static_cast<int>(want), sigma, tol, collected,
                                           12345u + static_cast<std::uint32_t>(restart));
        if (sweep.pairs.empty())
            throw ConvergenceError(
                "laplacian_eigs: Lanczos did not converge within the iteration budget", 0.0);
        const double min_new = sweep.pairs.front().lambda;
        collected.insert(collected.end(), std::make_move_iterator(sweep.pairs.begin()),
                         std::make_move_iterator(sweep.pairs.end()));
        std::sort(collected.begin(), collected.end(),
                  [](const RitzPair& a, const RitzPair& b) { return a.lambda < b.lambda; });
        if (collected.size() >= static_cast<std::size_t>(k) && sweep.complete) {
            const double kth = collected[static_cast<std::size_t>(k - 1)].lambda;
            if (min_new >= kth - 1e-8 * std::max(1.0, std::abs(kth))) {
                collected.resize(static_cast<std::size_t>(k));
                return collected;
            }
        }
    }
    throw ConvergenceError("laplacian_eigs: Lanczos restarts exhausted before the requested "
                           "spectrum was captured",
                           0.0);
}

} // namespace

std::vector<EigenPair> laplacian_eigs(const Grid& spatial, int k) {
    if (spatial.has_time_axis())
        throw ArgumentError("laplacian_eigs: grid must be spatial");
    if (k < 1)
        throw ArgumentError("laplacian_eigs: k must be >= 1");
    InteriorMap im(spatial);
    if (static_cast<std::size_t>(k) > im.size)
        throw ArgumentError("laplacian_eigs: k exceeds the interior dimension");

    std::vector<RitzPair> ritz =
        im.size <= kDenseLimit ? dense_eigs(im, k) : lanczos_eigs(im, k);

    // sign: first nonzero interior component positive
    for (RitzPair& rp : ritz) {
        const double scale = rp.vec.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < rp.vec.size(); ++i) {
            if (std::abs(rp.vec[i]) > 1e-12 * scale) {
                if (rp.vec[i] < 0.0)
                    rp.vec = -rp.vec;
                break;
            }
        }
    }

    // deterministic ordering inside degenerate clusters
    for (std::size_t lo = 0; lo < ritz.size();) {
        std::size_t hi = lo + 1;
        while (hi < ritz.size() &&
               std::abs(ritz[hi].lambda - ritz[lo].lambda) <
                   1e-8 * std::max(1.0, std::abs(ritz[lo].lambda)))
            ++hi;
        std::sort(ritz.begin() + static_cast<std::ptrdiff_t>(lo),
                  ritz.begin() + static_cast<std::ptrdiff_t>(hi),
                  [](const RitzPair& a, const RitzPair& b) {
                      for (Eigen::Index i = 0; i < a.vec.size(); ++i) {
                          const double d = a.vec[i] - b.vec[i];
                          if (std::abs(d) > 1e-8)
                              return d < 0.0;
                      }
                      return false;
                  });
        lo = hi;
    }

    // residual check in the discrete operator
    Eigen::VectorXd Ax(static_cast<Eigen::Index>(im.size));
    for (const RitzPair& rp : ritz) {
        apply_neg_laplacian(im, rp.vec.data(), Ax.data());
        const double res = (Ax - rp.lambda * rp.vec).norm();
        if (res > 1e-8 * rp.vec.norm())
            throw ConvergenceError("laplacian_eigs: eigenpair residual above tolerance", res);
    }

    // embed with zero boundary and normalize in the quadrature inner product
    double cell = 1.0;
    for (int a = 0; a < spatial.dim(); ++a)
        cell *= spatial.spacing(a);
    const double scale = 1.0 / std::sqrt(cell);

    std::vector<EigenPair> out;
    out.reserve(ritz.size());
    for (const RitzPair& rp : ritz) {
        EigenPair ep;
        ep.lambda = rp.lambda;
        ep.phi2 = ScalarField(spatial);
        for (std::size_t q = 0; q < im.size; ++q)
            ep.phi2.values[im.to_full(q)] = rp.vec[static_cast<Eigen::Index>(q)] * scale;
        out.push_back(std::move(ep));
    }
    return out;
}

double dispersion_E2(double E1, const PhysicalConstants& consts) {
    consts.validate();
    const double c2h2 = consts.c * consts.c * consts.hbar * consts.hbar;
    return -consts.gamma * E1 * E1 / (2.0 * c2h2) + consts.m * consts.c * consts.c - E1;
}

DispersionRoots solve_E1(double lambda, const PhysicalConstants& consts) {
    consts.validate();
    if (lambda < 0.0)
        throw ArgumentError("solve_E1: lambda must be nonnegative");
    const double c2h2 = consts.c * consts.c * consts.hbar * consts.hbar;
    const double a = consts.gamma / (2.0 * c2h2);
    const double c0 = -(consts.m * consts.c * consts.c + 0.5 * consts.gamma * lambda);
    const double disc = 1.0 - 4.0 * a * c0; // > 0 for positive constants
    const double sq = std::sqrt(disc);
    // stable quadratic formula, b = 1
    const double q = -0.5 * (1.0 + sq);
    DispersionRoots roots;
    roots.discriminant = disc;
    roots.E1_plus = c0 / q;  // the root near mc^2 for small lambda
    roots.E1_minus = q / a;  // the large negative root
    return roots;
}

ScalarField stationary_state(const EigenPair& pair, double E1, const Axis& time_axis,
                             const PhysicalConstants& consts) {
    consts.validate();
    const Grid& sg = pair.phi2.grid;
    std::vector<Axis> axes;
    axes.reserve(static_cast<std::size_t>(sg.dim()) + 1);
    axes.push_back(time_axis);
    for (int a = 0; a < sg.dim(); ++a)
        axes.push_back(sg.axis(a));
    Grid st(axes, true);

    ScalarField out(st);
    for (int it = 0; it < time_axis.n; ++it) {
        const double t = time_axis.coord(it) / consts.c; // axis stores x0 = c t
        const Complex phase = std::exp(Complex(0.0, -E1 * t / consts.hbar));
        const std::size_t base = static_cast<std::size_t>(it) * st.stride(0);
        for (std::size_t q = 0; q < sg.size(); ++q)
            out.values[base + q] = phase * pair.phi2.values[q];
    }
    return out;
}

} // namespace kgv
