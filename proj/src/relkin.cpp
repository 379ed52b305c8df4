#include "kgvar/relkin.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace kgv {

double boost_kappa(double v2, const PhysicalConstants& consts) {
    const double c2 = consts.c * consts.c;
    if (v2 < 1e-12 * c2) // |v|/c < 1e-6: series for (gamma_L - 1)/v^2
        return (1.0 + 0.75 * v2 / c2) / (2.0 * c2);
    // cancellation-free form of (gamma_L - 1)/v^2
    const double gl = 1.0 / std::sqrt(1.0 - v2 / c2);
    return gl * gl / ((gl + 1.0) * c2);
}

Event boost(const Event& e, const BoostVelocity& bv, const PhysicalConstants& consts) {
    consts.validate();
    const double c2 = consts.c * consts.c;
    const double v2 = bv.v[0] * bv.v[0] + bv.v[1] * bv.v[1] + bv.v[2] * bv.v[2];
    if (v2 >= c2)
        throw ArgumentError("boost: |v| must be < c");
    const double gl = 1.0 / std::sqrt(1.0 - v2 / c2);
    const double kappa = boost_kappa(v2, consts);
    const double xv = e.x[0] * bv.v[0] + e.x[1] * bv.v[1] + e.x[2] * bv.v[2];

    Event out;
    for (int j = 0; j < 3; ++j)
        out.x[j] = e.x[j] + kappa * xv * bv.v[j] - gl * e.t * bv.v[j];
    out.t = gl * (e.t - xv / c2);
    return out;
}

double minkowski_dot(const std::array<double, 4>& y, const std::array<double, 4>& z) {
    return -y[0] * z[0] + y[1] * z[1] + y[2] * z[2] + y[3] * z[3];
}

AngularDecomposition angular_decompose(const ScalarField& phi, const VectorField& r,
                                       int axis, const PhysicalConstants& consts) {
    consts.validate();
    const Grid& g = phi.grid;
    if (!g.has_time_axis() || g.dim() != 4)
        throw ArgumentError("angular_decompose: fields must live on a 3+1 space-time grid");
    if (r.grid != g || r.codim != 3)
        throw ArgumentError("angular_decompose: r must have codim 3 on the same grid");
    if (axis < 0 || axis > 2)
        throw ArgumentError("angular_decompose: axis must be 0, 1 or 2");

    const double c = consts.c;
    const double c2 = c * c;

    // stencil derivatives in material coordinates
    std::array<ScalarField, 4> dphi{partial(phi, 0), partial(phi, 1), partial(phi, 2),
                                    partial(phi, 3)};
    std::array<VectorField, 4> dr{partial(r, 0), partial(r, 1), partial(r, 2), partial(r, 3)};

    AngularDecomposition out{ScalarField(g), ScalarField(g), ScalarField(g)};
    const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3; // w = e_axis x x

    Eigen::Matrix4d M;
    Eigen::Vector4cd rhs, grad;
    std::vector<double> xpt(4);
    for (std::size_t p = 0; p < g.size(); ++p) {
        // local velocity v = dX/dt = c dX/dx0
        std::array<double, 3> v{};
        double v2 = 0.0;
        for (int kk = 0; kk < 3; ++kk) {
            v[kk] = c * dr[0].at(p)[kk];
            v2 += v[kk] * v[kk];
        }
        if (v2 >= c2)
            throw SuperluminalError("angular_decompose: |v| >= c at point " + std::to_string(p));
        const double gl = 1.0 / std::sqrt(1.0 - v2 / c2);
        const double kappa = boost_kappa(v2, consts);

        // Jacobian of (X, t) wrt (x, t), then the boost on top of it.
        // Row/col order: (X1, X2, X3, t) x (x1, x2, x3, t).
        Eigen::Matrix4d Jm = Eigen::Matrix4d::Zero();
        for (int kk = 0; kk < 3; ++kk) {
            for (int jj = 0; jj < 3; ++jj)
                Jm(kk, jj) = dr[jj + 1].at(p)[kk];
            Jm(kk, 3) = v[kk]; // dX_k/dt at fixed x
        }
        Jm(3, 3) = 1.0;

        Eigen::Matrix4d B;
        for (int kk = 0; kk < 3; ++kk) {
            for (int jj = 0; jj < 3; ++jj)
                B(kk, jj) = (kk == jj ? 1.0 : 0.0) + kappa * v[kk] * v[jj];
            B(kk, 3) = -gl * v[kk];         // dX'_k/dt
            B(3, kk) = -gl * v[kk] / c2;    // dt'/dX_k
        }
        B(3, 3) = gl;

        M = B * Jm; // Jacobian of (X', t') wrt (x, t)
        Eigen::FullPivLU<Eigen::Matrix4d> lu(M.transpose());
        if (!lu.isInvertible())
            throw ChainRuleError(
                "angular_decompose: singular Jacobian at point " + std::to_string(p), p);

        // gradient of phi wrt (X', t') from the sampled derivatives
        rhs(0) = dphi[1].values[p];
        rhs(1) = dphi[2].values[p];
        rhs(2) = dphi[3].values[p];
        rhs(3) = c * dphi[0].values[p]; // d/dt = c d/dx0
        grad = lu.solve(rhs);

        // material-coordinate weights w = e_axis x x
        g.point(p, xpt);
        std::array<double, 3> w{0.0, 0.0, 0.0};
        w[a1] = -xpt[static_cast<std::size_t>(a2 + 1)];
        w[a2] = xpt[static_cast<std::size_t>(a1 + 1)];
        const double wv = w[0] * v[0] + w[1] * v[1] + w[2] * v[2];

        const Complex mih(0.0, -consts.hbar); // -i hbar
        Complex wdot(0.0), vdot(0.0);
        for (int jj = 0; jj < 3; ++jj) {
            wdot += w[jj] * grad(jj);
            vdot += v[jj] * grad(jj);
        }
        const Complex lz = mih * wdot;
        const Complex sz = mih * kappa * wv * vdot - mih * grad(3) * gl * wv / c2;
        out.Lz.values[p] = lz;
        out.Sz.values[p] = sz;
        out.Jz.values[p] = lz + sz;
    }
    return out;
}

} // namespace kgv
