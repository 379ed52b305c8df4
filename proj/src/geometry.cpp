#include "kgvar/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace kgv {

double sig_dot(Signature sig, std::span<const double> y, std::span<const double> z) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        s += y[i] * z[i];
    if (sig == Signature::Minkowski)
        s -= 2.0 * y[0] * z[0];
    return s;
}

double MetricData::sqrt_abs_det(std::size_t p) const {
    return std::sqrt(std::abs(det[p]));
}

ScalarField MetricData::sqrt_abs_det_field() const {
    ScalarField out(grid);
    for (std::size_t p = 0; p < grid.size(); ++p)
        out.values[p] = sqrt_abs_det(p);
    return out;
}

std::vector<VectorField> tangent_basis(const VectorField& r) {
    if (r.codim != r.grid.dim())
        throw ArgumentError("tangent_basis: r.codim must equal grid.dim for a square Jacobian");
    std::vector<VectorField> basis;
    basis.reserve(static_cast<std::size_t>(r.grid.dim()));
    for (int k = 0; k < r.grid.dim(); ++k)
        basis.push_back(partial(r, k));
    return basis;
}

MetricData metric(const std::vector<VectorField>& basis, Signature sig) {
    if (basis.empty())
        throw ArgumentError("metric: empty basis");
    const Grid& grid = basis[0].grid;
    const int d = static_cast<int>(basis.size());
    if (d != grid.dim())
        throw ArgumentError("metric: basis size must equal grid dimension");
    const int cd = basis[0].codim;
    for (const VectorField& b : basis)
        if (b.grid != grid || b.codim != cd)
            throw ArgumentError("metric: inconsistent basis fields");

    MetricData m;
    m.grid = grid;
    m.d = d;
    m.signature = sig;
    m.g.assign(grid.size() * static_cast<std::size_t>(d * d), 0.0);
    m.g_inv.assign(grid.size() * static_cast<std::size_t>(d * d), 0.0);
    m.det.assign(grid.size(), 0.0);

    Eigen::MatrixXd G(d, d);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                const double v = sig_dot(sig,
                                         std::span<const double>(basis[i].at(p), static_cast<std::size_t>(cd)),
                                         std::span<const double>(basis[j].at(p), static_cast<std::size_t>(cd)));
                G(i, j) = v;
                G(j, i) = v;
            }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
        const double detg = lu.determinant();
        // condition estimate through the pivots
        const double pmax = std::abs(lu.matrixLU()(0, 0));
        const double pmin = std::abs(lu.matrixLU()(d - 1, d - 1));
        if (!lu.isInvertible() || pmin <= 1e-13 * pmax)
            throw DegenerateMetricError(
                "metric: singular Gram matrix at point " + std::to_string(p) +
                    " (tangent vectors not linearly independent)",
                p);
        Eigen::MatrixXd Ginv = lu.inverse();
        m.det[p] = detg;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                m.g[(p * d + i) * d + j] = G(i, j);
                m.g_inv[(p * d + i) * d + j] = Ginv(i, j);
            }
        if (sig == Signature::Euclidean && !(detg > 0.0))
            throw DegenerateMetricError("metric: nonpositive determinant at point " + std::to_string(p), p);
        if (sig == Signature::Minkowski && !(detg < 0.0))
            throw DegenerateMetricError("metric: nonnegative Minkowski determinant at point " + std::to_string(p), p);
    }
    return m;
}

ChristoffelField christoffel(const VectorField& r, const MetricData& m) {
    if (r.grid != m.grid)
        throw ArgumentError("christoffel: grid mismatch");
    const Grid& grid = r.grid;
    const int d = m.d;
    const auto cd = static_cast<std::size_t>(r.codim);

    std::vector<VectorField> basis = tangent_basis(r);
    // d^2 r / dx_i dx_j for j >= i; symmetric by construction
    std::vector<std::vector<VectorField>> d2(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            d2[static_cast<std::size_t>(i)].push_back(second_partial(r, i, j));

    ChristoffelField cf;
    cf.grid = grid;
    cf.d = d;
    cf.gamma.assign(grid.size() * static_cast<std::size_t>(d * d * d), 0.0);

    for (std::size_t p = 0; p < grid.size(); ++p) {
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                const VectorField& rij = d2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i)];
                for (int s = 0; s < d; ++s) {
                    double val = 0.0;
                    for (int mm = 0; mm < d; ++mm)
                        val += m.ginv(p, s, mm) *
                               sig_dot(m.signature,
                                       std::span<const double>(rij.at(p), cd),
                                       std::span<const double>(basis[static_cast<std::size_t>(mm)].at(p), cd));
                    const auto base = ((p * d + s) * d);
                    cf.gamma[(base + i) * d + j] = val;
                    cf.gamma[(base + j) * d + i] = val;
                }
            }
    }
    return cf;
}

ScalarField curvature_density_first(const ScalarField& phi, const VectorField& r,
                                    const MetricData& m, const ChristoffelField& gamma) {
    const Grid& grid = phi.grid;
    if (r.grid != grid || m.grid != grid || gamma.grid != grid)
        throw ArgumentError("curvature_density_first: all inputs must share one grid");
    const int d = m.d;
    if (d != 3 && d != 4)
        throw ArgumentError("curvature_density_first: dimension must be 3 or 4");

    std::vector<ScalarField> dphi;
    dphi.reserve(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a)
        dphi.push_back(partial(phi, a));

    ScalarField out(grid);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const Complex ph = phi.values[p];
        const Complex phc = std::conj(ph);
        Complex total(0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) {
                        const double gg = m.ginv(p, i, j) * m.ginv(p, k, l);
                        if (gg == 0.0)
                            continue;
                        const Complex di = dphi[static_cast<std::size_t>(i)].values[p];
                        const Complex dkc = std::conj(dphi[static_cast<std::size_t>(k)].values[p]);
                        Complex term = m.gij(p, j, l) * di * dkc;
                        double gsl = 0.0, gpj = 0.0, gsp = 0.0;
                        for (int s = 0; s < d; ++s)
                            gsl += gamma.get(p, s, i, j) * m.gij(p, s, l);
                        for (int q = 0; q < d; ++q)
                            gpj += gamma.get(p, q, k, l) * m.gij(p, q, j);
                        for (int s = 0; s < d; ++s)
                            for (int q = 0; q < d; ++q)
                                gsp += gamma.get(p, s, i, j) * gamma.get(p, q, k, l) * m.gij(p, s, q);
                        term += ph * dkc * gsl;
                        term += phc * di * gpj;
                        term += (ph * phc) * gsp;
                        total += gg * term;
                    }
        out.values[p] = total;
    }
    return out;
}

ScalarField curvature_density_normal(const ScalarField& phi, const VectorField& n,
                                     const VectorField& r, const MetricData& m) {
    const Grid& grid = phi.grid;
    if (n.grid != grid || r.grid != grid || m.grid != grid)
        throw ArgumentError("curvature_density_normal: all inputs must share one grid");
    if (n.codim != r.codim)
        throw ArgumentError("curvature_density_normal: n.codim must equal r.codim");
    const int d = m.d;
    const auto cd = static_cast<std::size_t>(r.codim);

    std::vector<VectorField> basis = tangent_basis(r);

    // composite field psi = phi * n, differentiated per axis (complex)
    std::vector<std::vector<Complex>> dpsi(static_cast<std::size_t>(d));
    {
        std::vector<Complex> psi(grid.size() * cd);
        for (std::size_t p = 0; p < grid.size(); ++p)
            for (std::size_t c = 0; c < cd; ++c)
                psi[p * cd + c] = phi.values[p] * n.at(p)[c];
        // reuse the scalar stencil componentwise via two real fields
        for (int a = 0; a < d; ++a) {
            dpsi[static_cast<std::size_t>(a)].resize(grid.size() * cd);
            VectorField re(grid, static_cast<int>(cd)), im(grid, static_cast<int>(cd));
            for (std::size_t q = 0; q < psi.size(); ++q) {
                re.values[q] = psi[q].real();
                im.values[q] = psi[q].imag();
            }
            VectorField dre = partial(re, a), dim = partial(im, a);
            for (std::size_t q = 0; q < psi.size(); ++q)
                dpsi[static_cast<std::size_t>(a)][q] = Complex(dre.values[q], dim.values[q]);
        }
    }

    ScalarField out(grid);
    std::vector<Complex> b(static_cast<std::size_t>(d * d));       // b_ij
    std::vector<Complex> braise(static_cast<std::size_t>(d * d));  // b^i_j
    for (std::size_t p = 0; p < grid.size(); ++p) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Complex v(0.0);
                const double* gi = basis[static_cast<std::size_t>(i)].at(p);
                const Complex* dj = dpsi[static_cast<std::size_t>(j)].data() + p * cd;
                for (std::size_t c = 0; c < cd; ++c)
                    v += dj[c] * gi[c];
                if (m.signature == Signature::Minkowski)
                    v -= 2.0 * dj[0] * gi[0];
                b[static_cast<std::size_t>(i * d + j)] = -v;
            }
        // b^i_j = g^{il} b_lj
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Complex v(0.0);
                for (int l = 0; l < d; ++l)
                    v += m.ginv(p, i, l) * b[static_cast<std::size_t>(l * d + j)];
                braise[static_cast<std::size_t>(i * d + j)] = v;
            }
        // R^ = g^{jk} R^_jk,  R^_jk = R^i_{jik} = sum_i b^k_i b*_ji
        Complex total(0.0);
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const double gjk = m.ginv(p, j, k);
                if (gjk == 0.0)
                    continue;
                Complex rjk(0.0);
                for (int i = 0; i < d; ++i)
                    rjk += braise[static_cast<std::size_t>(k * d + i)] *
                           std::conj(b[static_cast<std::size_t>(j * d + i)]);
                total += gjk * rjk;
            }
        out.values[p] = total;
    }
    return out;
}

} // namespace kgv
