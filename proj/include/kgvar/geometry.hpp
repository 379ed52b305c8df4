#pragma once

#include <span>
#include <vector>

#include "kgvar/grid.hpp"

namespace kgv {

// Euclidean: y.z = sum_i y_i z_i.
// Minkowski: y.z = -y_0 z_0 + sum_{i>=1} y_i z_i (index 0 is time-like).
enum class Signature { Euclidean, Minkowski };

double sig_dot(Signature sig, std::span<const double> y, std::span<const double> z);

// Per-point metric g_ij = g_i . g_j with inverse and determinant.
struct MetricData {
    Grid grid;
    int d = 0;
    Signature signature = Signature::Euclidean;
    std::vector<double> g;     // [p*d*d + i*d + j]
    std::vector<double> g_inv; // same layout
    std::vector<double> det;   // [p]

    double gij(std::size_t p, int i, int j) const {
        return g[(p * d + i) * d + j];
    }
    double ginv(std::size_t p, int i, int j) const {
        return g_inv[(p * d + i) * d + j];
    }
    // sqrt(det g) (Euclidean) or sqrt(-det g) (Minkowski).
    double sqrt_abs_det(std::size_t p) const;

    // sqrt|g| as a real scalar field, for quadrature weights.
    ScalarField sqrt_abs_det_field() const;
};

// Per-point Christoffel symbols Gamma^s_ij.
struct ChristoffelField {
    Grid grid;
    int d = 0;
    std::vector<double> gamma; // [((p*d + s)*d + i)*d + j]

    double get(std::size_t p, int s, int i, int j) const {
        return gamma[((p * static_cast<std::size_t>(d) + static_cast<std::size_t>(s)) *
                          static_cast<std::size_t>(d) + static_cast<std::size_t>(i)) *
                         static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
    }
};

// g_k = dr/dx_k, one field per grid axis. Requires r.codim == grid.dim.
std::vector<VectorField> tangent_basis(const VectorField& r);

// Gram matrix of the basis under the signature dot, inverted per point.
// Throws DegenerateMetricError naming the point when singular.
MetricData metric(const std::vector<VectorField>& basis, Signature sig);

// Gamma^s_ij = sum_m g^{sm} (d^2 r / dx_i dx_j . g_m), the unique solution
// of d^2 r = sum_s Gamma^s_ij g_s for a linearly independent basis.
ChristoffelField christoffel(const VectorField& r, const MetricData& m);

// Christoffel-expanded curvature density:
//   R^ = sum_{ijklps} g^{ij} g^{kl} ( g_jl dphi_i dphi*_k
//          + phi dphi*_k Gamma^s_ij g_sl + phi* dphi_i Gamma^p_kl g_pj
//          + |phi|^2 Gamma^s_ij Gamma^p_kl g_sp ).
// Hermitian form; the returned values are real up to rounding.
ScalarField curvature_density_first(const ScalarField& phi, const VectorField& r,
                                    const MetricData& m, const ChristoffelField& gamma);

// Normal-field curvature density from the second fundamental form:
//   b_ij = -d(phi n)/dx_j . g_i,  b^i_j = g^{il} b_lj,
//   R^ = g^{jk} sum_i b^k_i b*_ji.
// phi absorbs sqrt(rho/m); phi*n is the composite field.
ScalarField curvature_density_normal(const ScalarField& phi, const VectorField& n,
                                     const VectorField& r, const MetricData& m);

} // namespace kgv
