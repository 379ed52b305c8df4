#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kgvar/errors.hpp"

namespace kgv {

using Complex = std::complex<double>;

struct Axis {
    double lo;
    double hi;
    int n;

    double spacing() const { return (hi - lo) / (n - 1); }
    double coord(int i) const { return lo + i * spacing(); }
};

// Uniform Cartesian grid. When has_time_axis() is true, axis 0 carries the
// coordinate x0 = c*t so that all axes share length units; the remaining
// axes are spatial.
class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<Axis> axes, bool time_axis = false);

    int dim() const { return static_cast<int>(axes_.size()); }
    std::size_t size() const { return size_; }
    const Axis& axis(int a) const { return axes_[static_cast<std::size_t>(a)]; }
    double spacing(int a) const { return axes_[static_cast<std::size_t>(a)].spacing(); }
    double coord(int a, int i) const { return axes_[static_cast<std::size_t>(a)].coord(i); }
    bool has_time_axis() const { return time_axis_; }

    // Row-major flattening, axis 0 slowest.
    std::size_t stride(int a) const { return strides_[static_cast<std::size_t>(a)]; }
    std::size_t flatten(std::span<const int> idx) const;
    void unflatten(std::size_t p, std::span<int> idx) const;
    void point(std::size_t p, std::span<double> x) const;

    // Product of axis extents.
    double box_volume() const;

    // Spatial part of a space-time grid (axis 0 dropped).
    Grid spatial() const;

    bool operator==(const Grid& o) const;
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    std::vector<Axis> axes_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
    bool time_axis_ = false;
};

// Complex-valued samples on a grid, row-major.
struct ScalarField {
    Grid grid;
    std::vector<Complex> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), values(g.size(), Complex(0.0)) {}

    static ScalarField sample(const Grid& g,
                              const std::function<Complex(std::span<const double>)>& f);

    Complex& operator[](std::size_t p) { return values[p]; }
    const Complex& operator[](std::size_t p) const { return values[p]; }
};

// Real vector-valued samples (codim components per point), point-major.
struct VectorField {
    Grid grid;
    int codim = 0;
    std::vector<double> values;

    VectorField() = default;
    VectorField(const Grid& g, int cd);

    static VectorField sample(const Grid& g, int cd,
                              const std::function<void(std::span<const double>, std::span<double>)>& f);

    double* at(std::size_t p) { return values.data() + p * static_cast<std::size_t>(codim); }
    const double* at(std::size_t p) const { return values.data() + p * static_cast<std::size_t>(codim); }
};

// Second-order finite differences: central at interior points, one-sided
// second-order at boundary points. Exact for affine fields.
ScalarField partial(const ScalarField& f, int axis);
VectorField partial(const VectorField& f, int axis);

// Mixed derivatives compose the first-derivative stencils (symmetric in
// (i, j)); repeated axes use the 3-point stencil, so the accuracy is
// second order pointwise. Exact for quadratics at interior points.
ScalarField second_partial(const ScalarField& f, int axis_i, int axis_j);
VectorField second_partial(const VectorField& f, int axis_i, int axis_j);

// Trapezoidal rule over all axes; the optional weight carries sqrt(g) or
// sqrt(-g). Fixed summation order, so results are bit-stable.
Complex integrate(const ScalarField& f, const ScalarField* weight = nullptr);

// Trapezoid quadrature weight of a single point.
double quadrature_weight(const Grid& g, std::size_t p);

// True exactly on boundary points of the spatial axes.
std::vector<std::uint8_t> dirichlet_mask(const Grid& g);

// Slice of a space-time field at time sample it, on grid.spatial().
ScalarField time_slice(const ScalarField& f, int it);
VectorField time_slice(const VectorField& f, int it);

} // namespace kgv
