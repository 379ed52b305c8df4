#include "kgvar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

namespace kgv {

Grid::Grid(std::vector<Axis> axes, bool time_axis)
    : axes_(std::move(axes)), time_axis_(time_axis) {
    if (axes_.empty())
        throw ArgumentError("grid needs at least one axis");
    for (const Axis& a : axes_) {
        if (a.n < 3)
            throw ArgumentError("grid needs >= 3 points per axis, got " + std::to_string(a.n));
        if (!(a.spacing() > 0.0))
            throw ArgumentError("grid spacing must be positive");
    }
    if (time_axis_ && axes_.size() < 2)
        throw ArgumentError("a space-time grid needs a spatial axis besides the time axis");
    strides_.assign(axes_.size(), 1);
    for (int a = dim() - 2; a >= 0; --a)
        strides_[a] = strides_[a + 1] * static_cast<std::size_t>(axes_[a + 1].n);
    size_ = strides_[0] * static_cast<std::size_t>(axes_[0].n);
}

std::size_t Grid::flatten(std::span<const int> idx) const {
    std::size_t p = 0;
    for (int a = 0; a < dim(); ++a)
        p += static_cast<std::size_t>(idx[a]) * strides_[a];
    return p;
}

void Grid::unflatten(std::size_t p, std::span<int> idx) const {
    for (int a = 0; a < dim(); ++a) {
        idx[a] = static_cast<int>(p / strides_[a]);
        p %= strides_[a];
    }
}

void Grid::point(std::size_t p, std::span<double> x) const {
    for (int a = 0; a < dim(); ++a) {
        const auto i = static_cast<int>(p / strides_[a]);
        p %= strides_[a];
        x[a] = coord(a, i);
    }
}

double Grid::box_volume() const {
    double v = 1.0;
    for (const Axis& a : axes_)
        v *= a.hi - a.lo;
    return v;
}

Grid Grid::spatial() const {
    if (!time_axis_)
        throw ArgumentError("spatial(): grid has no time axis");
    return Grid(std::vector<Axis>(axes_.begin() + 1, axes_.end()), false);
}

bool Grid::operator==(const Grid& o) const {
    if (time_axis_ != o.time_axis_ || axes_.size() != o.axes_.size())
        return false;
    for (std::size_t a = 0; a < axes_.size(); ++a)
        if (axes_[a].lo != o.axes_[a].lo || axes_[a].hi != o.axes_[a].hi || axes_[a].n != o.axes_[a].n)
            return false;
    return true;
}

ScalarField ScalarField::sample(const Grid& g,
                                const std::function<Complex(std::span<const double>)>& f) {
    ScalarField out(g);
    std::vector<double> x(static_cast<std::size_t>(g.dim()));
    for (std::size_t p = 0; p < g.size(); ++p) {
        g.point(p, x);
        out.values[p] = f(x);
    }
    return out;
}

VectorField::VectorField(const Grid& g, int cd) : grid(g), codim(cd) {
    if (cd < 1)
        throw ArgumentError("vector field codimension must be >= 1");
    values.assign(g.size() * static_cast<std::size_t>(cd), 0.0);
}

VectorField VectorField::sample(const Grid& g, int cd,
                                const std::function<void(std::span<const double>, std::span<double>)>& f) {
    VectorField out(g, cd);
    std::vector<double> x(static_cast<std::size_t>(g.dim()));
    for (std::size_t p = 0; p < g.size(); ++p) {
        g.point(p, x);
        f(x, std::span<double>(out.at(p), static_cast<std::size_t>(cd)));
    }
    return out;
}

namespace {

// d/dx along one axis on strided data with ncomp interleaved components.
template <class T>
void partial_impl(const Grid& g, const std::vector<T>& in, std::vector<T>& out,
                  std::size_t ncomp, int axis) {
    if (axis < 0 || axis >= g.dim())
        throw ArgumentError("partial: axis out of range");
    const std::size_t s = g.stride(axis) * ncomp;
    const int n = g.axis(axis).n;
    const double h = g.spacing(axis);
    std::vector<int> idx(static_cast<std::size_t>(g.dim()));
    for (std::size_t p = 0; p < g.size(); ++p) {
        g.unflatten(p, idx);
        const int i = idx[static_cast<std::size_t>(axis)];
        for (std::size_t c = 0; c < ncomp; ++c) {
            const std::size_t q = p * ncomp + c;
            // difference form so constant data differentiates to exactly zero
            if (i > 0 && i < n - 1)
                out[q] = (in[q + s] - in[q - s]) / (2.0 * h);
            else if (i == 0)
                out[q] = (4.0 * (in[q + s] - in[q]) - (in[q + 2 * s] - in[q])) / (2.0 * h);
            else
                out[q] = (4.0 * (in[q] - in[q - s]) - (in[q] - in[q - 2 * s])) / (2.0 * h);
        }
    }
}

// d^2/dx^2 along one axis: classic 3-point stencil at interior points,
// second-order one-sided at the ends.
template <class T>
void second_partial_impl(const Grid& g, const std::vector<T>& in, std::vector<T>& out,
                         std::size_t ncomp, int axis) {
    if (axis < 0 || axis >= g.dim())
        throw ArgumentError("second_partial: axis out of range");
    const std::size_t s = g.stride(axis) * ncomp;
    const int n = g.axis(axis).n;
    const double h2 = g.spacing(axis) * g.spacing(axis);
    std::vector<int> idx(static_cast<std::size_t>(g.dim()));
    for (std::size_t p = 0; p < g.size(); ++p) {
        g.unflatten(p, idx);
        const int i = idx[static_cast<std::size_t>(axis)];
        for (std::size_t c = 0; c < ncomp; ++c) {
            const std::size_t q = p * ncomp + c;
            // difference form so constant data differentiates to exactly zero
            if (i > 0 && i < n - 1)
                out[q] = ((in[q + s] - in[q]) + (in[q - s] - in[q])) / h2;
            else if (n == 3) { // only the centered value is available
                const std::size_t m = i == 0 ? q + s : q - s;
                out[q] = ((in[m + s] - in[m]) + (in[m - s] - in[m])) / h2;
            } else if (i == 0)
                out[q] = (2.0 * (in[q] - in[q + s]) - 3.0 * (in[q + s] - in[q + 2 * s]) +
                          (in[q + 2 * s] - in[q + 3 * s])) /
                         h2;
            else
                out[q] = (2.0 * (in[q] - in[q - s]) - 3.0 * (in[q - s] - in[q - 2 * s]) +
                          (in[q - 2 * s] - in[q - 3 * s])) /
                         h2;
        }
    }
}

} // namespace

ScalarField partial(const ScalarField& f, int axis) {
    ScalarField out(f.grid);
    partial_impl(f.grid, f.values, out.values, 1, axis);
    return out;
}

VectorField partial(const VectorField& f, int axis) {
    VectorField out(f.grid, f.codim);
    partial_impl(f.grid, f.values, out.values, static_cast<std::size_t>(f.codim), axis);
    return out;
}

ScalarField second_partial(const ScalarField& f, int axis_i, int axis_j) {
    if (axis_i == axis_j) {
        ScalarField out(f.grid);
        second_partial_impl(f.grid, f.values, out.values, 1, axis_i);
        return out;
    }
    return partial(partial(f, axis_i), axis_j);
}

VectorField second_partial(const VectorField& f, int axis_i, int axis_j) {
    if (axis_i == axis_j) {
        VectorField out(f.grid, f.codim);
        second_partial_impl(f.grid, f.values, out.values, static_cast<std::size_t>(f.codim),
                            axis_i);
        return out;
    }
    return partial(partial(f, axis_i), axis_j);
}

double quadrature_weight(const Grid& g, std::size_t p) {
    double w = 1.0;
    for (int a = 0; a < g.dim(); ++a) {
        const auto i = static_cast<int>(p / g.stride(a)) % g.axis(a).n;
        const double h = g.spacing(a);
        w *= (i == 0 || i == g.axis(a).n - 1) ? 0.5 * h : h;
    }
    return w;
}

Complex integrate(const ScalarField& f, const ScalarField* weight) {
    if (weight && weight->grid != f.grid)
        throw ArgumentError("integrate: weight grid mismatch");
    Complex sum(0.0);
    for (std::size_t p = 0; p < f.grid.size(); ++p) {
        Complex v = f.values[p];
        if (weight)
            v *= weight->values[p];
        sum += quadrature_weight(f.grid, p) * v;
    }
    return sum;
}

std::vector<std::uint8_t> dirichlet_mask(const Grid& g) {
    std::vector<std::uint8_t> mask(g.size(), 0);
    const int a0 = g.has_time_axis() ? 1 : 0;
    std::vector<int> idx(static_cast<std::size_t>(g.dim()));
    for (std::size_t p = 0; p < g.size(); ++p) {
        g.unflatten(p, idx);
        for (int a = a0; a < g.dim(); ++a) {
            if (idx[static_cast<std::size_t>(a)] == 0 ||
                idx[static_cast<std::size_t>(a)] == g.axis(a).n - 1) {
                mask[p] = 1;
                break;
            }
        }
    }
    return mask;
}

namespace {

template <class F>
F time_slice_impl(const F& f, int it, std::size_t ncomp) {
    if (!f.grid.has_time_axis())
        throw ArgumentError("time_slice: grid has no time axis");
    if (it < 0 || it >= f.grid.axis(0).n)
        throw ArgumentError("time_slice: time index out of range");
    F out = [&] {
        if constexpr (std::is_same_v<F, ScalarField>)
            return ScalarField(f.grid.spatial());
        else
            return VectorField(f.grid.spatial(), f.codim);
    }();
    const std::size_t base = static_cast<std::size_t>(it) * f.grid.stride(0) * ncomp;
    std::copy(f.values.begin() + static_cast<std::ptrdiff_t>(base),
              f.values.begin() + static_cast<std::ptrdiff_t>(base + out.grid.size() * ncomp),
              out.values.begin());
    return out;
}

} // namespace

ScalarField time_slice(const ScalarField& f, int it) { return time_slice_impl(f, it, 1); }

VectorField time_slice(const VectorField& f, int it) {
    return time_slice_impl(f, it, static_cast<std::size_t>(f.codim));
}

} // namespace kgv
