#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "parlp/errors.hpp"
#include "parlp/fft.hpp"
#include "parlp/linalg.hpp"
#include "parlp/parallel.hpp"

namespace parlp {

using cplx = std::complex<double>;

enum class Side { physical, frequency };

/// Uniform periodic box [-L/2, L/2)^n with N samples per axis (N a power of
/// two). The dual lattice is {m/L : m integer in [-N/2, N/2)} per axis; both
/// sides are stored with the origin at index N/2.
struct PeriodicGrid {
    int dim = 2;
    double length = 16.0;
    int samples = 256; // per axis

    PeriodicGrid() = default;
    PeriodicGrid(int n, double box_length, int samples_per_axis)
        : dim(n), length(box_length), samples(samples_per_axis) {
        if (dim < 1 || dim > 3)
            throw DimensionError("PeriodicGrid: dim must be 1, 2 or 3");
        if (!(length > 0.0)) throw DimensionError("PeriodicGrid: box length must be positive");
        if (samples < 4 || !detail::is_pow2(static_cast<std::size_t>(samples)))
            throw DimensionError("PeriodicGrid: samples per axis must be a power of two >= 4");
    }

    double spacing() const { return length / samples; }

    std::size_t point_count() const {
        std::size_t c = 1;
        for (int d = 0; d < dim; ++d) c *= static_cast<std::size_t>(samples);
        return c;
    }

    // row-major, last axis fastest
    void unflatten(std::size_t flat, std::array<int, 3>& idx) const {
        for (int d = dim - 1; d >= 0; --d) {
            idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % static_cast<std::size_t>(samples));
            flat /= static_cast<std::size_t>(samples);
        }
    }
    std::size_t flatten(const std::array<int, 3>& idx) const {
        std::size_t f = 0;
        for (int d = 0; d < dim; ++d)
            f = f * static_cast<std::size_t>(samples) +
                static_cast<std::size_t>((idx[static_cast<std::size_t>(d)] % samples + samples) % samples);
        return f;
    }

    void physical_coords(std::size_t flat, Vec& out) const {
        std::array<int, 3> idx{};
        unflatten(flat, idx);
        out.resize(static_cast<std::size_t>(dim));
        const double h = spacing();
        for (int d = 0; d < dim; ++d)
            out[static_cast<std::size_t>(d)] = (idx[static_cast<std::size_t>(d)] - samples / 2) * h;
    }

    void frequency_coords(std::size_t flat, Vec& out) const {
        std::array<int, 3> idx{};
        unflatten(flat, idx);
        out.resize(static_cast<std::size_t>(dim));
        for (int d = 0; d < dim; ++d)
            out[static_cast<std::size_t>(d)] = (idx[static_cast<std::size_t>(d)] - samples / 2) / length;
    }

    bool operator==(const PeriodicGrid& o) const {
        return dim == o.dim && length == o.length && samples == o.samples;
    }
    bool operator!=(const PeriodicGrid& o) const { return !(*this == o); }
};

struct GridFunction {
    PeriodicGrid grid;
    Side side = Side::physical;
    std::vector<cplx> samples;

    GridFunction() = default;
    GridFunction(const PeriodicGrid& g, Side s)
        : grid(g), side(s), samples(g.point_count(), cplx(0.0, 0.0)) {}
};

inline GridFunction make_physical(const PeriodicGrid& grid,
                                  const std::function<cplx(const Vec&)>& fn) {
    GridFunction f(grid, Side::physical);
    parallel_for(0, grid.point_count(), [&](std::size_t i) {
        Vec x;
        grid.physical_coords(i, x);
        f.samples[i] = fn(x);
    });
    return f;
}

namespace detail {

// One axis pass of the continuous-convention transform. Sign factors come
// from the centered grid: x_k = (k - N/2) h against xi_m = (m - N/2)/L gives
// e^{-2 pi i x xi} = (-1)^{k+m} (-1)^{N/2} e^{-2 pi i k m / N}.
inline void axis_transform(std::vector<cplx>& data, const PeriodicGrid& grid, int axis,
                           bool forward) {
    const int N = grid.samples;
    const std::size_t n = static_cast<std::size_t>(N);
    std::size_t stride = 1;
    for (int d = grid.dim - 1; d > axis; --d) stride *= n;
    const std::size_t lines = data.size() / n;
    const double axis_scale = forward ? grid.spacing() : 1.0 / grid.length;
    const double nyq_sign = ((N / 2) % 2 == 0) ? 1.0 : -1.0;

    parallel_for(0, lines, [&](std::size_t line) {
        // base offset of this line: expand line index over the non-axis dims
        const std::size_t inner = stride;                  // block below axis
        const std::size_t block = line / inner;            // index over dims above axis
        const std::size_t rem = line % inner;
        const std::size_t base = block * inner * n + rem;

        std::vector<cplx> buf(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double sgn = (k & 1) ? -1.0 : 1.0;
            buf[k] = data[base + k * stride] * sgn;
        }
        fft_pow2(buf.data(), n, !forward);
        for (std::size_t m = 0; m < n; ++m) {
            const double sgn = (m & 1) ? -1.0 : 1.0;
            data[base + m * stride] = buf[m] * (sgn * nyq_sign * axis_scale);
        }
    });
}

} // namespace detail

/// Continuous-convention Fourier transform between sides:
/// fhat(xi) = integral f(x) e^{-2 pi i <x, xi>} dx approximated with the
/// (L/N)^n quadrature factor; the inverse carries (1/L)^n so the round trip
/// is the identity.
inline GridFunction transform(const GridFunction& f) {
    const bool forward = f.side == Side::physical;
    GridFunction out = f;
    for (int axis = 0; axis < f.grid.dim; ++axis)
        detail::axis_transform(out.samples, f.grid, axis, forward);
    out.side = forward ? Side::frequency : Side::physical;
    return out;
}

inline GridFunction to_frequency(const GridFunction& f) {
    return f.side == Side::frequency ? f : transform(f);
}
inline GridFunction to_physical(const GridFunction& f) {
    return f.side == Side::physical ? f : transform(f);
}

/// Circular convolution approximating the continuous convolution of the
/// periodized inputs. Runs through the frequency side; inputs on either side
/// are accepted.
inline GridFunction convolve(const GridFunction& f, const GridFunction& g) {
    if (f.grid != g.grid) throw GridMismatch("convolve: operands live on different grids");
    GridFunction fa = to_frequency(f);
    const GridFunction ga = to_frequency(g);
    parallel_for(0, fa.samples.size(), [&](std::size_t i) { fa.samples[i] *= ga.samples[i]; });
    return transform(fa);
}

/// Weighted L^p quasi-norm by Riemann sum: (h^n sum |f|^p w)^{1/p}.
inline double lp_norm(const GridFunction& f, double p, const std::vector<double>* w = nullptr) {
    if (f.side != Side::physical) throw SideMismatch("lp_norm: expected a physical-side function");
    if (!(p > 0.0)) throw NonPositiveExponent("lp_norm: p must be positive");
    if (w && w->size() != f.samples.size())
        throw GridMismatch("lp_norm: weight sample count differs from the grid");
    const double cell = std::pow(f.grid.spacing(), f.grid.dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        const double m = std::abs(f.samples[i]);
        acc += std::pow(m, p) * (w ? (*w)[i] : 1.0);
    }
    return std::pow(acc * cell, 1.0 / p);
}

inline double rel_l2_error(const GridFunction& a, const GridFunction& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        num += std::norm(a.samples[i] - b.samples[i]);
        den += std::norm(b.samples[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double max_abs(const GridFunction& f) {
    double m = 0.0;
    for (const auto& v : f.samples) m = std::max(m, std::abs(v));
    return m;
}

/// Circular shift by whole lattice steps (physical side bookkeeping helper).
inline GridFunction shift(const GridFunction& f, const std::array<int, 3>& steps) {
    GridFunction out(f.grid, f.side);
    const std::size_t count = f.grid.point_count();
    parallel_for(0, count, [&](std::size_t i) {
        std::array<int, 3> idx{};
        f.grid.unflatten(i, idx);
        for (int d = 0; d < f.grid.dim; ++d)
            idx[static_cast<std::size_t>(d)] -= steps[static_cast<std::size_t>(d)];
        out.samples[i] = f.samples[f.grid.flatten(idx)];
    });
    return out;
}

} // namespace parlp
