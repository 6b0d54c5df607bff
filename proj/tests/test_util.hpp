#pragma once

// Shared fixtures for the test suites: the three standard generator matrices,
// band-limited random fields that avoid the Nyquist rows, and the exact
// lattice dilation used by the covariance checks.

#include <array>

#include "parlp/parlp.hpp"

namespace testutil {

using namespace parlp;

inline DilationGroup identity_group() { return validate_matrix(Matrix::identity(2)); }
inline DilationGroup diag_group() { return validate_matrix(Matrix::diagonal({1.0, 2.0})); }
inline DilationGroup rotation_group() {
    return validate_matrix(Matrix(2, 2, {1.0, 1.0, -1.0, 1.0}));
}

// Random band-limited real function with spectrum in {lo <= rho* <= hi}.
// Nyquist rows stay empty; symbol sampling zeroes them, so occupied Nyquist
// modes would never reconstruct.
inline GridFunction random_band(const PeriodicGrid& grid, const DilationGroup& g, double lo,
                                double hi, std::uint64_t seed) {
    Rng rng(seed);
    GridFunction spec(grid, Side::frequency);
    const auto tab = rho_star_table(g, grid);
    for (std::size_t i = 0; i < spec.samples.size(); ++i) {
        std::array<int, 3> idx{};
        grid.unflatten(i, idx);
        bool nyquist = false;
        for (int d = 0; d < grid.dim; ++d)
            if (idx[static_cast<std::size_t>(d)] == 0) nyquist = true;
        const double re = rng.normal(), im = rng.normal();
        const double r = (*tab)[i];
        if (nyquist || r < lo || r > hi) continue;
        spec.samples[i] = cplx(re, im);
    }
    GridFunction f = to_physical(spec);
    for (auto& v : f.samples) v = cplx(v.real(), 0.0);
    return f;
}

// f(A_s x) sampled on the lattice for diagonal integer dilations; wraps on
// the torus (f is L-periodic, A_s maps the lattice into itself).
inline GridFunction compose_integer_dilation(const GridFunction& f,
                                             const std::array<long, 3>& factors) {
    GridFunction out(f.grid, f.side);
    const int N = f.grid.samples;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        std::array<int, 3> idx{};
        f.grid.unflatten(i, idx);
        std::array<int, 3> src{};
        for (int d = 0; d < f.grid.dim; ++d) {
            const long c = static_cast<long>(idx[static_cast<std::size_t>(d)] - N / 2) *
                           factors[static_cast<std::size_t>(d)];
            src[static_cast<std::size_t>(d)] = static_cast<int>(((c + N / 2) % N + N) % N);
        }
        out.samples[i] = f.samples[f.grid.flatten(src)];
    }
    return out;
}

// trig polynomial with integer modes chosen so that diag(2,4) dilation keeps
// the spectrum under Nyquist on an N>=128 grid
inline GridFunction covariance_test_function(const PeriodicGrid& grid) {
    return make_physical(grid, [&](const Vec& x) {
        const double L = grid.length;
        double v = 0.0;
        v += 1.0 * std::cos(2 * std::numbers::pi * (5 * x[0] + 3 * x[1]) / L + 0.3);
        v += 0.7 * std::cos(2 * std::numbers::pi * (12 * x[0] - 7 * x[1]) / L + 1.1);
        v += 0.4 * std::cos(2 * std::numbers::pi * (-9 * x[0] + 11 * x[1]) / L + 2.0);
        return cplx(v, 0.0);
    });
}

} // namespace testutil
