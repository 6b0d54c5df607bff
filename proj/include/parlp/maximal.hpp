#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "parlp/errors.hpp"
#include "parlp/grid.hpp"
#include "parlp/lp_transform.hpp"
#include "parlp/symbols.hpp"

namespace parlp {

/// Muckenhoupt weight: positive samples plus its declared exponent and the
/// measured A_p constant over the finite ball family it was checked with.
struct Weight {
    std::vector<double> samples;
    double declared_exponent = 2.0;
    double measured_ap = 1.0;
};

namespace detail {

struct OffsetTable {
    // flat offset index -> centered lattice steps and rho of the offset
    std::vector<std::array<int, 3>> steps;
    std::vector<double> rho_values;
};

inline OffsetTable offset_table(const DilationGroup& group, const PeriodicGrid& grid) {
    OffsetTable t;
    const std::size_t count = grid.point_count();
    t.steps.resize(count);
    t.rho_values.resize(count);
    const auto rho_phys = rho_table(group, grid);
    for (std::size_t i = 0; i < count; ++i) {
        std::array<int, 3> idx{};
        grid.unflatten(i, idx);
        for (int d = 0; d < grid.dim; ++d)
            idx[static_cast<std::size_t>(d)] -= grid.samples / 2;
        t.steps[i] = idx;
        t.rho_values[i] = (*rho_phys)[i];
    }
    return t;
}

inline std::size_t wrap_index(const PeriodicGrid& grid, const std::array<int, 3>& x,
                              const std::array<int, 3>& delta) {
    std::array<int, 3> y{};
    for (int d = 0; d < grid.dim; ++d)
        y[static_cast<std::size_t>(d)] =
            x[static_cast<std::size_t>(d)] - delta[static_cast<std::size_t>(d)];
    return grid.flatten(y);
}

} // namespace detail

/// Peetre maximal function F**_{N,R}(x) = sup_y |F(x-y)| / (1 + R rho(y))^N,
/// taken over the whole offset lattice. Offsets are visited in increasing
/// rho order so the weight bound prunes the sup early; the result is exact.
inline GridFunction peetre_max(const GridFunction& F, const DilationGroup& group, double N,
                               double R) {
    if (!(N > 0.0) || !(R > 0.0))
        throw NonPositiveExponent("peetre_max: N and R must be positive");
    if (F.side != Side::physical) throw SideMismatch("peetre_max: physical side expected");
    const auto table = detail::offset_table(group, F.grid);
    const std::size_t count = F.grid.point_count();

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (table.rho_values[a] != table.rho_values[b])
            return table.rho_values[a] < table.rho_values[b];
        return a < b;
    });
    std::vector<double> weight(count);
    for (std::size_t k = 0; k < count; ++k)
        weight[k] = std::pow(1.0 + R * table.rho_values[order[k]], -N);

    double fmax = 0.0;
    for (const auto& v : F.samples) fmax = std::max(fmax, std::abs(v));

    GridFunction out(F.grid, Side::physical);
    parallel_for(0, count, [&](std::size_t xi) {
        std::array<int, 3> x{};
        F.grid.unflatten(xi, x);
        double best = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            if (fmax * weight[k] <= best) break; // no later offset can improve
            const std::size_t src = detail::wrap_index(F.grid, x, table.steps[order[k]]);
            best = std::max(best, std::abs(F.samples[src]) * weight[k]);
        }
        out.samples[xi] = cplx(best, 0.0);
    });
    return out;
}

/// Centered Hardy-Littlewood maximal function relative to rho:
/// max over the radii grid of the average of |f| over {rho(x-y) < r}.
/// The uncentered sup of the text is comparable within a factor 2^gamma.
inline GridFunction hl_max(const GridFunction& f, const DilationGroup& group,
                           const std::vector<double>& radii) {
    if (radii.empty()) throw EmptyRadii("hl_max: radii grid is empty");
    if (f.side != Side::physical) throw SideMismatch("hl_max: physical side expected");
    const auto table = detail::offset_table(group, f.grid);
    const std::size_t count = f.grid.point_count();

    // per-radius member lists in flat (row-major) order, shared across centers
    std::vector<std::vector<std::size_t>> members(radii.size());
    for (std::size_t r = 0; r < radii.size(); ++r)
        for (std::size_t o = 0; o < count; ++o)
            if (table.rho_values[o] < radii[r]) members[r].push_back(o);

    GridFunction out(f.grid, Side::physical);
    parallel_for(0, count, [&](std::size_t xi) {
        std::array<int, 3> x{};
        f.grid.unflatten(xi, x);
        double best = 0.0;
        for (std::size_t r = 0; r < radii.size(); ++r) {
            if (members[r].empty()) continue;
            double acc = 0.0;
            for (std::size_t o : members[r])
                acc += std::abs(f.samples[detail::wrap_index(f.grid, x, table.steps[o])]);
            best = std::max(best, acc / static_cast<double>(members[r].size()));
        }
        out.samples[xi] = cplx(best, 0.0);
    });
    return out;
}

/// Grand maximal function f*(x) = max over the s grid of |Phi_s * f(x)| for a
/// unit-mass mollifier Phi (Phi_hat(0) = 1 within 1e-8, else MassError).
inline GridFunction grand_max(const GridFunction& f, const FrequencySymbol& Phi,
                              const DilationGroup& group, const std::vector<double>& s_grid) {
    if (f.side != Side::physical) throw SideMismatch("grand_max: physical side expected");
    if (s_grid.empty()) throw EmptyRadii("grand_max: scale grid is empty");
    const Vec zero(static_cast<std::size_t>(group.dim), 0.0);
    const double mass = std::abs(Phi.rule(zero));
    if (std::abs(mass - 1.0) > 1e-8)
        throw MassError("grand_max: |Phi_hat(0) - 1| = " + std::to_string(std::abs(mass - 1.0)));

    const GridFunction fhat = transform(f);
    GridFunction out(f.grid, Side::physical);
    for (double s : s_grid) {
        GridFunction spec = sample_dilated_symbol(Phi, group, s, f.grid);
        parallel_for(0, spec.samples.size(),
                     [&](std::size_t i) { spec.samples[i] *= fhat.samples[i]; });
        const GridFunction conv = transform(spec);
        parallel_for(0, out.samples.size(), [&](std::size_t i) {
            out.samples[i] =
                cplx(std::max(out.samples[i].real(), std::abs(conv.samples[i])), 0.0);
        });
    }
    return out;
}

/// Lower bound of [w]_{A_p} over the finite family of centered rho-balls
/// (all grid centers x every radius). The true constant is a sup over all
/// balls, so this reports from below.
inline double ap_constant(const Weight& w, const DilationGroup& group, const PeriodicGrid& grid,
                          double p, const std::vector<double>& radii) {
    if (!(p > 1.0))
        throw NonAdmissibleExponent("ap_constant: p must exceed 1, got " + std::to_string(p));
    if (radii.empty()) throw EmptyRadii("ap_constant: radii grid is empty");
    if (w.samples.size() != grid.point_count())
        throw GridMismatch("ap_constant: weight sample count differs from the grid");
    const auto table = detail::offset_table(group, grid);
    const std::size_t count = grid.point_count();
    std::vector<double> dual(count);
    for (std::size_t i = 0; i < count; ++i) dual[i] = std::pow(w.samples[i], -1.0 / (p - 1.0));

    std::vector<std::vector<std::size_t>> members(radii.size());
    for (std::size_t r = 0; r < radii.size(); ++r)
        for (std::size_t o = 0; o < count; ++o)
            if (table.rho_values[o] < radii[r]) members[r].push_back(o);

    std::vector<double> best_at(count, 0.0);
    parallel_for(0, count, [&](std::size_t xi) {
        std::array<int, 3> x{};
        grid.unflatten(xi, x);
        double best = 0.0;
        for (std::size_t r = 0; r < radii.size(); ++r) {
            if (members[r].empty()) continue;
            double aw = 0.0, au = 0.0;
            for (std::size_t o : members[r]) {
                const std::size_t src = detail::wrap_index(grid, x, table.steps[o]);
                aw += w.samples[src];
                au += dual[src];
            }
            const double nb = static_cast<double>(members[r].size());
            best = std::max(best, (aw / nb) * std::pow(au / nb, p - 1.0));
        }
        best_at[xi] = best;
    });
    return *std::max_element(best_at.begin(), best_at.end());
}

/// Regularized power weight w(x) = (reg + rho(x))^a; the regularizer keeps
/// the origin sample finite for negative exponents.
inline Weight make_power_weight(const PeriodicGrid& grid, const DilationGroup& group, double a,
                                double reg = 1e-3, double declared_p = 2.0) {
    Weight w;
    w.declared_exponent = declared_p;
    const auto rho_phys = rho_table(group, grid);
    w.samples.resize(grid.point_count());
    for (std::size_t i = 0; i < w.samples.size(); ++i)
        w.samples[i] = std::pow(reg + (*rho_phys)[i], a);
    return w;
}

/// Fills the weight's measured constant from the finite ball family.
inline double measure_ap(Weight& w, const DilationGroup& group, const PeriodicGrid& grid,
                         const std::vector<double>& radii) {
    w.measured_ap = ap_constant(w, group, grid, w.declared_exponent, radii);
    return w.measured_ap;
}

/// H^p quasi-norm ||f*||_p through the grand maximal function.
inline double hp_quasinorm(const GridFunction& f, const FrequencySymbol& Phi,
                           const DilationGroup& group, double p,
                           const std::vector<double>& s_grid) {
    return lp_norm(grand_max(f, Phi, group, s_grid), p);
}

/// Pointwise-bound diagnostic: measures the best constant in
///   F**_{N,1}(x) <= C [ delta^{-N} M(|F|^r)(x)^{1/r} + delta |grad F|**_{N,1}(x) ]
/// over sampled x and delta in {1, 1/2, 1/4}, with N = gamma / r and the
/// gradient taken spectrally. Reported, never asserted against a paper value.
inline double peetre_gradient_bound_ratio(const GridFunction& F, const DilationGroup& group,
                                          double r, const std::vector<double>& radii) {
    const double N = group.gamma / r;
    const GridFunction fstar = peetre_max(F, group, N, 1.0);

    // |grad F| via spectral differentiation
    GridFunction fhat = transform(F);
    GridFunction gradmag(F.grid, Side::physical);
    {
        std::vector<GridFunction> parts;
        for (int d = 0; d < F.grid.dim; ++d) {
            GridFunction comp = fhat;
            parallel_for(0, comp.samples.size(), [&](std::size_t i) {
                Vec xi;
                F.grid.frequency_coords(i, xi);
                comp.samples[i] *=
                    cplx(0.0, 2.0 * std::numbers::pi * xi[static_cast<std::size_t>(d)]);
            });
            parts.push_back(transform(comp));
        }
        parallel_for(0, gradmag.samples.size(), [&](std::size_t i) {
            double acc = 0.0;
            for (const auto& gpart : parts) acc += std::norm(gpart.samples[i]);
            gradmag.samples[i] = cplx(std::sqrt(acc), 0.0);
        });
    }
    const GridFunction gstar = peetre_max(gradmag, group, N, 1.0);

    GridFunction fabs_r(F.grid, Side::physical);
    parallel_for(0, fabs_r.samples.size(), [&](std::size_t i) {
        fabs_r.samples[i] = cplx(std::pow(std::abs(F.samples[i]), r), 0.0);
    });
    const GridFunction mfr = hl_max(fabs_r, group, radii);

    double worst = 0.0;
    for (double delta : {1.0, 0.5, 0.25}) {
        for (std::size_t i = 0; i < fstar.samples.size(); ++i) {
            const double rhs = std::pow(delta, -N) * std::pow(mfr.samples[i].real(), 1.0 / r) +
                               delta * gstar.samples[i].real();
            if (rhs > 1e-300) worst = std::max(worst, fstar.samples[i].real() / rhs);
        }
    }
    return worst;
}

/// Scale-integrated diagnostic for the maximal control of Peetre functions:
/// fitted C with
///   int [F(.,t)**]^q dt/t <= C int M(|f*phi_t|^r)^{q/r} dt/t,  r = gamma/N.
inline double scale_integrated_bound_ratio(const GridFunction& f, const FrequencySymbol& sym,
                                           const DilationGroup& group, const ScaleWindow& window,
                                           double q, double N,
                                           const std::vector<double>& radii) {
    const double r = group.gamma / N;
    const double w = window.node_weight();
    std::vector<double> lhs(f.grid.point_count(), 0.0), rhs(f.grid.point_count(), 0.0);
    const GridFunction fhat = transform(f);
    for (double t : window.nodes()) {
        GridFunction spec = sample_dilated_symbol(sym, group, t, f.grid);
        parallel_for(0, spec.samples.size(),
                     [&](std::size_t i) { spec.samples[i] *= fhat.samples[i]; });
        const GridFunction conv = transform(spec);
        const GridFunction star = peetre_max(conv, group, N, 1.0 / t);
        GridFunction conv_r(f.grid, Side::physical);
        parallel_for(0, conv_r.samples.size(), [&](std::size_t i) {
            conv_r.samples[i] = cplx(std::pow(std::abs(conv.samples[i]), r), 0.0);
        });
        const GridFunction m = hl_max(conv_r, group, radii);
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            lhs[i] += w * std::pow(star.samples[i].real(), q);
            rhs[i] += w * std::pow(m.samples[i].real(), q / r);
        }
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i)
        if (rhs[i] > 1e-300) worst = std::max(worst, lhs[i] / rhs[i]);
    return worst;
}

} // namespace parlp
