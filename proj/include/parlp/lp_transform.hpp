#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "parlp/errors.hpp"
#include "parlp/grid.hpp"
#include "parlp/partition.hpp"
#include "parlp/symbols.hpp"

namespace parlp {

/// Scale range b^j, j in [j_min, j_max], with K log-uniform substeps per
/// scale for continuous-in-t quadrature: nodes t = b^{j + k/K}, each with
/// weight ln(1/b)/K in the dt/t measure.
struct ScaleWindow {
    double base = 0.5;
    int j_min = 0;
    int j_max = 0;
    int substeps = 1;

    ScaleWindow() = default;
    ScaleWindow(double b, int jmin, int jmax, int k)
        : base(b), j_min(jmin), j_max(jmax), substeps(k) {
        if (!(base > 0.0) || base >= 1.0)
            throw BaseTooSmall("ScaleWindow: base must lie in (0,1)");
        if (j_min > j_max) throw WindowError("ScaleWindow: j_min > j_max");
        if (substeps < 1) throw WindowError("ScaleWindow: substeps must be >= 1");
    }

    double node_weight() const { return std::log(1.0 / base) / substeps; }

    int scale_count() const { return j_max - j_min + 1; }

    std::vector<double> nodes() const { // all t = b^{j + k/K}
        std::vector<double> t;
        t.reserve(static_cast<std::size_t>(scale_count()) * substeps);
        for (int j = j_min; j <= j_max; ++j)
            for (int k = 0; k < substeps; ++k)
                t.push_back(std::pow(base, j + static_cast<double>(k) / substeps));
        return t;
    }
};

/// Per-scale convolution outputs c_j = f * phi_{b^j} over the window.
struct LPCoefficients {
    ScaleWindow window;
    std::string symbol_id;
    PeriodicGrid grid;
    std::vector<GridFunction> scales; // index i holds j = window.j_min + i
};

/// c_j = f * phi_{b^j}, computed frequency-side as fhat(xi) phi_hat(A_{b^j}* xi).
inline LPCoefficients analyze(const GridFunction& f, const FrequencySymbol& sym,
                              const DilationGroup& group, const ScaleWindow& window) {
    if (f.side != Side::physical) throw SideMismatch("analyze: expected a physical-side input");
    const GridFunction fhat = transform(f);
    LPCoefficients out;
    out.window = window;
    out.symbol_id = sym.id;
    out.grid = f.grid;
    out.scales.resize(static_cast<std::size_t>(window.scale_count()));
    for (int j = window.j_min; j <= window.j_max; ++j) {
        GridFunction spec = sample_dilated_symbol(sym, group, std::pow(window.base, j), f.grid);
        parallel_for(0, spec.samples.size(),
                     [&](std::size_t i) { spec.samples[i] *= fhat.samples[i]; });
        out.scales[static_cast<std::size_t>(j - window.j_min)] = transform(spec);
    }
    return out;
}

/// Discrete g-function: pointwise sqrt of the square-sum over scales.
inline GridFunction g_discrete(const LPCoefficients& coeffs) {
    if (coeffs.scales.empty()) return GridFunction(coeffs.grid, Side::physical);
    GridFunction out(coeffs.grid, Side::physical);
    parallel_for(0, out.samples.size(), [&](std::size_t i) {
        double acc = 0.0;
        for (const auto& c : coeffs.scales) acc += std::norm(c.samples[i]);
        out.samples[i] = cplx(std::sqrt(acc), 0.0);
    });
    return out;
}

/// Continuous g-function by log-uniform quadrature of the dt/t integral over
/// the window nodes.
inline GridFunction g_continuous(const GridFunction& f, const FrequencySymbol& sym,
                                 const DilationGroup& group, const ScaleWindow& window) {
    if (f.side != Side::physical)
        throw SideMismatch("g_continuous: expected a physical-side input");
    const GridFunction fhat = transform(f);
    const std::vector<double> ts = window.nodes();
    const double w = window.node_weight();
    GridFunction acc(f.grid, Side::physical);
    std::vector<double> sums(acc.samples.size(), 0.0);
    for (double t : ts) {
        GridFunction spec = sample_dilated_symbol(sym, group, t, f.grid);
        parallel_for(0, spec.samples.size(),
                     [&](std::size_t i) { spec.samples[i] *= fhat.samples[i]; });
        const GridFunction conv = transform(spec);
        parallel_for(0, sums.size(),
                     [&](std::size_t i) { sums[i] += w * std::norm(conv.samples[i]); });
    }
    parallel_for(0, sums.size(),
                 [&](std::size_t i) { acc.samples[i] = cplx(std::sqrt(sums[i]), 0.0); });
    return acc;
}

/// Rescales an annulus-supported symbol so that the discrete Calderon sum
/// over the window's scale lattice is identically one:
///   sum_j |psi_hat(A_{b^j}* xi)|^2 = 1   for xi on a nondegenerate orbit.
/// The sum is the window's log-uniform quadrature of
/// int_0^inf |psi_hat(A_t* xi)|^2 dt/t taken at the b-lattice and is
/// invariant along dilation orbits, so the normalized symbol satisfies the
/// identity everywhere at once. The continuous integral of the result equals
/// ln(1/b) exactly; downstream quadratures (reproduce_eps, g_discrete
/// Plancherel) use the same scale lattice so reconstruction is exact.
inline FrequencySymbol unit_calderon(const FrequencySymbol& sym, const DilationGroup& group,
                                     const ScaleWindow& window) {
    if (!sym.annulus)
        throw DegenerateOrbit("unit_calderon: symbol must be annulus-supported");
    const double b = window.base;
    const double a1 = sym.annulus->first;
    const double a2 = sym.annulus->second;

    const auto orbit_sum_radial = [b, a1, a2](const std::function<cplx(double)>& radial,
                                              double r) -> double {
        if (!(r > 0.0)) return 0.0;
        int jlo, jhi;
        detail::scale_window(r, b, a1, a2, jlo, jhi);
        double acc = 0.0;
        for (int j = jlo; j <= jhi; ++j) acc += std::norm(radial(std::pow(b, j) * r));
        return acc;
    };

    FrequencySymbol out;
    out.id = sym.id + ":unit";
    out.cancellation = sym.cancellation;
    out.annulus = sym.annulus;
    out.decay_epsilon = sym.decay_epsilon;

    if (sym.radial) {
        const auto base_radial = sym.radial;
        // probe one scale period of orbits; the sum is b-periodic in log r
        for (int i = 0; i < 256; ++i) {
            const double r = std::pow(1.0 / b, i / 256.0);
            if (orbit_sum_radial(base_radial, r) < 1e-14)
                throw DegenerateOrbit("unit_calderon: orbit sum below 1e-14 at rho* = " +
                                      std::to_string(r));
        }
        out.radial = [base_radial, orbit_sum_radial](double r) -> cplx {
            const cplx v = base_radial(r);
            if (v == cplx(0.0, 0.0)) return v;
            return v / std::sqrt(orbit_sum_radial(base_radial, r));
        };
        const auto rad = out.radial;
        const DilationGroup grp = group;
        out.rule = [rad, grp](const Vec& xi) { return rad(rho(grp, xi, /*dual=*/true)); };
        return out;
    }

    const DilationGroup grp = group;
    const auto base_rule = sym.rule;
    const auto orbit_sum = [b, a1, a2, grp, base_rule](const Vec& xi) -> double {
        const double r = rho(grp, xi, /*dual=*/true);
        if (!(r > 0.0)) return 0.0;
        int jlo, jhi;
        detail::scale_window(r, b, a1, a2, jlo, jhi);
        double acc = 0.0;
        for (int j = jlo; j <= jhi; ++j) {
            const Matrix A = dilate(grp, std::pow(b, j), /*adjoint=*/true);
            acc += std::norm(base_rule(A * xi));
        }
        return acc;
    };
    {
        const auto dirs = unit_sphere_points(group.dim, group.dim == 3 ? 64 : 32);
        for (int i = 0; i < 32; ++i) {
            const double s = std::pow(1.0 / b, i / 32.0);
            const Matrix As = dilate(group, s, /*adjoint=*/true);
            for (const auto& u : dirs)
                if (orbit_sum(As * u) < 1e-14)
                    throw DegenerateOrbit("unit_calderon: orbit sum below 1e-14");
        }
    }
    out.rule = [base_rule, orbit_sum](const Vec& xi) -> cplx {
        const cplx v = base_rule(xi);
        if (v == cplx(0.0, 0.0)) return v;
        return v / std::sqrt(orbit_sum(xi));
    };
    return out;
}

/// Calderon reconstruction sum_j c_j * eta_{b^j}. For inputs whose spectrum
/// lies inside the covered range the output reproduces them up to the window
/// truncation.
inline GridFunction synthesize(const LPCoefficients& coeffs, const PartitionOfUnity& pou) {
    if (coeffs.symbol_id != pou.symbol_id)
        throw ProvenanceMismatch("synthesize: coefficients built from symbol '" +
                                 coeffs.symbol_id + "' but partition from '" + pou.symbol_id +
                                 "'");
    if (std::abs(coeffs.window.base - pou.b) > 1e-15)
        throw ProvenanceMismatch("synthesize: scale base mismatch between window and partition");
    GridFunction acc(coeffs.grid, Side::frequency);
    for (int j = coeffs.window.j_min; j <= coeffs.window.j_max; ++j) {
        const GridFunction& c = coeffs.scales[static_cast<std::size_t>(j - coeffs.window.j_min)];
        const GridFunction chat = transform(c);
        const GridFunction eta =
            sample_dilated_symbol(pou.eta_hat, pou.group, std::pow(pou.b, j), coeffs.grid);
        parallel_for(0, acc.samples.size(), [&](std::size_t i) {
            acc.samples[i] += chat.samples[i] * eta.samples[i];
        });
    }
    return transform(acc);
}

/// Partial partition sum over a finite window at rho* = r; the window
/// low-pass remainder is 1 minus this.
inline double window_partition_sum(const PartitionOfUnity& pou, const ScaleWindow& window,
                                   double r) {
    double acc = 0.0;
    for (int j = window.j_min; j <= window.j_max; ++j) {
        if (pou.pair_term_radial)
            acc += pou.pair_term_radial(j, r);
        else
            throw WindowError("window_partition_sum: radial partition required");
    }
    return acc;
}

/// Filters f by the truncated reproducing kernel
///   K_eps(xi) = sum over b^j in (eps, 1/eps) of |psi_hat(A_{b^j}* xi)|^2
/// for a unit-Calderon psi; as eps decreases the kernel rises to 1 on every
/// frequency whose orbit crossing lies inside (eps, 1/eps).
inline GridFunction reproduce_eps(const GridFunction& f, const FrequencySymbol& psi,
                                  const DilationGroup& group, double eps,
                                  const ScaleWindow& window) {
    if (!(eps > 0.0) || eps >= 1.0)
        throw WindowError("reproduce_eps: eps must lie in (0,1)");
    if (f.side != Side::physical)
        throw SideMismatch("reproduce_eps: expected a physical-side input");
    const double b = window.base;
    std::vector<double> scales;
    for (int j = -200; j <= 200; ++j) {
        const double t = std::pow(b, j);
        if (t > eps && t < 1.0 / eps) scales.push_back(t);
    }
    GridFunction fhat = transform(f);
    if (psi.radial) {
        const auto table = rho_star_table(group, f.grid);
        parallel_for(0, fhat.samples.size(), [&](std::size_t i) {
            const double r = (*table)[i];
            double k = 0.0;
            for (double t : scales) k += std::norm(psi.radial(t * r));
            fhat.samples[i] *= k;
        });
    } else {
        std::vector<Matrix> mats;
        mats.reserve(scales.size());
        for (double t : scales) mats.push_back(dilate(group, t, /*adjoint=*/true));
        parallel_for(0, fhat.samples.size(), [&](std::size_t i) {
            Vec xi;
            f.grid.frequency_coords(i, xi);
            double k = 0.0;
            for (const auto& A : mats) k += std::norm(psi.rule(A * xi));
            fhat.samples[i] *= k;
        });
    }
    return transform(fhat);
}

/// Scale window whose dilated eta supports cover every frequency with
/// rho* in [band_lo, band_hi]: all j with b^j rho* able to meet (r1, r2).
inline ScaleWindow window_for_band(const PartitionOfUnity& pou, double band_lo, double band_hi,
                                   int substeps = 1) {
    int jmin = 1, jmax = -1;
    bool found = false;
    for (int j = -400; j <= 400; ++j) {
        const double t = std::pow(pou.b, j);
        // b^j * [band_lo, band_hi] meets (r1, r2)?
        if (t * band_hi > pou.r1 && t * band_lo < pou.r2) {
            if (!found) {
                jmin = j;
                jmax = j;
                found = true;
            } else {
                jmin = std::min(jmin, j);
                jmax = std::max(jmax, j);
            }
        }
    }
    if (!found) throw WindowError("window_for_band: band misses the covered range entirely");
    return ScaleWindow(pou.b, jmin, jmax, substeps);
}

/// Scale window covering the orbit crossings of an annulus symbol over a
/// rho* band, used when no partition is in play (unit-Calderon pipelines).
inline ScaleWindow window_covering_annulus(const FrequencySymbol& sym, double b, double band_lo,
                                           double band_hi, int substeps = 1) {
    if (!sym.annulus) throw WindowError("window_covering_annulus: symbol has no annulus bounds");
    int jmin = 1, jmax = -1;
    bool found = false;
    for (int j = -400; j <= 400; ++j) {
        const double t = std::pow(b, j);
        if (t * band_hi > sym.annulus->first && t * band_lo < sym.annulus->second) {
            if (!found) {
                jmin = j;
                jmax = j;
                found = true;
            } else {
                jmin = std::min(jmin, j);
                jmax = std::max(jmax, j);
            }
        }
    }
    if (!found) throw WindowError("window_covering_annulus: band misses every dilated support");
    return ScaleWindow(b, jmin, jmax, substeps);
}

} // namespace parlp
