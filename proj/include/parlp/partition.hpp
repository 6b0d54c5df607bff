#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "parlp/dilation.hpp"
#include "parlp/errors.hpp"
#include "parlp/grid.hpp"
#include "parlp/symbols.hpp"

namespace parlp {

/// Finite family of t-intervals whose dilates of the symbol stay uniformly
/// large across directions:
///   inf over the sphere of max over h of inf over t in I_h of |phi_hat(A_t* xi)|^2 >= c.
struct IntervalCover {
    std::vector<std::array<double, 2>> intervals;
    double lower_bound = 0.0; // measured inf-max-inf, with the 0.9 safety factor

    double b0() const {
        double worst = 0.0;
        for (const auto& iv : intervals) worst = std::max(worst, iv[0] / iv[1]);
        return worst;
    }
};

struct ClassBReport {
    double epsilon_estimate = 0.0;     // low-frequency log-log slope (min over directions)
    bool vanishes_near_origin = false; // symbol identically ~0 on the probe ring near 0
    std::array<double, 3> decay_sup{}; // sup |phi| rho*^tau on the far probe, tau = 1, 2, 4
    bool decay_pass = false;
    double nondegeneracy_floor = 0.0;  // min over directions of sup_t |phi_hat(A_t* u)|
    bool cancellation_ok = false;
    bool pass = false;
};

/// Probes the class-B conditions: vanishing at the origin with a positive
/// low-frequency exponent, rapid decay against powers of rho*, and the
/// non-degeneracy sup_t |phi_hat(A_t* xi)| > 0 on a sphere sample.
/// Report-style; never throws on failure.
inline ClassBReport check_class_B(const FrequencySymbol& sym, const DilationGroup& group,
                                  int directions = 32) {
    ClassBReport rep;
    const Vec zero(static_cast<std::size_t>(group.dim), 0.0);
    rep.cancellation_ok = std::abs(sym.rule(zero)) <= 1e-12;

    const auto dirs = unit_sphere_points(group.dim, directions);

    // low-frequency slope of |phi_hat(s u)| in Euclidean s
    {
        const auto radii = log_space(1e-4, 1e-2, 9);
        double min_slope = std::numeric_limits<double>::infinity();
        bool any_signal = false;
        for (const auto& u : dirs) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            int npts = 0;
            for (double s : radii) {
                Vec xi(u);
                for (auto& c : xi) c *= s;
                const double v = std::abs(sym.rule(xi));
                if (v < 1e-250) continue;
                const double lx = std::log(s), ly = std::log(v);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
                ++npts;
            }
            if (npts >= 3) {
                any_signal = true;
                const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
                min_slope = std::min(min_slope, slope);
            }
        }
        rep.vanishes_near_origin = !any_signal;
        rep.epsilon_estimate =
            any_signal ? min_slope : std::numeric_limits<double>::infinity();
    }

    // decay: |phi_hat(A_t* u)| t^tau must not grow along the far probe
    {
        const auto ts = log_space(1.0, 1e3, 61);
        const std::array<double, 3> taus{1.0, 2.0, 4.0};
        std::array<double, 3> inner{}, outer{};
        for (double t : ts) {
            const Matrix At = dilate(group, t, /*adjoint=*/true);
            for (const auto& u : dirs) {
                const double v = std::abs(sym.rule(At * u));
                for (std::size_t k = 0; k < taus.size(); ++k) {
                    const double prod = v * std::pow(t, taus[k]);
                    rep.decay_sup[k] = std::max(rep.decay_sup[k], prod);
                    (t <= 31.0 ? inner[k] : outer[k]) =
                        std::max(t <= 31.0 ? inner[k] : outer[k], prod);
                }
            }
        }
        rep.decay_pass = true;
        for (std::size_t k = 0; k < taus.size(); ++k)
            if (!(std::isfinite(rep.decay_sup[k])) || outer[k] > inner[k] + 1e-12)
                rep.decay_pass = false;
    }

    // non-degeneracy floor
    {
        const auto ts = log_space(1e-3, 1e3, 121);
        std::vector<double> best(dirs.size(), 0.0);
        for (double t : ts) {
            const Matrix At = dilate(group, t, /*adjoint=*/true);
            for (std::size_t i = 0; i < dirs.size(); ++i)
                best[i] = std::max(best[i], std::abs(sym.rule(At * dirs[i])));
        }
        rep.nondegeneracy_floor = *std::min_element(best.begin(), best.end());
    }

    rep.pass = rep.cancellation_ok &&
               (rep.vanishes_near_origin || rep.epsilon_estimate > 0.05) && rep.decay_pass &&
               rep.nondegeneracy_floor > 1e-12;
    return rep;
}

/// Greedy realization of the compactness argument: per sampled direction,
/// grow the maximal t-interval holding at least half the direction's peak of
/// |phi_hat(A_t* u)|^2, then select a minimal covering family. The returned
/// lower bound carries a 0.9 safety factor against dips between samples.
inline IntervalCover find_interval_cover(const FrequencySymbol& sym, const DilationGroup& group,
                                         int sphere_samples, const std::vector<double>& t_grid) {
    if (t_grid.size() < 2) throw CoverFailure("find_interval_cover: t grid too small");
    const bool radial = static_cast<bool>(sym.radial);
    const auto dirs = unit_sphere_points(group.dim, radial ? 1 : sphere_samples);
    const std::size_t nd = dirs.size();
    const std::size_t nt = t_grid.size();

    // profile table G[i][k] = |phi_hat(A_{t_k}* u_i)|^2
    std::vector<std::vector<double>> G(nd, std::vector<double>(nt, 0.0));
    for (std::size_t k = 0; k < nt; ++k) {
        if (radial) {
            const double v = std::abs(sym.radial(t_grid[k]));
            G[0][k] = v * v;
        } else {
            const Matrix At = dilate(group, t_grid[k], /*adjoint=*/true);
            for (std::size_t i = 0; i < nd; ++i) {
                const double v = std::abs(sym.rule(At * dirs[i]));
                G[i][k] = v * v;
            }
        }
    }

    std::vector<double> peak(nd, 0.0);
    std::vector<std::size_t> peak_at(nd, 0);
    for (std::size_t i = 0; i < nd; ++i) {
        for (std::size_t k = 0; k < nt; ++k)
            if (G[i][k] > peak[i]) {
                peak[i] = G[i][k];
                peak_at[i] = k;
            }
        if (peak[i] < 1e-20)
            throw CoverFailure(
                "find_interval_cover: a sphere direction sees no symbol mass "
                "(non-degeneracy fails at this resolution)");
    }

    // candidate index intervals: maximal half-peak plateaus around each peak
    std::set<std::pair<std::size_t, std::size_t>> candidate_set;
    for (std::size_t i = 0; i < nd; ++i) {
        std::size_t lo = peak_at[i], hi = peak_at[i];
        while (lo > 0 && G[i][lo - 1] >= 0.5 * peak[i]) --lo;
        while (hi + 1 < nt && G[i][hi + 1] >= 0.5 * peak[i]) ++hi;
        if (lo == hi) { // keep intervals nondegenerate so that b0 < 1
            if (hi + 1 < nt)
                ++hi;
            else if (lo > 0)
                --lo;
            else
                throw CoverFailure("find_interval_cover: degenerate single-node interval");
        }
        candidate_set.emplace(lo, hi);
    }
    const std::vector<std::pair<std::size_t, std::size_t>> candidates(candidate_set.begin(),
                                                                      candidate_set.end());

    const auto min_on = [&](std::size_t i, const std::pair<std::size_t, std::size_t>& iv) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t k = iv.first; k <= iv.second; ++k) m = std::min(m, G[i][k]);
        return m;
    };

    std::vector<bool> covered(nd, false);
    std::vector<std::pair<std::size_t, std::size_t>> selected;
    std::size_t remaining = nd;
    while (remaining > 0) {
        std::size_t best_candidate = candidates.size();
        std::size_t best_gain = 0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            std::size_t gain = 0;
            for (std::size_t i = 0; i < nd; ++i)
                if (!covered[i] && min_on(i, candidates[c]) >= 0.5 * peak[i]) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best_candidate = c;
            }
        }
        if (best_candidate == candidates.size())
            throw CoverFailure("find_interval_cover: greedy selection stalled");
        selected.push_back(candidates[best_candidate]);
        for (std::size_t i = 0; i < nd; ++i)
            if (!covered[i] && min_on(i, candidates[best_candidate]) >= 0.5 * peak[i]) {
                covered[i] = true;
                --remaining;
            }
    }

    IntervalCover cover;
    double inf_max_inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nd; ++i) {
        double best = 0.0;
        for (const auto& iv : selected) best = std::max(best, min_on(i, iv));
        inf_max_inf = std::min(inf_max_inf, best);
    }
    for (const auto& iv : selected)
        cover.intervals.push_back({t_grid[iv.first], t_grid[iv.second]});
    cover.lower_bound = 0.9 * inf_max_inf;
    if (!(cover.lower_bound > 0.0))
        throw CoverFailure("find_interval_cover: no positive lower bound achieved");
    return cover;
}

inline IntervalCover default_cover(const FrequencySymbol& sym, const DilationGroup& group) {
    const int sphere = group.dim == 3 ? 1024 : 256;
    return find_interval_cover(sym, group, sphere, log_space(1e-3, 1e3, 481));
}

/// Output of the partition construction: theta, Psi, the dual filter eta_hat
/// with support in {r1 < rho* < r2}, and the low-pass zeta_hat. Immutable
/// and freely shareable once built.
struct PartitionOfUnity {
    double b = 0.5;
    double b0 = 0.0;
    double theta_m = 0.0, theta_h = 0.0; // theta == 1 on [m, H]
    double r1 = 0.0, r2 = 0.0;           // supp eta_hat within {r1 < rho* < r2}
    double cover_c = 0.0;
    double psi_floor = 0.0;
    std::string symbol_id;

    DilationGroup group;
    FrequencySymbol base;
    FrequencySymbol eta_hat;
    FrequencySymbol zeta_hat;

    std::function<double(double)> theta;
    std::function<double(double)> psi_radial;            // empty unless base is radial
    std::function<double(const Vec&)> psi;
    std::function<double(int, double)> pair_term_radial; // phi_hat eta_hat at scale b^j, radial
    std::function<double(int, const Vec&)> pair_term;

    bool radial() const { return static_cast<bool>(base.radial); }
};

namespace detail {

// j-range with b^j r inside (lo_sup, hi_sup); +-1 of slack, terms vanish
// outside their support anyway.
inline void scale_window(double r, double b, double lo_sup, double hi_sup, int& jlo, int& jhi) {
    const double lb = std::log(b);
    const double flo = std::log(hi_sup / r) / lb;
    const double fhi = std::log(lo_sup / r) / lb;
    jlo = static_cast<int>(std::ceil(flo)) - 1;
    jhi = static_cast<int>(std::floor(fhi)) + 1;
}

} // namespace detail

/// Builds the partition of unity for an admissible base b in [b0, 1):
/// theta is a smoothstep equal to 1 on [m, H] supported in [m/2, 2H],
/// Psi(xi) = sum_j theta(b^j rho*(xi)) |phi_hat(A_{b^j}* xi)|^2,
/// eta_hat = theta(rho*) conj(phi_hat) / Psi, and
/// zeta_hat = 1 - sum_{j>=0} phi_hat eta_hat (A_{b^j}* xi).
inline PartitionOfUnity build_partition(const FrequencySymbol& sym, const DilationGroup& group,
                                        const IntervalCover& cover, double b) {
    if (cover.intervals.empty())
        throw CoverFailure("build_partition: empty interval cover");
    const double b0 = cover.b0();
    if (!(b > 0.0) || b >= 1.0)
        throw BaseTooSmall("build_partition: base must lie in (0,1), got " + std::to_string(b));
    if (b < b0 - 1e-12)
        throw BaseTooSmall("build_partition: base " + std::to_string(b) +
                           " is below b0 = " + std::to_string(b0));

    double m = std::numeric_limits<double>::infinity(), H = 0.0;
    for (const auto& iv : cover.intervals) {
        m = std::min(m, iv[0]);
        H = std::max(H, iv[1]);
    }
    const double r1 = 0.5 * m;
    const double r2 = 2.0 * H;

    const auto theta = [m, H](double r) -> double {
        if (r <= 0.5 * m || r >= 2.0 * H) return 0.0;
        if (r < m) return detail::smooth_step((r - 0.5 * m) / (0.5 * m));
        if (r <= H) return 1.0;
        return detail::smooth_step((2.0 * H - r) / H);
    };

    const bool radial = static_cast<bool>(sym.radial);
    const DilationGroup grp = group;
    const FrequencySymbol base = sym;

    std::function<double(double)> psi_radial;
    if (radial) {
        psi_radial = [base, theta, b, m, H](double r) -> double {
            if (!(r > 0.0)) return 0.0;
            int jlo, jhi;
            detail::scale_window(r, b, 0.5 * m, 2.0 * H, jlo, jhi);
            double acc = 0.0;
            for (int j = jlo; j <= jhi; ++j) {
                const double rr = std::pow(b, j) * r;
                const double th = theta(rr);
                if (th == 0.0) continue;
                acc += th * std::norm(base.radial(rr));
            }
            return acc;
        };
    }
    const std::function<double(const Vec&)> psi = [base, grp, theta, b, m, H,
                                                   psi_radial](const Vec& xi) -> double {
        const double r = rho(grp, xi, /*dual=*/true);
        if (!(r > 0.0)) return 0.0;
        if (psi_radial) return psi_radial(r);
        int jlo, jhi;
        detail::scale_window(r, b, 0.5 * m, 2.0 * H, jlo, jhi);
        double acc = 0.0;
        for (int j = jlo; j <= jhi; ++j) {
            const double rr = std::pow(b, j) * r;
            const double th = theta(rr);
            if (th == 0.0) continue;
            const Matrix A = dilate(grp, std::pow(b, j), /*adjoint=*/true);
            acc += th * std::norm(base.rule(A * xi));
        }
        return acc;
    };

    PartitionOfUnity pou;
    pou.b = b;
    pou.b0 = b0;
    pou.theta_m = m;
    pou.theta_h = H;
    pou.r1 = r1;
    pou.r2 = r2;
    pou.cover_c = cover.lower_bound;
    pou.symbol_id = sym.id;
    pou.group = group;
    pou.base = sym;
    pou.theta = theta;
    pou.psi_radial = psi_radial;
    pou.psi = psi;

    if (radial) {
        const auto base_radial = sym.radial;
        pou.pair_term_radial = [base_radial, theta, psi_radial, b, r1, r2](int j,
                                                                           double r) -> double {
            const double rr = std::pow(b, j) * r;
            if (rr <= r1 || rr >= r2) return 0.0;
            const double th = theta(rr);
            if (th == 0.0) return 0.0;
            const double denom = psi_radial(rr);
            if (!(denom > 0.0)) return 0.0;
            return th * std::norm(base_radial(rr)) / denom;
        };
    }
    pou.pair_term = [base, grp, theta, b, m, H, r1, r2,
                     pair_radial = pou.pair_term_radial](int j, const Vec& xi) -> double {
        const double r = rho(grp, xi, /*dual=*/true);
        if (!(r > 0.0)) return 0.0;
        if (pair_radial) return pair_radial(j, r);
        const double rr = std::pow(b, j) * r;
        if (rr <= r1 || rr >= r2) return 0.0;
        const double th = theta(rr);
        if (th == 0.0) return 0.0;
        const Matrix A = dilate(grp, std::pow(b, j), /*adjoint=*/true);
        const Vec eta_arg = A * xi;
        // Psi at the dilated point, reusing rho*(eta_arg) = b^j r
        int jlo, jhi;
        detail::scale_window(rr, b, 0.5 * m, 2.0 * H, jlo, jhi);
        double denom = 0.0;
        for (int i = jlo; i <= jhi; ++i) {
            const double ri = std::pow(b, i) * rr;
            const double ti = theta(ri);
            if (ti == 0.0) continue;
            const Matrix Ai = dilate(grp, std::pow(b, i), /*adjoint=*/true);
            denom += ti * std::norm(base.rule(Ai * eta_arg));
        }
        if (!(denom > 0.0)) return 0.0;
        return th * std::norm(base.rule(eta_arg)) / denom;
    };

    // eta_hat as a first-class symbol
    pou.eta_hat.id = sym.id + ":eta";
    pou.eta_hat.cancellation = true;
    pou.eta_hat.annulus = {r1, r2};
    pou.eta_hat.decay_epsilon = std::numeric_limits<double>::infinity();
    if (radial) {
        const auto base_radial = sym.radial;
        pou.eta_hat.radial = [base_radial, theta, psi_radial, r1, r2](double r) -> cplx {
            if (r <= r1 || r >= r2) return cplx(0.0, 0.0);
            const double th = theta(r);
            if (th == 0.0) return cplx(0.0, 0.0);
            const double denom = psi_radial(r);
            if (!(denom > 0.0)) return cplx(0.0, 0.0);
            return th * std::conj(base_radial(r)) / denom;
        };
        const auto eta_radial = pou.eta_hat.radial;
        pou.eta_hat.rule = [grp, eta_radial](const Vec& xi) -> cplx {
            return eta_radial(rho(grp, xi, /*dual=*/true));
        };
    } else {
        pou.eta_hat.rule = [base, grp, theta, psi, r1, r2](const Vec& xi) -> cplx {
            const double r = rho(grp, xi, /*dual=*/true);
            if (r <= r1 || r >= r2) return cplx(0.0, 0.0);
            const double th = theta(r);
            if (th == 0.0) return cplx(0.0, 0.0);
            const double denom = psi(xi);
            if (!(denom > 0.0)) return cplx(0.0, 0.0);
            return th * std::conj(base.rule(xi)) / denom;
        };
    }

    // zeta_hat = 1 - sum_{j >= 0} phi_hat eta_hat (A_{b^j}* xi)
    pou.zeta_hat.id = sym.id + ":zeta";
    pou.zeta_hat.annulus = {0.0, r2};
    if (radial) {
        const auto pair_radial = pou.pair_term_radial;
        pou.zeta_hat.radial = [pair_radial, b, r1, r2](double r) -> cplx {
            if (!(r > 0.0)) return cplx(1.0, 0.0);
            int jlo, jhi;
            detail::scale_window(r, b, r1, r2, jlo, jhi);
            double acc = 0.0;
            for (int j = std::max(0, jlo); j <= jhi; ++j) acc += pair_radial(j, r);
            return cplx(1.0 - acc, 0.0);
        };
        const auto zeta_radial = pou.zeta_hat.radial;
        pou.zeta_hat.rule = [grp, zeta_radial](const Vec& xi) -> cplx {
            return zeta_radial(rho(grp, xi, /*dual=*/true));
        };
    } else {
        const auto pair = pou.pair_term;
        pou.zeta_hat.rule = [pair, grp, b, r1, r2](const Vec& xi) -> cplx {
            const double r = rho(grp, xi, /*dual=*/true);
            if (!(r > 0.0)) return cplx(1.0, 0.0);
            int jlo, jhi;
            detail::scale_window(r, b, r1, r2, jlo, jhi);
            double acc = 0.0;
            for (int j = std::max(0, jlo); j <= jhi; ++j) acc += pair(j, xi);
            return cplx(1.0 - acc, 0.0);
        };
    }

    // measured floor of Psi over one scale period (Psi(A_b* xi) = Psi(xi))
    {
        double floor_val = std::numeric_limits<double>::infinity();
        const int steps = 128;
        if (radial) {
            for (int i = 0; i < steps; ++i) {
                const double r = std::pow(1.0 / b, static_cast<double>(i) / steps);
                floor_val = std::min(floor_val, psi_radial(r));
            }
        } else {
            const auto dirs = unit_sphere_points(group.dim, group.dim == 3 ? 256 : 128);
            for (int i = 0; i < steps / 4; ++i) {
                const double s = std::pow(1.0 / b, static_cast<double>(i) / (steps / 4));
                const Matrix As = dilate(group, s, /*adjoint=*/true);
                for (const auto& u : dirs)
                    floor_val = std::min(floor_val, psi(As * u));
            }
        }
        pou.psi_floor = floor_val;
        if (!(pou.psi_floor > 0.0))
            throw PsiFloorError("build_partition: measured min Psi = " +
                                std::to_string(pou.psi_floor) + " is not positive");
    }

    return pou;
}

inline PartitionOfUnity default_partition(const FrequencySymbol& sym,
                                          const DilationGroup& group) {
    const IntervalCover cover = default_cover(sym, group);
    const double b = std::max(0.5, cover.b0());
    return build_partition(sym, group, cover, b);
}

/// max over nonzero dual-lattice points of |sum_j phi_hat eta_hat(A_{b^j}* xi) - 1|.
inline double partition_residual(const PartitionOfUnity& pou, const PeriodicGrid& grid) {
    const auto table = rho_star_table(pou.group, grid);
    const std::size_t count = grid.point_count();
    std::vector<double> res(count, 0.0);
    parallel_for(0, count, [&](std::size_t i) {
        const double r = (*table)[i];
        if (!(r > 0.0)) return;
        int jlo, jhi;
        detail::scale_window(r, pou.b, pou.r1, pou.r2, jlo, jhi);
        double acc = 0.0;
        if (pou.pair_term_radial) {
            for (int j = jlo; j <= jhi; ++j) acc += pou.pair_term_radial(j, r);
        } else {
            Vec xi;
            grid.frequency_coords(i, xi);
            for (int j = jlo; j <= jhi; ++j) acc += pou.pair_term(j, xi);
        }
        res[i] = std::abs(acc - 1.0);
    });
    return *std::max_element(res.begin(), res.end());
}

/// Effective rho*-support [s_lo, s_hi] of a symbol: declared annulus bounds
/// when present, otherwise probed along an orbit until the profile falls
/// below 1e-16 of its peak.
inline std::pair<double, double> effective_support(const FrequencySymbol& sym,
                                                   const DilationGroup& group) {
    if (sym.annulus) return *sym.annulus;
    const auto ts = log_space(1e-8, 1e8, 641);
    std::vector<double> vals(ts.size(), 0.0);
    if (sym.radial) {
        for (std::size_t k = 0; k < ts.size(); ++k) vals[k] = std::abs(sym.radial(ts[k]));
    } else {
        const auto dirs = unit_sphere_points(group.dim, 8);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const Matrix At = dilate(group, ts[k], /*adjoint=*/true);
            for (const auto& u : dirs) vals[k] = std::max(vals[k], std::abs(sym.rule(At * u)));
        }
    }
    const double peak = *std::max_element(vals.begin(), vals.end());
    if (!(peak > 0.0)) throw DegenerateOrbit("effective_support: symbol vanishes on the probe");
    std::size_t lo = 0, hi = ts.size() - 1;
    while (lo < hi && vals[lo] < 1e-16 * peak) ++lo;
    while (hi > lo && vals[hi] < 1e-16 * peak) --hi;
    return {ts[lo], ts[hi]};
}

/// j-range over which the transition constants C(psi, j, L) are sampled:
/// scales where the dilated symbol support can meet supp eta_hat, padded by
/// three scales each side.
inline std::pair<int, int> valid_j_window(const FrequencySymbol& sym,
                                          const PartitionOfUnity& pou) {
    const auto [s_lo, s_hi] = effective_support(sym, pou.group);
    const double lb = std::log(pou.b);
    const double a = std::log(pou.r2 / s_lo) / lb;
    const double c = std::log(pou.r1 / s_hi) / lb;
    const int jlo = static_cast<int>(std::floor(std::min(a, c))) - 3;
    const int jhi = static_cast<int>(std::ceil(std::max(a, c))) + 3;
    return {jlo, jhi};
}

/// C(psi, j, L) = integral of (1 + rho(x))^L |F^{-1}[psi_hat(A_{b^-j}* .) eta_hat](x)| dx
/// by grid quadrature.
inline double transition_constant(const FrequencySymbol& sym, const PartitionOfUnity& pou,
                                  const PeriodicGrid& grid, int j, double weight_power) {
    const auto [jlo, jhi] = valid_j_window(sym, pou);
    if (j < jlo || j > jhi)
        throw WindowError("transition_constant: j = " + std::to_string(j) +
                          " outside sampled window [" + std::to_string(jlo) + ", " +
                          std::to_string(jhi) + "]");
    const double scale = std::pow(pou.b, -j);
    GridFunction spec(grid, Side::frequency);
    if (sym.radial && pou.eta_hat.radial) {
        const auto table = rho_star_table(pou.group, grid);
        parallel_for(0, spec.samples.size(), [&](std::size_t i) {
            const double r = (*table)[i];
            spec.samples[i] = sym.radial(scale * r) * pou.eta_hat.radial(r);
        });
    } else {
        const Matrix A = dilate(pou.group, scale, /*adjoint=*/true);
        parallel_for(0, spec.samples.size(), [&](std::size_t i) {
            Vec xi;
            grid.frequency_coords(i, xi);
            spec.samples[i] = sym.rule(A * xi) * pou.eta_hat.rule(xi);
        });
    }
    zero_nyquist(spec);
    const GridFunction phys = transform(spec);
    const auto rho_phys = rho_table(pou.group, grid);
    const double cell = std::pow(grid.spacing(), grid.dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < phys.samples.size(); ++i)
        acc += std::pow(1.0 + (*rho_phys)[i], weight_power) * std::abs(phys.samples[i]);
    return acc * cell;
}

/// D(Xi_k, L) = integral of (1 + rho(x))^L |F^{-1}[zeta_hat Xi_k](x)| dx,
/// Xi_k(xi) = 2 pi i xi_k.
inline double lowpass_constant(const PartitionOfUnity& pou, const PeriodicGrid& grid, int axis,
                               double weight_power) {
    if (axis < 0 || axis >= pou.group.dim)
        throw DimensionError("lowpass_constant: axis out of range");
    GridFunction spec(grid, Side::frequency);
    const auto table = rho_star_table(pou.group, grid);
    parallel_for(0, spec.samples.size(), [&](std::size_t i) {
        Vec xi;
        grid.frequency_coords(i, xi);
        cplx z;
        if (pou.zeta_hat.radial)
            z = pou.zeta_hat.radial((*table)[i]);
        else
            z = pou.zeta_hat.rule(xi);
        spec.samples[i] =
            z * cplx(0.0, 2.0 * std::numbers::pi * xi[static_cast<std::size_t>(axis)]);
    });
    zero_nyquist(spec);
    const GridFunction phys = transform(spec);
    const auto rho_phys = rho_table(pou.group, grid);
    const double cell = std::pow(grid.spacing(), grid.dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < phys.samples.size(); ++i)
        acc += std::pow(1.0 + (*rho_phys)[i], weight_power) * std::abs(phys.samples[i]);
    return acc * cell;
}

} // namespace parlp
