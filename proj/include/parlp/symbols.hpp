#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "parlp/dilation.hpp"
#include "parlp/errors.hpp"
#include "parlp/grid.hpp"
#include "parlp/parallel.hpp"

namespace parlp {

/// A kernel given by its Fourier transform. `rule` evaluates the symbol at an
/// arbitrary frequency; when the symbol is a profile of the homogeneous norm
/// (every anisotropic built-in is), `radial` holds that profile in rho*(xi),
/// which lets dilated sampling run off a per-grid rho* table instead of one
/// root-find per point and scale.
struct FrequencySymbol {
    std::string id;
    std::function<cplx(const Vec&)> rule;
    std::function<cplx(double)> radial; // profile in rho*(xi); may be empty
    double decay_epsilon = 0.0;         // low-frequency growth exponent, +inf if identically 0 near 0
    std::optional<std::pair<double, double>> annulus; // rho* support bounds when band-limited
    bool cancellation = false;          // symbol vanishes at the origin
};

namespace detail {

struct TableKey {
    std::uint64_t group_key;
    int dim;
    int samples;
    double length;
    bool frequency_side;
    bool operator<(const TableKey& o) const {
        return std::tie(group_key, dim, samples, length, frequency_side) <
               std::tie(o.group_key, o.dim, o.samples, o.length, o.frequency_side);
    }
};

// rho / rho* evaluated over a whole grid once and shared. Values depend only
// on (group, grid), both immutable, so the cache is sound.
inline std::shared_ptr<const std::vector<double>> norm_table(const DilationGroup& g,
                                                             const PeriodicGrid& grid,
                                                             bool frequency_side) {
    static std::mutex mtx;
    static std::map<TableKey, std::shared_ptr<const std::vector<double>>> cache;
    const TableKey key{g.key, grid.dim, grid.samples, grid.length, frequency_side};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto table = std::make_shared<std::vector<double>>(grid.point_count());
    parallel_for(0, grid.point_count(), [&](std::size_t i) {
        Vec v;
        if (frequency_side)
            grid.frequency_coords(i, v);
        else
            grid.physical_coords(i, v);
        (*table)[i] = rho(g, v, /*dual=*/frequency_side);
    });
    std::lock_guard<std::mutex> lock(mtx);
    auto [it, inserted] = cache.emplace(key, table);
    return it->second;
}

} // namespace detail

/// rho*(xi_m) for every dual-lattice point, cached per (group, grid).
inline std::shared_ptr<const std::vector<double>> rho_star_table(const DilationGroup& g,
                                                                 const PeriodicGrid& grid) {
    return detail::norm_table(g, grid, true);
}

/// rho(x_k) for every physical lattice point, cached per (group, grid).
inline std::shared_ptr<const std::vector<double>> rho_table(const DilationGroup& g,
                                                            const PeriodicGrid& grid) {
    return detail::norm_table(g, grid, false);
}

/// Zeroes every sample whose index touches a Nyquist row (axis index 0 in the
/// centered layout). Applied after symbol sampling to keep real-input
/// conjugate symmetry.
inline void zero_nyquist(GridFunction& f) {
    parallel_for(0, f.samples.size(), [&](std::size_t i) {
        std::array<int, 3> idx{};
        f.grid.unflatten(i, idx);
        for (int d = 0; d < f.grid.dim; ++d)
            if (idx[static_cast<std::size_t>(d)] == 0) {
                f.samples[i] = cplx(0.0, 0.0);
                return;
            }
    });
}

/// Frequency-side samples sym(A_t* xi_m): the exact transform of the dilated
/// kernel phi_t(x) = t^{-gamma} phi(A_t^{-1} x).
inline GridFunction sample_dilated_symbol(const FrequencySymbol& sym, const DilationGroup& group,
                                          double t, const PeriodicGrid& grid) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw NonPositiveScale("sample_dilated_symbol: scale must be positive, got " +
                               std::to_string(t));
    GridFunction out(grid, Side::frequency);
    if (sym.radial) {
        const auto table = rho_star_table(group, grid);
        parallel_for(0, out.samples.size(), [&](std::size_t i) {
            out.samples[i] = sym.radial(t * (*table)[i]);
        });
    } else {
        const Matrix At = dilate(group, t, /*adjoint=*/true);
        parallel_for(0, out.samples.size(), [&](std::size_t i) {
            Vec xi;
            grid.frequency_coords(i, xi);
            out.samples[i] = sym.rule(At * xi);
        });
    }
    zero_nyquist(out);
    return out;
}

inline GridFunction sample_symbol(const FrequencySymbol& sym, const DilationGroup& group,
                                  const PeriodicGrid& grid) {
    return sample_dilated_symbol(sym, group, 1.0, grid);
}

namespace detail {

// C-infinity bump on (lo, hi), exp(-1/((r-lo)(hi-r))) rescaled so the peak
// value is 1 at the midpoint.
inline double interval_bump(double r, double lo, double hi) {
    if (r <= lo || r >= hi) return 0.0;
    const double mid = 0.5 * (lo + hi);
    const double peak = (mid - lo) * (hi - mid);
    return std::exp(-1.0 / ((r - lo) * (hi - r)) + 1.0 / peak);
}

// smooth step: 0 for u <= 0, 1 for u >= 1
inline double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

} // namespace detail

/// Q_hat(xi) = -2 pi |xi| e^{-2 pi |xi|}: the isotropic Poisson-derivative
/// kernel. Radial in rho* exactly when the group's norm is Euclidean.
inline FrequencySymbol poisson_symbol(const DilationGroup& group) {
    FrequencySymbol s;
    s.id = "poisson";
    s.cancellation = true;
    s.decay_epsilon = 1.0;
    s.rule = [](const Vec& xi) {
        const double r = norm2(xi);
        return cplx(-2.0 * std::numbers::pi * r * std::exp(-2.0 * std::numbers::pi * r), 0.0);
    };
    if (group.euclidean)
        s.radial = [](double r) {
            return cplx(-2.0 * std::numbers::pi * r * std::exp(-2.0 * std::numbers::pi * r), 0.0);
        };
    return s;
}

/// Anisotropic heat-derivative symbol rho*(xi)^2 e^{-rho*(xi)^2}.
inline FrequencySymbol heat_symbol(const DilationGroup& group) {
    FrequencySymbol s;
    s.id = "heat";
    s.cancellation = true;
    s.decay_epsilon = 2.0;
    s.radial = [](double r) { return cplx(r * r * std::exp(-r * r), 0.0); };
    s.rule = [group](const Vec& xi) {
        const double r = rho(group, xi, /*dual=*/true);
        return cplx(r * r * std::exp(-r * r), 0.0);
    };
    return s;
}

/// Smooth bump supported in the annulus {1 <= rho*(xi) <= 2}.
inline FrequencySymbol annulus_symbol(const DilationGroup& group) {
    FrequencySymbol s;
    s.id = "annulus";
    s.cancellation = true;
    s.decay_epsilon = std::numeric_limits<double>::infinity();
    s.annulus = {1.0, 2.0};
    s.radial = [](double r) { return cplx(detail::interval_bump(r, 1.0, 2.0), 0.0); };
    s.rule = [group](const Vec& xi) {
        const double r = rho(group, xi, /*dual=*/true);
        return cplx(detail::interval_bump(r, 1.0, 2.0), 0.0);
    };
    return s;
}

/// Annulus symbol equal to 1 on {1 <= rho* <= 2}, supported in
/// {1/2 <= rho* <= 4}, with smooth shoulders.
inline FrequencySymbol wide_annulus_symbol(const DilationGroup& group) {
    FrequencySymbol s;
    s.id = "wide_annulus";
    s.cancellation = true;
    s.decay_epsilon = std::numeric_limits<double>::infinity();
    s.annulus = {0.5, 4.0};
    const auto profile = [](double r) {
        if (r <= 0.5 || r >= 4.0) return 0.0;
        if (r < 1.0) return detail::smooth_step((r - 0.5) / 0.5);
        if (r <= 2.0) return 1.0;
        return detail::smooth_step((4.0 - r) / 2.0);
    };
    s.radial = [profile](double r) { return cplx(profile(r), 0.0); };
    s.rule = [group, profile](const Vec& xi) {
        return cplx(profile(rho(group, xi, /*dual=*/true)), 0.0);
    };
    return s;
}

namespace detail {

// Transform of the compactly supported mollifier Phi(x) = c_n e^{-1/(1-|x|^2)}
// on {|x| < 1}, tabulated on a uniform |xi| grid. The table is normalized by
// its value at 0 so the unit-mass condition Phi_hat(0) = 1 holds exactly.
struct RadialTable {
    double dq = 1.0 / 256.0;
    std::vector<double> values;

    double eval(double q) const {
        q = std::abs(q);
        const double u = q / dq;
        const auto last = static_cast<double>(values.size() - 1);
        if (u >= last) return 0.0;
        const std::size_t i = static_cast<std::size_t>(u);
        const double t = u - static_cast<double>(i);
        // Catmull-Rom; mirror at 0 (the profile is even)
        const double p1 = values[i];
        const double p2 = values[i + 1 < values.size() ? i + 1 : values.size() - 1];
        const double p0 = i > 0 ? values[i - 1] : values[1];
        const double p3 = i + 2 < values.size() ? values[i + 2] : 0.0;
        const double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
        const double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        const double c = -0.5 * p0 + 0.5 * p2;
        return ((a * t + b) * t + c) * t + p1;
    }
};

inline double bump_profile(double r) {
    if (r >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

constexpr double gl8_x[8] = {-0.9602898564975363, -0.7966664774136267,
                             -0.5255324099163290, -0.1834346424956498,
                             0.1834346424956498,  0.5255324099163290,
                             0.7966664774136267,  0.9602898564975363};
constexpr double gl8_w[8] = {0.1012285362903763, 0.2223810344533745,
                             0.3137066458778873, 0.3626837833783620,
                             0.3626837833783620, 0.3137066458778873,
                             0.2223810344533745, 0.1012285362903763};

// The radial transform reduces to a 1-D cosine/sine transform of a reduced
// profile g on [0,1]:
//   n=1: g(u) = phi(u),              Phi_hat(q) = 2 int g(u) cos(2 pi q u) du
//   n=2: g(u) = Abel projection,     same cosine form
//   n=3: g(u) = u phi(u),            Phi_hat(q) = (2/q) int g(u) sin(2 pi q u) du
inline const RadialTable& bump_transform_table(int dim) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<RadialTable>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(dim);
    if (it != cache.end()) return *it->second;

    constexpr double q_max = 80.0; // |Phi_hat| is below ~1e-12 out here
    constexpr int panels = 4 * static_cast<int>(q_max) + 16;
    const double hp = 1.0 / panels;

    // reduced profile sampled once on the composite Gauss-Legendre grid
    std::vector<double> node_u, node_gw;
    node_u.reserve(panels * 8);
    node_gw.reserve(panels * 8);
    for (int p = 0; p < panels; ++p)
        for (int k = 0; k < 8; ++k) {
            const double u = p * hp + 0.5 * hp * (gl8_x[k] + 1.0);
            double g;
            if (dim == 1) {
                g = bump_profile(u);
            } else if (dim == 2) {
                // Abel projection: 2 int_0^{sqrt(1-u^2)} phi(sqrt(u^2+v^2)) dv
                g = 0.0;
                const double vmax = u < 1.0 ? std::sqrt(1.0 - u * u) : 0.0;
                if (vmax > 0.0)
                    for (int pp = 0; pp < 16; ++pp)
                        for (int kk = 0; kk < 8; ++kk) {
                            const double v =
                                vmax * (pp + 0.5 * (gl8_x[kk] + 1.0)) / 16.0;
                            g += 2.0 * (vmax / 16.0) * 0.5 * gl8_w[kk] *
                                 bump_profile(std::sqrt(u * u + v * v));
                        }
            } else {
                g = u * bump_profile(u);
            }
            node_u.push_back(u);
            node_gw.push_back(g * 0.5 * hp * gl8_w[k]);
        }

    const auto eval_ft = [&](double q) {
        double acc = 0.0;
        if (dim == 3) {
            if (q < 1e-9) {
                for (std::size_t i = 0; i < node_u.size(); ++i)
                    acc += node_gw[i] * 4.0 * std::numbers::pi * node_u[i];
                return acc;
            }
            for (std::size_t i = 0; i < node_u.size(); ++i)
                acc += node_gw[i] * std::sin(2.0 * std::numbers::pi * q * node_u[i]);
            return 2.0 * acc / q;
        }
        for (std::size_t i = 0; i < node_u.size(); ++i)
            acc += node_gw[i] * std::cos(2.0 * std::numbers::pi * q * node_u[i]);
        return 2.0 * acc;
    };

    auto table = std::make_unique<RadialTable>();
    table->dq = 1.0 / 128.0;
    const double mass = eval_ft(0.0);
    int quiet = 0;
    const int max_entries = static_cast<int>(q_max / table->dq);
    for (int i = 0; quiet < 128 && i < max_entries; ++i) {
        const double v = eval_ft(i * table->dq) / mass;
        table->values.push_back(v);
        quiet = std::abs(v) < 1e-13 ? quiet + 1 : 0;
    }
    table->values.push_back(0.0);
    auto [jt, inserted] = cache.emplace(dim, std::move(table));
    return *jt->second;
}

} // namespace detail

/// Grand-maximal mollifier: transform of the C-infinity bump supported in
/// {|x| <= 1} with unit mass. Phi_hat(0) = 1 holds exactly by construction.
inline FrequencySymbol bump_mollifier_symbol(int dim) {
    const detail::RadialTable& table = detail::bump_transform_table(dim);
    FrequencySymbol s;
    s.id = "bump";
    s.decay_epsilon = 0.0;
    s.rule = [&table](const Vec& xi) { return cplx(table.eval(norm2(xi)), 0.0); };
    return s;
}

/// Gaussian proxy mollifier e^{-pi |xi|^2}; physical tail mass beyond |x| > 8
/// is below 1e-10, so it stands in for a compactly supported kernel on the
/// default box.
inline FrequencySymbol gaussian_mollifier_symbol() {
    FrequencySymbol s;
    s.id = "gauss";
    s.decay_epsilon = 0.0;
    s.rule = [](const Vec& xi) {
        const double r2 = dot(xi, xi);
        return cplx(std::exp(-std::numbers::pi * r2), 0.0);
    };
    return s;
}

/// Built-in registry for the CLI and configs.
inline FrequencySymbol make_symbol(const std::string& id, const DilationGroup& group) {
    if (id == "poisson") return poisson_symbol(group);
    if (id == "heat") return heat_symbol(group);
    if (id == "annulus") return annulus_symbol(group);
    if (id == "wide_annulus") return wide_annulus_symbol(group);
    if (id == "bump") return bump_mollifier_symbol(group.dim);
    if (id == "gauss") return gaussian_mollifier_symbol();
    throw ConfigError("unknown symbol id: " + id);
}

/// Deterministic unit-sphere sample (Euclidean sphere, as in the cover
/// construction).
inline std::vector<Vec> unit_sphere_points(int dim, int count) {
    std::vector<Vec> pts;
    if (dim == 1) {
        pts.push_back({1.0});
        pts.push_back({-1.0});
        return pts;
    }
    if (dim == 2) {
        pts.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double a = 2.0 * std::numbers::pi * i / count;
            pts.push_back({std::cos(a), std::sin(a)});
        }
        return pts;
    }
    // Fibonacci sphere
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double a = golden * i;
        pts.push_back({r * std::cos(a), r * std::sin(a), z});
    }
    return pts;
}

inline std::vector<double> log_space(double lo, double hi, int count) {
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (std::log(hi) - std::log(lo)) / (count - 1);
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + step * i);
    return v;
}

} // namespace parlp
