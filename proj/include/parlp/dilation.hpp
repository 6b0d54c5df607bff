#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "parlp/errors.hpp"
#include "parlp/linalg.hpp"
#include "parlp/random.hpp"

namespace parlp {

/// A validated one-parameter dilation group A_t = exp((log t) P).
///
/// Admissibility means <Px,x> >= <x,x> for all x, i.e. the smallest
/// eigenvalue of the symmetric part of P is at least 1. That condition makes
/// t -> |A_t x| strictly increasing, which is what the homogeneous norm
/// solver below relies on.
struct DilationGroup {
    Matrix generator;          // P
    Matrix generator_adjoint;  // P^T, cached
    int dim = 0;
    double gamma = 0.0;        // trace P, the homogeneous dimension
    double kappa = 1.0;        // adjoint growth exponent
    double exp_tolerance = 1e-12;

    // fast-path classification, fixed at validation time
    bool diagonal = false;
    bool euclidean = false;    // symmetric part == identity => rho(x) == |x|
    Vec diagonal_exponents;

    std::uint64_t key = 0;     // content hash, used by sample-table caches
};

struct NormPropertyReport {
    double triangle_slack = 0.0;     // (P.1) relative excess of rho(x+y) over rho(x)+rho(y)
    double unit_ball_slack = 0.0;    // (P.2) |rho - 1| mismatch across the unit sphere
    double lower_slack = 0.0;        // (P.3) |x| - rho(x) on |x| <= 1
    double upper_slack = 0.0;        // (P.4) rho(x) - |x| on |x| >= 1
    double expansion_slack = 0.0;    // (P.5) relative shortfall of |A_t x| under t|x|, t >= 1
    double contraction_slack = 0.0;  // (P.6) relative excess of |A_t x| over t|x|, t <= 1
    double homogeneity_slack = 0.0;  // relative error of rho(A_t x) = t rho(x)
    int samples = 0;

    double worst() const {
        double w = triangle_slack;
        w = std::max(w, unit_ball_slack);
        w = std::max(w, lower_slack);
        w = std::max(w, upper_slack);
        w = std::max(w, expansion_slack);
        w = std::max(w, contraction_slack);
        w = std::max(w, homogeneity_slack);
        return w;
    }
    bool pass(double tol) const { return worst() <= tol; }
};

/// Validates P and builds the group. Rejects non-square input and matrices
/// whose symmetric part has an eigenvalue below 1 - 1e-12.
inline DilationGroup validate_matrix(const Matrix& P, double exp_tolerance = 1e-12) {
    if (!P.square()) throw DimensionError("validate_matrix: P must be square and nonempty");
    if (!P.finite()) throw AdmissibilityError("validate_matrix: P has non-finite entries");
    const int n = P.rows();
    Matrix sym(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sym(i, j) = 0.5 * (P(i, j) + P(j, i));
    const Vec ev = sym_eigenvalues(sym);
    if (ev.front() < 1.0 - 1e-12)
        throw AdmissibilityError("validate_matrix: min eig((P+P^T)/2) = " +
                                 std::to_string(ev.front()) + " < 1, admissibility fails");

    DilationGroup g;
    g.generator = P;
    g.generator_adjoint = P.transpose();
    g.dim = n;
    g.gamma = P.trace();
    g.kappa = std::max(1.0, max_real_eigenvalue(P));
    g.exp_tolerance = exp_tolerance;
    g.diagonal = detail::is_diagonal(P);
    if (g.diagonal) {
        g.diagonal_exponents.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) g.diagonal_exponents[static_cast<std::size_t>(i)] = P(i, i);
    }
    Matrix dev = sym - Matrix::identity(n);
    g.euclidean = dev.max_abs() <= 1e-12;
    g.key = fnv1a64(P.data().data(), P.data().size() * sizeof(double),
                    fnv1a64(&n, sizeof(n)));
    return g;
}

/// A_t, or A_t^* when adjoint is set.
inline Matrix dilate(const DilationGroup& g, double t, bool adjoint = false) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw NonPositiveScale("dilate: t must be positive and finite, got " + std::to_string(t));
    const double s = std::log(t);
    if (g.diagonal) {
        Matrix R(g.dim, g.dim);
        for (int i = 0; i < g.dim; ++i)
            R(i, i) = std::exp(s * g.diagonal_exponents[static_cast<std::size_t>(i)]);
        return R;
    }
    return expm((adjoint ? g.generator_adjoint : g.generator) * s);
}

namespace detail {

// |A_{1/t} x| without forming the matrix when a cheap route exists.
inline double dilated_inverse_norm(const DilationGroup& g, double t, const Vec& x, bool dual) {
    if (g.diagonal) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double p = g.diagonal_exponents[i];
            const double y = x[i] * std::pow(t, -p);
            s += y * y;
        }
        return std::sqrt(s);
    }
    const Matrix& gen = dual ? g.generator_adjoint : g.generator;
    const Matrix A = expm(gen * (-std::log(t)));
    return norm2(A * x);
}

} // namespace detail

/// Homogeneous norm rho(x): the unique t with |A_{1/t} x| = 1, and rho(0)=0.
/// dual switches to rho* built on the adjoint group. Bracketing exploits the
/// strict monotonicity of t -> |A_t x|; bisection targets 1e-12 relative and
/// a single Newton step polishes the root using
/// d/dt |A_{1/t}x|^2 = -(2/t) <P A_{1/t}x, A_{1/t}x>.
inline double rho(const DilationGroup& g, const Vec& x, bool dual = false) {
    const double mag = norm2(x);
    if (!(mag > 1e-300)) return 0.0;
    if (g.euclidean) return mag;

    const auto f = [&](double t) { return detail::dilated_inverse_norm(g, t, x, dual); };

    double lo = mag, hi = mag;
    double flo = f(lo);
    if (flo >= 1.0) {
        // f decreasing in t: grow hi until f(hi) <= 1
        double fhi = flo;
        for (int i = 0; i < 1100 && fhi > 1.0; ++i) {
            hi *= 2.0;
            fhi = f(hi);
        }
    } else {
        for (int i = 0; i < 1100 && flo < 1.0; ++i) {
            lo *= 0.5;
            flo = f(lo);
        }
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-13 * lo; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) >= 1.0)
            lo = mid;
        else
            hi = mid;
    }
    double t = 0.5 * (lo + hi);

    // Newton polish
    const Matrix& gen = dual ? g.generator_adjoint : g.generator;
    const Matrix A = g.diagonal ? dilate(g, 1.0 / t, dual) : expm(gen * (-std::log(t)));
    const Vec y = A * x;
    const double ny = norm2(y);
    const double quad = dot(gen * y, y);
    if (quad > 0.0 && std::isfinite(quad) && ny > 0.0) {
        const double step = (ny - 1.0) * t * ny / quad;
        const double polished = t + step;
        if (polished >= lo && polished <= hi) t = polished;
    }
    return t;
}

inline double rho(const DilationGroup& g, std::initializer_list<double> x, bool dual = false) {
    return rho(g, Vec(x), dual);
}

/// Samples random points and scales and measures the worst slack of each of
/// (P.1)-(P.6) plus homogeneity. Pure evaluation; nothing is asserted here.
inline NormPropertyReport check_norm_properties(const DilationGroup& g, int sample_count,
                                                std::uint64_t seed) {
    if (sample_count < 1) sample_count = 1;
    Rng rng(seed);
    NormPropertyReport rep;
    rep.samples = sample_count;
    const int n = g.dim;

    const auto random_point = [&](double scale) {
        Vec v(static_cast<std::size_t>(n));
        double norm = 0.0;
        for (auto& c : v) {
            c = rng.normal();
            norm += c * c;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-12) {
            v[0] = 1.0;
            norm = 1.0;
        }
        for (auto& c : v) c *= scale / norm;
        return v;
    };

    for (int s = 0; s < sample_count; ++s) {
        const Vec x = random_point(rng.log_uniform(1e-2, 1e2));
        const Vec y = random_point(rng.log_uniform(1e-2, 1e2));
        const double t = rng.log_uniform(1e-2, 1e2);

        const double rx = rho(g, x);
        const double ry = rho(g, y);
        Vec xy(x);
        for (std::size_t i = 0; i < xy.size(); ++i) xy[i] += y[i];
        const double rxy = rho(g, xy);
        rep.triangle_slack =
            std::max(rep.triangle_slack, (rxy - rx - ry) / (1.0 + rx + ry));

        const double mx = norm2(x);
        if (mx <= 1.0) {
            rep.unit_ball_slack = std::max(rep.unit_ball_slack, rx - 1.0);
            rep.lower_slack = std::max(rep.lower_slack, mx - rx);
        } else {
            rep.unit_ball_slack = std::max(rep.unit_ball_slack, 1.0 - rx);
            rep.upper_slack = std::max(rep.upper_slack, rx - mx);
        }

        const Matrix At = dilate(g, t);
        const double nAtx = norm2(At * x);
        if (t >= 1.0)
            rep.expansion_slack = std::max(rep.expansion_slack, (t * mx - nAtx) / (t * mx));
        else
            rep.contraction_slack = std::max(rep.contraction_slack, (nAtx - t * mx) / (t * mx));

        const double rAtx = rho(g, At * x);
        rep.homogeneity_slack =
            std::max(rep.homogeneity_slack, std::abs(rAtx - t * rx) / (t * rx));
    }
    return rep;
}

/// Euclidean volume of the unit rho-ball {rho < 1} = {|x| < 1} (property P.2):
/// pi^{n/2} / Gamma(n/2 + 1). The ball {rho < t} then has volume t^gamma
/// times this.
inline double unit_ball_volume(int n) {
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

} // namespace parlp
