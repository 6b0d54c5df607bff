#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "parlp/errors.hpp"

namespace parlp {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

// Small dense row-major matrix. Sized for the n <= 3 dilation generators this
// library works with, but nothing below assumes a fixed dimension.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}
    Matrix(int rows, int cols, std::initializer_list<double> init) : Matrix(rows, cols) {
        std::size_t i = 0;
        for (double v : init) {
            if (i >= a_.size()) break;
            a_[i++] = v;
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Matrix diagonal(std::initializer_list<double> d) {
        Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        int i = 0;
        for (double v : d) m(i, i) = v, ++i;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_ && rows_ > 0; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const std::vector<double>& data() const { return a_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double trace() const {
        double s = 0.0;
        for (int i = 0; i < rows_; ++i) s += (*this)(i, i);
        return s;
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0.0;
        for (double v : a_) s = std::max(s, std::abs(v));
        return s;
    }

    double l1_norm() const { // max column sum
        double best = 0.0;
        for (int j = 0; j < cols_; ++j) {
            double s = 0.0;
            for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    bool finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    Matrix operator*(const Matrix& o) const {
        Matrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const double aik = (*this)(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    Vec operator*(const Vec& x) const {
        Vec y(static_cast<std::size_t>(rows_), 0.0);
        for (int i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(i)] = s;
        }
        return y;
    }

    Matrix operator+(const Matrix& o) const {
        Matrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        Matrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
        return r;
    }
    Matrix operator*(double c) const {
        Matrix r = *this;
        for (double& v : r.a_) v *= c;
        return r;
    }
    friend Matrix operator*(double c, const Matrix& m) { return m * c; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

// Solve A X = B by Gaussian elimination with partial pivoting.
inline Matrix lu_solve(Matrix A, Matrix B) {
    const int n = A.rows();
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
        if (std::abs(A(piv, col)) < 1e-300)
            throw std::runtime_error("lu_solve: singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(col, j));
            for (int j = 0; j < B.cols(); ++j) std::swap(B(piv, j), B(col, j));
        }
        const double d = A(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = A(r, col) / d;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) A(r, j) -= f * A(col, j);
            for (int j = 0; j < B.cols(); ++j) B(r, j) -= f * B(col, j);
        }
    }
    Matrix X(n, B.cols());
    for (int j = 0; j < B.cols(); ++j)
        for (int i = n - 1; i >= 0; --i) {
            double s = B(i, j);
            for (int k = i + 1; k < n; ++k) s -= A(i, k) * X(k, j);
            X(i, j) = s / A(i, i);
        }
    return X;
}

// Cyclic Jacobi for symmetric matrices. Returns eigenvalues ascending; the
// optional eigenvector matrix holds them as columns.
inline Vec sym_eigenvalues(Matrix S, Matrix* eigenvectors = nullptr) {
    const int n = S.rows();
    Matrix V = Matrix::identity(n);
    for (int sweep = 0; sweep < 128; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += S(i, j) * S(i, j);
        if (off < 1e-30 * (1.0 + S.frobenius())) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(S(p, q)) < 1e-300) continue;
                const double theta = (S(q, q) - S(p, p)) / (2.0 * S(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double skp = S(k, p), skq = S(k, q);
                    S(k, p) = c * skp - s * skq;
                    S(k, q) = s * skp + c * skq;
                }
                for (int k = 0; k < n; ++k) {
                    const double spk = S(p, k), sqk = S(q, k);
                    S(p, k) = c * spk - s * sqk;
                    S(q, k) = s * spk + c * sqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
    }
    Vec evals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) evals[static_cast<std::size_t>(i)] = S(i, i);
    // sort ascending, permuting columns alongside
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (evals[static_cast<std::size_t>(j)] < evals[static_cast<std::size_t>(i)]) {
                std::swap(evals[static_cast<std::size_t>(i)], evals[static_cast<std::size_t>(j)]);
                for (int k = 0; k < n; ++k) std::swap(V(k, i), V(k, j));
            }
    if (eigenvectors) *eigenvectors = V;
    return evals;
}

namespace detail {

// exp(M) for 2x2 via the trace/determinant closed form: with B = M - tau*I
// traceless, B^2 = mu^2 * I and exp(M) = e^tau (cosh(mu) I + sinh(mu)/mu B).
inline Matrix expm_2x2(const Matrix& M) {
    const double a = M(0, 0), b = M(0, 1), c = M(1, 0), d = M(1, 1);
    const double tau = 0.5 * (a + d);
    const double s = 0.5 * (a - d);
    const double mu2 = s * s + b * c;
    double ch, shm; // cosh(mu), sinh(mu)/mu as functions of mu^2
    if (mu2 > 1e-8) {
        const double mu = std::sqrt(mu2);
        ch = std::cosh(mu);
        shm = std::sinh(mu) / mu;
    } else if (mu2 < -1e-8) {
        const double w = std::sqrt(-mu2);
        ch = std::cos(w);
        shm = std::sin(w) / w;
    } else {
        ch = 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0 + mu2 * mu2 * mu2 / 720.0;
        shm = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0 + mu2 * mu2 * mu2 / 5040.0;
    }
    const double e = std::exp(tau);
    Matrix R(2, 2);
    R(0, 0) = e * (ch + shm * s);
    R(0, 1) = e * shm * b;
    R(1, 0) = e * shm * c;
    R(1, 1) = e * (ch - shm * s);
    return R;
}

inline void pade13(const Matrix& A, Matrix& U, Matrix& V) {
    static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                               1187353796428800.,  129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,       1323241920.,
                               40840800.,          960960.,            16380.,
                               182.,               1.};
    const int n = A.rows();
    const Matrix I = Matrix::identity(n);
    const Matrix A2 = A * A;
    const Matrix A4 = A2 * A2;
    const Matrix A6 = A4 * A2;
    Matrix W = b[13] * A6 + b[11] * A4 + b[9] * A2;
    Matrix tmp = A6 * W;
    tmp = tmp + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I;
    U = A * tmp;
    tmp = b[12] * A6 + b[10] * A4 + b[8] * A2;
    V = A6 * tmp;
    V = V + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

inline Matrix expm_pade(Matrix A) {
    int squarings = 0;
    const double norm = A.l1_norm();
    const double maxnorm = 4.0246098906697353063;
    if (norm > maxnorm) {
        std::frexp(norm / maxnorm, &squarings);
        if (squarings < 0) squarings = 0;
        A = A * std::ldexp(1.0, -squarings);
    }
    Matrix U, V;
    pade13(A, U, V);
    Matrix R = lu_solve(V - U, V + U);
    for (int i = 0; i < squarings; ++i) R = R * R;
    return R;
}

inline bool is_diagonal(const Matrix& M) {
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j)
            if (i != j && M(i, j) != 0.0) return false;
    return true;
}

inline bool is_symmetric(const Matrix& M, double tol = 1e-14) {
    for (int i = 0; i < M.rows(); ++i)
        for (int j = i + 1; j < M.cols(); ++j)
            if (std::abs(M(i, j) - M(j, i)) > tol * (1.0 + M.max_abs())) return false;
    return true;
}

} // namespace detail

// Matrix exponential. Diagonal and 2x2 inputs take exact closed forms,
// symmetric inputs an orthogonal eigendecomposition, the rest Pade-13 with
// scaling and squaring. All paths land well under 1e-12 relative error for
// the conditioning this library encounters.
inline Matrix expm(const Matrix& M) {
    if (!M.square()) throw DimensionError("expm: matrix must be square");
    const int n = M.rows();
    if (detail::is_diagonal(M)) {
        Matrix R(n, n);
        for (int i = 0; i < n; ++i) R(i, i) = std::exp(M(i, i));
        return R;
    }
    if (n == 2) return detail::expm_2x2(M);
    if (detail::is_symmetric(M)) {
        Matrix V;
        const Vec ev = sym_eigenvalues(M, &V);
        Matrix R(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += V(i, k) * std::exp(ev[static_cast<std::size_t>(k)]) * V(j, k);
                R(i, j) = s;
            }
        return R;
    }
    return detail::expm_pade(M);
}

// Largest real part of the spectrum, used for the adjoint growth exponent.
// n <= 3 gets the exact characteristic roots; larger matrices fall back to
// the symmetric-part bound, which dominates the spectral abscissa.
inline double max_real_eigenvalue(const Matrix& M) {
    const int n = M.rows();
    if (n == 1) return M(0, 0);
    if (n == 2) {
        const double tau = 0.5 * M.trace();
        const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
        const double disc = tau * tau - det;
        if (disc >= 0.0) return tau + std::sqrt(disc);
        return tau; // complex pair
    }
    if (n == 3) {
        // characteristic polynomial lambda^3 - c2 lambda^2 + c1 lambda - c0
        const double c2 = M.trace();
        const double c0 = M(0, 0) * (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1)) -
                          M(0, 1) * (M(1, 0) * M(2, 2) - M(1, 2) * M(2, 0)) +
                          M(0, 2) * (M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0));
        const double c1 = (M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0)) +
                          (M(0, 0) * M(2, 2) - M(0, 2) * M(2, 0)) +
                          (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1));
        // depressed cubic y^3 + p y + q, lambda = y + c2/3
        const double shift = c2 / 3.0;
        const double p = c1 - c2 * c2 / 3.0;
        const double q = -c0 + c1 * shift - 2.0 * shift * shift * shift;
        // roots of y^3 + p y + q = 0
        const double half_q = q / 2.0;
        const double disc = half_q * half_q + p * p * p / 27.0;
        if (disc > 0.0) {
            const double s = std::sqrt(disc);
            const double y1 = std::cbrt(-half_q + s) + std::cbrt(-half_q - s);
            // one real root, complex pair with real part -y1/2
            return std::max(y1, -0.5 * y1) + shift;
        }
        const double rr = std::sqrt(std::max(0.0, -p / 3.0));
        if (rr < 1e-300) return shift; // triple root
        const double phi = std::acos(std::clamp(-half_q / (rr * rr * rr), -1.0, 1.0));
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k)
            best = std::max(best, 2.0 * rr * std::cos((phi + 2.0 * std::numbers::pi * k) / 3.0));
        return best + shift;
    }
    Matrix sym(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sym(i, j) = 0.5 * (M(i, j) + M(j, i));
    const Vec ev = sym_eigenvalues(sym);
    return ev.back();
}

} // namespace parlp
