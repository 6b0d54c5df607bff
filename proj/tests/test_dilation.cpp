#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace parlp;
using testutil::diag_group;
using testutil::identity_group;
using testutil::rotation_group;

namespace {

// independent exponential: plain Taylor series with argument halving and
// repeated squaring, no shared code with expm()
Matrix expm_taylor(Matrix M) {
    const int n = M.rows();
    int halvings = 0;
    while (M.max_abs() > 0.25) {
        M = M * 0.5;
        ++halvings;
    }
    Matrix R = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 24; ++k) {
        term = term * M * (1.0 / k);
        R = R + term;
    }
    for (int k = 0; k < halvings; ++k) R = R * R;
    return R;
}

double det2(const Matrix& A) { return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0); }

} // namespace

TEST_CASE("validate_matrix accepts admissible generators and fills invariants") {
    const DilationGroup id = identity_group();
    CHECK(id.gamma == doctest::Approx(2.0));
    CHECK(id.kappa == doctest::Approx(1.0));
    CHECK(id.euclidean);

    const DilationGroup dg = diag_group();
    CHECK(dg.gamma == doctest::Approx(3.0));
    CHECK(dg.kappa == doctest::Approx(2.0));
    CHECK(dg.diagonal);
    CHECK_FALSE(dg.euclidean);

    const DilationGroup rot = rotation_group();
    CHECK(rot.gamma == doctest::Approx(2.0));
    CHECK(rot.kappa == doctest::Approx(1.0)); // eigenvalues 1 +- i
    CHECK(rot.euclidean);
}

TEST_CASE("validate_matrix rejects inadmissible or malformed input") {
    CHECK_THROWS_AS(validate_matrix(Matrix::diagonal({0.5, 1.0})), AdmissibilityError);
    CHECK_THROWS_AS(validate_matrix(Matrix(2, 3)), DimensionError);
    Matrix bad = Matrix::identity(2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_matrix(bad), AdmissibilityError);
    // shear with symmetric-part eigenvalue below 1
    CHECK_THROWS_AS(validate_matrix(Matrix(2, 2, {1.0, 3.0, 0.0, 1.0})), AdmissibilityError);
}

TEST_CASE("dilate closed forms") {
    const DilationGroup id = identity_group();
    const Matrix A4 = dilate(id, 4.0);
    CHECK(A4(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(A4(0, 1) == doctest::Approx(0.0));

    const DilationGroup dg = diag_group();
    const Matrix A3 = dilate(dg, 3.0);
    CHECK(A3(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(A3(1, 1) == doctest::Approx(9.0).epsilon(1e-14));

    // rotation-scaling: A_e = e [[cos 1, sin 1], [-sin 1, cos 1]]
    const DilationGroup rot = rotation_group();
    const Matrix Ae = dilate(rot, std::exp(1.0));
    const double e = std::exp(1.0);
    CHECK(std::abs(Ae(0, 0) - e * std::cos(1.0)) <= 1e-12);
    CHECK(std::abs(Ae(0, 1) - e * std::sin(1.0)) <= 1e-12);
    CHECK(std::abs(Ae(1, 0) + e * std::sin(1.0)) <= 1e-12);
    CHECK(std::abs(Ae(1, 1) - e * std::cos(1.0)) <= 1e-12);

    CHECK_THROWS_AS(dilate(id, 0.0), NonPositiveScale);
    CHECK_THROWS_AS(dilate(id, -2.0), NonPositiveScale);
}

TEST_CASE("dilate agrees with an independent Taylor scaling-squaring oracle") {
    Rng rng(17);
    for (const DilationGroup& g : {identity_group(), diag_group(), rotation_group()}) {
        for (int i = 0; i < 25; ++i) {
            const double t = rng.log_uniform(1e-2, 1e2);
            const Matrix lib = dilate(g, t);
            const Matrix ora = expm_taylor(g.generator * std::log(t));
            CHECK((lib - ora).frobenius() <= 1e-12 * ora.frobenius());
        }
    }
}

TEST_CASE("rho: closed forms, degenerate input and homogeneity") {
    const DilationGroup id = identity_group();
    CHECK(rho(id, {3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-13));

    // diag(1,2): rho((3,4)) solves t^4 - 9 t^2 - 16 = 0
    const DilationGroup dg = diag_group();
    const double closed = std::sqrt((9.0 + std::sqrt(145.0)) / 2.0);
    CHECK(std::abs(rho(dg, {3.0, 4.0}) - closed) <= 1e-10 * closed);

    CHECK(rho(dg, {0.0, 0.0}) == 0.0);
    CHECK(rho(dg, {1e-320, 0.0}) == 0.0);

    // |x| = 1 pins rho = rho* = 1
    CHECK(rho(dg, {0.6, 0.8}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rho(dg, {0.6, 0.8}, true) == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(3);
    for (const DilationGroup& g : {identity_group(), diag_group(), rotation_group()}) {
        for (int i = 0; i < 200; ++i) {
            Vec x{rng.normal(), rng.normal()};
            if (norm2(x) < 1e-6) continue;
            const double t = rng.log_uniform(1e-2, 1e2);
            const double lhs = rho(g, dilate(g, t) * x);
            const double rhs = t * rho(g, x);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * rhs);
        }
    }
}

TEST_CASE("semigroup and determinant invariants over random scale pairs") {
    Rng rng(11);
    for (const DilationGroup& g : {identity_group(), diag_group(), rotation_group()}) {
        for (int i = 0; i < 100; ++i) {
            const double t = rng.log_uniform(1e-3, 1e3);
            const double s = rng.log_uniform(1e-3, 1e3);
            const Matrix lhs = dilate(g, t) * dilate(g, s);
            const Matrix rhs = dilate(g, t * s);
            CHECK((lhs - rhs).frobenius() <= 1e-10 * rhs.frobenius());
            const Matrix At = dilate(g, t);
            CHECK(std::abs(det2(At) - std::pow(t, g.gamma)) <= 1e-10 * std::pow(t, g.gamma));
        }
    }
}

TEST_CASE("norm property report: identity is exact, anisotropic slacks stay tiny") {
    const NormPropertyReport id_rep = check_norm_properties(identity_group(), 1000, 5);
    CHECK(id_rep.worst() <= 1e-12);

    const NormPropertyReport dg_rep = check_norm_properties(diag_group(), 10000, 5);
    CHECK(dg_rep.pass(1e-9));
    CHECK(dg_rep.triangle_slack <= 1e-10);

    const NormPropertyReport rot_rep = check_norm_properties(rotation_group(), 10000, 7);
    CHECK(rot_rep.worst() <= 1e-12);
}

TEST_CASE("Monte Carlo ball volume scales like t^gamma") {
    // {rho < 1} is the Euclidean unit ball, so |{rho < t}| = t^gamma pi in 2-D
    const DilationGroup dg = diag_group();
    const double t = 2.0;
    const double expected = std::pow(t, dg.gamma) * unit_ball_volume(2);
    Rng rng(23);
    const double half = 4.2; // {rho < 2} = ellipse with semi-axes (2, 4)
    const int samples = 40000;
    int inside = 0;
    for (int i = 0; i < samples; ++i) {
        const Vec x{rng.uniform(-half, half), rng.uniform(-half, half)};
        if (rho(dg, x) < t) ++inside;
    }
    const double area = 4.0 * half * half;
    const double p = static_cast<double>(inside) / samples;
    const double estimate = p * area;
    const double se = std::sqrt(p * (1.0 - p) / samples) * area;
    CHECK(std::abs(estimate - expected) <= 3.0 * se);
}

TEST_CASE("unit rho-ball volume formula") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
}

TEST_CASE("t -> |A_t x| is strictly increasing on sampled grids") {
    Rng rng(29);
    for (const DilationGroup& g : {identity_group(), diag_group(), rotation_group()}) {
        for (int trial = 0; trial < 20; ++trial) {
            Vec x{rng.normal(), rng.normal()};
            if (norm2(x) < 1e-6) continue;
            double prev = -1.0;
            for (double t : log_space(1e-3, 1e3, 121)) {
                const double cur = norm2(dilate(g, t) * x);
                CHECK(cur > prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("3x3 diagonal group round trip") {
    const DilationGroup g = validate_matrix(Matrix::diagonal({1.0, 1.5, 2.0}));
    CHECK(g.gamma == doctest::Approx(4.5));
    const double r = rho(g, {0.3, -0.2, 0.9});
    const Matrix A = dilate(g, 1.0 / r);
    CHECK(norm2(A * Vec{0.3, -0.2, 0.9}) == doctest::Approx(1.0).epsilon(1e-10));
}
