#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace parlp;
using testutil::compose_integer_dilation;
using testutil::covariance_test_function;
using testutil::diag_group;
using testutil::identity_group;
using testutil::random_band;

TEST_CASE("analyze: linearity in the zero input and direct-sum oracle per scale") {
    const DilationGroup dg = diag_group();
    const PeriodicGrid grid(2, 16.0, 16);
    const FrequencySymbol heat = heat_symbol(dg);
    const ScaleWindow window(0.5, -2, 2, 1);

    const LPCoefficients zero = analyze(GridFunction(grid, Side::physical), heat, dg, window);
    for (const auto& c : zero.scales) CHECK(max_abs(c) == 0.0);

    // one scale against the direct O(N^4) circular convolution
    const GridFunction f = random_band(grid, dg, 0.2, 1.5, 4);
    const LPCoefficients coeffs = analyze(f, heat, dg, window);
    const GridFunction kernel = to_physical(sample_dilated_symbol(heat, dg, 0.25, grid)); // j=2
    const double h = grid.spacing();
    double worst = 0.0;
    for (int x0 = 0; x0 < 16; ++x0)
        for (int x1 = 0; x1 < 16; ++x1) {
            cplx acc(0.0, 0.0);
            for (int y0 = 0; y0 < 16; ++y0)
                for (int y1 = 0; y1 < 16; ++y1)
                    acc += f.samples[grid.flatten({y0, y1, 0})] *
                           kernel.samples[grid.flatten({x0 - y0 + 8, x1 - y1 + 8, 0})];
            worst = std::max(worst, std::abs(coeffs.scales[4].samples[grid.flatten({x0, x1, 0})] -
                                             acc * (h * h)));
        }
    CHECK(worst <= 1e-12);
}

TEST_CASE("analyze: annulus symbol only fires on overlapping scales") {
    const DilationGroup dg = diag_group();
    const PeriodicGrid grid(2, 16.0, 64);
    const FrequencySymbol ann = annulus_symbol(dg);
    // spectrum inside rho* in [1, 2]
    const GridFunction f = random_band(grid, dg, 1.0, 2.0, 6);
    const ScaleWindow window(0.5, -4, 4, 1);
    const LPCoefficients coeffs = analyze(f, ann, dg, window);
    const double peak = lp_norm(f, 2.0);
    for (int j = window.j_min; j <= window.j_max; ++j) {
        // dilated support: rho* in [b^-j... ] meets band iff b^j * [1,2] x [1,2] overlap
        const double t = std::pow(0.5, j);
        const bool overlap = (1.0 < 2.0 / t) && (2.0 > 1.0 / t);
        const double ampl = lp_norm(coeffs.scales[static_cast<std::size_t>(j - window.j_min)], 2.0);
        if (!overlap) CHECK(ampl <= 1e-13 * peak);
    }
}

TEST_CASE("g_discrete basics") {
    const DilationGroup dg = diag_group();
    const PeriodicGrid grid(2, 16.0, 32);
    const ScaleWindow window(0.5, -2, 2, 1);
    LPCoefficients coeffs;
    coeffs.window = window;
    coeffs.grid = grid;
    coeffs.symbol_id = "manual";
    coeffs.scales.assign(5, GridFunction(grid, Side::physical));
    CHECK(max_abs(g_discrete(coeffs)) == 0.0);

    Rng rng(8);
    for (auto& v : coeffs.scales[2].samples) v = cplx(rng.normal(), rng.normal());
    const GridFunction g = g_discrete(coeffs);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.samples.size(); ++i)
        worst = std::max(worst,
                         std::abs(g.samples[i].real() - std::abs(coeffs.scales[2].samples[i])));
    CHECK(worst <= 1e-15);

    // homogeneity |alpha| through the pipeline
    const FrequencySymbol heat = heat_symbol(dg);
    const GridFunction f = random_band(grid, dg, 0.3, 2.0, 12);
    GridFunction f3 = f;
    for (auto& v : f3.samples) v *= -3.0;
    const GridFunction ga = g_discrete(analyze(f, heat, dg, window));
    const GridFunction gb = g_discrete(analyze(f3, heat, dg, window));
    double dev = 0.0;
    for (std::size_t i = 0; i < ga.samples.size(); ++i)
        dev = std::max(dev, std::abs(gb.samples[i].real() - 3.0 * ga.samples[i].real()));
    CHECK(dev <= 1e-13 * (1.0 + max_abs(ga)) * 3.0);
}

TEST_CASE("g_continuous: zero input, quadrature self-convergence, g_Q isometry profile") {
    const DilationGroup id = identity_group();
    const PeriodicGrid grid(2, 16.0, 64);
    const ScaleWindow w8(0.5, -5, 3, 8);
    CHECK(max_abs(g_continuous(GridFunction(grid, Side::physical), heat_symbol(id), id, w8)) ==
          0.0);

    const GridFunction f = random_band(grid, id, 0.5, 1.8, 3);
    const ScaleWindow w16(0.5, -5, 3, 16);
    const ScaleWindow w32(0.5, -5, 3, 32);
    const GridFunction a = g_continuous(f, heat_symbol(id), id, w8);
    const GridFunction b = g_continuous(f, heat_symbol(id), id, w16);
    const GridFunction c = g_continuous(f, heat_symbol(id), id, w32);
    CHECK(rel_l2_error(a, b) <= 0.01);
    MESSAGE("quadrature refinement: K->2K change ", rel_l2_error(a, b), ", 2K->4K change ",
            rel_l2_error(b, c)); // second-order behavior logged, not asserted

    // ||g_Q f||_2 / ||f||_2 is constant across band-limited f: the orbit
    // integral of |Q_hat|^2 dt/t is direction-free; oracle = 1-D quadrature
    const FrequencySymbol Q = poisson_symbol(id);
    double oracle = 0.0;
    {
        const int K = 4096;
        const double lo = 1e-7, hi = 1e3;
        const double step = std::log(hi / lo) / K;
        for (int k = 0; k < K; ++k) {
            const double u = lo * std::exp((k + 0.5) * step);
            const double v = 2.0 * std::numbers::pi * u * std::exp(-2.0 * std::numbers::pi * u);
            oracle += v * v * step;
        }
    }
    CHECK(oracle == doctest::Approx(0.25).epsilon(1e-6)); // analytic value 1/4

    const ScaleWindow wide(0.5, -4, 14, 8);
    std::vector<double> ratios;
    for (std::uint64_t s : {101ull, 102ull, 103ull}) {
        const GridFunction fb = random_band(grid, id, 0.5, 1.8, s);
        ratios.push_back(lp_norm(g_continuous(fb, Q, id, wide), 2.0) / lp_norm(fb, 2.0));
    }
    for (double r : ratios) CHECK(std::abs(r - std::sqrt(oracle)) <= 0.01 * std::sqrt(oracle));
}

TEST_CASE("unit_calderon: fixed point, orbit invariance, Plancherel, ln(1/b) integral") {
    const DilationGroup dg = diag_group();
    const PeriodicGrid grid(2, 16.0, 128);
    const FrequencySymbol ann = annulus_symbol(dg);
    const double b = 0.75;
    const ScaleWindow window = window_covering_annulus(ann, b, 0.25, 8.0, 1);
    const FrequencySymbol unit = unit_calderon(ann, dg, window);

    // discrete orbit sum of the normalized symbol is exactly one
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double r = 0.9 * std::pow(1.0 / b, i / 64.0);
        double acc = 0.0;
        for (int j = -80; j <= 80; ++j) acc += std::norm(unit.radial(std::pow(b, j) * r));
        worst = std::max(worst, std::abs(acc - 1.0));
    }
    CHECK(worst <= 1e-8);

    // normalizing twice changes nothing
    const FrequencySymbol unit2 = unit_calderon(unit, dg, window);
    for (int i = 0; i < 40; ++i) {
        const double r = 0.3 * std::pow(1.12, i);
        CHECK(std::abs(unit2.radial(r) - unit.radial(r)) <= 1e-12);
    }

    // orbit invariance of the sum under sampled s = b^k
    for (int k : {1, 2, -1}) {
        const double r = 1.37;
        double a0 = 0.0, a1 = 0.0;
        for (int j = -80; j <= 80; ++j) {
            a0 += std::norm(unit.radial(std::pow(b, j) * r));
            a1 += std::norm(unit.radial(std::pow(b, j) * std::pow(b, k) * r));
        }
        CHECK(std::abs(a0 - a1) <= 1e-8);
    }

    // Plancherel for the discrete g-function
    for (std::uint64_t s : {11ull, 12ull, 13ull}) {
        const GridFunction f = random_band(grid, dg, 0.5, 3.5, s);
        const double ratio =
            lp_norm(g_discrete(analyze(f, unit, dg, window)), 2.0) / lp_norm(f, 2.0);
        CHECK(std::abs(ratio - 1.0) <= 1e-6);
    }

    // continuous dt/t integral of the normalized symbol equals ln(1/b)
    {
        const double r = 1.3;
        const int K = 512;
        const double lb = std::log(1.0 / b);
        double acc = 0.0;
        for (int j = -40 * K; j <= 40 * K; ++j)
            acc += (lb / K) * std::norm(unit.radial(std::pow(b, static_cast<double>(j) / K) * r));
        CHECK(std::abs(acc - lb) <= 1e-3 * lb);
    }

    // degenerate orbit: an annulus-flagged symbol that is identically zero
    FrequencySymbol dead;
    dead.id = "dead";
    dead.annulus = {1.0, 2.0};
    dead.radial = [](double) { return cplx(0.0, 0.0); };
    dead.rule = [](const Vec&) { return cplx(0.0, 0.0); };
    CHECK_THROWS_AS(unit_calderon(dead, dg, window), DegenerateOrbit);
    CHECK_THROWS_AS(unit_calderon(heat_symbol(dg), dg, window), DegenerateOrbit);
}

TEST_CASE("synthesize: reconstruction, window low-pass bookkeeping, provenance") {
    const DilationGroup dg = diag_group();
    const PeriodicGrid grid(2, 16.0, 128);
    const FrequencySymbol heat = heat_symbol(dg);
    const PartitionOfUnity pou = default_partition(heat, dg);

    const GridFunction f = random_band(grid, dg, 0.5, 3.5, 21);
    const ScaleWindow window = window_for_band(pou, 0.5, 3.5);
    const LPCoefficients coeffs = analyze(f, heat, dg, window);
    const GridFunction rec = synthesize(coeffs, pou);
    CHECK(rel_l2_error(rec, f) <= 1e-6);

    // zero coefficients synthesize to zero
    LPCoefficients zeros = coeffs;
    for (auto& c : zeros.scales) c = GridFunction(grid, Side::physical);
    CHECK(max_abs(synthesize(zeros, pou)) == 0.0);

    // low-frequency input: the residual spectrum is exactly the window
    // low-pass remainder (1 - window partition sum) times fhat
    const GridFunction low = random_band(grid, dg, 0.05, 0.12, 22);
    const LPCoefficients lc = analyze(low, heat, dg, window);
    const GridFunction lrec = synthesize(lc, pou);
    const GridFunction lrec_hat = transform(lrec);
    const GridFunction low_hat = transform(low);
    const auto tab = rho_star_table(dg, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < low_hat.samples.size(); ++i) {
        const double r = (*tab)[i];
        if (!(r > 0.0)) continue;
        const double sum = window_partition_sum(pou, window, r);
        const cplx expect = low_hat.samples[i] * sum;
        worst = std::max(worst, std::abs(lrec_hat.samples[i] - expect));
    }
    CHECK(worst <= 1e-12 * (1.0 + max_abs(low_hat)));

    // provenance guards
    const FrequencySymbol ann = annulus_symbol(dg);
    const PartitionOfUnity wrong = default_partition(ann, dg);
    CHECK_THROWS_AS(synthesize(coeffs, wrong), ProvenanceMismatch);
}

TEST_CASE("reproduce_eps: full coverage reproduces, eps near 1 attenuates") {
    const DilationGroup dg = diag_group();
    const PeriodicGrid grid(2, 16.0, 128);
    const FrequencySymbol ann = annulus_symbol(dg);
    const double b = 0.75;
    const ScaleWindow window = window_covering_annulus(ann, b, 0.25, 8.0, 1);
    const FrequencySymbol unit = unit_calderon(ann, dg, window);

    const GridFunction f = random_band(grid, dg, 0.5, 3.5, 31);
    const GridFunction full = reproduce_eps(f, unit, dg, 1e-3, window);
    CHECK(rel_l2_error(full, f) <= 1e-6);

    const GridFunction part = reproduce_eps(f, unit, dg, 0.9, window);
    CHECK(lp_norm(part, 2.0) < lp_norm(f, 2.0));
    // kernel values lie in [0, 1]: check via spectra ratio where fhat is big
    const GridFunction fh = transform(f), ph = transform(part);
    for (std::size_t i = 0; i < fh.samples.size(); ++i) {
        if (std::abs(fh.samples[i]) < 1e-6) continue;
        const double k = std::abs(ph.samples[i]) / std::abs(fh.samples[i]);
        CHECK(k <= 1.0 + 1e-10);
    }

    CHECK(max_abs(reproduce_eps(GridFunction(grid, Side::physical), unit, dg, 0.5, window)) ==
          0.0);
    CHECK_THROWS_AS(reproduce_eps(f, unit, dg, 1.5, window), WindowError);
}

TEST_CASE("dilation covariance: g of f o A_s equals (g of f) o A_s with shifted scales") {
    const DilationGroup dg = diag_group();
    const PeriodicGrid grid(2, 16.0, 128);
    const FrequencySymbol heat = heat_symbol(dg);
    const GridFunction f = covariance_test_function(grid);
    const GridFunction fs = compose_integer_dilation(f, {2, 4, 1}); // A_2 for diag(1,2)

    const ScaleWindow w0(0.5, -4, 3, 1), w1(0.5, -3, 4, 1);
    const GridFunction g0 = g_discrete(analyze(f, heat, dg, w0));
    const GridFunction g1 = g_discrete(analyze(fs, heat, dg, w1));

    const GridFunction g0s = compose_integer_dilation(g0, {2, 4, 1});
    double worst = 0.0;
    for (std::size_t i = 0; i < g1.samples.size(); ++i)
        worst = std::max(worst, std::abs(g1.samples[i].real() - g0s.samples[i].real()));
    CHECK(worst / max_abs(g0) <= 1e-6);
}

TEST_CASE("translation covariance: lattice shifts commute with the pipeline") {
    const DilationGroup dg = diag_group();
    const PeriodicGrid grid(2, 16.0, 64);
    const FrequencySymbol heat = heat_symbol(dg);
    const ScaleWindow window(0.5, -3, 2, 1);
    const GridFunction f = random_band(grid, dg, 0.4, 2.5, 77);
    const std::array<int, 3> steps{5, -9, 0};

    const GridFunction a = g_discrete(analyze(shift(f, steps), heat, dg, window));
    const GridFunction b = shift(g_discrete(analyze(f, heat, dg, window)), steps);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        worst = std::max(worst, std::abs(a.samples[i] - b.samples[i]));
    CHECK(worst <= 1e-12 * (1.0 + max_abs(b)));
}

TEST_CASE("weighted two-symbol ratio stays finite (statement-level check)") {
    const DilationGroup dg = diag_group();
    const PeriodicGrid grid(2, 16.0, 64);
    const FrequencySymbol phi = heat_symbol(dg);
    const FrequencySymbol psi = annulus_symbol(dg); // vanishes near the origin
    const ScaleWindow window(0.5, -5, 3, 4);
    const double p = 1.0;

    for (double a : {0.0, 0.3}) {
        const Weight w = make_power_weight(grid, dg, a);
        double worst = 0.0;
        for (std::uint64_t s : {301ull, 302ull, 303ull, 304ull}) {
            const GridFunction f = random_band(grid, dg, 0.4, 2.5, s);
            const double num = lp_norm(g_continuous(f, psi, dg, window), p, &w.samples);
            const double den = lp_norm(g_continuous(f, phi, dg, window), p, &w.samples);
            REQUIRE(den > 0.0);
            worst = std::max(worst, num / den);
        }
        CHECK(std::isfinite(worst));
        CHECK(worst > 0.0);
        MESSAGE("weighted ratio bound (a = ", a, "): ", worst);
    }
}
