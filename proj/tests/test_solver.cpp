#include <doctest.h>

#include <cmath>

#include "lasym/analysis.hpp"
#include "lasym/error.hpp"
#include "lasym/solver.hpp"

using namespace lasym;

TEST_CASE("contraction roots") {
    SUBCASE("hand-checked quadratics") {
        const auto [x1, x2] = contraction_roots(0.0, 1.0, 3.0 / 16.0);
        CHECK(x1 == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(x2 == doctest::Approx(0.75).epsilon(1e-14));
        const auto [y1, y2] = contraction_roots(0.1, 2.0, 0.05);
        CHECK(y1 == doctest::Approx(0.0649219).epsilon(1e-4));
        CHECK(y2 == doctest::Approx(0.3850781).epsilon(1e-4));
    }
    SUBCASE("hypothesis violation") {
        CHECK_THROWS_AS(contraction_roots(0.0, 1.0, 0.5), NoCertificateError);
    }
    SUBCASE("argument guards") {
        CHECK_THROWS_AS(contraction_roots(-0.1, 1.0, 0.1), ConfigError);
        CHECK_THROWS_AS(contraction_roots(1.0, 1.0, 0.1), ConfigError);
        CHECK_THROWS_AS(contraction_roots(0.0, 0.0, 0.1), ConfigError);
    }
}

TEST_CASE("three-dimensional quadratic model iteration honors the certified ball") {
    // x + T x + B(x, x) = y with T = eps * rotation, B(a, b) = c (a.b) u.
    const double eps = 0.2, c = 0.8;
    const Vec3 u = normalized(Vec3{1.0, 1.0, 1.0});
    auto T = [&](const Vec3& x) { return eps * Vec3{-x.y, x.x, x.z}; };
    auto B = [&](const Vec3& a, const Vec3& b) { return c * dot(a, b) * u; };
    const Vec3 y = 0.1 * Vec3{0.3, -0.7, 0.5};
    const auto [xi1, xi2] = contraction_roots(eps, c, norm(y));

    auto iterate = [&](Vec3 x, int n) {
        for (int k = 0; k < n; ++k) x = y - T(x) - B(x, x);
        return x;
    };
    const Vec3 fixed = iterate(Vec3{}, 200);
    CHECK(norm(fixed + T(fixed) + B(fixed, fixed) - y) < 1e-14);
    CHECK(norm(fixed) <= xi1 * (1.0 + 1e-12));

    SUBCASE("multistart inside the xi2 ball reaches the same point") {
        for (const Vec3& start : {0.9 * xi2 * kE1, 0.5 * xi2 * normalized(Vec3{1, -2, 0.5}),
                                  0.99 * xi2 * normalized(Vec3{-1, 0, 1})}) {
            CHECK(norm(iterate(start, 300) - fixed) < 1e-8);
        }
    }
    SUBCASE("norm history enters and stays in the xi1 ball") {
        Vec3 x = 0.9 * xi2 * kE2;
        bool captured = false;
        for (int k = 0; k < 300; ++k) {
            x = y - T(x) - B(x, x);
            CHECK(norm(x) < xi2);
            if (norm(x) <= xi1 * 1.0001) captured = true;
        }
        CHECK(captured);
    }
}

namespace {

GridPtr small_grid() {
    return std::make_shared<GradedGrid>(make_graded_grid(0.06, 48.0, 1.75, 10, 10));
}

SampledVectorField dipole_source(GridPtr grid, double strength) {
    auto bump = [](const Vec3& c, double rho, const Vec3& y) {
        const double u2 = norm2(y - c) / (rho * rho);
        return u2 < 1.0 ? std::exp(-1.0 / (1.0 - u2)) : 0.0;
    };
    auto g = sample_field<Vec3>(grid, [&](const Vec3& y) {
        return strength * (bump(0.5 * kE3, 0.4, y) - bump(-0.5 * kE3, 0.4, y)) * kE1;
    });
    g.support_radius = 1.0;
    g.tail = {8.0, 0.0};
    return g;
}

DecayingEvaluator zero_base() {
    DecayingEvaluator U;
    U.eval = [](const Vec3&) { return Vec3{}; };
    U.tail = {1.0, 0.0};
    return U;
}

}  // namespace

TEST_CASE("random probes are unit-normalized and seed-deterministic") {
    auto grid = small_grid();
    const auto a = random_probe_field(grid, 1.5, 42);
    const auto b = random_probe_field(grid, 1.5, 42);
    const auto c = random_probe_field(grid, 1.5, 43);
    CHECK(weighted_sup_norm(a, 1.5).value() == doctest::Approx(1.0).epsilon(1e-12));
    double diff_ab = 0.0, diff_ac = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff_ab = std::max(diff_ab, norm(a.values[i] - b.values[i]));
        diff_ac = std::max(diff_ac, norm(a.values[i] - c.values[i]));
    }
    CHECK(diff_ab == 0.0);
    CHECK(diff_ac > 1e-6);
}

TEST_CASE("zero right-hand side solves to zero in one iteration") {
    auto grid = small_grid();
    SampledVectorField zero(grid);
    zero.support_radius = 1.0;
    zero.tail = {8.0, 0.0};
    SolverConfig cfg;
    cfg.probe_fields = 2;
    cfg.probe_pairs = 2;
    const auto res = picard_solve(zero_base(), zero, cfg);
    CHECK(res.converged);
    CHECK(res.iterations == 1);
    CHECK(res.v.max_magnitude() == 0.0);
    CHECK(res.q.max_magnitude() == 0.0);
    CHECK(res.certificate.valid);
}

TEST_CASE("pure quadratic contraction: dipole forcing with no base flow") {
    auto grid = small_grid();
    const auto f = dipole_source(grid, 0.5);
    SolverConfig cfg;
    cfg.probe_fields = 2;
    cfg.probe_pairs = 3;
    const auto res = picard_solve(zero_base(), f, cfg);
    CHECK(res.converged);
    CHECK(res.certificate.valid);
    CHECK(res.certificate.eps_hat == 0.0);  // T vanishes with the base flow
    const double vn = weighted_sup_norm(res.v, 1.5).value();
    CHECK(vn <= res.certificate.xi1 * 1.05);
    CHECK(vn > 0.0);

    SUBCASE("fitted decay of v meets the class exponent") {
        std::vector<std::pair<double, double>> samples;
        for (double r = 3.0; r < 40.0; r *= 1.3)
            samples.emplace_back(r, norm(res.v.value(r * normalized(Vec3{0.6, 0.3, 1.0}))));
        const auto fit = fit_decay_exponent(samples);
        CHECK(fit.exponent >= 1.5);
    }
    SUBCASE("pressure decays one order faster") {
        std::vector<std::pair<double, double>> samples;
        for (double r = 3.0; r < 40.0; r *= 1.3)
            samples.emplace_back(r, std::abs(res.q.value(r * normalized(Vec3{1.0, 0.2, 0.4}))));
        const auto fit = fit_decay_exponent(samples);
        CHECK(fit.exponent >= 1.5 + 1.0 - 0.15);
    }
    SUBCASE("monotone capture within the certified ball") {
        for (double n : res.norm_history) CHECK(n <= res.certificate.xi2);
        CHECK(res.norm_history.back() <= res.certificate.xi1 * 1.05);
    }
    SUBCASE("multistart from V lands on the same fixed point") {
        SolverConfig cfg2 = cfg;
        cfg2.start_from_source = true;
        const auto res2 = picard_solve(zero_base(), f, cfg2);
        CHECK(res2.converged);
        SampledVectorField d = res2.v;
        d -= res.v;
        CHECK(weighted_sup_norm(d, 1.5).grid_value <= 10.0 * cfg.step_tol);
    }
}

TEST_CASE("grid refinement moves the solution norm by less than 10%") {
    SolverConfig cfg;
    cfg.probe_fields = 2;
    cfg.probe_pairs = 2;
    auto coarse_grid = small_grid();
    auto fine_grid =
        std::make_shared<GradedGrid>(make_graded_grid(0.06, 48.0, std::sqrt(1.75), 14, 14));
    const auto coarse = picard_solve(zero_base(), dipole_source(coarse_grid, 0.5), cfg);
    const auto fine = picard_solve(zero_base(), dipole_source(fine_grid, 0.5), cfg);
    REQUIRE(coarse.converged);
    REQUIRE(fine.converged);
    const double nc = weighted_sup_norm(coarse.v, 1.5).value();
    const double nf = weighted_sup_norm(fine.v, 1.5).value();
    CHECK(std::abs(nc - nf) <= 0.10 * nf);
}

TEST_CASE("scaling symmetry of the rescaled problem") {
    // u -> lam u(lam x) maps forcing f -> lam^3 f(lam x); v must follow.
    const double lam = 2.0;
    SolverConfig cfg;
    cfg.probe_fields = 2;
    cfg.probe_pairs = 2;
    auto grid1 = small_grid();
    auto grid2 = std::make_shared<GradedGrid>(
        make_graded_grid(0.06 / lam, 48.0 / lam, 1.75, 10, 10));
    const auto f1 = dipole_source(grid1, 0.5);
    auto f2 = sample_field<Vec3>(grid2, [&](const Vec3& y) {
        return lam * lam * lam * f1.value(lam * y);
    });
    f2.support_radius = 1.0 / lam;
    f2.tail = {8.0, 0.0};
    const auto res1 = picard_solve(zero_base(), f1, cfg);
    const auto res2 = picard_solve(zero_base(), f2, cfg);
    REQUIRE(res1.converged);
    REQUIRE(res2.converged);
    // v2(y) = lam v1(lam y): compare at matched points
    double worst = 0.0;
    double scale = 0.0;
    for (const Vec3& y : {kE3, Vec3{0.75, 0.5, -0.25}, 2.5 * kE1}) {
        const Vec3 got = res2.v.value(y);
        const Vec3 expect = lam * res1.v.value(lam * y);
        worst = std::max(worst, norm(got - expect));
        scale = std::max(scale, norm(expect));
    }
    CHECK(worst <= 0.15 * scale);
}

TEST_CASE("oversized data fails the certificate instead of iterating") {
    auto grid = small_grid();
    const auto f = dipole_source(grid, 2000.0);
    SolverConfig cfg;
    cfg.probe_fields = 2;
    cfg.probe_pairs = 3;
    CHECK_THROWS_AS(picard_solve(zero_base(), f, cfg), NoCertificateError);
}

TEST_CASE("assembled solutions reduce to their parts") {
    const RegularizationProfile prof(1.0);
    auto grid = small_grid();
    SolveResult res;
    res.converged = true;
    res.v = SampledVectorField(grid);
    res.v.tail = {1.5, 0.0};
    res.q = SampledScalarField(grid);
    res.q.tail = {2.5, 0.0};

    SUBCASE("Phi = 0, v = 0 reproduces the regularized jet") {
        const Vec3 b = 0.3 * kE3;
        const auto flow = assemble_solution(b, 0.0, res, prof);
        const Vec3 x{1.7, -0.4, 2.2};
        const auto jet = regularized_landau(b, prof, x);
        CHECK(norm(flow.velocity(x) - jet.velocity) < 1e-14);
        CHECK(flow.pressure(x) == doctest::Approx(jet.pressure));
    }
    SUBCASE("Phi = 1, b = 0 reproduces the canonical outflow field") {
        const auto flow = assemble_solution(Vec3{}, 1.0, res, prof);
        const OutflowField a = canonical_outflow_field(1.0);
        const Vec3 x{0.5, 1.0, -2.0};
        CHECK(norm(flow.velocity(x) - a.velocity(x)) < 1e-14);
        CHECK(flow.pressure(x) == doctest::Approx(a.pressure(x)));
    }
    SUBCASE("unconverged results are rejected") {
        SolveResult bad = res;
        bad.converged = false;
        CHECK_THROWS_AS(assemble_solution(kE3, 0.0, bad, prof), ConfigError);
    }
}
