#include <doctest.h>

#include <cmath>

#include "lasym/error.hpp"
#include "lasym/extension.hpp"
#include "lasym/fd.hpp"
#include "lasym/flux.hpp"
#include "lasym/landau.hpp"
#include "lasym/quadrature.hpp"

using namespace lasym;

TEST_CASE("radial cutoff plateaus and unit total variation") {
    const RadialCutoff eta(1.0);
    CHECK(eta(1.9) == 0.0);
    CHECK(eta(2.0) == 0.0);
    CHECK(eta(2.6) == 1.0);
    CHECK(eta.d1(1.9) == 0.0);
    CHECK(eta.d1(2.6) == 0.0);
    SUBCASE("monotone with integral of eta' equal to 1") {
        const double tv = adaptive_integrate([&](double r) { return eta.d1(r); }, 2.0, 2.5,
                                             1e-10, 20);
        CHECK(tv == doctest::Approx(1.0).epsilon(1e-9));
        for (double r = 2.0; r < 2.5; r += 0.01) CHECK(eta.d1(r) >= 0.0);
    }
    SUBCASE("scaling in R0") {
        const RadialCutoff eta3(3.0);
        CHECK(eta3(5.9) == 0.0);
        CHECK(eta3(7.6) == 1.0);
        CHECK(eta3(6.75) == doctest::Approx(eta(2.25)).epsilon(1e-13));
    }
}

namespace {

GridPtr ball_grid(double R, int na = 12, double q = 1.35) {
    return std::make_shared<GradedGrid>(make_graded_grid(0.05, R, q, na, na));
}

double compact_bump(const Vec3& c, double rho, const Vec3& y) {
    const double u2 = norm2(y - c) / (rho * rho);
    return u2 < 1.0 ? std::exp(-1.0 / (1.0 - u2)) : 0.0;
}

}  // namespace

TEST_CASE("Bogovskii operator inverts the divergence on a known field") {
    // w = bump * e3 is compactly supported; g = div w has zero mean.
    const double R = 2.0;
    auto w = [&](const Vec3& y) { return compact_bump(0.2 * kE1, 1.2, y) * kE3; };
    auto g = [&](const Vec3& y) {
        return fd_partial([&](const Vec3& z) { return w(z).z; }, y, 2, 1e-5);
    };
    BogovskiiOperator op(R, 0.5, 12, 10);
    double gmax = 0.0;
    for (double r = 0.1; r < 1.5; r += 0.2) gmax = std::max(gmax, std::abs(g(r * kE3)));

    double worst = 0.0;
    for (const Vec3& x : {0.3 * kE1, Vec3{0.5, 0.4, -0.6}, Vec3{-0.2, 0.9, 0.3},
                          Vec3{0.0, 0.0, 1.1}, Vec3{1.4, 0.2, 0.0}}) {
        double div = 0.0;
        for (int a = 0; a < 3; ++a)
            div += fd_partial([&](const Vec3& y) { return op.apply(g, R, y); }, x, a,
                              2e-3)[a];
        worst = std::max(worst, std::abs(div - g(x)));
    }
    CHECK(worst <= 1e-3 * gmax);

    SUBCASE("support stays inside the ball") {
        CHECK(norm(op.apply(g, R, 2.2 * kE1)) == 0.0);
        CHECK(norm(op.apply(g, R, Vec3{1.8, 1.2, 0.4})) == 0.0);
    }
}

TEST_CASE("bogovskii_solve guards and trivial cases") {
    auto grid = ball_grid(4.0, 8, 1.6);
    SUBCASE("zero field maps to zero") {
        SampledScalarField z(grid);
        z.support_radius = 2.0;
        const auto v = bogovskii_solve(z);
        CHECK(v.max_magnitude() == 0.0);
    }
    SUBCASE("unit-mean source is incompatible") {
        auto g = sample_field<double>(grid, [&](const Vec3& y) {
            return compact_bump(Vec3{}, 1.0, y);
        });
        g.support_radius = 1.5;
        CHECK_THROWS_AS(bogovskii_solve(g), ZeroMeanError);
    }
    SUBCASE("support violations are rejected") {
        auto g = sample_field<double>(grid, [&](const Vec3& y) {
            return compact_bump(Vec3{}, 3.5, y) - compact_bump(kE1, 0.5, y);
        });
        g.support_radius = 1.0;  // claims a smaller ball than the data
        CHECK_THROWS_AS(bogovskii_solve(g), ConfigError);
    }
    SUBCASE("sampled divergence datum is inverted at test resolution") {
        auto w = [&](const Vec3& y) { return compact_bump(Vec3{}, 1.5, y) * kE1; };
        auto g = sample_field<double>(grid, [&](const Vec3& y) {
            return fd_partial([&](const Vec3& z) { return w(z).x; }, y, 0, 1e-5);
        });
        g.support_radius = 1.6;
        const auto v = bogovskii_solve(g);
        CHECK(v.support_radius == doctest::Approx(1.6));
        CHECK(v.max_magnitude() > 0.0);
        // spot-check div v = g through the smooth operator route
        BogovskiiOperator op(1.6);
        auto geval = [&](const Vec3& y) { return norm(y) > 1.6 ? 0.0 : g.value(y); };
        const Vec3 x{0.4, -0.3, 0.5};
        double div = 0.0;
        for (int a = 0; a < 3; ++a)
            div += fd_partial([&](const Vec3& y) { return op.apply(geval, 1.6, y); }, x, a,
                              2e-3)[a];
        const double gmax = g.max_magnitude();
        CHECK(std::abs(div - g.value(x)) <= 2e-3 * gmax);
    }
}

namespace {

ExteriorSolutionSample landau_exterior(const Vec3& b, double R0) {
    ExteriorSolutionSample sol;
    sol.R0 = R0;
    sol.C_star = norm(b);
    const LandauParams params = LandauParams::from_force(b);
    sol.velocity = [params](const Vec3& x) { return eval_landau(params, x).velocity; };
    sol.pressure = [params](const Vec3& x) { return eval_landau(params, x).pressure; };
    sol.velocity_gradient = [params](const Vec3& x) {
        return eval_landau_gradient(params, x);
    };
    return sol;
}

}  // namespace

TEST_CASE("velocity extension: pass-through, solenoidality, outflow guard") {
    const Vec3 b = 0.1 * kE3;
    const auto sol = landau_exterior(b, 1.0);
    auto ext = extend_velocity(sol);

    SUBCASE("bit-exact pass-through beyond 2.5 R0") {
        for (const Vec3& x : {2.5 * kE1, Vec3{2.0, 1.5, 1.0}, 7.0 * kE3}) {
            const Vec3 a = ext(x);
            const Vec3 e = sol.velocity(x);
            CHECK(a.x == e.x);
            CHECK(a.y == e.y);
            CHECK(a.z == e.z);
        }
    }
    SUBCASE("divergence-free through the blending annulus") {
        double gscale = 0.0;
        for (double r = 1.2; r < 3.0; r += 0.4)
            gscale = std::max(gscale, max_abs(sol.velocity_gradient(r * kE3)));
        for (const Vec3& x : {2.2 * kE3, Vec3{1.5, 1.5, 0.5}, Vec3{0.5, 0.1, 2.3},
                              Vec3{0.3, 0.2, 0.1}}) {
            double div = 0.0;
            for (int a = 0; a < 3; ++a) div += fd_partial(ext, x, a, 2e-3)[a];
            CHECK(std::abs(div) <= 1e-3 * gscale);
        }
    }
    SUBCASE("decay pattern of the extension") {
        double worst = 0.0;
        for (double r = 0.2; r < 8.0; r *= 1.4)
            worst = std::max(worst, (1.0 + r) * norm(ext(r * normalized(Vec3{1, 2, 0.5}))));
        CHECK(worst < 20.0 * norm(b));
    }
    SUBCASE("planted outflow trips the precondition") {
        ExteriorSolutionSample bad = sol;
        const OutflowField a = canonical_outflow_field(1.0);
        auto base = sol.velocity;
        bad.velocity = [base, a](const Vec3& x) { return base(x) + a.velocity(x); };
        CHECK_THROWS_AS(extend_velocity(bad), ConfigError);
    }
}

TEST_CASE("pressure extension: pass-through, shift equivariance, boundedness") {
    const Vec3 b = 0.1 * kE3;
    const auto sol = landau_exterior(b, 1.0);
    auto ext = extend_pressure(sol);

    SUBCASE("exact outside") {
        for (const Vec3& x : {2.6 * kE1, 4.0 * kE3})
            CHECK(ext(x) == sol.pressure(x));
    }
    SUBCASE("adding a constant shifts the extension by the same constant") {
        ExteriorSolutionSample shifted = sol;
        auto p0 = sol.pressure;
        shifted.pressure = [p0](const Vec3& x) { return p0(x) + 1.0; };
        auto ext2 = extend_pressure(shifted);
        for (const Vec3& x : {0.2 * kE1, 1.3 * kE2, 2.2 * kE3, 5.0 * kE1})
            CHECK(ext2(x) - ext(x) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("weighted boundedness on samples") {
        double worst = 0.0;
        for (double r = 0.05; r < 10.0; r *= 1.5)
            for (double th = 0.2; th < M_PI; th += 0.7) {
                const Vec3 x = r * Vec3{std::sin(th), 0.0, std::cos(th)};
                worst = std::max(worst, std::abs(ext(x)) * (1.0 + r) * (1.0 + r));
            }
        CHECK(std::isfinite(worst));
        CHECK(worst < 50.0 * norm(b));
    }
    SUBCASE("smooth through the core") {
        // no kink across the fill transition
        auto along = [&](double r) { return ext(r * normalized(Vec3{0.3, 0.2, 1.0})); };
        for (double r : {0.45, 0.5, 0.55, 1.0, 2.0, 2.5}) {
            const double h = 1e-3;
            const double d2 = (along(r + h) - 2 * along(r) + along(r - h)) / (h * h);
            CHECK(std::isfinite(d2));
            CHECK(std::abs(d2) < 1e4);
        }
    }
}

TEST_CASE("forcing of a trivially extended global solution matches the closed form") {
    // The regularized jet with its pressure is already smooth on R^3; the
    // generic finite-difference forcing must reproduce the dual-number one.
    const Vec3 b = landau_beta(2.0) * kE3;
    const RegularizationProfile prof(1.0);
    auto u = [&](const Vec3& x) { return regularized_landau(b, prof, x).velocity; };
    auto p = [&](const Vec3& x) { return regularized_landau(b, prof, x).pressure; };
    auto grid = ball_grid(3.2, 10, 1.5);
    const auto f = compute_forcing(u, p, grid, 1.0);

    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3 x = grid->point(i);
        const Vec3 exact = regularized_forcing(b, prof, x);
        worst = std::max(worst, norm(f.values[i] - exact));
        scale = std::max(scale, norm(exact));
    }
    CHECK(worst < 2e-5 * scale);

    SUBCASE("zero input gives zero forcing") {
        auto zu = [](const Vec3&) { return Vec3{}; };
        auto zp = [](const Vec3&) { return 0.0; };
        const auto zf = compute_forcing(zu, zp, grid, 1.0);
        CHECK(zf.max_magnitude() == 0.0);
    }
}

TEST_CASE("full extension pipeline conserves the net force") {
    const Vec3 b = 0.1 * kE3;
    const auto sol = landau_exterior(b, 1.0);
    auto u = extend_velocity(sol);
    auto p = extend_pressure(sol);
    auto grid = ball_grid(3.2, 10, 1.5);
    const auto f = compute_forcing(u, p, grid, 1.0);
    const Vec3 total = f.integral();
    CHECK(norm(total - b) <= 0.01 * norm(b));
}

TEST_CASE("pressure offset estimation strips the additive constant") {
    auto p = [](const Vec3& x) { return 2.5 + 3.0 / norm2(x); };
    const double p0 = estimate_pressure_offset(p, 4.0, 40.0);
    CHECK(p0 == doctest::Approx(2.5).epsilon(1e-10));
}
