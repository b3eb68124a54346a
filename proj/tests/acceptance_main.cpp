// Acceptance battery: one pass/fail line per criterion, exit code = number
// of failures. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lasym/analysis.hpp"
#include "lasym/error.hpp"
#include "lasym/extension.hpp"
#include "lasym/fd.hpp"
#include "lasym/flux.hpp"
#include "lasym/green.hpp"
#include "lasym/landau.hpp"
#include "lasym/pipeline.hpp"
#include "lasym/quadrature.hpp"
#include "lasym/solver.hpp"

using namespace lasym;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

FlowEvaluators jet_flow(const LandauParams& params) {
    FlowEvaluators flow;
    flow.velocity = [params](const Vec3& x) { return eval_landau(params, x).velocity; };
    flow.pressure = [params](const Vec3& x) { return eval_landau(params, x).pressure; };
    flow.velocity_gradient = [params](const Vec3& x) {
        return eval_landau_gradient(params, x);
    };
    return flow;
}

// 1. Closed-form jet satisfies the momentum balance at 50 random points,
//    order >= 2 in h, residual <= 1e-6 at h = 1e-3 |x|.
bool c01_jet_exactness(std::string& detail) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ur(0.5, 10.0), uu(-1.0, 1.0);
    double worst = 0.0;
    for (double A : {1.5, 2.0, 5.0}) {
        const LandauParams params = LandauParams::from_parameter(A);
        auto u = [&](const Vec3& x) { return eval_landau(params, x).velocity; };
        auto p = [&](const Vec3& x) { return eval_landau(params, x).pressure; };
        for (int k = 0; k < 50; ++k) {
            Vec3 dir{uu(rng), uu(rng), uu(rng)};
            if (norm(dir) < 0.1) dir = kE3;
            const Vec3 x = ur(rng) * normalized(dir);
            const double h = 1e-3 * norm(x);
            worst = std::max(worst, norm(nse_residual(u, p, nullptr, x, h).momentum));
        }
        // Richardson order check at a fixed point
        const Vec3 x{1.1, -0.6, 0.8};
        const double r1 = norm(nse_residual(u, p, nullptr, x, 4e-2).momentum);
        const double r2 = norm(nse_residual(u, p, nullptr, x, 2e-2).momentum);
        if (!(r2 < r1 / 4.0)) {
            detail = "order below 2: " + fmt(r1) + " -> " + fmt(r2);
            return false;
        }
    }
    detail = "max residual " + fmt(worst) + " (<= 1e-6)";
    return worst <= 1e-6;
}

// 2. Net force of the A = 2 jet equals (0, 0, beta(2)) with R-independence.
bool c02_force_identity(std::string& detail) {
    const LandauParams params = LandauParams::from_parameter(2.0);
    const auto flow = jet_flow(params);
    const double beta2 = landau_beta(2.0);
    std::vector<Vec3> forces;
    for (double R : {1.0, 2.0, 5.0}) forces.push_back(net_force(flow, R, 16));
    double spread = 0.0;
    for (const Vec3& f : forces) spread = std::max(spread, norm(f - forces.front()));
    const double rel = norm(forces.front() - beta2 * kE3) / beta2;
    detail = "rel dev " + fmt(rel) + " (<= 1e-4), R-spread " + fmt(spread) + " (<= 1e-6)";
    return rel <= 1e-4 && spread <= 1e-6;
}

// 3. beta/gamma round trip on 100 log-spaced A, monotone beta, 16 pi limit.
bool c03_beta_gamma(std::string& detail) {
    double worst = 0.0, prev = 1e300;
    bool mono = true;
    for (int i = 0; i < 100; ++i) {
        const double A = 1.001 * std::pow(1e3 / 1.001, i / 99.0);
        const double beta = landau_beta(A);
        mono = mono && beta < prev;
        prev = beta;
        worst = std::max(worst, std::abs(landau_gamma(beta) - A) / A);
    }
    const double limit_rel = std::abs(1e4 * landau_beta(1e4) - 16.0 * M_PI) / (16.0 * M_PI);
    detail = "roundtrip " + fmt(worst) + " (<= 1e-10), monotone " + (mono ? "yes" : "no") +
             ", A beta(A) dev " + fmt(limit_rel) + " (<= 1e-3)";
    return worst <= 1e-10 && mono && limit_rel <= 1e-3;
}

// 4. Stokeslet consistency: stream-function velocity equals the e3 column of
//    the (sign-normalized) Green tensor; linear Stokes flux equals e3.
bool c04_stokeslet(std::string& detail) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uu(-1.0, 1.0), ur(0.3, 20.0);
    const StokesletStreamFunction psi;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        Vec3 dir{uu(rng), uu(rng), uu(rng)};
        if (norm(dir) < 0.1) dir = kE2;
        const Vec3 x = ur(rng) * normalized(dir);
        const auto sp = to_spherical(x);
        const auto pol = velocity_from_stream(psi, sp.r, sp.theta);
        const Vec3 expected = pol.u_r * radial_unit(sp.theta, sp.phi) +
                              pol.u_theta * polar_unit(sp.theta, sp.phi);
        worst = std::max(worst, norm(stokeslet_velocity(x) - expected));
    }

    // linear part of the momentum flux only
    double flux_dev = 0.0;
    for (double R : {1.0, 3.0}) {
        const GaussRule& gt = gauss_legendre(16);
        Vec3 total{};
        for (int j = 0; j < 16; ++j) {
            const double mu = gt.nodes[j];
            const double s = std::sqrt(1.0 - mu * mu);
            for (int k = 0; k < 32; ++k) {
                const double phi = (k + 0.5) * M_PI / 16.0;
                const Vec3 n{s * std::cos(phi), s * std::sin(phi), mu};
                const Vec3 x = R * n;
                const Mat3 g = fd_gradient([](const Vec3& y) { return stokeslet_velocity(y); },
                                           x, 1e-4 * R);
                Mat3 t = Mat3::zero();
                for (int i = 0; i < 3; ++i) {
                    t(i, i) += stokeslet_pressure(x);
                    for (int jj = 0; jj < 3; ++jj) t(i, jj) -= g(i, jj) + g(jj, i);
                }
                total += R * R * gt.weights[j] * (M_PI / 16.0) * t.apply(n);
            }
        }
        flux_dev = std::max(flux_dev, norm(total - kE3));
    }
    detail = "column dev " + fmt(worst) + " (<= 1e-12), flux dev " + fmt(flux_dev) +
             " (<= 1e-6)";
    return worst <= 1e-12 && flux_dev <= 1e-6;
}

// 5. Reynolds family converges to the Stokeslet on the unit sphere.
bool c05_reynolds_limit(std::string& detail) {
    std::vector<double> sups;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        double sup = 0.0;
        for (int j = 0; j < 24; ++j) {
            const double th = M_PI * (j + 0.5) / 24;
            for (int k = 0; k < 16; ++k) {
                const double ph = 2 * M_PI * k / 16;
                const Vec3 x = radial_unit(th, ph);
                sup = std::max(sup, norm(reynolds_solution(eps, x) - stokeslet_velocity(x)));
            }
        }
        sups.push_back(sup);
    }
    const bool mono = sups[1] < sups[0] && sups[2] < sups[1];
    const double rel = sups[2] / (1.0 / (4.0 * M_PI));
    detail = "sups " + fmt(sups[0]) + " > " + fmt(sups[1]) + " > " + fmt(sups[2]) +
             ", final/(1/4pi) = " + fmt(rel) + " (<= 0.01)";
    return mono && rel <= 0.01;
}

// 6. Regularized forcing: annulus support and total force.
bool c06_regularized_forcing(std::string& detail) {
    const Vec3 b = landau_beta(2.0) * kE3;
    const RegularizationProfile prof(1.0);
    double peak = 0.0;
    for (double r = 1.05; r < 1.95; r += 0.1)
        for (double th = 0.1; th < M_PI; th += 0.4)
            peak = std::max(peak,
                            norm(regularized_forcing(b, prof, r * radial_unit(th, 0.7))));
    double outside = 0.0;
    for (double r : {0.3, 0.7, 0.99, 2.01, 3.0, 5.0})
        for (double th = 0.1; th < M_PI; th += 0.4)
            outside = std::max(
                outside, norm(regularized_forcing(b, prof, r * radial_unit(th, 0.3))));
    const Vec3 total = forcing_integral(b, prof);
    const double rel = norm(total - b) / norm(b);
    detail = "outside/peak " + fmt(outside / peak) + " (<= 1e-10), force rel dev " +
             fmt(rel) + " (<= 1e-3)";
    return outside <= 1e-10 * peak && rel <= 1e-3;
}

// 7. Decay-estimate integral: anchor value and uniform weighted bound.
bool c07_decay_integral(std::string& detail) {
    const double I0 = lemma_decay_integral(Vec3{}, 1.5, 1.0);
    const double anchor_rel = std::abs(I0 - 8.0 * M_PI / 3.0) / (8.0 * M_PI / 3.0);
    double lo = 1e300, hi = 0.0;
    for (double t : {0.0, 1.0, 10.0, 50.0, 100.0}) {
        const double w = std::pow(1.0 + t, 1.5) * lemma_decay_integral(t * kE3, 1.5, 1.0);
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    detail = "I(0) rel dev " + fmt(anchor_rel) + " (<= 1e-3), weighted max/min " +
             fmt(hi / lo) + " (<= 5)";
    return anchor_rel <= 1e-3 && hi / lo <= 5.0;
}

// 8. Contraction mechanics on the abstract quadratic model.
bool c08_contraction(std::string& detail) {
    const auto [x1, x2] = contraction_roots(0.0, 1.0, 3.0 / 16.0);
    if (std::abs(x1 - 0.25) > 1e-14 || std::abs(x2 - 0.75) > 1e-14) {
        detail = "roots " + fmt(x1) + ", " + fmt(x2);
        return false;
    }
    const double eps = 0.15, c = 0.9;
    const Vec3 u = normalized(Vec3{1.0, -1.0, 0.5});
    auto T = [&](const Vec3& v) { return eps * Vec3{v.y, -v.x, v.z}; };
    auto B = [&](const Vec3& a, const Vec3& b) { return c * dot(a, b) * u; };
    const Vec3 y{0.02, -0.05, 0.04};
    const auto roots = contraction_roots(eps, c, norm(y));
    auto iterate = [&](Vec3 v, int n) {
        for (int k = 0; k < n; ++k) v = y - T(v) - B(v, v);
        return v;
    };
    const Vec3 fixed = iterate(Vec3{}, 400);
    if (!(norm(fixed) <= roots.first * (1 + 1e-12))) {
        detail = "fixed-point norm " + fmt(norm(fixed)) + " > xi1 " + fmt(roots.first);
        return false;
    }
    double worst = 0.0;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uu(-1.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        Vec3 start{uu(rng), uu(rng), uu(rng)};
        start = 0.95 * roots.second * start / std::max(norm(start), 1e-12);
        worst = std::max(worst, norm(iterate(start, 600) - fixed));
    }
    detail = "|x| = " + fmt(norm(fixed)) + " <= xi1 = " + fmt(roots.first) +
             ", multistart spread " + fmt(worst) + " (<= 1e-8)";
    return worst <= 1e-8;
}

// 9. End-to-end: exterior jet -> extension -> forcing -> certified solve ->
//    asymptotics certified at alpha = 1.5.
bool c09_end_to_end(std::string& detail) {
    const Vec3 b = 0.1 * kE3;
    ExteriorSolutionSample sol;
    sol.R0 = 1.0;
    sol.C_star = norm(b);
    const LandauParams params = LandauParams::from_force(b);
    sol.velocity = [params](const Vec3& x) { return eval_landau(params, x).velocity; };
    sol.pressure = [params](const Vec3& x) { return eval_landau(params, x).pressure; };
    sol.velocity_gradient = [params](const Vec3& x) {
        return eval_landau_gradient(params, x);
    };

    PipelineConfig cfg;  // desk-scale defaults: 24 shells x 16 x 16
    const auto res = run_exterior_pipeline(sol, cfg);

    const double b_rel = norm(res.b_volume - b) / norm(b);
    if (b_rel > 0.01) {
        detail = "recovered force off by " + fmt(b_rel);
        return false;
    }
    if (!res.solve.certificate.valid || !res.solve.converged) {
        detail = "solve did not converge under a valid certificate";
        return false;
    }
    const double vexp = res.report.velocity_fit.exponent;
    const double pexp = res.report.pressure_fit.exponent;
    const double rem_ratio = res.report.remainder_norm /
                             std::max(10.0 * res.solve.certificate.xi1, 1e-300);
    detail = "int f dev " + fmt(b_rel) + " (<= 0.01), v-exp " + fmt(vexp) +
             " (>= 1.4), remainder/10xi1 " + fmt(rem_ratio) + " (<= 1), p-exp " + fmt(pexp) +
             " (>= 2.35)";
    return vexp >= 1.5 - 0.1 && rem_ratio <= 1.0 && pexp >= 2.5 - 0.15;
}

// 10. Slow-decay obstruction: residual floor, ray exponent, zero-mean forcing.
bool c10_counterexample(std::string& detail) {
    double res = 0.0;
    for (double R : {3.0, 5.0, 10.0})
        res = std::max(res, std::abs(counterexample_field(3, 0.5, R * kE1).residual));
    std::vector<std::pair<double, double>> samples;
    for (double r = 3.0; r < 120.0; r *= 1.2)
        samples.emplace_back(r, std::abs(counterexample_value(0.5, r * kE1)));
    const auto fit = fit_decay_exponent(samples);
    auto grid = make_graded_grid(1.0, 2.0, std::pow(2.0, 1.0 / 6.0), 16, 16);
    double total = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const double f = counterexample_field(3, 0.5, grid.point(i)).residual;
        total += grid.weight[i] * f;
        l1 += grid.weight[i] * std::abs(f);
    }
    detail = "residual " + fmt(res) + " (<= 1e-6), exponent " + fmt(fit.exponent) +
             " (= 1.5 +- 1e-3, < 2), mean/L1 " + fmt(std::abs(total) / l1) + " (<= 1e-3)";
    return res <= 1e-6 && std::abs(fit.exponent - 1.5) <= 1e-3 && fit.exponent < 2.0 &&
           std::abs(total) <= 1e-3 * l1;
}

// 11. Oversized data refuses a certificate instead of returning a field.
bool c11_smallness_guard(std::string& detail) {
    const Vec3 b = 100.0 * kE3;
    ExteriorSolutionSample sol;
    sol.R0 = 1.0;
    sol.C_star = norm(b);
    const LandauParams params = LandauParams::from_force(b);
    sol.velocity = [params](const Vec3& x) { return eval_landau(params, x).velocity; };
    sol.pressure = [params](const Vec3& x) { return eval_landau(params, x).pressure; };
    sol.velocity_gradient = [params](const Vec3& x) {
        return eval_landau_gradient(params, x);
    };
    PipelineConfig cfg;
    cfg.grid_shells = 14;
    cfg.n_theta = 10;
    cfg.n_phi = 10;
    cfg.grid_r_max = 80.0;
    try {
        const auto res = run_exterior_pipeline(sol, cfg);
        detail = "pipeline returned a field (certificate " +
                 std::string(res.solve.certificate.valid ? "valid" : "invalid") + ")";
        return false;
    } catch (const NoCertificateError& e) {
        const bool code_ok = e.exit_code == ExitCode::no_certificate;
        detail = "no-certificate refusal, eps_hat = " + fmt(e.eps_hat) + ", c_hat = " +
                 fmt(e.c_hat) + ", ||V|| = " + fmt(e.y_norm) + ", exit code 3: " +
                 (code_ok ? "yes" : "no");
        return code_ok;
    }
}

struct Criterion {
    int id;
    const char* title;
    std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "jet momentum-balance exactness", c01_jet_exactness},
        {2, "force identity and R-independence", c02_force_identity},
        {3, "beta/gamma round trip", c03_beta_gamma},
        {4, "Stokeslet consistency", c04_stokeslet},
        {5, "Reynolds-family limit", c05_reynolds_limit},
        {6, "regularized forcing support and total", c06_regularized_forcing},
        {7, "decay-estimate integral bound", c07_decay_integral},
        {8, "contraction-lemma mechanics", c08_contraction},
        {9, "end-to-end exterior asymptotics", c09_end_to_end},
        {10, "slow-decay counterexample", c10_counterexample},
        {11, "smallness guard refuses oversized data", c11_smallness_guard},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  criterion %2d  %-42s [%7.2fs]  %s\n", ok ? "PASS" : "FAIL", c.id,
                    c.title, secs, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
