#include "verify_suites.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "lasym/analysis.hpp"
#include "lasym/extension.hpp"
#include "lasym/fd.hpp"
#include "lasym/flux.hpp"
#include "lasym/green.hpp"
#include "lasym/landau.hpp"
#include "lasym/quadrature.hpp"
#include "lasym/pipeline.hpp"
#include "lasym/solver.hpp"

namespace lasym::cli {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void check(std::vector<CheckResult>& out, const std::string& name, bool pass,
           const std::string& detail) {
    out.push_back({name, pass, detail});
}

void landau_suite(std::vector<CheckResult>& out) {
    // closed-form force against the flux quadrature
    const LandauParams p2 = LandauParams::from_parameter(2.0);
    FlowEvaluators flow;
    flow.velocity = [p2](const Vec3& x) { return eval_landau(p2, x).velocity; };
    flow.pressure = [p2](const Vec3& x) { return eval_landau(p2, x).pressure; };
    flow.velocity_gradient = [p2](const Vec3& x) { return eval_landau_gradient(p2, x); };
    const double beta2 = landau_beta(2.0);
    const Vec3 f1 = net_force(flow, 1.0, 16);
    check(out, "force_closed_form", std::abs(f1.z - beta2) < 1e-4 * beta2,
          "net_force z = " + fmt(f1.z) + " vs beta(2) = " + fmt(beta2));

    bool mono = true;
    double prev = landau_beta(1.001);
    for (double a = 1.01; a < 1e3; a *= 1.3) {
        const double cur = landau_beta(a);
        mono = mono && cur < prev;
        prev = cur;
    }
    check(out, "beta_monotone", mono, "sampled on (1.001, 1e3)");

    double rt = 0.0;
    for (double a = 1.001; a < 1e3; a *= 2.0)
        rt = std::max(rt, std::abs(landau_gamma(landau_beta(a)) - a) / a);
    check(out, "gamma_roundtrip", rt < 1e-10, "max relative error " + fmt(rt));

    double res = 0.0;
    for (const Vec3& x : {2.0 * kE1, Vec3{0.6, -0.5, 0.9}, Vec3{1.0, 2.0, -3.0}})
        res = std::max(res, norm(nse_residual(flow.velocity, flow.pressure, nullptr, x,
                                              1e-3 * norm(x))
                                     .momentum));
    check(out, "momentum_balance_residual", res < 1e-6, "max residual " + fmt(res));

    const LandauStreamFunction psi(2.0);
    double dmax = 0.0;
    for (double r : {0.5, 2.0})
        for (double th : {0.4, 1.2, 2.7}) {
            const auto v = velocity_from_stream(psi, r, th);
            const auto pol = eval_landau_polar(2.0, r, th);
            dmax = std::max({dmax, std::abs(v.u_r - pol.u_r), std::abs(v.u_theta - pol.u_theta)});
        }
    check(out, "stream_consistency", dmax < 1e-10, "max deviation " + fmt(dmax));

    const double fl = outflow(flow.velocity, 2.0, 16);
    check(out, "zero_outflow", std::abs(fl) < 1e-10, "flux " + fmt(fl));

    const RegularizationProfile prof(1.0);
    const Vec3 b = beta2 * kE3;
    double seam = 0.0;
    for (double r : {1.0, 2.0}) {
        auto vel = [&](double rr) {
            return regularized_landau(b, prof, rr * normalized(Vec3{1, 1, 1})).velocity;
        };
        seam = std::max(seam, norm(vel(r + 1e-6) - vel(r - 1e-6)));
    }
    check(out, "regularization_seam", seam < 1e-8, "jump " + fmt(seam));

    const Vec3 fi = forcing_integral(b, prof, 16, 16);
    check(out, "forcing_integral", norm(fi - b) < 1e-3 * norm(b),
          "integral z = " + fmt(fi.z) + " vs " + fmt(b.z));
}

void green_suite(std::vector<CheckResult>& out) {
    const Mat3 g = oseen_tensor(kE3);
    check(out, "oseen_values",
          std::abs(g(2, 2) - 1.0 / (4 * M_PI)) < 1e-14 &&
              std::abs(g(0, 0) - 1.0 / (8 * M_PI)) < 1e-14,
          "G33 = " + fmt(g(2, 2)));

    const StokesletStreamFunction psi;
    double cmax = 0.0;
    for (double r : {0.5, 3.0})
        for (double th : {0.3, 1.1, 2.2}) {
            const Vec3 x = r * Vec3{std::sin(th), 0.0, std::cos(th)};
            const auto pol = velocity_from_stream(psi, r, th);
            const Vec3 expected =
                pol.u_r * radial_unit(th, 0.0) + pol.u_theta * polar_unit(th, 0.0);
            cmax = std::max(cmax, norm(stokeslet_velocity(x) - expected));
        }
    check(out, "stokeslet_stream_column", cmax < 1e-12, "max deviation " + fmt(cmax));

    double pde = 0.0;
    for (double R : {0.5, 1.0, 5.0}) {
        const Vec3 x = R * normalized(Vec3{0.3, 0.5, 0.8});
        for (int j = 0; j < 3; ++j) {
            auto col = [j](const Vec3& y) {
                const Mat3 gg = oseen_tensor(y);
                return Vec3{gg(0, j), gg(1, j), gg(2, j)};
            };
            auto qj = [j](const Vec3& y) { return pressure_kernel(y)[j]; };
            Vec3 lap{}, gq{};
            for (int a = 0; a < 3; ++a) {
                lap += fd_second(col, x, a, 1e-3 * R);
                gq[a] = fd_partial(qj, x, a, 1e-3 * R);
            }
            pde = std::max(pde, norm(-lap + gq) * R * R * R);
        }
    }
    check(out, "kernel_pde", pde < 1e-6, "scaled residual " + fmt(pde));

    const double I0 = lemma_decay_integral(Vec3{}, 1.5, 1.0);
    check(out, "decay_integral_anchor", std::abs(I0 - 8.0 * M_PI / 3.0) < 1e-3 * I0,
          "I(0) = " + fmt(I0));
    double lo = 1e300, hi = 0.0;
    for (double t : {0.0, 1.0, 10.0, 50.0, 100.0}) {
        const double w = std::pow(1.0 + t, 1.5) * lemma_decay_integral(t * kE1, 1.5, 1.0);
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    check(out, "decay_integral_uniform", hi / lo < 5.0, "max/min = " + fmt(hi / lo));
}

void flux_suite(std::vector<CheckResult>& out) {
    const LandauParams p2 = LandauParams::from_parameter(2.0);
    FlowEvaluators flow;
    flow.velocity = [p2](const Vec3& x) { return eval_landau(p2, x).velocity; };
    flow.pressure = [p2](const Vec3& x) { return eval_landau(p2, x).pressure; };
    flow.velocity_gradient = [p2](const Vec3& x) { return eval_landau_gradient(p2, x); };
    const Vec3 f1 = net_force(flow, 1.0, 16);
    const Vec3 f2 = net_force(flow, 2.0, 16);
    const Vec3 f5 = net_force(flow, 5.0, 16);
    const double spread = std::max(norm(f2 - f1), norm(f5 - f1));
    check(out, "radius_independence", spread < 1e-6, "spread " + fmt(spread));

    FlowEvaluators lin;
    lin.velocity = [](const Vec3& x) { return stokeslet_velocity(x); };
    lin.pressure = [](const Vec3& x) { return stokeslet_pressure(x); };
    lin.velocity_gradient = nullptr;
    // advective part is quadratic-small but not zero; subtract it exactly
    const Vec3 raw = net_force(lin, 1.0, 16);
    Vec3 adv{};
    {
        const GaussRule& gt = gauss_legendre(16);
        for (int j = 0; j < 16; ++j) {
            const double mu = gt.nodes[j];
            const double s = std::sqrt(1.0 - mu * mu);
            for (int k = 0; k < 32; ++k) {
                const double phi = (k + 0.5) * M_PI / 16;
                const Vec3 n{s * std::cos(phi), s * std::sin(phi), mu};
                const Vec3 u = stokeslet_velocity(n);
                adv += gt.weights[j] * (M_PI / 16) * dot(u, n) * u;
            }
        }
    }
    check(out, "stokeslet_unit_flux", norm(raw - adv - kE3) < 1e-6,
          "linear flux deviation " + fmt(norm(raw - adv - kE3)));

    const OutflowField a = canonical_outflow_field(1.0);
    auto av = [&a](const Vec3& x) { return a.velocity(x); };
    check(out, "canonical_outflow_flux",
          std::abs(outflow(av, 0.5, 16) - 1.0) < 1e-12 &&
              std::abs(outflow(av, 4.0, 16) - 1.0) < 1e-12,
          "flux at R = 0.5 and 4");

    auto mixed = [&](const Vec3& x) { return flow.velocity(x) + a.velocity(x); };
    const auto split = split_outflow(mixed, 2.0);
    const auto again = split_outflow(split.remainder, 3.0);
    check(out, "split_idempotent",
          std::abs(split.flux - 1.0) < 1e-10 && std::abs(again.flux) < 1e-10,
          "recovered flux " + fmt(split.flux));
}

void solver_suite(std::vector<CheckResult>& out, std::uint64_t seed) {
    const auto [x1, x2] = contraction_roots(0.0, 1.0, 3.0 / 16.0);
    check(out, "contraction_roots", std::abs(x1 - 0.25) < 1e-14 && std::abs(x2 - 0.75) < 1e-14,
          "roots " + fmt(x1) + ", " + fmt(x2));

    auto grid = std::make_shared<GradedGrid>(make_graded_grid(0.06, 48.0, 1.75, 10, 10));
    auto f = dipole_test_source(grid, 0.5);
    DecayingEvaluator zero;
    zero.eval = [](const Vec3&) { return Vec3{}; };
    zero.tail = {1.0, 0.0};
    SolverConfig cfg;
    cfg.probe_fields = 2;
    cfg.probe_pairs = 3;
    cfg.seed = seed;
    bool converged = false, captured = false;
    double vn = 0.0, xi1 = 0.0;
    std::string detail;
    try {
        const auto res = picard_solve(zero, f, cfg);
        converged = res.converged;
        vn = weighted_sup_norm(res.v, 1.5).value();
        xi1 = res.certificate.xi1;
        captured = vn <= xi1 * 1.05;
        detail = "||v|| = " + fmt(vn) + ", xi1 = " + fmt(xi1);
    } catch (const std::exception& e) {
        detail = e.what();
    }
    check(out, "dipole_solve_converges", converged, detail);
    check(out, "norm_within_certificate", captured, detail);
}

void counterexample_suite(std::vector<CheckResult>& out) {
    double res = 0.0;
    for (double R : {3.0, 5.0, 10.0})
        res = std::max(res, std::abs(counterexample_field(3, 0.5, R * kE1).residual));
    check(out, "residual_outside_cutoff", res < 1e-6, "max residual " + fmt(res));

    std::vector<std::pair<double, double>> samples;
    for (double r = 3.0; r < 100.0; r *= 1.25)
        samples.emplace_back(r, std::abs(counterexample_value(0.5, r * kE1)));
    const auto fit = fit_decay_exponent(samples);
    check(out, "ray_decay_exponent", std::abs(fit.exponent - 1.5) < 1e-3,
          "exponent " + fmt(fit.exponent));

    auto grid = make_graded_grid(1.0, 2.0, std::pow(2.0, 1.0 / 6.0), 16, 16);
    double total = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const double fv = counterexample_field(3, 0.5, grid.point(i)).residual;
        total += grid.weight[i] * fv;
        l1 += grid.weight[i] * std::abs(fv);
    }
    check(out, "forcing_zero_mean", std::abs(total) < 1e-3 * l1,
          "integral " + fmt(total) + " vs L1 " + fmt(l1));
}

}  // namespace

bool suite_exists(const std::string& name) {
    return name == "landau" || name == "green" || name == "flux" || name == "solver" ||
           name == "counterexample" || name == "all";
}

std::vector<CheckResult> run_suite(const std::string& name, std::uint64_t seed) {
    std::vector<CheckResult> out;
    if (name == "landau" || name == "all") landau_suite(out);
    if (name == "green" || name == "all") green_suite(out);
    if (name == "flux" || name == "all") flux_suite(out);
    if (name == "solver" || name == "all") solver_suite(out, seed);
    if (name == "counterexample" || name == "all") counterexample_suite(out);
    return out;
}

}  // namespace lasym::cli
