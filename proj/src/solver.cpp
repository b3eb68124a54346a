#include "lasym/solver.hpp"

#include <cmath>
#include <memory>
#include <random>

#include "lasym/error.hpp"

namespace lasym {

std::pair<double, double> contraction_roots(double eps, double c, double y_norm) {
    if (!(eps >= 0.0) || !(eps < 1.0))
        throw ConfigError("contraction_roots: eps must lie in [0, 1)");
    if (!(c > 0.0)) throw ConfigError("contraction_roots: c must be positive");
    if (!(y_norm >= 0.0)) throw ConfigError("contraction_roots: y_norm must be nonnegative");
    const double disc = (1.0 - eps) * (1.0 - eps) - 4.0 * c * y_norm;
    if (disc < 0.0)
        throw NoCertificateError("contraction_roots: ||y|| >= (1-eps)^2/(4c), no fixed-point "
                                 "ball is certified",
                                 eps, c, y_norm);
    const double sq = std::sqrt(disc);
    return {((1.0 - eps) - sq) / (2.0 * c), ((1.0 - eps) + sq) / (2.0 * c)};
}

SampledVectorField random_probe_field(GridPtr grid, double alpha, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto rand_vec = [&] { return Vec3{gauss(rng), gauss(rng), gauss(rng)}; };
    const Vec3 c0 = rand_vec(), c1 = rand_vec(), c2 = rand_vec();
    const Vec3 n1 = normalized(rand_vec()), n2 = normalized(rand_vec());

    SampledVectorField v(grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec3 x = grid->point(i);
        const double r = norm(x);
        const Vec3 xh = r > 0.0 ? x / r : kE3;
        const double a1 = dot(xh, n1), a2 = dot(xh, n2);
        v.values[i] = std::pow(1.0 + r, -alpha) * (c0 + a1 * c1 + (a2 * a2) * c2);
    }
    v.tail.exponent = alpha;
    double c = 0.0;
    const int nr = grid->n_r();
    for (int it = 0; it < grid->n_theta; ++it)
        for (int ip = 0; ip < grid->n_phi; ++ip)
            c = std::max(c, norm(v.values[grid->node_index(nr - 1, it, ip)]));
    v.tail.constant = c * std::pow(grid->r_nodes.back(), alpha) *
                      (1.0 + 2.0 * alpha / grid->r_nodes.back());

    const double nv = weighted_sup_norm(v, alpha).value();
    if (nv > 0.0) v *= 1.0 / nv;
    return v;
}

DecayingEvaluator regularized_jet_evaluator(const LandauParams& params,
                                            const RegularizationProfile& profile) {
    DecayingEvaluator out;
    out.eval = [params, profile](const Vec3& x) {
        return regularized_landau(params, profile, x).velocity;
    };
    double c = 0.0;
    const double r_far = 1e3 * profile.r0();
    for (int k = 0; k <= 32; ++k) {
        const double th = M_PI * k / 32.0;
        const Vec3 x = r_far * Vec3{std::sin(th), 0.0, std::cos(th)};
        c = std::max(c, norm(regularized_landau(params, profile, x).velocity) * r_far);
    }
    out.tail = {1.0, 1.05 * c};
    return out;
}

SolveResult picard_solve(const DecayingEvaluator& U_reg, const SampledVectorField& f_minus_F,
                         const SolverConfig& config) {
    if (!(config.alpha > 1.0) || !(config.alpha < 2.0))
        throw ConfigError("picard_solve: alpha must lie in (1, 2)");
    const double alpha = config.alpha;
    GridPtr grid = f_minus_F.grid;

    SolveResult res;

    // Empirical operator bounds on random unit probes. The abstract lemma's
    // constants are not constructive; the certificate is measured.
    double eps_hat = 0.0;
    for (int k = 0; k < config.probe_fields; ++k) {
        auto probe = random_probe_field(grid, alpha, config.seed + 101 * k);
        auto image = linear_map_TU(U_reg, probe, config.convolution, &res.convolution_diag);
        eps_hat = std::max(eps_hat, weighted_sup_norm(image, alpha).value());
    }
    double c_hat = 0.0;
    for (int k = 0; k < config.probe_pairs; ++k) {
        auto pv = random_probe_field(grid, alpha, config.seed + 7001 + 211 * k);
        auto pw = random_probe_field(grid, alpha, config.seed + 9001 + 223 * k);
        auto image = bilinear_map_B(pv, pw, config.convolution, &res.convolution_diag);
        c_hat = std::max(c_hat, weighted_sup_norm(image, alpha).value());
    }

    auto V = source_term_V(f_minus_F, grid, 1e-6, config.convolution, &res.convolution_diag);
    const double y_norm = weighted_sup_norm(V, alpha).value();

    res.certificate.eps_hat = eps_hat;
    res.certificate.c_hat = c_hat;
    res.certificate.y_norm = y_norm;
    res.certificate.discriminant = (1.0 - eps_hat) * (1.0 - eps_hat) - 4.0 * c_hat * y_norm;
    if (eps_hat >= 1.0)
        throw NoCertificateError("picard_solve: measured linear-operator bound is not a "
                                 "contraction (eps_hat >= 1)",
                                 eps_hat, c_hat, y_norm);
    const auto roots = contraction_roots(eps_hat, c_hat, y_norm);  // may throw
    res.certificate.xi1 = roots.first;
    res.certificate.xi2 = roots.second;
    res.certificate.valid = true;

    SampledVectorField v(grid);
    v.tail = {alpha, 0.0};
    double v_norm = 0.0;
    if (config.start_from_source) {
        v = V;
        v_norm = y_norm;
    }

    for (int k = 0; k < config.max_iter; ++k) {
        SampledVectorField next = V;
        if (v_norm > 0.0) {
            next -= linear_map_TU(U_reg, v, config.convolution, &res.convolution_diag);
            next -= bilinear_map_B(v, v, config.convolution, &res.convolution_diag);
        }
        next.fit_tail(alpha);

        SampledVectorField diff = next;
        diff -= v;
        const double step = weighted_sup_norm(diff, alpha).grid_value;
        const double next_norm = weighted_sup_norm(next, alpha).value();
        res.norm_history.push_back(next_norm);
        res.iterations = k + 1;
        res.final_step = step;

        if (next_norm > res.certificate.xi2 * (1.0 + 1e-9))
            throw DivergenceError("picard_solve: iterate escaped the uniqueness ball");

        v = std::move(next);
        v_norm = next_norm;
        if (step <= config.step_tol) {
            res.converged = true;
            break;
        }
    }

    res.q = recover_pressure(v, U_reg, f_minus_F, config.convolution);
    res.v = std::move(v);
    return res;
}

namespace {

SampledTensorField advective_stress(const SampledVectorField& v, const DecayingEvaluator& U) {
    SampledTensorField N(v.grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec3 u = U.eval(v.grid->point(i));
        const Vec3& vv = v.values[i];
        N.values[i] =
            Mat3::outer(u, vv) + Mat3::outer(vv, u) + Mat3::outer(vv, vv);
    }
    N.tail.exponent = std::min(U.tail.exponent + v.tail.exponent, 2.0 * v.tail.exponent);
    N.tail.constant = 2.0 * U.tail.constant * v.tail.constant +
                      v.tail.constant * v.tail.constant;
    return N;
}

}  // namespace

SampledScalarField recover_pressure(const SampledVectorField& v, const DecayingEvaluator& U_reg,
                                    const SampledVectorField& f_minus_F,
                                    const ConvolutionOptions& opts) {
    GridPtr grid = v.grid;
    std::vector<Vec3> pts(grid->node_count());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = grid->point(i);

    const auto src = convolve_pressure_source_at(f_minus_F, pts, opts);
    const auto N = advective_stress(v, U_reg);
    const auto stress = convolve_pressure_stress_at(N, pts, opts);

    SampledScalarField q(grid);
    for (std::size_t i = 0; i < q.size(); ++i) q.values[i] = src[i] - stress[i];
    q.fit_tail(std::min(3.0, v.tail.exponent + 1.0));
    return q;
}

double recover_pressure_at(const Vec3& x, const SampledVectorField& v,
                           const DecayingEvaluator& U_reg,
                           const SampledVectorField& f_minus_F,
                           const ConvolutionOptions& opts) {
    const Vec3 pts[1] = {x};
    const auto src = convolve_pressure_source_at(f_minus_F, pts, opts);
    const auto N = advective_stress(v, U_reg);
    const auto stress = convolve_pressure_stress_at(N, pts, opts);
    return src[0] - stress[0];
}

FlowEvaluators assemble_solution(const Vec3& b, double Phi, const SolveResult& result,
                                 const RegularizationProfile& profile) {
    if (!result.converged) throw ConfigError("assemble_solution: solve did not converge");
    const LandauParams params = LandauParams::from_force(b);
    const OutflowField a = canonical_outflow_field(Phi);
    auto v = std::make_shared<SampledVectorField>(result.v);
    auto q = std::make_shared<SampledScalarField>(result.q);
    const RegularizationProfile prof = profile;

    FlowEvaluators flow;
    flow.velocity = [params, prof, a, v, Phi](const Vec3& x) {
        Vec3 u = regularized_landau(params, prof, x).velocity + v->value(x);
        if (Phi != 0.0) u += a.velocity(x);
        return u;
    };
    flow.pressure = [params, prof, a, q, Phi](const Vec3& x) {
        double p = regularized_landau(params, prof, x).pressure + q->value(x);
        if (Phi != 0.0) p += a.pressure(x);
        return p;
    };
    return flow;
}

}  // namespace lasym
