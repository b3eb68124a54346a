#include "lasym/pipeline.hpp"

#include <cmath>

#include "lasym/error.hpp"
#include "lasym/flux.hpp"

namespace lasym {

namespace {

GridPtr pipeline_grid(const PipelineConfig& cfg) {
    return std::make_shared<GradedGrid>(make_graded_grid_shells(
        cfg.grid_r_min, cfg.grid_r_max, cfg.grid_shells, cfg.n_theta, cfg.n_phi));
}

std::vector<double> default_shells(const PipelineConfig& cfg) {
    if (!cfg.report_shells.empty()) return cfg.report_shells;
    std::vector<double> shells;
    const double lo = 8.0, hi = std::min(128.0, 0.8 * cfg.grid_r_max);
    for (int i = 0; i < 10; ++i) shells.push_back(lo * std::pow(hi / lo, i / 9.0));
    return shells;
}

double bump(const Vec3& c, double rho, const Vec3& y) {
    const double u2 = norm2(y - c) / (rho * rho);
    return u2 < 1.0 ? std::exp(-1.0 / (1.0 - u2)) : 0.0;
}

/// Remove the discrete mean of g with a fixed smooth unit-mass bump, so the
/// zero-mean identity holds exactly in the grid's own quadrature.
void correct_mean(SampledVectorField& g, double r0) {
    const Vec3 c = 1.5 * r0 * kE3;
    const double rho = 0.45 * r0;
    const GradedGrid& grid = *g.grid;
    std::vector<double> chi(g.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        chi[i] = bump(c, rho, grid.point(i));
        mass += chi[i] * grid.weight[i];
    }
    if (mass <= 0.0) throw ConfigError("correct_mean: correction bump missed the grid");
    const Vec3 mean = g.integral();
    for (std::size_t i = 0; i < g.size(); ++i) g.values[i] -= (chi[i] / mass) * mean;
    g.support_radius = std::max(g.support_radius, norm(c) + rho);
}

PipelineResult finish_from_forcing(SampledVectorField f, double Phi,
                                   const PipelineConfig& cfg) {
    PipelineResult out;
    out.grid = f.grid;
    out.outflow = Phi;
    out.b_volume = f.integral();

    const RegularizationProfile profile(cfg.r0);
    const LandauParams params = LandauParams::from_force(out.b_volume);

    SampledVectorField g = std::move(f);
    if (!params.is_zero()) {
        auto F = sample_field<Vec3>(out.grid, [&](const Vec3& x) {
            return regularized_forcing(params, profile, x);
        });
        g -= F;
        g.support_radius = std::max(g.support_radius, 2.0 * cfg.r0);
    }
    correct_mean(g, cfg.r0);
    g.tail = {8.0, 0.0};
    out.f_minus_F = g;

    SolverConfig scfg = cfg.solver;
    scfg.alpha = cfg.alpha;
    const DecayingEvaluator U = regularized_jet_evaluator(params, profile);
    out.solve = picard_solve(U, out.f_minus_F, scfg);

    out.flow = assemble_solution(out.b_volume, Phi, out.solve, profile);
    out.report = asymptotics_report(out.flow.velocity, out.flow.pressure, out.b_volume,
                                    cfg.alpha, default_shells(cfg), cfg.report_angular);
    return out;
}

}  // namespace

SampledVectorField dipole_test_source(GridPtr grid, double strength) {
    auto g = sample_field<Vec3>(grid, [&](const Vec3& y) {
        return strength * (bump(0.5 * kE3, 0.4, y) - bump(-0.5 * kE3, 0.4, y)) * kE1;
    });
    g.support_radius = 1.0;
    g.tail = {8.0, 0.0};
    return g;
}

PipelineResult run_exterior_pipeline(const ExteriorSolutionSample& exterior,
                                     const PipelineConfig& cfg) {
    // Peel off any outflow before extending; the carrier rejoins at assembly.
    const double raw_flux = outflow(exterior.velocity, 2.0 * exterior.R0, 16);
    const double flux_scale =
        4.0 * M_PI * 2.0 * exterior.R0 * std::max(exterior.C_star, 1e-300);
    ExteriorSolutionSample work = exterior;
    double Phi = 0.0;
    if (std::abs(raw_flux) > cfg.outflow_split_tol * flux_scale) {
        Phi = raw_flux;
        const auto split = split_outflow(exterior.velocity, 2.0 * exterior.R0);
        work.velocity = split.remainder;
        const OutflowField a = canonical_outflow_field(Phi);
        auto p0 = exterior.pressure;
        work.pressure = [p0, a](const Vec3& x) { return p0(x) - a.pressure(x); };
        work.velocity_gradient = nullptr;
    }

    // Normalize the additive pressure constant to the decaying choice.
    const double p_inf = estimate_pressure_offset(
        work.pressure, 4.0 * exterior.R0, 40.0 * exterior.R0);
    if (std::abs(p_inf) > 0.0) {
        auto p0 = work.pressure;
        work.pressure = [p0, p_inf](const Vec3& x) { return p0(x) - p_inf; };
    }

    auto u_ext = extend_velocity(work, cfg.outflow_split_tol * 10.0);
    auto p_ext = extend_pressure(work);

    PipelineResult out;
    {
        FlowEvaluators fl;
        fl.velocity = work.velocity;
        fl.pressure = work.pressure;
        fl.velocity_gradient = work.velocity_gradient;
        out.b_surface = net_force(fl, 2.0 * exterior.R0, 16);
    }

    GridPtr grid = pipeline_grid(cfg);
    auto f = compute_forcing(u_ext, p_ext, grid, exterior.R0);
    auto finished = finish_from_forcing(std::move(f), Phi, cfg);
    finished.b_surface = out.b_surface;
    return finished;
}

PipelineResult run_forced_pipeline(const Vec3& b, double perturb_strength,
                                   const PipelineConfig& cfg) {
    GridPtr grid = pipeline_grid(cfg);
    const RegularizationProfile profile(cfg.r0);
    const LandauParams params = LandauParams::from_force(b);
    auto f = sample_field<Vec3>(grid, [&](const Vec3& x) {
        return params.is_zero() ? Vec3{} : regularized_forcing(params, profile, x);
    });
    f.support_radius = 2.0 * cfg.r0;
    f.tail = {8.0, 0.0};
    if (perturb_strength != 0.0) {
        auto d = dipole_test_source(grid, perturb_strength);
        f += d;
        f.support_radius = std::max(2.0 * cfg.r0, d.support_radius);
    }
    return finish_from_forcing(std::move(f), 0.0, cfg);
}

}  // namespace lasym
