#include "lasym/extension.hpp"

#include <cmath>
#include <memory>

#include "lasym/error.hpp"
#include "lasym/fd.hpp"
#include "lasym/flux.hpp"
#include "lasym/parallel.hpp"
#include "lasym/quadrature.hpp"

namespace lasym {

RadialCutoff::RadialCutoff(double R0) : R0_(R0) {
    if (!(R0 > 0.0)) throw ConfigError("RadialCutoff: R0 must be positive");
}

Jet3 RadialCutoff::jet(double r) const {
    const double t = 2.0 * (r / R0_ - 2.0);  // 0 at r = 2 R0, 1 at r = 2.5 R0
    if (t <= 0.0) return Jet3(0.0);
    if (t >= 1.0) return Jet3(1.0);
    return smoothstep_jet(Jet3{t, 2.0 / R0_, 0.0, 0.0});
}

BogovskiiOperator::BogovskiiOperator(double support_radius, double mollifier_radius,
                                     int angular_order, int ray_order)
    : R_(support_radius),
      ball_r_(mollifier_radius > 0.0 ? mollifier_radius : 0.25 * support_radius),
      n_theta_(angular_order),
      n_phi_(2 * angular_order),
      n_ray_(ray_order) {
    if (!(R_ > 0.0) || !(ball_r_ > 0.0) || ball_r_ >= R_)
        throw ConfigError("BogovskiiOperator: need 0 < mollifier radius < support radius");
    if (angular_order < 6 || ray_order < 4)
        throw ConfigError("BogovskiiOperator: quadrature orders too low");
    // Normalize the mollifier exp(-1/(1 - |z/b|^2)) to unit mass.
    const double b = ball_r_;
    const double mass = 4.0 * M_PI *
                        adaptive_integrate(
                            [b](double s) {
                                const double u = s / b;
                                return std::exp(-1.0 / (1.0 - u * u)) * s * s;
                            },
                            0.0, b * (1.0 - 1e-12), 1e-12, 20);
    omega_c_ = 1.0 / mass;
}

double BogovskiiOperator::omega(const Vec3& z) const {
    const double u2 = norm2(z) / (ball_r_ * ball_r_);
    if (u2 >= 1.0 - 1e-12) return 0.0;
    return omega_c_ * std::exp(-1.0 / (1.0 - u2));
}

Vec3 BogovskiiOperator::apply(const std::function<double(const Vec3&)>& g,
                              double g_support_radius, const Vec3& x) const {
    // v(x) = int_{S^2} de e int dtau g(x - tau e) (m2 + 2 tau m1 + tau^2 m0),
    // m_k(x,e) = int ome(x + eta e) eta^k deta: the ray-moment form of the
    // classical construction. Directions are restricted to the cap that can
    // reach the mollifier ball; the mollifier's flat boundary keeps the
    // integrand smooth at the cap edge.
    const double xr = norm(x);
    if (xr >= R_) return {};

    double cap_mu = -1.0;  // full sphere
    Vec3 axis = kE3;
    if (xr > ball_r_) {
        const double psi = std::asin(std::min(1.0, ball_r_ / xr)) + 0.15;
        cap_mu = psi < M_PI ? std::cos(psi) : -1.0;
        axis = -x / xr;
    }
    const Vec3 t1 = orthogonal_unit(axis);
    const Vec3 t2 = cross(axis, t1);

    const GaussRule& gmu = gauss_legendre(n_theta_);
    const GaussRule& gray = gauss_legendre(n_ray_);
    const GaussRule& gtau = gauss_legendre(2 * n_ray_);
    const double wphi = 2.0 * M_PI / n_phi_;

    Vec3 acc;
    for (int jm = 0; jm < n_theta_; ++jm) {
        const double mu = 0.5 * (1.0 + cap_mu) + 0.5 * (1.0 - cap_mu) * gmu.nodes[jm];
        const double wmu = 0.5 * (1.0 - cap_mu) * gmu.weights[jm];
        const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int jp = 0; jp < n_phi_; ++jp) {
            const double phi = (jp + 0.5) * wphi;
            const Vec3 e = mu * axis + s * (std::cos(phi) * t1 + std::sin(phi) * t2);

            // Ray x + eta e through the mollifier ball.
            const double be = -dot(x, e);  // eta of closest approach to 0
            const double disc = be * be - (norm2(x) - ball_r_ * ball_r_);
            if (disc <= 0.0) continue;
            const double sq = std::sqrt(disc);
            const double eta0 = std::max(0.0, be - sq), eta1 = be + sq;
            if (eta1 <= eta0) continue;
            double m0 = 0.0, m1 = 0.0, m2 = 0.0;
            const double emid = 0.5 * (eta0 + eta1), ehalf = 0.5 * (eta1 - eta0);
            for (int k = 0; k < n_ray_; ++k) {
                const double eta = emid + ehalf * gray.nodes[k];
                const double w = ehalf * gray.weights[k] * omega(x + eta * e);
                m0 += w;
                m1 += w * eta;
                m2 += w * eta * eta;
            }
            if (m0 == 0.0 && m1 == 0.0 && m2 == 0.0) continue;

            // Ray x - tau e through the support ball of g.
            const double bt = dot(x, e);
            const double disc_t = bt * bt - (norm2(x) - g_support_radius * g_support_radius);
            if (disc_t <= 0.0) continue;
            const double sqt = std::sqrt(disc_t);
            const double tau0 = std::max(0.0, bt - sqt), tau1 = bt + sqt;
            if (tau1 <= tau0) continue;
            double ray = 0.0;
            const double tmid = 0.5 * (tau0 + tau1), thalf = 0.5 * (tau1 - tau0);
            for (int k = 0; k < 2 * n_ray_; ++k) {
                const double tau = tmid + thalf * gtau.nodes[k];
                const double gv = g(x - tau * e);
                if (gv == 0.0) continue;
                ray += thalf * gtau.weights[k] * gv * (m2 + 2.0 * tau * m1 + tau * tau * m0);
            }
            acc += (wmu * wphi * ray) * e;
        }
    }
    return acc;
}

SampledVectorField bogovskii_solve(const SampledScalarField& g, double tol) {
    if (g.empty()) throw ConfigError("bogovskii_solve: empty field");
    if (!std::isfinite(g.support_radius))
        throw ConfigError("bogovskii_solve: right-hand side must declare a support ball");
    const GradedGrid& grid = *g.grid;
    const double R = g.support_radius;

    double out_mag = 0.0, all_mag = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double m = std::abs(g.values[i]);
        all_mag = std::max(all_mag, m);
        if (norm(grid.point(i) - grid.center) > R * (1.0 + 1e-9)) out_mag = std::max(out_mag, m);
    }
    if (out_mag > 1e-10 * all_mag)
        throw ConfigError("bogovskii_solve: field is not supported in its declared ball");

    const double mean = g.integral();
    if (std::abs(mean) > tol * std::max(g.l1_norm(), 1e-300))
        throw ZeroMeanError("bogovskii_solve: div v = g needs a zero-mean g");

    BogovskiiOperator op(R);
    auto g_eval = [&g, R](const Vec3& y) {
        return norm(y) > R ? 0.0 : g.value(y);
    };

    SampledVectorField v(g.grid);
    parallel_for(v.size(), [&](std::size_t i) {
        const Vec3 x = grid.point(i);
        v.values[i] = norm(x - grid.center) >= R ? Vec3{} : op.apply(g_eval, R, x);
    });
    v.support_radius = R;
    v.tail = {8.0, 0.0};
    return v;
}

double estimate_pressure_offset(const std::function<double(const Vec3&)>& pressure,
                                double r_lo, double r_hi, int n_radii, int angular_order) {
    if (!(r_hi > r_lo) || n_radii < 2)
        throw ConfigError("estimate_pressure_offset: bad radius range");
    const GaussRule& gt = gauss_legendre(angular_order);
    const int n_phi = 2 * angular_order;
    const double wphi = 2.0 * M_PI / n_phi;
    // Least squares of mean pressure against 1 and r^-2.
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (int i = 0; i < n_radii; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, i / (n_radii - 1.0));
        double mean = 0.0;
        for (int j = 0; j < angular_order; ++j) {
            const double mu = gt.nodes[j];
            const double s = std::sqrt(1.0 - mu * mu);
            for (int k = 0; k < n_phi; ++k) {
                const double phi = (k + 0.5) * wphi;
                mean += gt.weights[j] * wphi *
                        pressure({r * s * std::cos(phi), r * s * std::sin(phi), r * mu});
            }
        }
        mean /= 4.0 * M_PI;
        const double f2 = 1.0 / (r * r);
        s11 += 1.0;
        s12 += f2;
        s22 += f2 * f2;
        b1 += mean;
        b2 += mean * f2;
    }
    const double det = s11 * s22 - s12 * s12;
    return (b1 * s22 - b2 * s12) / det;
}

std::function<Vec3(const Vec3&)> extend_velocity(const ExteriorSolutionSample& sol,
                                                 double outflow_tol) {
    if (!sol.velocity) throw ConfigError("extend_velocity: missing velocity evaluator");
    const double R0 = sol.R0;
    const double Rcheck = 2.0 * R0;
    const double flux = outflow(sol.velocity, Rcheck, 16);
    const double flux_scale = 4.0 * M_PI * Rcheck * sol.C_star;
    if (std::abs(flux) > outflow_tol * std::max(flux_scale, 1e-300))
        throw ConfigError(
            "extend_velocity: input carries outflow; peel it off with split_outflow first");

    auto cutoff = std::make_shared<RadialCutoff>(R0);
    auto op = std::make_shared<BogovskiiOperator>(2.5 * R0, 0.625 * R0, 12, 10);
    auto u = sol.velocity;

    // div v = -u . grad eta, supported in the cutoff transition annulus.
    auto rhs = [cutoff, u](const Vec3& y) {
        const double r = norm(y);
        const Jet3 eta = cutoff->jet(r);
        if (eta.f1 == 0.0) return 0.0;
        return -dot(u(y), (eta.f1 / r) * y);
    };

    const double supp = 2.5 * R0;
    return [cutoff, op, u, rhs, supp](const Vec3& x) -> Vec3 {
        const double r = norm(x);
        if (r >= supp) return u(x);  // bit-exact pass-through
        const double eta = cutoff->jet(r).f0;
        Vec3 val = op->apply(rhs, supp, x);
        if (eta > 0.0) val += eta * u(x);
        return val;
    };
}

std::function<double(const Vec3&)> extend_pressure(const ExteriorSolutionSample& sol) {
    if (!sol.pressure) throw ConfigError("extend_pressure: missing pressure evaluator");
    const double R0 = sol.R0;
    auto cutoff = std::make_shared<RadialCutoff>(R0);
    auto p = sol.pressure;

    // Mean of p on the reflection target sphere, for the constant core fill.
    const GaussRule& gt = gauss_legendre(8);
    double pbar = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double mu = gt.nodes[j];
        const double s = std::sqrt(1.0 - mu * mu);
        for (int k = 0; k < 16; ++k) {
            const double phi = (k + 0.5) * 2.0 * M_PI / 16;
            pbar += gt.weights[j] * (2.0 * M_PI / 16) *
                    p(3.5 * R0 * Vec3{s * std::cos(phi), s * std::sin(phi), mu});
        }
    }
    pbar /= 4.0 * M_PI;

    return [cutoff, p, pbar, R0](const Vec3& x) -> double {
        const double r = norm(x);
        if (r >= 2.5 * R0) return p(x);
        const double eta = cutoff->jet(r).f0;
        // Radial even reflection across r = 2 R0, fading to a constant core.
        double fill;
        const double t = 2.0 * r / R0 - 1.0;  // 0 at r = R0/2, 1 at r = R0
        if (t <= 0.0) {
            fill = pbar;
        } else {
            const double w = smoothstep_jet(Jet3{t, 0.0, 0.0, 0.0}).f0;
            const double rr = 4.0 * R0 - r;
            fill = w * p(rr / r * x) + (1.0 - w) * pbar;
        }
        return eta * p(x) + (1.0 - eta) * fill;
    };
}

SampledVectorField compute_forcing(const std::function<Vec3(const Vec3&)>& u,
                                   const std::function<double(const Vec3&)>& p, GridPtr grid,
                                   double R0, double fd_step) {
    if (!u || !p) throw ConfigError("compute_forcing: missing evaluators");
    const double h = fd_step > 0.0 ? fd_step : 3e-3 * R0;
    const double cut = 2.5 * R0 + 3.0 * h;

    SampledVectorField f(grid);
    parallel_for(f.size(), [&](std::size_t i) {
        const Vec3 x = grid->point(i);
        if (norm(x) > cut) return;  // exact solution there, f = 0
        Vec3 lap{}, grad_p{};
        Mat3 gu;
        for (int a = 0; a < 3; ++a) {
            lap += fd_second(u, x, a, h);
            grad_p[a] = fd_partial(p, x, a, h);
            const Vec3 du = fd_partial(u, x, a, h);
            for (int i2 = 0; i2 < 3; ++i2) gu(i2, a) = du[i2];
        }
        const Vec3 ux = u(x);
        f.values[i] = -lap + gu.apply(ux) + grad_p;
    });
    f.support_radius = cut;
    f.tail = {8.0, 0.0};
    return f;
}

}  // namespace lasym
