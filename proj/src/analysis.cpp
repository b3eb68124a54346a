#include "lasym/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lasym/dual.hpp"
#include "lasym/error.hpp"
#include "lasym/fd.hpp"
#include "lasym/landau.hpp"
#include "lasym/quadrature.hpp"

namespace lasym {

DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& samples) {
    std::vector<std::pair<double, double>> kept;
    int dropped = 0;
    for (const auto& [r, m] : samples) {
        if (m > 0.0 && r > 0.0)
            kept.emplace_back(r, m);
        else
            ++dropped;
    }
    if (kept.size() < 8)
        throw ConfigError("fit_decay_exponent: need at least 8 positive samples");
    auto [lo, hi] = std::minmax_element(kept.begin(), kept.end());
    if (hi->first / lo->first < 8.0)
        throw ConfigError("fit_decay_exponent: radii must span a factor of 8");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [r, m] : kept) {
        const double X = std::log(r), Y = std::log(m);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    const double n = static_cast<double>(kept.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;

    DecayFit fit;
    fit.exponent = -slope;
    fit.log_prefactor = icpt;
    fit.r_lo = lo->first;
    fit.r_hi = hi->first;
    fit.dropped_zeros = dropped;
    double ss = 0.0;
    for (const auto& [r, m] : kept) {
        const double res = std::log(m) - (icpt + slope * std::log(r));
        ss += res * res;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

DecayFit fit_decay_outer(const std::vector<std::pair<double, double>>& samples) {
    double r_lo = std::numeric_limits<double>::infinity(), r_hi = 0.0;
    for (const auto& [r, m] : samples) {
        r_lo = std::min(r_lo, r);
        r_hi = std::max(r_hi, r);
    }
    const double cut = r_lo * std::pow(r_hi / r_lo, 0.2);
    std::vector<std::pair<double, double>> outer;
    for (const auto& s : samples)
        if (s.first >= cut) outer.push_back(s);
    return fit_decay_exponent(outer);
}

ResidualSample nse_residual(const std::function<Vec3(const Vec3&)>& u,
                            const std::function<double(const Vec3&)>& p,
                            const std::function<Vec3(const Vec3&)>& f, const Vec3& x,
                            double h) {
    Vec3 lap{}, grad_p{};
    Mat3 gu;
    for (int a = 0; a < 3; ++a) {
        lap += fd_second(u, x, a, h);
        grad_p[a] = fd_partial(p, x, a, h);
        const Vec3 du = fd_partial(u, x, a, h);
        for (int i = 0; i < 3; ++i) gu(i, a) = du[i];
    }
    ResidualSample out;
    out.momentum = -lap + gu.apply(u(x)) + grad_p;
    if (f) out.momentum -= f(x);
    out.divergence = gu.trace();
    return out;
}

AsymptoticsReport asymptotics_report(const std::function<Vec3(const Vec3&)>& u,
                                     const std::function<double(const Vec3&)>& p,
                                     const Vec3& b, double alpha,
                                     const std::vector<double>& shell_radii,
                                     int angular_order) {
    if (shell_radii.size() < 8)
        throw ConfigError("asymptotics_report: need at least 8 shell radii");
    const LandauParams params = LandauParams::from_force(b);

    AsymptoticsReport rep;
    rep.b = b;
    rep.alpha = alpha;

    const GaussRule& gt = gauss_legendre(angular_order);
    const int n_phi = 2 * angular_order;

    std::vector<std::pair<double, double>> vel_samples;
    std::vector<std::pair<double, double>> p_diff;  // (r, p - P^b) means per point
    std::vector<std::vector<std::pair<Vec3, double>>> shell_pts(shell_radii.size());

    double jet_scale = 0.0;
    for (std::size_t si = 0; si < shell_radii.size(); ++si) {
        const double R = shell_radii[si];
        double vmax = 0.0;
        for (int j = 0; j < angular_order; ++j) {
            const double mu = gt.nodes[j];
            const double s = std::sqrt(1.0 - mu * mu);
            for (int k = 0; k < n_phi; ++k) {
                const double phi = (k + 0.5) * 2.0 * M_PI / n_phi;
                const Vec3 x = R * Vec3{s * std::cos(phi), s * std::sin(phi), mu};
                const FlowSample jet = eval_landau(params, x);
                const double dv = norm(u(x) - jet.velocity);
                vmax = std::max(vmax, dv);
                jet_scale = std::max(jet_scale, norm(jet.velocity));
                rep.remainder_norm =
                    std::max(rep.remainder_norm, std::pow(1.0 + R, alpha) * dv);
                shell_pts[si].push_back({x, jet.pressure});
            }
        }
        vel_samples.emplace_back(R, vmax);
    }

    // p0 by least squares over the outer half of the shells.
    double p0_sum = 0.0;
    std::size_t p0_n = 0;
    for (std::size_t si = shell_radii.size() / 2; si < shell_radii.size(); ++si)
        for (const auto& [x, jet_p] : shell_pts[si]) {
            p0_sum += p(x) - jet_p;
            ++p0_n;
        }
    rep.pressure_offset = p0_n ? p0_sum / p0_n : 0.0;

    std::vector<std::pair<double, double>> prs_samples;
    for (std::size_t si = 0; si < shell_radii.size(); ++si) {
        const double R = shell_radii[si];
        double pmax = 0.0;
        for (const auto& [x, jet_p] : shell_pts[si])
            pmax = std::max(pmax, std::abs(p(x) - rep.pressure_offset - jet_p));
        prs_samples.emplace_back(R, pmax);
        rep.pressure_remainder_norm =
            std::max(rep.pressure_remainder_norm, std::pow(1.0 + R, alpha + 1.0) * pmax);
    }

    const double floor = 1e-13 * std::max(jet_scale, 1e-300);
    auto fit_or_exact = [&](std::vector<std::pair<double, double>>& samples) {
        int live = 0;
        for (auto& [r, m] : samples)
            if (m > floor) ++live;
        if (live < 8) {
            DecayFit f;
            f.exponent = std::numeric_limits<double>::infinity();
            f.r_lo = samples.front().first;
            f.r_hi = samples.back().first;
            return f;  // remainder at the numerical floor everywhere
        }
        return fit_decay_outer(samples);
    };
    rep.velocity_fit = fit_or_exact(vel_samples);
    rep.pressure_fit = fit_or_exact(prs_samples);

    rep.velocity_certified = rep.velocity_fit.exponent >= alpha - rep.fit_slack;
    rep.asymptotics_mismatch = rep.velocity_fit.exponent < 1.2 && norm(b) > 0.0;
    return rep;
}

namespace {

// Cutoff vanishing on the unit ball, 1 outside radius 2.
double eta_ball(double r) {
    if (r <= 1.0) return 0.0;
    if (r >= 2.0) return 1.0;
    return smoothstep_jet(Jet3{r - 1.0, 0.0, 0.0, 0.0}).f0;
}

}  // namespace

double counterexample_value(double eps, const Vec3& x) {
    const double r = norm(x);
    if (r == 0.0) return 0.0;
    return eta_ball(r) * x.x * std::pow(r, eps - 3.0);
}

CounterexampleSample counterexample_field(int n, double eps, const Vec3& x, double h) {
    if (n != 3) throw ConfigError("counterexample_field: only dimension 3 is built");
    if (!(eps > 0.0) || !(eps < 1.0))
        throw ConfigError("counterexample_field: eps must lie in (0, 1)");
    if (!(norm(x) > 0.0)) throw ConfigError("counterexample_field: x must be nonzero");

    CounterexampleSample out;
    out.u = counterexample_value(eps, x);

    const double k = eps * (3.0 - eps) / (1.0 - eps);
    auto scalar_u = [eps](const Vec3& y) { return counterexample_value(eps, y); };
    double lap = 0.0, div_term = 0.0;
    for (int a = 0; a < 3; ++a) {
        lap += fd_second(scalar_u, x, a, h);
        auto flux_a = [&, a](const Vec3& y) {
            return y[a] / norm2(y) * counterexample_value(eps, y);
        };
        div_term += fd_partial(flux_a, x, a, h);
    }
    out.residual = -lap + k * div_term;
    return out;
}

}  // namespace lasym
