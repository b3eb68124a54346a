#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "lasym/geometry.hpp"

namespace lasym {

/// Least-squares power law through (r, magnitude) samples in log-log space.
struct DecayFit {
    double exponent = 0.0;        // magnitude ~ r^-exponent
    double log_prefactor = 0.0;   // log of the fitted constant
    double r_lo = 0.0, r_hi = 0.0;
    double rms_residual = 0.0;    // in log-log space
    int dropped_zeros = 0;
    double prefactor() const { return std::exp(log_prefactor); }
    double model(double r) const { return std::exp(log_prefactor - exponent * std::log(r)); }
};

/// Fit a decay exponent to (r, magnitude) samples. Zero (or negative)
/// magnitudes are dropped and counted. Requires at least 8 surviving
/// samples whose radii span a factor of 8 (ConfigError otherwise).
DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& samples);

/// Drop the innermost 20% of the radius range (log scale) before fitting;
/// far-field statements should not be contaminated by near-field samples.
DecayFit fit_decay_outer(const std::vector<std::pair<double, double>>& samples);

struct ResidualSample {
    Vec3 momentum;       // -Lap u + (u.grad) u + grad p - f
    double divergence;   // div u
};

/// 4th-order central-difference residual of the steady momentum balance at
/// x with stencil step h. f may be empty (treated as zero).
ResidualSample nse_residual(const std::function<Vec3(const Vec3&)>& u,
                            const std::function<double(const Vec3&)>& p,
                            const std::function<Vec3(const Vec3&)>& f, const Vec3& x,
                            double h);

/// Comparison of a flow against the jet solution with the same net force:
/// weighted remainder norms, fitted decay exponents, and the additive
/// pressure offset.
struct AsymptoticsReport {
    Vec3 b;
    double alpha = 0.0;
    double remainder_norm = 0.0;           // sup over shells of (1+r)^alpha |u - U^b|
    double pressure_offset = 0.0;          // fitted p0
    double pressure_remainder_norm = 0.0;  // sup of (1+r)^(alpha+1) |p - p0 - P^b|
    DecayFit velocity_fit;                 // of |u - U^b|
    DecayFit pressure_fit;                 // of |p - p0 - P^b|
    bool velocity_certified = false;       // velocity_fit.exponent >= alpha - fit_slack
    bool asymptotics_mismatch = false;     // leading term wrong (exponent near 1)
    double fit_slack = 0.1;
};

/// Evaluate the report over the given shell radii (>= 8 spanning a factor
/// >= 8). p0 is fitted jointly with the jet pressure by least squares of
/// p - P^b over the outer shells.
AsymptoticsReport asymptotics_report(const std::function<Vec3(const Vec3&)>& u,
                                     const std::function<double(const Vec3&)>& p,
                                     const Vec3& b, double alpha,
                                     const std::vector<double>& shell_radii,
                                     int angular_order = 12);

/// The slow-decay obstruction field u = eta(|x|) x_1 |x|^(eps - 3) together
/// with the residual of -Lap u + (eps(3-eps)/(1-eps)) div(x u / |x|^2),
/// which vanishes for |x| > 2 where the cutoff is inactive. The forcing it
/// leaves behind in the annulus integrates to zero yet u decays like
/// |x|^(eps - 2), strictly slower than the naive r^-2.
struct CounterexampleSample {
    double u = 0.0;
    double residual = 0.0;
};
CounterexampleSample counterexample_field(int n, double eps, const Vec3& x, double h = 1e-3);
/// The scalar field alone (for forcing quadrature / decay fits).
double counterexample_value(double eps, const Vec3& x);

}  // namespace lasym
