#pragma once

#include <functional>

#include "lasym/fields.hpp"
#include "lasym/geometry.hpp"
#include "lasym/landau.hpp"

namespace lasym {

/// An exterior steady solution: evaluators valid for |x| > R0 together with
/// the decay constant of |u| <= C_star / (R0 + |x|).
struct ExteriorSolutionSample {
    double R0 = 1.0;
    double C_star = 1.0;
    std::function<Vec3(const Vec3&)> velocity;
    std::function<double(const Vec3&)> pressure;
    std::function<Mat3(const Vec3&)> velocity_gradient;  // optional
};

/// Smooth radial cutoff eta_R0(r) = eta(r / R0) with eta = 0 on [0, 2] and
/// eta = 1 on [5/2, inf); C-infinity smoothstep in between. Derivatives up
/// to third order via jet arithmetic.
class RadialCutoff {
  public:
    explicit RadialCutoff(double R0);
    double R0() const { return R0_; }
    double operator()(double r) const { return jet(r).f0; }
    double d1(double r) const { return jet(r).f1; }
    Jet3 jet(double r) const;

  private:
    double R0_;
};

/// Solution operator for div v = g with v supported in the ball of radius
/// support_radius, realized by mollifier averaging along rays from a small
/// interior ball (the classical star-shaped-domain construction). g must
/// integrate to zero.
class BogovskiiOperator {
  public:
    /// mollifier_radius defaults to support_radius / 4.
    explicit BogovskiiOperator(double support_radius, double mollifier_radius = 0.0,
                               int angular_order = 16, int ray_order = 12);

    double support_radius() const { return R_; }

    /// Apply to a scalar evaluator known to be supported in the ball.
    Vec3 apply(const std::function<double(const Vec3&)>& g, double g_support_radius,
               const Vec3& x) const;

  private:
    double R_;         // support ball radius
    double ball_r_;    // mollifier ball radius
    double omega_c_;   // normalization of the mollifier
    int n_theta_, n_phi_, n_ray_;

    double omega(const Vec3& z) const;
};

/// Spec'd entry point: solve div v = g for a sampled right-hand side with
/// zero mean (|integral g| <= tol * ||g||_L1 enforced), returning v sampled
/// on the same grid. Throws ZeroMeanError / ConfigError on bad data.
SampledVectorField bogovskii_solve(const SampledScalarField& g, double tol = 1e-6);

/// Additive normalization of an exterior pressure: least-squares fit
/// p ~ p_inf + c r^-2 over outer sample shells; returns p_inf.
double estimate_pressure_offset(const std::function<double(const Vec3&)>& pressure,
                                double r_lo, double r_hi, int n_radii = 8,
                                int angular_order = 8);

/// Divergence-free extension of an exterior velocity to all of R^3:
/// u_ext = eta_R0 u + v with div v = -u . grad eta_R0 solved by the
/// Bogovskii operator on the ball of radius 2.5 R0. Pass-through for
/// |x| >= 2.5 R0. The input must carry no outflow (split it off first);
/// otherwise throws ConfigError.
std::function<Vec3(const Vec3&)> extend_velocity(const ExteriorSolutionSample& sol,
                                                 double outflow_tol = 1e-8);

/// Smooth extension of the exterior pressure: blended with a radially
/// reflected fill inside the cutoff region, constant near the origin.
/// Pass-through for |x| >= 2.5 R0.
std::function<double(const Vec3&)> extend_pressure(const ExteriorSolutionSample& sol);

/// The forcing of the extended flow, f = -Lap u + (u.grad) u + grad p,
/// computed by 4th-order central differences and sampled on grid nodes
/// covering the ball of radius 3 R0 (zero outside 2.5 R0 up to the
/// finite-difference floor).
SampledVectorField compute_forcing(const std::function<Vec3(const Vec3&)>& u,
                                   const std::function<double(const Vec3&)>& p,
                                   GridPtr grid, double R0, double fd_step = 0.0);

}  // namespace lasym
