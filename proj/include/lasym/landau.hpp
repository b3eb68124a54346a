#pragma once

#include <functional>
#include <memory>

#include "lasym/dual.hpp"
#include "lasym/geometry.hpp"

namespace lasym {

/// Net force magnitude carried by the self-similar jet with shape parameter
/// A > 1:  16 pi (A + A^2/2 log((A-1)/(A+1)) + 4A/(3(A^2-1))).
/// Strictly decreasing from +inf (A -> 1+) to 0 (A -> inf).
double landau_beta(double A);

/// Inverse of landau_beta on (0, inf): bracketed bisection/secant hybrid,
/// relative tolerance 1e-12. Throws ConfigError for beta_val <= 0 and
/// ConvergenceError if bracketing fails.
double landau_gamma(double beta_val);

/// (A, axis, |b|) parametrization of a jet solution. magnitude == 0 encodes
/// the zero field (A is then unused and set to infinity).
struct LandauParams {
    double A = std::numeric_limits<double>::infinity();
    Vec3 axis = kE3;
    double magnitude = 0.0;

    static LandauParams from_force(const Vec3& b);
    static LandauParams from_parameter(double A, const Vec3& axis = kE3);
    Vec3 force() const { return magnitude * axis; }
    bool is_zero() const { return magnitude == 0.0; }
};

struct LandauPolar {
    double u_r = 0.0;
    double u_theta = 0.0;
    double u_phi = 0.0;
    double pressure = 0.0;
};

/// Closed-form jet velocity/pressure in polar components, axis = +z:
///   u_r     = (2/r) [ (A^2-1)/(A-cos t)^2 - 1 ]
///   u_theta = -2 sin t / (r (A - cos t))
///   p       = -4 (A cos t - 1) / (r^2 (A - cos t)^2)
LandauPolar eval_landau_polar(double A, double r, double theta);

struct FlowSample {
    Vec3 velocity;
    double pressure = 0.0;
};

/// Jet solution with prescribed net force b (zero field for b = 0). The
/// shape parameter is recovered as A = gamma(|b|) and the polar form is
/// applied coordinate-free around axis b/|b|. Throws SingularityError at
/// x = 0.
FlowSample eval_landau(const Vec3& b, const Vec3& x);
FlowSample eval_landau(const LandauParams& params, const Vec3& x);
/// Exact velocity gradient of the same field (forward-mode duals).
Mat3 eval_landau_gradient(const Vec3& b, const Vec3& x);
Mat3 eval_landau_gradient(const LandauParams& params, const Vec3& x);

/// Meridian stream function of the jet: psi = 2 r sin^2 t / (A - cos t).
double landau_stream(double A, double r, double theta);

/// Axisymmetric stream function with exact partial derivatives.
class StreamFunction {
  public:
    virtual ~StreamFunction() = default;
    virtual void eval(double r, double theta, double& psi, double& dpsi_dr,
                      double& dpsi_dtheta) const = 0;
    double psi(double r, double theta) const {
        double p, dr, dt;
        eval(r, theta, p, dr, dt);
        return p;
    }
};

class LandauStreamFunction final : public StreamFunction {
  public:
    explicit LandauStreamFunction(double A);
    void eval(double r, double theta, double& psi, double& dpsi_dr,
              double& dpsi_dtheta) const override;

  private:
    double A_;
};

/// psi = r sin^2 t / (8 pi); generates the unit point-force Stokes flow.
class StokesletStreamFunction final : public StreamFunction {
  public:
    void eval(double r, double theta, double& psi, double& dpsi_dr,
              double& dpsi_dtheta) const override;
};

/// psi = r sin^2 t / (eps gamma(eps) - eps cos t); the Reynolds-scaled family.
class ReynoldsStreamFunction final : public StreamFunction {
  public:
    explicit ReynoldsStreamFunction(double eps);
    void eval(double r, double theta, double& psi, double& dpsi_dr,
              double& dpsi_dtheta) const override;

  private:
    double eps_;
    double A_;  // gamma(eps)
};

/// Stream function supplied as a callable (tests, ad-hoc fields). Throws
/// ConfigError when constructed without an evaluator.
class FunctionalStreamFunction final : public StreamFunction {
  public:
    using Eval = std::function<void(double, double, double&, double&, double&)>;
    explicit FunctionalStreamFunction(Eval eval);
    void eval(double r, double theta, double& psi, double& dpsi_dr,
              double& dpsi_dtheta) const override;

  private:
    Eval eval_;
};

struct PolarVelocity {
    double u_r = 0.0;
    double u_theta = 0.0;
};

/// Velocity of the axisymmetric field generated by psi:
///   u_r = psi_theta / (r^2 sin t),  u_theta = -psi_r / (r sin t).
/// On the axis u_theta = 0 and u_r is taken as a one-sided limit.
PolarVelocity velocity_from_stream(const StreamFunction& psi, double r, double theta);

/// (1/eps) times the jet with A = gamma(eps); tends to the unit Stokeslet
/// as eps -> 0. Throws ConfigError for eps <= 0.
Vec3 reynolds_solution(double eps, const Vec3& x);

/// Smooth radial profile rho with rho = 0 on [0, r0], rho(r) = r on
/// [2 r0, inf), built from the C-infinity smoothstep
/// s(t) = 1 / (1 + exp(1/t - 1/(1-t))). Derivatives up to third order come
/// from jet arithmetic through the same expression.
class RegularizationProfile {
  public:
    explicit RegularizationProfile(double r0);

    double r0() const { return r0_; }
    double rho(double r) const { return jet(r).f0; }
    double rho_d1(double r) const { return jet(r).f1; }
    double rho_d2(double r) const { return jet(r).f2; }
    double rho_d3(double r) const { return jet(r).f3; }
    /// rho and its first three derivatives at r.
    Jet3 jet(double r) const;

  private:
    double r0_;
};

/// Regularized jet (velocity, pressure): the stream function is scaled by
/// rho(r)/r so the field vanishes identically inside r0 and matches the
/// exact jet outside 2 r0. Divergence-free by construction. x = 0 allowed.
FlowSample regularized_landau(const Vec3& b, const RegularizationProfile& profile,
                              const Vec3& x);
FlowSample regularized_landau(const LandauParams& params, const RegularizationProfile& profile,
                              const Vec3& x);
Mat3 regularized_landau_gradient(const Vec3& b, const RegularizationProfile& profile,
                                 const Vec3& x);
Mat3 regularized_landau_gradient(const LandauParams& params,
                                 const RegularizationProfile& profile, const Vec3& x);

/// Forcing of the regularized jet, -Lap u + (u.grad) u + grad p, evaluated
/// with exact first/second derivatives (forward-mode duals). Supported in
/// the annulus r0 <= |x| <= 2 r0.
Vec3 regularized_forcing(const Vec3& b, const RegularizationProfile& profile, const Vec3& x);
Vec3 regularized_forcing(const LandauParams& params, const RegularizationProfile& profile,
                         const Vec3& x);

/// Quadrature of the regularized forcing over its annulus; equals b up to
/// the rule's accuracy.
Vec3 forcing_integral(const Vec3& b, const RegularizationProfile& profile,
                      int radial_order = 24, int angular_order = 24);

}  // namespace lasym
