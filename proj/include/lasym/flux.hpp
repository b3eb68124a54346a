#pragma once

#include <functional>

#include "lasym/geometry.hpp"

namespace lasym {

/// A steady flow presented as point evaluators. The gradient evaluator is
/// optional; operations that need gradients fall back to 4th-order central
/// differences with step h = fd_step_scale * R when it is absent.
struct FlowEvaluators {
    std::function<Vec3(const Vec3&)> velocity;
    std::function<double(const Vec3&)> pressure;
    std::function<Mat3(const Vec3&)> velocity_gradient;  // may be empty
    double fd_step_scale = 1e-4;
};

/// Momentum flux density:  T_ij = p d_ij + u_i u_j - (du_i/dx_j + du_j/dx_i).
Mat3 momentum_flux_tensor(const Vec3& u, const Mat3& grad_u, double p);

struct SurfaceIntegral {
    Vec3 value;
    /// |order n - order 2n| disagreement of the doubled angular rule.
    double quadrature_error = 0.0;
};

/// Net force through the sphere of radius R: the flux of T. Product rule of
/// angular_order Gauss points in cos(theta) by 2*angular_order uniform phi
/// points; the order-doubled difference is reported as quadrature_error.
/// R-independent for exact solutions of the momentum balance.
SurfaceIntegral net_force_checked(const FlowEvaluators& flow, double R, int angular_order = 16);
Vec3 net_force(const FlowEvaluators& flow, double R, int angular_order = 16);

/// Flux of u through the sphere of radius R.
double outflow(const std::function<Vec3(const Vec3&)>& velocity, double R,
               int angular_order = 16);

/// The flux-carrying potential flow a(x) = (Phi / 4 pi) x/|x|^3 with its
/// pressure pi_a = -|a|^2 / 2; an exact steady solution away from 0 whose
/// flux through every sphere is Phi.
struct OutflowField {
    double flux = 0.0;
    Vec3 velocity(const Vec3& x) const;
    double pressure(const Vec3& x) const;
    Mat3 velocity_gradient(const Vec3& x) const;
};

OutflowField canonical_outflow_field(double Phi);

/// Measure the flux of u at radius R and peel off the canonical carrier:
/// returns Phi and the flux-free remainder w = u - a.
struct OutflowSplit {
    double flux = 0.0;
    std::function<Vec3(const Vec3&)> remainder;
};
OutflowSplit split_outflow(const std::function<Vec3(const Vec3&)>& velocity, double R,
                           int angular_order = 16);

}  // namespace lasym
