#include "lasym/flux.hpp"

#include <cmath>

#include "lasym/error.hpp"
#include "lasym/fd.hpp"
#include "lasym/quadrature.hpp"

namespace lasym {

Mat3 momentum_flux_tensor(const Vec3& u, const Mat3& grad_u, double p) {
    Mat3 t = Mat3::outer(u, u);
    for (int i = 0; i < 3; ++i) {
        t(i, i) += p;
        for (int j = 0; j < 3; ++j) t(i, j) -= grad_u(i, j) + grad_u(j, i);
    }
    return t;
}

namespace {

// Product rule on the sphere of radius R: Gauss in cos(theta), uniform phi.
template <typename F>
Vec3 sphere_integral(F&& f, double R, int order) {
    const GaussRule& gt = gauss_legendre(order);
    const int n_phi = 2 * order;
    const double wphi = 2.0 * M_PI / n_phi;
    Vec3 acc;
    for (int j = 0; j < order; ++j) {
        const double mu = gt.nodes[j];
        const double s = std::sqrt(1.0 - mu * mu);
        const double w = R * R * gt.weights[j] * wphi;
        for (int k = 0; k < n_phi; ++k) {
            const double phi = (k + 0.5) * wphi;
            const Vec3 n{s * std::cos(phi), s * std::sin(phi), mu};
            acc += w * f(n);
        }
    }
    return acc;
}

Vec3 force_at_order(const FlowEvaluators& flow, double R, int order) {
    const double h = flow.fd_step_scale * R;
    return sphere_integral(
        [&](const Vec3& n) {
            const Vec3 x = R * n;
            const Vec3 u = flow.velocity(x);
            const double p = flow.pressure(x);
            const Mat3 g = flow.velocity_gradient ? flow.velocity_gradient(x)
                                                  : fd_gradient(flow.velocity, x, h);
            return momentum_flux_tensor(u, g, p).apply(n);
        },
        R, order);
}

}  // namespace

SurfaceIntegral net_force_checked(const FlowEvaluators& flow, double R, int angular_order) {
    if (angular_order < 8) throw ConfigError("net_force: angular order must be at least 8");
    if (!flow.velocity || !flow.pressure)
        throw ConfigError("net_force: velocity and pressure evaluators required");
    SurfaceIntegral out;
    out.value = force_at_order(flow, R, angular_order);
    const Vec3 refined = force_at_order(flow, R, 2 * angular_order);
    out.quadrature_error = norm(refined - out.value);
    out.value = refined;
    return out;
}

Vec3 net_force(const FlowEvaluators& flow, double R, int angular_order) {
    return net_force_checked(flow, R, angular_order).value;
}

double outflow(const std::function<Vec3(const Vec3&)>& velocity, double R, int angular_order) {
    if (!velocity) throw ConfigError("outflow: velocity evaluator required");
    const GaussRule& gt = gauss_legendre(angular_order);
    const int n_phi = 2 * angular_order;
    const double wphi = 2.0 * M_PI / n_phi;
    double acc = 0.0;
    for (int j = 0; j < angular_order; ++j) {
        const double mu = gt.nodes[j];
        const double s = std::sqrt(1.0 - mu * mu);
        const double w = R * R * gt.weights[j] * wphi;
        for (int k = 0; k < n_phi; ++k) {
            const double phi = (k + 0.5) * wphi;
            const Vec3 n{s * std::cos(phi), s * std::sin(phi), mu};
            acc += w * dot(velocity(R * n), n);
        }
    }
    return acc;
}

Vec3 OutflowField::velocity(const Vec3& x) const {
    const double r2 = norm2(x);
    if (r2 == 0.0) throw SingularityError("OutflowField: x = 0");
    return flux / (4.0 * M_PI) * x / (r2 * std::sqrt(r2));
}

double OutflowField::pressure(const Vec3& x) const {
    const Vec3 a = velocity(x);
    return -0.5 * dot(a, a);
}

Mat3 OutflowField::velocity_gradient(const Vec3& x) const {
    const double r2 = norm2(x);
    if (r2 == 0.0) throw SingularityError("OutflowField: x = 0");
    const double r = std::sqrt(r2);
    const double c = flux / (4.0 * M_PI);
    Mat3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g(i, j) = c * ((i == j ? 1.0 : 0.0) / (r2 * r) - 3.0 * x[i] * x[j] / (r2 * r2 * r));
    return g;
}

OutflowField canonical_outflow_field(double Phi) { return {Phi}; }

OutflowSplit split_outflow(const std::function<Vec3(const Vec3&)>& velocity, double R,
                           int angular_order) {
    OutflowSplit out;
    out.flux = outflow(velocity, R, angular_order);
    const OutflowField a = canonical_outflow_field(out.flux);
    out.remainder = [velocity, a](const Vec3& x) { return velocity(x) - a.velocity(x); };
    return out;
}

}  // namespace lasym
