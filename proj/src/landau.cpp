#include "lasym/landau.hpp"

#include <cmath>

#include "lasym/error.hpp"
#include "lasym/quadrature.hpp"

namespace lasym {

double landau_beta(double A) {
    if (!(A > 1.0)) throw ConfigError("landau_beta: A must exceed 1");
    if (A > 50.0) {
        // Large-A series: the closed form cancels catastrophically there.
        // beta/(16 pi) = x + sum_k (4/3 - 1/(2k+3)) x^(2k+1), x = 1/A.
        const double x = 1.0 / A, x2 = x * x;
        double sum = x, pw = x;
        for (int k = 1; k <= 5; ++k) {
            pw *= x2;
            sum += (4.0 / 3.0 - 1.0 / (2.0 * k + 3.0)) * pw;
        }
        return 16.0 * M_PI * sum;
    }
    const double log_ratio = std::log1p(-2.0 / (A + 1.0));  // log((A-1)/(A+1))
    return 16.0 * M_PI * (A + 0.5 * A * A * log_ratio + 4.0 * A / (3.0 * (A * A - 1.0)));
}

double landau_gamma(double beta_val) {
    if (!(beta_val > 0.0)) throw ConfigError("landau_gamma: argument must be positive");

    // beta decreases from +inf at A -> 1+ to 0 at infinity: bracket, then
    // bisection with secant acceleration.
    double lo = 1.0 + 1e-8;
    for (int i = 0; landau_beta(lo) < beta_val; ++i) {
        if (i > 200) throw ConvergenceError("landau_gamma: lower bracket failed");
        lo = 1.0 + (lo - 1.0) / 16.0;
    }
    double hi = 4.0;
    for (int i = 0; landau_beta(hi) > beta_val; ++i) {
        if (hi > 1e18)
            throw ConvergenceError("landau_gamma: upper bracket failed (argument too small)");
        hi *= 4.0;
        (void)i;
    }

    double flo = landau_beta(lo) - beta_val;
    double fhi = landau_beta(hi) - beta_val;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * lo; ++it) {
        double mid = 0.5 * (lo + hi);
        if (flo != fhi) {
            const double sec = lo - flo * (hi - lo) / (fhi - flo);
            if (sec > lo + 0.01 * (hi - lo) && sec < hi - 0.01 * (hi - lo)) mid = sec;
        }
        const double fm = landau_beta(mid) - beta_val;
        if (fm > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

LandauParams LandauParams::from_force(const Vec3& b) {
    LandauParams p;
    p.magnitude = norm(b);
    if (p.magnitude == 0.0) return p;
    p.axis = b / p.magnitude;
    p.A = landau_gamma(p.magnitude);
    return p;
}

LandauParams LandauParams::from_parameter(double A, const Vec3& axis) {
    if (!(A > 1.0)) throw ConfigError("LandauParams: A must exceed 1");
    LandauParams p;
    p.A = A;
    p.axis = normalized(axis);
    p.magnitude = landau_beta(A);
    return p;
}

LandauPolar eval_landau_polar(double A, double r, double theta) {
    if (!(A > 1.0)) throw ConfigError("eval_landau_polar: A must exceed 1");
    if (!(r > 0.0)) throw ConfigError("eval_landau_polar: r must be positive");
    const double c = std::cos(theta), s = std::sin(theta);
    const double d = A - c;
    LandauPolar out;
    out.u_r = 2.0 / r * ((A * A - 1.0) / (d * d) - 1.0);
    out.u_theta = -2.0 * s / (r * d);
    out.u_phi = 0.0;
    out.pressure = -4.0 * (A * c - 1.0) / (r * r * d * d);
    return out;
}

namespace {

inline double value_of(double v) { return v; }
inline double value_of(const Dual<3>& v) { return v.v; }
inline double value_of(const Dual2& v) { return v.v; }

inline double apply_jet(double /*r*/, double f, double /*fp*/, double /*fpp*/) { return f; }
inline Dual<3> apply_jet(const Dual<3>& r, double f, double fp, double /*fpp*/) {
    return compose(r, f, fp);
}
inline Dual2 apply_jet(const Dual2& r, double f, double fp, double fpp) {
    return compose(r, f, fp, fpp);
}

template <typename T>
struct FlowT {
    T u[3];
    T p;
};

// Velocity and pressure of the (optionally regularized) jet in a
// coordinate-free form around the unit axis a, with c = (x.a)/r:
//   u = f_r x/r + f_a (a - c x/r),  f_r = 2 rho (2c(A-c) - (1-c^2)) / (r (A-c))^2,
//                                   f_a = 2 rho' / (r (A-c))
//   p = -4 rho (A c - 1) / (r^3 (A-c)^2)
// The exact jet is rho(r) = r; the axis direction enters only through c, so
// the expression is smooth across the axis and exactly rotation-equivariant.
template <typename T>
FlowT<T> jet_flow(double A, const RegularizationProfile* profile, const Vec3& axis, const T& x,
                  const T& y, const T& z) {
    const T r2 = x * x + y * y + z * z;
    const T r = sqrt(r2);
    const Jet3 rj = profile ? profile->jet(value_of(r))
                            : Jet3{value_of(r), 1.0, 0.0, 0.0};
    const T rho = apply_jet(r, rj.f0, rj.f1, rj.f2);
    const T rho_p = apply_jet(r, rj.f1, rj.f2, rj.f3);

    const T c = (x * axis.x + y * axis.y + z * axis.z) / r;
    const T d = T(A) - c;
    const T s2 = T(1.0) - c * c;

    const T f_r = (T(2.0) * rho) * (T(2.0) * c * d - s2) / (r2 * d * d);
    const T f_a = (T(2.0) * rho_p) / (r * d);
    const T g = (f_r - f_a * c) / r;

    FlowT<T> out;
    out.u[0] = g * x + f_a * T(axis.x);
    out.u[1] = g * y + f_a * T(axis.y);
    out.u[2] = g * z + f_a * T(axis.z);
    out.p = T(-4.0) * rho * (T(A) * c - T(1.0)) / (r2 * r * d * d);
    return out;
}

}  // namespace

FlowSample eval_landau(const LandauParams& params, const Vec3& x) {
    if (params.is_zero()) return {};
    if (norm2(x) == 0.0) throw SingularityError("eval_landau: x = 0");
    const auto f = jet_flow<double>(params.A, nullptr, params.axis, x.x, x.y, x.z);
    return {{f.u[0], f.u[1], f.u[2]}, f.p};
}

FlowSample eval_landau(const Vec3& b, const Vec3& x) {
    return eval_landau(LandauParams::from_force(b), x);
}

Mat3 eval_landau_gradient(const LandauParams& params, const Vec3& x) {
    if (params.is_zero()) return {};
    if (norm2(x) == 0.0) throw SingularityError("eval_landau_gradient: x = 0");
    const auto f = jet_flow<Dual<3>>(params.A, nullptr, params.axis,
                                     Dual<3>::variable(x.x, 0), Dual<3>::variable(x.y, 1),
                                     Dual<3>::variable(x.z, 2));
    Mat3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = f.u[i].d[j];
    return g;
}

Mat3 eval_landau_gradient(const Vec3& b, const Vec3& x) {
    return eval_landau_gradient(LandauParams::from_force(b), x);
}

double landau_stream(double A, double r, double theta) {
    if (!(A > 1.0)) throw ConfigError("landau_stream: A must exceed 1");
    if (!(r > 0.0)) throw ConfigError("landau_stream: r must be positive");
    const double s = std::sin(theta);
    return 2.0 * r * s * s / (A - std::cos(theta));
}

LandauStreamFunction::LandauStreamFunction(double A) : A_(A) {
    if (!(A > 1.0)) throw ConfigError("LandauStreamFunction: A must exceed 1");
}

void LandauStreamFunction::eval(double r, double theta, double& psi, double& dpsi_dr,
                                double& dpsi_dtheta) const {
    using D = Dual<2>;
    const D rd = D::variable(r, 0), td = D::variable(theta, 1);
    const D s = sin(td);
    const D val = D(2.0) * rd * s * s / (D(A_) - cos(td));
    psi = val.v;
    dpsi_dr = val.d[0];
    dpsi_dtheta = val.d[1];
}

void StokesletStreamFunction::eval(double r, double theta, double& psi, double& dpsi_dr,
                                   double& dpsi_dtheta) const {
    const double s = std::sin(theta);
    psi = r * s * s / (8.0 * M_PI);
    dpsi_dr = s * s / (8.0 * M_PI);
    dpsi_dtheta = 2.0 * r * s * std::cos(theta) / (8.0 * M_PI);
}

ReynoldsStreamFunction::ReynoldsStreamFunction(double eps) : eps_(eps) {
    if (!(eps > 0.0)) throw ConfigError("ReynoldsStreamFunction: eps must be positive");
    A_ = landau_gamma(eps);
}

void ReynoldsStreamFunction::eval(double r, double theta, double& psi, double& dpsi_dr,
                                  double& dpsi_dtheta) const {
    using D = Dual<2>;
    const D rd = D::variable(r, 0), td = D::variable(theta, 1);
    const D s = sin(td);
    const D val = rd * s * s / (D(eps_ * A_) - D(eps_) * cos(td));
    psi = val.v;
    dpsi_dr = val.d[0];
    dpsi_dtheta = val.d[1];
}

FunctionalStreamFunction::FunctionalStreamFunction(Eval eval) : eval_(std::move(eval)) {
    if (!eval_)
        throw ConfigError("FunctionalStreamFunction: missing derivative evaluator");
}

void FunctionalStreamFunction::eval(double r, double theta, double& psi, double& dpsi_dr,
                                    double& dpsi_dtheta) const {
    eval_(r, theta, psi, dpsi_dr, dpsi_dtheta);
}

PolarVelocity velocity_from_stream(const StreamFunction& psi, double r, double theta) {
    if (!(r > 0.0)) throw ConfigError("velocity_from_stream: r must be positive");
    constexpr double axis_eps = 1e-6;
    PolarVelocity out;
    if (theta < axis_eps || theta > M_PI - axis_eps) {
        // On the axis u_theta vanishes; u_r by a one-sided limit.
        const double t = theta < M_PI_2 ? axis_eps : M_PI - axis_eps;
        double p, dr, dt;
        psi.eval(r, t, p, dr, dt);
        out.u_r = dt / (r * r * std::sin(t));
        out.u_theta = 0.0;
        return out;
    }
    double p, dr, dt;
    psi.eval(r, theta, p, dr, dt);
    const double s = std::sin(theta);
    out.u_r = dt / (r * r * s);
    out.u_theta = -dr / (r * s);
    return out;
}

Vec3 reynolds_solution(double eps, const Vec3& x) {
    if (!(eps > 0.0)) throw ConfigError("reynolds_solution: eps must be positive");
    if (norm2(x) == 0.0) throw SingularityError("reynolds_solution: x = 0");
    const double A = landau_gamma(eps);
    const auto f = jet_flow<double>(A, nullptr, kE3, x.x, x.y, x.z);
    return Vec3{f.u[0], f.u[1], f.u[2]} / eps;
}

RegularizationProfile::RegularizationProfile(double r0) : r0_(r0) {
    if (!(r0 > 0.0)) throw ConfigError("RegularizationProfile: r0 must be positive");
}

Jet3 RegularizationProfile::jet(double r) const {
    if (r <= r0_) return Jet3(0.0);
    if (r >= 2.0 * r0_) return Jet3{r, 1.0, 0.0, 0.0};
    const Jet3 t{(r - r0_) / r0_, 1.0 / r0_, 0.0, 0.0};
    const Jet3 rj{r, 1.0, 0.0, 0.0};
    return rj * smoothstep_jet(t);
}

FlowSample regularized_landau(const LandauParams& params, const RegularizationProfile& profile,
                              const Vec3& x) {
    if (params.is_zero()) return {};
    if (norm(x) <= profile.r0()) return {};  // rho and rho' vanish there
    const auto f = jet_flow<double>(params.A, &profile, params.axis, x.x, x.y, x.z);
    return {{f.u[0], f.u[1], f.u[2]}, f.p};
}

FlowSample regularized_landau(const Vec3& b, const RegularizationProfile& profile,
                              const Vec3& x) {
    return regularized_landau(LandauParams::from_force(b), profile, x);
}

Mat3 regularized_landau_gradient(const LandauParams& params,
                                 const RegularizationProfile& profile, const Vec3& x) {
    if (params.is_zero() || norm(x) <= profile.r0()) return {};
    const auto f = jet_flow<Dual<3>>(params.A, &profile, params.axis,
                                     Dual<3>::variable(x.x, 0), Dual<3>::variable(x.y, 1),
                                     Dual<3>::variable(x.z, 2));
    Mat3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = f.u[i].d[j];
    return g;
}

Mat3 regularized_landau_gradient(const Vec3& b, const RegularizationProfile& profile,
                                 const Vec3& x) {
    return regularized_landau_gradient(LandauParams::from_force(b), profile, x);
}

Vec3 regularized_forcing(const LandauParams& params, const RegularizationProfile& profile,
                         const Vec3& x) {
    if (params.is_zero()) return {};
    if (norm(x) <= profile.r0()) return {};
    const auto f = jet_flow<Dual2>(params.A, &profile, params.axis, Dual2::variable(x.x, 0),
                                   Dual2::variable(x.y, 1), Dual2::variable(x.z, 2));
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        double lap = 0.0, adv = 0.0;
        for (int j = 0; j < 3; ++j) {
            lap += f.u[i].hess(j, j);
            adv += f.u[j].v * f.u[i].grad(j);
        }
        out[i] = -lap + adv + f.p.grad(i);
    }
    return out;
}

Vec3 regularized_forcing(const Vec3& b, const RegularizationProfile& profile, const Vec3& x) {
    return regularized_forcing(LandauParams::from_force(b), profile, x);
}

Vec3 forcing_integral(const Vec3& b, const RegularizationProfile& profile, int radial_order,
                      int angular_order) {
    if (norm2(b) == 0.0) return {};
    const LandauParams params = LandauParams::from_force(b);
    const double r0 = profile.r0();
    const GaussRule& gr = gauss_legendre(radial_order);
    const GaussRule& gt = gauss_legendre(angular_order);
    const int n_phi = 2 * angular_order;
    const double wphi = 2.0 * M_PI / n_phi;

    Vec3 acc;
    for (int i = 0; i < radial_order; ++i) {
        const double r = 1.5 * r0 + 0.5 * r0 * gr.nodes[i];
        const double wr = 0.5 * r0 * gr.weights[i] * r * r;
        for (int j = 0; j < angular_order; ++j) {
            const double mu = gt.nodes[j];
            const double s = std::sqrt(1.0 - mu * mu);
            const double w = wr * gt.weights[j] * wphi;
            for (int k = 0; k < n_phi; ++k) {
                const double phi = (k + 0.5) * wphi;
                const Vec3 x{r * s * std::cos(phi), r * s * std::sin(phi), r * mu};
                acc += w * regularized_forcing(params, profile, x);
            }
        }
    }
    return acc;
}

}  // namespace lasym
