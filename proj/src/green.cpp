#include "lasym/green.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>

#include "lasym/dual.hpp"
#include "lasym/error.hpp"
#include "lasym/parallel.hpp"
#include "lasym/quadrature.hpp"

namespace lasym {

namespace {
constexpr double kInv8Pi = 1.0 / (8.0 * M_PI);
constexpr double kInv4Pi = 1.0 / (4.0 * M_PI);
}  // namespace

Mat3 oseen_tensor(const Vec3& x) {
    const double r2 = norm2(x);
    if (r2 == 0.0) throw SingularityError("oseen_tensor: x = 0");
    const double r = std::sqrt(r2);
    const double inv_r = 1.0 / r, inv_r3 = inv_r / r2;
    Mat3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g(i, j) = kInv8Pi * ((i == j ? inv_r : 0.0) + x[i] * x[j] * inv_r3);
    return g;
}

Vec3 pressure_kernel(const Vec3& x) {
    const double r2 = norm2(x);
    if (r2 == 0.0) throw SingularityError("pressure_kernel: x = 0");
    return kInv4Pi / (r2 * std::sqrt(r2)) * x;
}

Mat3 pressure_kernel_gradient(const Vec3& x) {
    const double r2 = norm2(x);
    if (r2 == 0.0) throw SingularityError("pressure_kernel_gradient: x = 0");
    const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
    Mat3 g;
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
            g(k, j) = kInv4Pi * inv_r3 * ((k == j ? 1.0 : 0.0) - 3.0 * x[k] * x[j] / r2);
    return g;
}

KernelValue stokes_kernel(const Vec3& x) {
    KernelValue kv;
    kv.G = oseen_tensor(x);
    kv.Q = pressure_kernel(x);
    const double r2 = norm2(x);
    const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double v = -(i == j ? x[k] : 0.0) + (i == k ? x[j] : 0.0) +
                           (j == k ? x[i] : 0.0) - 3.0 * x[i] * x[j] * x[k] / r2;
                kv.gradG[k](i, j) = kInv8Pi * inv_r3 * v;
            }
    return kv;
}

Vec3 stokeslet_velocity(const Vec3& x) {
    const double r2 = norm2(x);
    if (r2 == 0.0) throw SingularityError("stokeslet_velocity: x = 0");
    const double r = std::sqrt(r2);
    return kInv8Pi * Vec3{x.x * x.z / (r2 * r), x.y * x.z / (r2 * r), 1.0 / r + x.z * x.z / (r2 * r)};
}

double stokeslet_pressure(const Vec3& x) {
    const double r2 = norm2(x);
    if (r2 == 0.0) throw SingularityError("stokeslet_pressure: x = 0");
    return kInv4Pi * x.z / (r2 * std::sqrt(r2));
}

Vec3 green_apply(const Vec3& d, const Vec3& g) {
    const double r2 = norm2(d);
    const double r = std::sqrt(r2);
    return kInv8Pi * (g / r + dot(d, g) / (r2 * r) * d);
}

Vec3 grad_green_contract(const Vec3& d, const Mat3& M) {
    const double r2 = norm2(d);
    const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
    const Vec3 Md = M.apply(d);
    const Vec3 Mtd = M.transpose().apply(d);
    const double quad = dot(d, Md);
    return kInv8Pi * inv_r3 * (Mtd - Md + (M.trace() - 3.0 * quad / r2) * d);
}

double pressure_apply(const Vec3& d, const Vec3& g) {
    const double r2 = norm2(d);
    return kInv4Pi * dot(d, g) / (r2 * std::sqrt(r2));
}

double grad_pressure_contract(const Vec3& d, const Mat3& N) {
    const double r2 = norm2(d);
    const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
    const Vec3 Nd = N.apply(d);
    return kInv4Pi * inv_r3 * (N.trace() - 3.0 * dot(d, Nd) / r2);
}

// --- convolution engine -----------------------------------------------------

namespace {

struct GradGreenPolicy {
    using Source = Mat3;
    using Result = Vec3;
    static constexpr int order = 2;          // |K| <= bound_const / r^order
    static constexpr double bound_const = 0.3;
    static Result apply(const Vec3& d, double r2, const Source& m) {
        const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
        const Vec3 md{m.a[0] * d.x + m.a[1] * d.y + m.a[2] * d.z,
                      m.a[3] * d.x + m.a[4] * d.y + m.a[5] * d.z,
                      m.a[6] * d.x + m.a[7] * d.y + m.a[8] * d.z};
        const Vec3 mtd{m.a[0] * d.x + m.a[3] * d.y + m.a[6] * d.z,
                       m.a[1] * d.x + m.a[4] * d.y + m.a[7] * d.z,
                       m.a[2] * d.x + m.a[5] * d.y + m.a[8] * d.z};
        const double tr = m.a[0] + m.a[4] + m.a[8];
        const double coef = tr - 3.0 * dot(d, md) / r2;
        return (kInv8Pi * inv_r3) * (mtd - md + coef * d);
    }
};

struct GreenPolicy {
    using Source = Vec3;
    using Result = Vec3;
    static constexpr int order = 1;
    static constexpr double bound_const = 0.08;
    static Result apply(const Vec3& d, double r2, const Source& g) {
        const double inv_r = 1.0 / std::sqrt(r2);
        return kInv8Pi * (inv_r * g + dot(d, g) * inv_r / r2 * d);
    }
};

struct PressurePolicy {
    using Source = Vec3;
    using Result = double;
    static constexpr int order = 2;
    static constexpr double bound_const = 0.08;
    static Result apply(const Vec3& d, double r2, const Source& g) {
        return kInv4Pi * dot(d, g) / (r2 * std::sqrt(r2));
    }
};

inline double res_magnitude(double v) { return std::abs(v); }
inline double res_magnitude(const Vec3& v) { return norm(v); }

struct Box {
    double r0, r1, mu0, mu1, p0, p1;
};

double box_volume(const Box& b) {
    return (b.r1 * b.r1 * b.r1 - b.r0 * b.r0 * b.r0) / 3.0 * (b.mu1 - b.mu0) * (b.p1 - b.p0);
}

Vec3 box_center(const Box& b, const Vec3& grid_center) {
    const double r = 0.5 * (b.r0 + b.r1);
    const double mu = 0.5 * (b.mu0 + b.mu1);
    const double phi = 0.5 * (b.p0 + b.p1);
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    return grid_center + Vec3{r * s * std::cos(phi), r * s * std::sin(phi), r * mu};
}

double box_diameter(const Box& b) {
    const double dr = b.r1 - b.r0;
    const double dth = std::acos(std::clamp(b.mu0, -1.0, 1.0)) -
                       std::acos(std::clamp(b.mu1, -1.0, 1.0));
    double smax;
    if (b.mu0 < 0.0 && b.mu1 > 0.0)
        smax = 1.0;
    else
        smax = std::sqrt(1.0 - std::min(b.mu0 * b.mu0, b.mu1 * b.mu1));
    const double a1 = b.r1 * dth, a2 = b.r1 * smax * (b.p1 - b.p0);
    return std::sqrt(dr * dr + a1 * a1 + a2 * a2);
}

/// Recursive midpoint refinement of one near cell. Children are refined
/// while they stay within near_factor of the target and the refined sum
/// still moves; depth-capped with the unresolved remainder reported.
template <typename P>
typename P::Result box_contribution(const SampledField<typename P::Source>& src, const Vec3& t,
                                    const Box& box, int depth, const ConvolutionOptions& opts,
                                    double& residual) {
    const Vec3 c = box_center(box, src.grid->center);
    const Vec3 d = t - c;
    const double r2 = norm2(d);
    const double diam = box_diameter(box);

    auto midpoint = [&](const Box& bb, const Vec3& dd, double rr2) -> typename P::Result {
        return P::apply(dd, rr2, src.value_linear(box_center(bb, src.grid->center))) *
               box_volume(bb);
    };

    const bool singular = r2 < 0.25 * diam * diam;
    if (depth >= opts.max_depth || !(r2 < opts.near_factor * opts.near_factor * diam * diam)) {
        if (singular) {
            const double mag = detail::magnitude(src.value_linear(c));
            residual += P::bound_const * mag * 4.0 * M_PI * std::pow(diam, 3 - P::order) /
                        (3.0 - P::order);
            if (r2 < 1e-18 * diam * diam) return {};
        }
        return midpoint(box, d, r2);
    }

    Box kids[8];
    const double rm = 0.5 * (box.r0 + box.r1);
    const double mm = 0.5 * (box.mu0 + box.mu1);
    const double pm = 0.5 * (box.p0 + box.p1);
    int n = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int cdx = 0; cdx < 2; ++cdx) {
                kids[n++] = Box{a == 0 ? box.r0 : rm,   a == 0 ? rm : box.r1,
                                b == 0 ? box.mu0 : mm,  b == 0 ? mm : box.mu1,
                                cdx == 0 ? box.p0 : pm, cdx == 0 ? pm : box.p1};
            }

    typename P::Result sum{};
    double kid_mag = 0.0;
    for (const Box& k : kids) {
        const Vec3 kc = box_center(k, src.grid->center);
        const Vec3 kd = t - kc;
        const double kr2 = norm2(kd);
        if (kr2 < 1e-18 * diam * diam) continue;  // handled at deeper levels
        const auto est = midpoint(k, kd, kr2);
        sum += est;
        kid_mag += res_magnitude(est);
    }
    const auto parent_est = singular ? sum : midpoint(box, d, r2);
    if (res_magnitude(sum - parent_est) <=
        opts.refine_rel_tol * (res_magnitude(parent_est) + kid_mag)) {
        return sum;
    }
    typename P::Result refined{};
    for (const Box& k : kids) refined += box_contribution<P>(src, t, k, depth + 1, opts, residual);
    return refined;
}

// Angular mean of the kernel magnitude over the sphere |y| = s as seen from
// radius t: int dOmega / |x-y|^order (used for truncation bounds only).
double angular_kernel_mean(double t, double s, int order) {
    const double sum = t + s;
    double dif = std::abs(t - s);
    dif = std::max(dif, 1e-12 * sum);
    switch (order) {
        case 1:
            return 4.0 * M_PI / std::max(t, s);
        case 2:
            return 2.0 * M_PI / (t * s) * std::log(sum / dif);
        default:  // 3
            return 2.0 * M_PI / (t * s) * (1.0 / dif - 1.0 / sum);
    }
}

/// Bound on the part of the convolution carried by the field's power-law
/// tail beyond r_max.
double tail_truncation_bound(double t, double r_max, const TailModel& tail, int order,
                             double bound_const) {
    if (tail.constant <= 0.0) return 0.0;
    const double s_max = std::max(8.0 * r_max, 4.0 * t);
    auto f = [&](double s) {
        return s * s * tail.constant * std::pow(s, -tail.exponent) *
               angular_kernel_mean(t, s, order);
    };
    double val = adaptive_integrate(f, r_max, s_max, 1e-5, 16);
    // remainder with |x-y| ~ s
    const double p = tail.exponent + order - 3.0;
    if (p > 0.0) val += tail.constant * 4.0 * M_PI * std::pow(s_max, -p) / p;
    return bound_const * val;
}

/// Bound on the gap inside r_min (field extended by its innermost values).
double inner_truncation_bound(double t, double r_min, double inner_mag, int order,
                              double bound_const) {
    if (inner_mag <= 0.0 || r_min <= 0.0) return 0.0;
    auto f = [&](double s) { return s * s * inner_mag * angular_kernel_mean(t, s, order); };
    return bound_const * adaptive_integrate(f, 0.0, r_min, 1e-5, 16);
}

template <typename P>
std::vector<typename P::Result> convolve_engine(const SampledField<typename P::Source>& src,
                                                std::span<const Vec3> targets,
                                                const ConvolutionOptions& opts,
                                                ConvolutionDiagnostics* diag) {
    const GradedGrid& g = *src.grid;
    const int nr = g.n_r(), nt = g.n_theta, np = g.n_phi, ns = g.n_shells;

    // Sources outside the declared support contribute nothing.
    int ir_limit = nr;
    if (std::isfinite(src.support_radius)) {
        while (ir_limit > 0 && g.r_nodes[ir_limit - 1] > src.support_radius * (1.0 + 1e-12))
            --ir_limit;
    }
    const int is_limit = (ir_limit + 1) / 2;

    std::vector<typename P::Result> out(targets.size());
    std::vector<double> residuals(targets.size(), 0.0);

    constexpr int W = 4;  // index half-width of the near-cell candidate window

    parallel_for(targets.size(), [&](std::size_t ti) {
        const Vec3 t = targets[ti];
        const Vec3 rel = t - g.center;
        const double tr = norm(rel);

        // Containing cell indices (clamped).
        int is0 = static_cast<int>(std::lower_bound(g.shell_edges.begin(), g.shell_edges.end(),
                                                    tr) -
                                   g.shell_edges.begin()) -
                  1;
        is0 = std::clamp(is0, 0, ns - 1);
        const double mu = tr > 0.0 ? std::clamp(rel.z / tr, -1.0, 1.0) : 1.0;
        int it0 = static_cast<int>(std::lower_bound(g.mu_edges_.begin(), g.mu_edges_.end(), mu) -
                                   g.mu_edges_.begin()) -
                  1;
        it0 = std::clamp(it0, 0, nt - 1);
        double phi = std::atan2(rel.y, rel.x);
        if (phi < 0.0) phi += 2.0 * M_PI;
        int ip0 = std::clamp(static_cast<int>(phi / g.phi_weight), 0, np - 1);

        // Flag near cells inside the candidate window. The phi range is
        // trimmed so a wrapped window never visits a cell twice.
        const int dip_lo = -std::min(W, (np - 1) / 2);
        const int dip_hi = std::min(W, np / 2);
        bool near_flag[2 * W + 1][2 * W + 1][2 * W + 1] = {};
        bool any_near = false;
        for (int dis = -W; dis <= W; ++dis) {
            const int is = is0 + dis;
            if (is < 0 || is >= is_limit) continue;
            for (int dit = -W; dit <= W; ++dit) {
                const int it = it0 + dit;
                if (it < 0 || it >= nt) continue;
                for (int dip = dip_lo; dip <= dip_hi; ++dip) {
                    const int ip = ((ip0 + dip) % np + np) % np;
                    const auto cb = g.cell_bounds(is, it, ip);
                    const Vec3 cc = g.cell_center(cb);
                    const double diam = g.cell_diameter(cb);
                    const double lim = (opts.near_factor + 0.5) * diam;
                    if (norm2(t - cc) < lim * lim) {
                        near_flag[dis + W][dit + W][dip + W] = true;
                        any_near = true;
                    }
                }
            }
        }

        typename P::Result acc{};
        for (int ir = 0; ir < ir_limit; ++ir) {
            const int is = ir / 2;
            const int dis = is - is0;
            const bool row_windowed = any_near && dis >= -W && dis <= W;
            const std::size_t base = static_cast<std::size_t>(ir) * nt * np;
            for (int it = 0; it < nt; ++it) {
                const int dit = it - it0;
                const bool col_windowed = row_windowed && dit >= -W && dit <= W;
                const std::size_t rowbase = base + static_cast<std::size_t>(it) * np;
                for (int ip = 0; ip < np; ++ip) {
                    if (col_windowed) {
                        int dip = ip - ip0;
                        if (dip > np / 2) dip -= np;
                        if (dip < -(np - 1) / 2) dip += np;
                        if (dip >= dip_lo && dip <= dip_hi &&
                            near_flag[dis + W][dit + W][dip + W])
                            continue;
                    }
                    const std::size_t i = rowbase + ip;
                    const Vec3 d{t.x - g.px[i], t.y - g.py[i], t.z - g.pz[i]};
                    const double r2 = norm2(d);
                    acc += P::apply(d, r2, src.values[i]) * g.weight[i];
                }
            }
        }

        // Near cells by adaptive subdivision over their exact extent.
        if (any_near) {
            for (int dis = -W; dis <= W; ++dis)
                for (int dit = -W; dit <= W; ++dit)
                    for (int dip = -W; dip <= W; ++dip) {
                        if (!near_flag[dis + W][dit + W][dip + W]) continue;
                        const int is = is0 + dis, it = it0 + dit;
                        const int ip = ((ip0 + dip) % np + np) % np;
                        const auto cb = g.cell_bounds(is, it, ip);
                        Box box{cb.r0, cb.r1, cb.mu0, cb.mu1, cb.phi0, cb.phi1};
                        acc += box_contribution<P>(src, t, box, 0, opts, residuals[ti]);
                    }
        }
        out[ti] = acc;
    });

    if (diag) {
        double inner_mag = 0.0;
        for (int it = 0; it < nt; ++it)
            for (int ip = 0; ip < np; ++ip)
                inner_mag = std::max(
                    inner_mag, detail::magnitude(src.values[g.node_index(0, it, ip)]));
        const bool has_tail = !std::isfinite(src.support_radius) ||
                              src.support_radius > g.r_max;
        std::unordered_map<double, std::pair<double, double>> cache;
        for (std::size_t ti = 0; ti < targets.size(); ++ti) {
            const double t = norm(targets[ti] - g.center);
            auto it = cache.find(t);
            if (it == cache.end()) {
                const double tb = has_tail ? tail_truncation_bound(t, g.r_max, src.tail,
                                                                   P::order, P::bound_const)
                                           : 0.0;
                const double ib =
                    inner_truncation_bound(t, g.r_min, inner_mag, P::order, P::bound_const);
                it = cache.emplace(t, std::make_pair(tb, ib)).first;
            }
            diag->tail_bound_max = std::max(diag->tail_bound_max, it->second.first);
            diag->inner_bound_max = std::max(diag->inner_bound_max, it->second.second);
            diag->near_residual_max = std::max(diag->near_residual_max, residuals[ti]);
        }
    }
    return out;
}

}  // namespace

std::vector<Vec3> convolve_grad_green_at(const SampledTensorField& M,
                                         std::span<const Vec3> targets,
                                         const ConvolutionOptions& opts,
                                         ConvolutionDiagnostics* diag) {
    const bool compact = std::isfinite(M.support_radius) &&
                         M.support_radius <= M.grid->r_max;
    if (!compact && !(M.tail.exponent > 1.0))
        throw ConfigError("convolve_grad_green: source tail exponent must exceed 1");
    return convolve_engine<GradGreenPolicy>(M, targets, opts, diag);
}

SampledVectorField convolve_grad_green(const SampledTensorField& M, GridPtr target_grid,
                                       const ConvolutionOptions& opts,
                                       ConvolutionDiagnostics* diag) {
    std::vector<Vec3> pts(target_grid->node_count());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = target_grid->point(i);
    auto vals = convolve_grad_green_at(M, pts, opts, diag);
    SampledVectorField out(std::move(target_grid));
    out.values = std::move(vals);
    out.fit_tail(std::max(1.0, M.tail.exponent - 1.0));
    return out;
}

std::vector<Vec3> convolve_green_at(const SampledVectorField& g, std::span<const Vec3> targets,
                                    const ConvolutionOptions& opts,
                                    ConvolutionDiagnostics* diag) {
    return convolve_engine<GreenPolicy>(g, targets, opts, diag);
}

std::vector<double> convolve_pressure_source_at(const SampledVectorField& g,
                                                std::span<const Vec3> targets,
                                                const ConvolutionOptions& opts) {
    return convolve_engine<PressurePolicy>(g, targets, opts, nullptr);
}

std::vector<double> convolve_pressure_stress_at(const SampledTensorField& N,
                                                std::span<const Vec3> targets,
                                                const ConvolutionOptions& opts) {
    const GradedGrid& g = *N.grid;
    // Local mollification radius: a multiple of the cell scale at the
    // target radius, smooth in the target position.
    const double h0 = std::max({std::sqrt(g.ratio) - 1.0, M_PI / g.n_theta,
                                2.0 * M_PI / g.n_phi});
    std::vector<double> out(targets.size(), 0.0);
    parallel_for(targets.size(), [&](std::size_t ti) {
        const Vec3 t = targets[ti];
        const double tr = std::clamp(norm(t - g.center), g.r_min, g.r_max);
        const double delta = opts.near_factor * h0 * tr;
        const double lo2 = delta * delta, hi2 = 4.0 * delta * delta;
        double acc = 0.0;
        for (std::size_t i = 0; i < N.size(); ++i) {
            const Vec3 d{t.x - g.px[i], t.y - g.py[i], t.z - g.pz[i]};
            const double r2 = norm2(d);
            if (r2 <= lo2) continue;  // spherical mean of the kernel vanishes
            double w = g.weight[i];
            if (r2 < hi2) {
                const Jet3 s{std::sqrt(r2) / delta - 1.0, 0.0, 0.0, 0.0};
                w *= smoothstep_jet(s).f0;
            }
            acc += w * grad_pressure_contract(d, N.values[i]);
        }
        out[ti] = acc;
    });
    return out;
}

SampledVectorField linear_map_TU(const DecayingEvaluator& U, const SampledVectorField& v,
                                 const ConvolutionOptions& opts,
                                 ConvolutionDiagnostics* diag) {
    SampledTensorField M(v.grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec3 u = U.eval(v.grid->point(i));
        M.values[i] = Mat3::outer(u, v.values[i]) + Mat3::outer(v.values[i], u);
    }
    M.tail.exponent = U.tail.exponent + v.tail.exponent;
    M.tail.constant = 2.0 * U.tail.constant * v.tail.constant;
    auto out = convolve_grad_green(M, v.grid, opts, diag);
    return out;
}

SampledVectorField bilinear_map_B(const SampledVectorField& v, const SampledVectorField& w,
                                  const ConvolutionOptions& opts,
                                  ConvolutionDiagnostics* diag) {
    SampledTensorField M(v.grid);
    for (std::size_t i = 0; i < v.size(); ++i)
        M.values[i] = Mat3::outer(v.values[i], w.values[i]);
    M.tail.exponent = v.tail.exponent + w.tail.exponent;
    M.tail.constant = v.tail.constant * w.tail.constant;
    auto out = convolve_grad_green(M, v.grid, opts, diag);
    return out;
}

SampledVectorField source_term_V(const SampledVectorField& f_minus_F, GridPtr target_grid,
                                 double zero_mean_tol, const ConvolutionOptions& opts,
                                 ConvolutionDiagnostics* diag) {
    if (!std::isfinite(f_minus_F.support_radius))
        throw ConfigError("source_term_V: source must declare a compact support radius");
    const GradedGrid& g = *f_minus_F.grid;
    double out_mag = 0.0, all_mag = 0.0;
    for (std::size_t i = 0; i < f_minus_F.size(); ++i) {
        const double m = norm(f_minus_F.values[i]);
        all_mag = std::max(all_mag, m);
        if (norm(g.point(i) - g.center) > f_minus_F.support_radius * (1.0 + 1e-9))
            out_mag = std::max(out_mag, m);
    }
    if (out_mag > 1e-10 * all_mag)
        throw ConfigError("source_term_V: source is not supported in the declared ball");
    const Vec3 mean = f_minus_F.integral();
    const double l1 = f_minus_F.l1_norm();
    if (norm(mean) > zero_mean_tol * l1)
        throw ZeroMeanError("source_term_V: source has nonzero mean; the O(|x|^-2) far field "
                            "would fail");

    std::vector<Vec3> pts(target_grid->node_count());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = target_grid->point(i);
    auto vals = convolve_engine<GreenPolicy>(f_minus_F, pts, opts, diag);
    SampledVectorField out(std::move(target_grid));
    out.values = std::move(vals);
    out.fit_tail(2.0);
    return out;
}

double lemma_decay_integral(const Vec3& x, double alpha, double beta_exp) {
    if (!(alpha > 1.0) || !(alpha < 2.0))
        throw ConfigError("lemma_decay_integral: alpha must lie in (1, 2)");
    if (!(beta_exp >= 1.0) || !(beta_exp <= 2.0))
        throw ConfigError("lemma_decay_integral: beta must lie in [1, 2]");
    const double s = alpha + beta_exp;
    const double t = norm(x);
    if (t < 1e-12) return 4.0 * M_PI / (s - 1.0);

    // Azimuthal reduction: int dOmega / |x-y|^2 = (2 pi / (t r)) log((r+t)/|r-t|),
    // leaving a 1D radial integral with a logarithmic point at r = t.
    auto f = [&](double r) {
        return r * std::pow(1.0 + r, -s) * std::log((r + t) / std::abs(r - t));
    };
    const double T = std::max(8.0 * t, 50.0);
    double val = adaptive_integrate(f, 0.0, 0.5 * t, 1e-9, 28) +
                 adaptive_integrate(f, 0.5 * t, t, 1e-9, 28) +
                 adaptive_integrate(f, t, 2.0 * t, 1e-9, 28) +
                 adaptive_integrate(f, 2.0 * t, T, 1e-9, 28);
    // log((r+t)/(r-t)) = 2t/r + 2t^3/(3 r^3) + ... beyond T
    val += 2.0 * t * std::pow(1.0 + T, 1.0 - s) / (s - 1.0);
    val += 2.0 * t * t * t / 3.0 * std::pow(T, -1.0 - s) / (1.0 + s);
    return 2.0 * M_PI / t * val;
}

}  // namespace lasym
