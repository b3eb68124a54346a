#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "lasym/fields.hpp"
#include "lasym/geometry.hpp"
#include "lasym/grid.hpp"

namespace lasym {

// Fundamental solution of the steady Stokes system, normalized so that
// -Lap G_.j + grad Q_j = e_j delta and the linear momentum flux of column j
// through any sphere equals +e_j:
//   G_ij(x) = (1/8pi) (d_ij / |x| + x_i x_j / |x|^3)
//   Q_j(x)  = x_j / (4 pi |x|^3)

Mat3 oseen_tensor(const Vec3& x);
Vec3 pressure_kernel(const Vec3& x);
/// grad_k Q_j as matrix (k, j).
Mat3 pressure_kernel_gradient(const Vec3& x);

struct KernelValue {
    Mat3 G;
    std::array<Mat3, 3> gradG;  // gradG[k](i,j) = d G_ij / d x_k
    Vec3 Q;
};
KernelValue stokes_kernel(const Vec3& x);

/// Column e3 of the Oseen tensor (unit point force along +z).
Vec3 stokeslet_velocity(const Vec3& x);
double stokeslet_pressure(const Vec3& x);

// Pointwise kernel contractions used by the convolution loops.
Vec3 green_apply(const Vec3& d, const Vec3& g);           // G(d) g
Vec3 grad_green_contract(const Vec3& d, const Mat3& M);   // sum_jk dG_ij/dx_k (d) M_jk
double pressure_apply(const Vec3& d, const Vec3& g);      // Q(d) . g
double grad_pressure_contract(const Vec3& d, const Mat3& M);

struct ConvolutionOptions {
    /// Source cells with distance below near_factor times their diameter are
    /// integrated by adaptive subdivision instead of the plain node rule.
    double near_factor = 2.0;
    /// Stop refining a cell once the subdivided estimate changes by less
    /// than this, relative to the local contribution.
    double refine_rel_tol = 1e-8;
    int max_depth = 6;
};

/// Truncation bookkeeping for a convolution: what the finite grid could not
/// represent, bounded analytically rather than ignored.
struct ConvolutionDiagnostics {
    double tail_bound_max = 0.0;      // beyond r_max, from the tail model
    double inner_bound_max = 0.0;     // inside r_min
    double near_residual_max = 0.0;   // subdivision depth cap remainders
};

/// (grad G) star M at the given targets: at each target the quadrature of
/// sum_jk dG_ij/dx_k (x - y) M_jk(y) over the source grid, near-singular
/// cells refined adaptively, tail bounded via the source's tail model.
/// Throws ConfigError if the source tail exponent is <= 1 (divergent tail).
std::vector<Vec3> convolve_grad_green_at(const SampledTensorField& M,
                                         std::span<const Vec3> targets,
                                         const ConvolutionOptions& opts = {},
                                         ConvolutionDiagnostics* diag = nullptr);

/// Same convolution evaluated on a whole grid, returned as a field with a
/// freshly fitted tail model.
SampledVectorField convolve_grad_green(const SampledTensorField& M, GridPtr target_grid,
                                       const ConvolutionOptions& opts = {},
                                       ConvolutionDiagnostics* diag = nullptr);

/// G star g for a compactly supported vector source (weakly singular).
std::vector<Vec3> convolve_green_at(const SampledVectorField& g,
                                    std::span<const Vec3> targets,
                                    const ConvolutionOptions& opts = {},
                                    ConvolutionDiagnostics* diag = nullptr);

/// Q star g (pressure from a compactly supported force density).
std::vector<double> convolve_pressure_source_at(const SampledVectorField& g,
                                                std::span<const Vec3> targets,
                                                const ConvolutionOptions& opts = {});

/// (grad Q) star N with the divergence moved onto the kernel. The kernel is
/// of order |x|^-3, so each target uses a smoothly mollified principal
/// value: sources inside the local cell scale are faded out by a C-infinity
/// cutoff (their spherical mean contributes nothing by parity).
std::vector<double> convolve_pressure_stress_at(const SampledTensorField& N,
                                                std::span<const Vec3> targets,
                                                const ConvolutionOptions& opts = {});

/// An evaluator together with its decay model.
struct DecayingEvaluator {
    std::function<Vec3(const Vec3&)> eval;
    TailModel tail;
};

/// v -> (grad G) star (U (x) v + v (x) U): the linearization of the
/// advection term around U as a map on sampled fields. The measured output
/// to input norm ratio is the empirical operator bound.
SampledVectorField linear_map_TU(const DecayingEvaluator& U, const SampledVectorField& v,
                                 const ConvolutionOptions& opts = {},
                                 ConvolutionDiagnostics* diag = nullptr);

/// (v, w) -> (grad G) star (v (x) w).
SampledVectorField bilinear_map_B(const SampledVectorField& v, const SampledVectorField& w,
                                  const ConvolutionOptions& opts = {},
                                  ConvolutionDiagnostics* diag = nullptr);

/// G star g for the compactly supported, zero-mean source g = f - F.
/// Enforces |integral g| <= zero_mean_tol * ||g||_L1 (otherwise the
/// advertised O(|x|^-2) far field would fail) and fits the result's tail.
SampledVectorField source_term_V(const SampledVectorField& f_minus_F, GridPtr target_grid,
                                 double zero_mean_tol = 1e-6,
                                 const ConvolutionOptions& opts = {},
                                 ConvolutionDiagnostics* diag = nullptr);

/// The decay-estimate integral
///   I(x) = int dy / (|x - y|^2 (1 + |y|)^(alpha + beta_exp)),
/// reduced over the azimuth to a 1D radial quadrature. (1+|x|)^alpha I(x)
/// stays uniformly bounded for alpha in (1, 2).
double lemma_decay_integral(const Vec3& x, double alpha, double beta_exp);

}  // namespace lasym
