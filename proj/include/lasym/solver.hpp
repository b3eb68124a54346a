#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lasym/fields.hpp"
#include "lasym/flux.hpp"
#include "lasym/green.hpp"
#include "lasym/landau.hpp"

namespace lasym {

struct SolverConfig {
    double alpha = 1.5;  // decay exponent of the perturbation space, in (1,2)
    int max_iter = 50;
    double step_tol = 1e-8;
    /// Smallness budget: |b| and C_star this run is expected to stay under;
    /// recorded in diagnostics only.
    double smallness_budget = 1.0;
    int probe_fields = 5;   // random probes for the linear-operator bound
    int probe_pairs = 10;   // random pairs for the bilinear bound
    std::uint64_t seed = 2024;
    /// Start the iteration from V instead of 0 (uniqueness cross-checks).
    bool start_from_source = false;
    ConvolutionOptions convolution{};
};

/// Measured contraction data for x + Tx + B(x,x) = y: operator bound
/// eps_hat, bilinear bound c_hat, ||y||, and the roots of
/// xi = ||y|| + eps xi + c xi^2. Valid iff eps_hat < 1 and the discriminant
/// (1-eps)^2 - 4 c ||y|| is positive; then the iteration has a fixed point
/// with norm <= xi1, unique in the open ball of radius xi2.
struct ContractionCertificate {
    double eps_hat = 0.0;
    double c_hat = 0.0;
    double y_norm = 0.0;
    double discriminant = 0.0;
    double xi1 = 0.0;
    double xi2 = 0.0;
    bool valid = false;
};

/// Roots (xi1, xi2) of xi = y_norm + eps xi + c xi^2. Throws
/// NoCertificateError when y_norm >= (1-eps)^2 / (4c) and ConfigError for
/// arguments outside 0 <= eps < 1, c > 0, y_norm >= 0.
std::pair<double, double> contraction_roots(double eps, double c, double y_norm);

struct SolveResult {
    SampledVectorField v;
    SampledScalarField q;
    std::vector<double> norm_history;  // ||v_k|| per iteration
    ContractionCertificate certificate;
    bool converged = false;
    int iterations = 0;
    double final_step = 0.0;
    ConvolutionDiagnostics convolution_diag;
};

/// Fixed-point solve of v + T_U(v) + B(v,v) = V with V = G star (f - F),
/// by plain Picard iteration from v0 = 0 on the source grid. Measures the
/// certificate first and refuses to iterate without one
/// (NoCertificateError); aborts with DivergenceError if an iterate leaves
/// the xi2 ball. U is the regularized jet around which the equation is
/// linearized.
SolveResult picard_solve(const DecayingEvaluator& U_reg, const SampledVectorField& f_minus_F,
                         const SolverConfig& config);

/// Pressure of the perturbation: q = Q star [(f - F) - div(U(x)v + v(x)U
/// + v(x)v)] with the divergence moved onto the kernel; sampled on the
/// solve grid. Decays one order faster than v.
SampledScalarField recover_pressure(const SampledVectorField& v, const DecayingEvaluator& U_reg,
                                    const SampledVectorField& f_minus_F,
                                    const ConvolutionOptions& opts = {});
/// Point evaluation of the same quadrature (for residual checks).
double recover_pressure_at(const Vec3& x, const SampledVectorField& v,
                           const DecayingEvaluator& U_reg,
                           const SampledVectorField& f_minus_F,
                           const ConvolutionOptions& opts = {});

/// Assemble the full flow u = a(Phi) + U_reg^b + v, p = pi_a + P_reg^b + q
/// as evaluators on R^3 (v, q interpolated between nodes, power-law tails
/// beyond the grid).
FlowEvaluators assemble_solution(const Vec3& b, double Phi, const SolveResult& result,
                                 const RegularizationProfile& profile);

/// Deterministic smooth random probe in the decay class: a few random
/// low-order angular modes times (1 + r)^-alpha, normalized to unit
/// weighted sup norm.
SampledVectorField random_probe_field(GridPtr grid, double alpha, std::uint64_t seed);

/// The regularized jet as a decaying evaluator (tail constant measured on
/// a far sphere).
DecayingEvaluator regularized_jet_evaluator(const LandauParams& params,
                                            const RegularizationProfile& profile);

}  // namespace lasym
