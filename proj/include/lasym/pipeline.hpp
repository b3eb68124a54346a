#pragma once

#include <optional>
#include <vector>

#include "lasym/analysis.hpp"
#include "lasym/extension.hpp"
#include "lasym/solver.hpp"

namespace lasym {

/// One-stop configuration for the exterior-to-asymptotics pipeline.
struct PipelineConfig {
    double alpha = 1.5;
    double r0 = 1.0;  // jet regularization radius
    double R0 = 1.0;  // exterior ball radius
    double grid_r_min = 0.05;
    double grid_r_max = 160.0;
    int grid_shells = 24;
    int n_theta = 16;
    int n_phi = 16;
    SolverConfig solver{};
    std::vector<double> report_shells;  // default: 10 radii spanning [8, 128]
    int report_angular = 8;
    double outflow_split_tol = 1e-8;
};

struct PipelineResult {
    double outflow = 0.0;          // flux peeled off the input
    Vec3 b_surface{};              // net force of the exterior solution
    Vec3 b_volume{};               // quadrature of the computed forcing
    GridPtr grid;
    SampledVectorField f_minus_F;  // mean-corrected perturbation source
    SolveResult solve;
    FlowEvaluators flow;           // assembled u, p on R^3
    AsymptoticsReport report;
};

/// Full Theorem-style run: restrict the jet with force b to the exterior of
/// B_R0, extend to R^3, recover the force from the forcing, solve the
/// perturbation equation around the regularized jet, assemble, and compare
/// the result against the jet asymptotics.
PipelineResult run_exterior_pipeline(const ExteriorSolutionSample& exterior,
                                     const PipelineConfig& cfg);

/// Same tail of the pipeline driven by a directly prescribed forcing
/// f = (regularized-jet forcing for b) + perturb_strength * (zero-mean
/// dipole bump). b may be zero, leaving the pure quadratic problem.
PipelineResult run_forced_pipeline(const Vec3& b, double perturb_strength,
                                   const PipelineConfig& cfg);

/// Zero-mean mollified dipole test source (unit strength) on a grid.
SampledVectorField dipole_test_source(GridPtr grid, double strength);

}  // namespace lasym
