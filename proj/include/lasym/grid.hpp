#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "lasym/geometry.hpp"

namespace lasym {

/// Geometrically graded spherical-shell quadrature grid.
///
/// Shell edges r_min * q^j; two Gauss-Legendre radial nodes per shell (so
/// 1/r^2-type radial profiles integrate exactly), Gauss-Legendre nodes in
/// cos(theta), uniform phi. Node (ir, it, ip) has index
/// (ir * n_theta + it) * n_phi + ip. Weights carry the full volume element,
/// i.e. sum_i w_i f(x_i) approximates the volume integral of f.
///
/// Immutable after construction; safe for concurrent reads.
struct GradedGrid {
    double r_min = 0.0;
    double r_max = 0.0;            // realized outer radius (integer shell count)
    double requested_r_max = 0.0;  // as passed in; r_max >= requested_r_max
    double ratio = 0.0;            // shell growth factor q
    int n_shells = 0;
    int n_theta = 0;
    int n_phi = 0;
    Vec3 center{};

    std::vector<double> shell_edges;      // n_shells + 1, ascending
    std::vector<double> r_nodes;          // 2 * n_shells, ascending
    std::vector<double> r_weights;        // includes the r^2 factor
    std::vector<double> cos_theta_nodes;  // n_theta, ascending in cos(theta)
    std::vector<double> cos_theta_weights;
    std::vector<double> phi_nodes;  // n_phi, uniform starting at phi = pi/n_phi
    double phi_weight = 0.0;        // 2 pi / n_phi

    // flattened per-node data, SoA for the convolution loops
    std::vector<double> px, py, pz, weight;

    int n_r() const { return 2 * n_shells; }
    std::size_t node_count() const { return px.size(); }
    std::size_t node_index(int ir, int it, int ip) const {
        return (static_cast<std::size_t>(ir) * n_theta + it) * n_phi + ip;
    }
    Vec3 point(std::size_t i) const { return {px[i], py[i], pz[i]}; }

    /// Near-field integration cells: one per (shell, theta, phi) box, each
    /// containing the two radial nodes of its shell.
    struct CellBounds {
        double r0, r1;    // radial extent
        double mu0, mu1;  // cos(theta) extent
        double phi0, phi1;
    };
    std::size_t cell_count() const {
        return static_cast<std::size_t>(n_shells) * n_theta * n_phi;
    }
    CellBounds cell_bounds(int is, int it, int ip) const;
    Vec3 cell_center(const CellBounds& c) const;
    double cell_diameter(const CellBounds& c) const;
    /// Diameter of the cell containing node i (precomputed).
    double node_cell_diameter(std::size_t i) const { return cell_diam_[i]; }

    template <typename F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < node_count(); ++i) s += weight[i] * f(point(i));
        return s;
    }

    std::vector<double> cell_diam_;    // per node
    std::vector<double> mu_edges_;     // n_theta + 1, theta-cell boundaries in cos(theta)
    std::vector<double> log_r_nodes_;  // interpolation abscissae
};

/// Build a grid covering [r_min, r_max] with shell ratio q. r_max is rounded
/// up to the next full shell when log(r_max/r_min)/log(q) is not an integer.
/// Throws ConfigError for r_min <= 0, q <= 1, r_max <= r_min, or angular
/// counts below 4.
GradedGrid make_graded_grid(double r_min, double r_max, double q, int n_theta, int n_phi,
                            const Vec3& center = {});

/// Same grid chosen by shell count; q = (r_max / r_min)^(1 / n_shells).
GradedGrid make_graded_grid_shells(double r_min, double r_max, int n_shells, int n_theta,
                                   int n_phi, const Vec3& center = {});

using GridPtr = std::shared_ptr<const GradedGrid>;

}  // namespace lasym
