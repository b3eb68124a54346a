#pragma once

#include <functional>
#include <string>
#include <vector>

namespace lasym {

/// A polyline in the meridian half-plane (X = r sin t >= 0, Z = r cos t).
struct Polyline {
    std::vector<double> xs;
    std::vector<double> zs;
};

struct ContourSet {
    double level = 0.0;
    std::vector<Polyline> lines;
};

/// Marching-squares contours of a scalar sampled on a structured (r, theta)
/// grid, with crossing points refined by bisection along cell edges until
/// |f - level| <= edge_tol * |level|. Vertices are mapped to the half-plane.
std::vector<ContourSet> contour_levels(const std::function<double(double, double)>& f,
                                       const std::vector<double>& r_nodes,
                                       const std::vector<double>& theta_nodes,
                                       const std::vector<double>& levels,
                                       double edge_tol = 1e-4);

/// Minimal static SVG: one <g> per level, polylines in half-plane
/// coordinates (Z horizontal, X vertical so the jet axis runs left-right).
std::string contours_to_svg(const std::vector<ContourSet>& sets, int width = 800,
                            int height = 600);

}  // namespace lasym
