#include "lasym/grid.hpp"

#include <cmath>

#include "lasym/error.hpp"
#include "lasym/quadrature.hpp"

namespace lasym {

GradedGrid::CellBounds GradedGrid::cell_bounds(int is, int it, int ip) const {
    CellBounds c;
    c.r0 = shell_edges[is];
    c.r1 = shell_edges[is + 1];
    c.mu0 = mu_edges_[it];
    c.mu1 = mu_edges_[it + 1];
    const double dphi = 2.0 * M_PI / n_phi;
    c.phi0 = ip * dphi;
    c.phi1 = (ip + 1) * dphi;
    return c;
}

Vec3 GradedGrid::cell_center(const CellBounds& c) const {
    const double r = 0.5 * (c.r0 + c.r1);
    const double mu = 0.5 * (c.mu0 + c.mu1);
    const double phi = 0.5 * (c.phi0 + c.phi1);
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    return center + Vec3{r * s * std::cos(phi), r * s * std::sin(phi), r * mu};
}

double GradedGrid::cell_diameter(const CellBounds& c) const {
    const double r = c.r1;
    const double dr = c.r1 - c.r0;
    const double mu = 0.5 * (c.mu0 + c.mu1);
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    const double dth = std::acos(std::clamp(c.mu0, -1.0, 1.0)) -
                       std::acos(std::clamp(c.mu1, -1.0, 1.0));
    const double dphi = c.phi1 - c.phi0;
    return std::sqrt(dr * dr + r * dth * (r * dth) + (r * s * dphi) * (r * s * dphi));
}

GradedGrid make_graded_grid(double r_min, double r_max, double q, int n_theta, int n_phi,
                            const Vec3& center) {
    if (!(r_min > 0.0)) throw ConfigError("make_graded_grid: r_min must be positive");
    if (!(q > 1.0)) throw ConfigError("make_graded_grid: shell ratio q must exceed 1");
    if (!(r_max > r_min)) throw ConfigError("make_graded_grid: r_max must exceed r_min");
    if (n_theta < 4 || n_phi < 4)
        throw ConfigError("make_graded_grid: angular counts must be at least 4");

    GradedGrid g;
    g.r_min = r_min;
    g.requested_r_max = r_max;
    g.ratio = q;
    g.n_theta = n_theta;
    g.n_phi = n_phi;
    g.center = center;

    // Round the cover up to a whole number of shells.
    const double shells_exact = std::log(r_max / r_min) / std::log(q);
    int n_shells = static_cast<int>(std::ceil(shells_exact - 1e-12));
    n_shells = std::max(n_shells, 1);
    g.n_shells = n_shells;

    g.shell_edges.resize(n_shells + 1);
    for (int j = 0; j <= n_shells; ++j) g.shell_edges[j] = r_min * std::pow(q, j);
    g.r_max = g.shell_edges[n_shells];

    // Two Gauss points per shell in r; weights absorb the r^2 volume factor,
    // so the radial rule is exact for radial integrands with r^2 f(r) cubic.
    const GaussRule& gl2 = gauss_legendre(2);
    g.r_nodes.resize(2 * n_shells);
    g.r_weights.resize(2 * n_shells);
    for (int j = 0; j < n_shells; ++j) {
        const double a = g.shell_edges[j], b = g.shell_edges[j + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int k = 0; k < 2; ++k) {
            const double r = mid + half * gl2.nodes[k];
            g.r_nodes[2 * j + k] = r;
            g.r_weights[2 * j + k] = half * gl2.weights[k] * r * r;
        }
    }

    const GaussRule& glt = gauss_legendre(n_theta);
    g.cos_theta_nodes = glt.nodes;
    g.cos_theta_weights = glt.weights;

    g.mu_edges_.resize(n_theta + 1);
    g.mu_edges_[0] = -1.0;
    g.mu_edges_[n_theta] = 1.0;
    for (int t = 1; t < n_theta; ++t)
        g.mu_edges_[t] = 0.5 * (g.cos_theta_nodes[t - 1] + g.cos_theta_nodes[t]);

    g.phi_nodes.resize(n_phi);
    g.phi_weight = 2.0 * M_PI / n_phi;
    for (int p = 0; p < n_phi; ++p) g.phi_nodes[p] = (p + 0.5) * g.phi_weight;

    g.log_r_nodes_.resize(g.r_nodes.size());
    for (std::size_t i = 0; i < g.r_nodes.size(); ++i) g.log_r_nodes_[i] = std::log(g.r_nodes[i]);

    const std::size_t n = static_cast<std::size_t>(2 * n_shells) * n_theta * n_phi;
    g.px.resize(n);
    g.py.resize(n);
    g.pz.resize(n);
    g.weight.resize(n);
    g.cell_diam_.resize(n);

    for (int ir = 0; ir < 2 * n_shells; ++ir) {
        const double r = g.r_nodes[ir];
        const double wr = g.r_weights[ir];
        const int is = ir / 2;
        for (int it = 0; it < n_theta; ++it) {
            const double mu = g.cos_theta_nodes[it];
            const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            const double wt = g.cos_theta_weights[it];
            const double diam = g.cell_diameter(g.cell_bounds(is, it, 0));
            for (int ip = 0; ip < n_phi; ++ip) {
                const std::size_t idx = g.node_index(ir, it, ip);
                const double phi = g.phi_nodes[ip];
                g.px[idx] = center.x + r * s * std::cos(phi);
                g.py[idx] = center.y + r * s * std::sin(phi);
                g.pz[idx] = center.z + r * mu;
                g.weight[idx] = wr * wt * g.phi_weight;
                g.cell_diam_[idx] = diam;
            }
        }
    }
    return g;
}

GradedGrid make_graded_grid_shells(double r_min, double r_max, int n_shells, int n_theta,
                                   int n_phi, const Vec3& center) {
    if (n_shells < 1) throw ConfigError("make_graded_grid_shells: need at least one shell");
    if (!(r_min > 0.0) || !(r_max > r_min))
        throw ConfigError("make_graded_grid_shells: need 0 < r_min < r_max");
    const double q = std::pow(r_max / r_min, 1.0 / n_shells);
    // Nudge above the exact ratio so rounding cannot add a shell.
    return make_graded_grid(r_min, r_max, q * (1.0 + 1e-13), n_theta, n_phi, center);
}

}  // namespace lasym
