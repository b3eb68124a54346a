#include "lasym/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lasym {

namespace {

// Nodes via Newton on P_n, standard 3-term recurrence.
GaussRule compute_gauss(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
    return it->second;
}

namespace {

double adaptive_panel(const std::function<double(double)>& f, double a, double b, double whole,
                      double rel_scale, double rel_tol, int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double left = gauss_integrate(f, a, m, 8);
    const double right = gauss_integrate(f, m, b, 8);
    const double split = left + right;
    if (depth >= max_depth) return split;
    if (std::abs(split - whole) <= rel_tol * (rel_scale + std::abs(split))) return split;
    const double scale = std::max(rel_scale, std::abs(split));
    return adaptive_panel(f, a, m, left, scale, rel_tol, depth + 1, max_depth) +
           adaptive_panel(f, m, b, right, scale, rel_tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    const double whole = gauss_integrate(f, a, b, 8);
    return adaptive_panel(f, a, b, whole, std::abs(whole), rel_tol, 0, max_depth);
}

}  // namespace lasym
