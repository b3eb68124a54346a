#pragma once

#include <functional>
#include <span>
#include <vector>

namespace lasym {

/// Gauss-Legendre rule on [-1, 1]; nodes ascending. Cached per order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <typename F>
double gauss_integrate(F&& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

/// Integrate f over [a, b] by panel subdivision until two refinement levels
/// agree to rel_tol. Intended for smooth or mildly singular 1D integrands.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, int max_depth = 24);

}  // namespace lasym
