#pragma once

#include "lasym/geometry.hpp"

// 4th-order central-difference stencils for point evaluators.

namespace lasym {

template <typename F>
auto fd_partial(F&& f, const Vec3& x, int axis, double h) {
    Vec3 e{};
    e[axis] = 1.0;
    return (f(x - 2.0 * h * e) - f(x + 2.0 * h * e) +
            8.0 * (f(x + h * e) - f(x - h * e))) *
           (1.0 / (12.0 * h));
}

template <typename F>
auto fd_second(F&& f, const Vec3& x, int axis, double h) {
    Vec3 e{};
    e[axis] = 1.0;
    return (-f(x + 2.0 * h * e) + 16.0 * f(x + h * e) - 30.0 * f(x) + 16.0 * f(x - h * e) -
            f(x - 2.0 * h * e)) *
           (1.0 / (12.0 * h * h));
}

/// Gradient matrix (du_i/dx_j) of a vector evaluator.
template <typename F>
Mat3 fd_gradient(F&& f, const Vec3& x, double h) {
    Mat3 g;
    for (int j = 0; j < 3; ++j) {
        const Vec3 col = fd_partial(f, x, j, h);
        for (int i = 0; i < 3; ++i) g(i, j) = col[i];
    }
    return g;
}

}  // namespace lasym
