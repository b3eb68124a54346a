#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lasym/geometry.hpp"
#include "lasym/grid.hpp"

namespace lasym {

/// Power-law bound |v(x)| <= constant * |x|^(-exponent) for |x| >= r_max.
/// Carried by every sampled field so norms and convolutions can bound what
/// the finite grid truncates instead of silently dropping it.
struct TailModel {
    double exponent = 0.0;
    double constant = 0.0;
};

namespace detail {
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Vec3& v) { return norm(v); }
inline double magnitude(const Mat3& v) { return v.frobenius(); }
inline void scale_in_place(double& v, double s) { v *= s; }
inline void scale_in_place(Vec3& v, double s) { v *= s; }
inline void scale_in_place(Mat3& v, double s) { v *= s; }
}  // namespace detail

/// Field values on a GradedGrid plus the tail decay model.
template <typename T>
struct SampledField {
    GridPtr grid;
    std::vector<T> values;
    TailModel tail;
    /// Values are identically zero for |x - center| > support_radius.
    double support_radius = std::numeric_limits<double>::infinity();

    SampledField() = default;
    explicit SampledField(GridPtr g) : grid(std::move(g)), values(grid->node_count()) {}

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    const T& at(std::size_t i) const { return values[i]; }
    T& at(std::size_t i) { return values[i]; }

    /// Interpolated value at an arbitrary point: 4-point Lagrange in
    /// (log r, cos theta) and periodic 4-point Lagrange in phi; power-law
    /// tail continuation beyond the outermost radial node; clamped inward.
    T value(const Vec3& x) const;
    /// Trilinear variant for hot inner loops (near-singular subdivision).
    T value_linear(const Vec3& x) const;

    /// Quadrature of the field over the grid (componentwise).
    T integral() const;
    /// Quadrature of |field|.
    double l1_norm() const;
    /// max_i |values[i]|
    double max_magnitude() const;

    /// Fit a power law to shell maxima over the outer portion of the grid
    /// and install it as the tail model (constant adjusted so the bound
    /// holds on the outermost shell).
    void fit_tail(double fallback_exponent);

    SampledField& operator+=(const SampledField& o);
    SampledField& operator-=(const SampledField& o);
    SampledField& operator*=(double s);
};

using SampledScalarField = SampledField<double>;
using SampledVectorField = SampledField<Vec3>;
using SampledTensorField = SampledField<Mat3>;

extern template struct SampledField<double>;
extern template struct SampledField<Vec3>;
extern template struct SampledField<Mat3>;

/// sup over nodes of (1+|x|)^alpha |v(x)| combined with the tail bound.
struct WeightedSupNorm {
    double grid_value = 0.0;  // finite-grid part
    double tail_value = 0.0;  // bound contributed by the tail model
    bool unbounded = false;   // tail decays slower than the weight grows
    double value() const { return std::max(grid_value, tail_value); }
};

/// The decay-weighted sup norm with weight (1+|x|)^alpha, alpha in (1, 2].
/// Throws ConfigError for alpha outside (1, 2] or an empty field.
template <typename T>
WeightedSupNorm weighted_sup_norm(const SampledField<T>& field, double alpha);

/// Sample an evaluator onto a grid.
template <typename T, typename F>
SampledField<T> sample_field(GridPtr grid, F&& f) {
    SampledField<T> out(std::move(grid));
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = f(out.grid->point(i));
    return out;
}

// --- CSV interchange ------------------------------------------------------
// Vector fields:   x,y,z,vx,vy,vz      Scalar fields: x,y,z,s
// Flow snapshots:  x,y,z,ux,uy,uz,p
// One node per row, '.' decimal separator, UTF-8.

void write_vector_csv(const std::string& path, const SampledVectorField& field);
void write_scalar_csv(const std::string& path, const SampledScalarField& field);

/// A structured spherical point cloud read back from CSV: velocity samples
/// plus an optional pressure column, interpolation-ready.
struct FlowSnapshot {
    GridPtr grid;
    SampledVectorField velocity;
    SampledScalarField pressure;
    bool has_pressure = false;
};

/// Parse a CSV point cloud (either field layout) and reconstruct the
/// product-grid structure. Throws ConfigError if the points do not form a
/// full (r, theta, phi) product grid.
FlowSnapshot read_flow_csv(const std::string& path);

}  // namespace lasym
