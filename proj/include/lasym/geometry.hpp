#pragma once

#include <array>
#include <cmath>
#include <iosfwd>

namespace lasym {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    constexpr Vec3& operator/=(double s) { x /= s; y /= s; z /= s; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return a /= s; }

    friend constexpr bool operator==(const Vec3& a, const Vec3& b) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }
inline double max_abs(const Vec3& a) { return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)}); }
inline bool finite(const Vec3& a) { return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z); }

constexpr Vec3 kE1{1.0, 0.0, 0.0};
constexpr Vec3 kE2{0.0, 1.0, 0.0};
constexpr Vec3 kE3{0.0, 0.0, 1.0};

/// Row-major 3x3 matrix; used for velocity gradients and momentum flux.
struct Mat3 {
    std::array<double, 9> a{};

    constexpr double& operator()(int i, int j) { return a[3 * i + j]; }
    constexpr double operator()(int i, int j) const { return a[3 * i + j]; }

    static constexpr Mat3 zero() { return {}; }
    static constexpr Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
    /// a_i b_j
    static constexpr Mat3 outer(const Vec3& u, const Vec3& v) {
        Mat3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = u[i] * v[j];
        return m;
    }

    constexpr Mat3& operator+=(const Mat3& o) {
        for (int i = 0; i < 9; ++i) a[i] += o.a[i];
        return *this;
    }
    constexpr Mat3& operator-=(const Mat3& o) {
        for (int i = 0; i < 9; ++i) a[i] -= o.a[i];
        return *this;
    }
    constexpr Mat3& operator*=(double s) {
        for (int i = 0; i < 9; ++i) a[i] *= s;
        return *this;
    }
    friend constexpr Mat3 operator+(Mat3 m, const Mat3& o) { return m += o; }
    friend constexpr Mat3 operator-(Mat3 m, const Mat3& o) { return m -= o; }
    friend constexpr Mat3 operator*(Mat3 m, double s) { return m *= s; }
    friend constexpr Mat3 operator*(double s, Mat3 m) { return m *= s; }

    constexpr Mat3 transpose() const {
        Mat3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
        return t;
    }
    constexpr double trace() const { return a[0] + a[4] + a[8]; }
    constexpr Vec3 apply(const Vec3& v) const {
        return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
                a[3] * v.x + a[4] * v.y + a[5] * v.z,
                a[6] * v.x + a[7] * v.y + a[8] * v.z};
    }
    double frobenius() const {
        double s = 0.0;
        for (double e : a) s += e * e;
        return std::sqrt(s);
    }
};

inline double max_abs(const Mat3& m) {
    double s = 0.0;
    for (double e : m.a) s = std::max(s, std::abs(e));
    return s;
}

/// Polar coordinates with theta measured from the +z axis (r > 0, theta in [0,pi]).
struct SphericalPoint {
    double r = 1.0;
    double theta = 0.0;
    double phi = 0.0;
};

inline Vec3 to_cartesian(const SphericalPoint& s) {
    const double st = std::sin(s.theta);
    return {s.r * st * std::cos(s.phi), s.r * st * std::sin(s.phi), s.r * std::cos(s.theta)};
}

inline SphericalPoint to_spherical(const Vec3& v) {
    SphericalPoint s;
    s.r = norm(v);
    const double rho = std::hypot(v.x, v.y);
    s.theta = std::atan2(rho, v.z);
    s.phi = std::atan2(v.y, v.x);
    if (s.phi < 0.0) s.phi += 2.0 * M_PI;
    return s;
}

/// Unit vectors of the local spherical frame at direction (theta, phi).
inline Vec3 radial_unit(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}
inline Vec3 polar_unit(double theta, double phi) {
    return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
}

/// Any unit vector orthogonal to u (deterministic choice).
inline Vec3 orthogonal_unit(const Vec3& u) {
    const Vec3 trial = std::abs(u.x) <= std::abs(u.y) && std::abs(u.x) <= std::abs(u.z) ? kE1
                     : std::abs(u.y) <= std::abs(u.z)                                   ? kE2
                                                                                        : kE3;
    return normalized(cross(u, trial));
}

}  // namespace lasym
