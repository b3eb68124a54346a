#pragma once

#include <array>
#include <cmath>

// Forward-mode differentiation helpers. Closed-form fields evaluate through
// these types so first and second derivatives come out of the same source
// expressions as the values, with no hand-expanded formulas to mistype.

namespace lasym {

/// First-order dual number with N independent directions.
template <int N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    Dual() = default;
    Dual(double value) : v(value) {}
    static Dual variable(double value, int slot) {
        Dual r(value);
        r.d[slot] = 1.0;
        return r;
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (int i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (int i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator-(const Dual& a) {
        Dual r(-a.v);
        for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
        return r;
    }
    friend Dual operator*(const Dual& a, const Dual& b) {
        Dual r(a.v * b.v);
        for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
        return r;
    }
    friend Dual operator/(const Dual& a, const Dual& b) {
        Dual r(a.v / b.v);
        const double ib2 = 1.0 / (b.v * b.v);
        for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * ib2;
        return r;
    }

    friend Dual compose(const Dual& u, double f, double fp) {
        Dual r(f);
        for (int i = 0; i < N; ++i) r.d[i] = fp * u.d[i];
        return r;
    }
    friend Dual sqrt(const Dual& u) {
        const double s = std::sqrt(u.v);
        return compose(u, s, 0.5 / s);
    }
    friend Dual exp(const Dual& u) {
        const double e = std::exp(u.v);
        return compose(u, e, e);
    }
    friend Dual log(const Dual& u) { return compose(u, std::log(u.v), 1.0 / u.v); }
    friend Dual sin(const Dual& u) { return compose(u, std::sin(u.v), std::cos(u.v)); }
    friend Dual cos(const Dual& u) { return compose(u, std::cos(u.v), -std::sin(u.v)); }
};

/// Second-order dual in three Cartesian directions: value, gradient, and the
/// symmetric Hessian stored as (xx, xy, xz, yy, yz, zz).
struct Dual2 {
    double v = 0.0;
    std::array<double, 3> g{};
    std::array<double, 6> h{};

    static constexpr int hidx(int i, int j) {
        if (i > j) std::swap(i, j);
        constexpr int base[3] = {0, 3, 5};
        return base[i] + (j - i);
    }

    Dual2() = default;
    Dual2(double value) : v(value) {}
    static Dual2 variable(double value, int slot) {
        Dual2 r(value);
        r.g[slot] = 1.0;
        return r;
    }

    double grad(int i) const { return g[i]; }
    double hess(int i, int j) const { return h[hidx(i, j)]; }

    Dual2& operator+=(const Dual2& o) {
        v += o.v;
        for (int i = 0; i < 3; ++i) g[i] += o.g[i];
        for (int i = 0; i < 6; ++i) h[i] += o.h[i];
        return *this;
    }
    Dual2& operator-=(const Dual2& o) {
        v -= o.v;
        for (int i = 0; i < 3; ++i) g[i] -= o.g[i];
        for (int i = 0; i < 6; ++i) h[i] -= o.h[i];
        return *this;
    }

    friend Dual2 operator+(Dual2 a, const Dual2& b) { return a += b; }
    friend Dual2 operator-(Dual2 a, const Dual2& b) { return a -= b; }
    friend Dual2 operator-(const Dual2& a) {
        Dual2 r(-a.v);
        for (int i = 0; i < 3; ++i) r.g[i] = -a.g[i];
        for (int i = 0; i < 6; ++i) r.h[i] = -a.h[i];
        return r;
    }
    friend Dual2 operator*(const Dual2& a, const Dual2& b) {
        Dual2 r(a.v * b.v);
        for (int i = 0; i < 3; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j)
                r.h[hidx(i, j)] = a.h[hidx(i, j)] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] +
                                  a.v * b.h[hidx(i, j)];
        return r;
    }

    /// f(u) given f, f', f'' at u.v.
    friend Dual2 compose(const Dual2& u, double f, double fp, double fpp) {
        Dual2 r(f);
        for (int i = 0; i < 3; ++i) r.g[i] = fp * u.g[i];
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j)
                r.h[hidx(i, j)] = fp * u.h[hidx(i, j)] + fpp * u.g[i] * u.g[j];
        return r;
    }
    friend Dual2 inv(const Dual2& u) {
        const double iv = 1.0 / u.v;
        return compose(u, iv, -iv * iv, 2.0 * iv * iv * iv);
    }
    friend Dual2 operator/(const Dual2& a, const Dual2& b) { return a * inv(b); }
    friend Dual2 sqrt(const Dual2& u) {
        const double s = std::sqrt(u.v);
        return compose(u, s, 0.5 / s, -0.25 / (s * u.v));
    }
    friend Dual2 exp(const Dual2& u) {
        const double e = std::exp(u.v);
        return compose(u, e, e, e);
    }
};

/// 1D truncated Taylor jet carrying f, f', f'', f'''.
struct Jet3 {
    double f0 = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;

    Jet3() = default;
    Jet3(double value) : f0(value) {}
    static Jet3 variable(double value) { return {value, 1.0, 0.0, 0.0}; }
    Jet3(double a, double b, double c, double d) : f0(a), f1(b), f2(c), f3(d) {}

    friend Jet3 operator+(const Jet3& a, const Jet3& b) {
        return {a.f0 + b.f0, a.f1 + b.f1, a.f2 + b.f2, a.f3 + b.f3};
    }
    friend Jet3 operator-(const Jet3& a, const Jet3& b) {
        return {a.f0 - b.f0, a.f1 - b.f1, a.f2 - b.f2, a.f3 - b.f3};
    }
    friend Jet3 operator-(const Jet3& a) { return {-a.f0, -a.f1, -a.f2, -a.f3}; }
    // Leibniz to third order
    friend Jet3 operator*(const Jet3& a, const Jet3& b) {
        return {a.f0 * b.f0,
                a.f1 * b.f0 + a.f0 * b.f1,
                a.f2 * b.f0 + 2.0 * a.f1 * b.f1 + a.f0 * b.f2,
                a.f3 * b.f0 + 3.0 * a.f2 * b.f1 + 3.0 * a.f1 * b.f2 + a.f0 * b.f3};
    }
    /// f(u) from the chain rule, given derivatives of f at u.f0.
    friend Jet3 compose(const Jet3& u, double f, double fp, double fpp, double fppp) {
        const double u1 = u.f1, u2 = u.f2, u3 = u.f3;
        return {f,
                fp * u1,
                fp * u2 + fpp * u1 * u1,
                fp * u3 + 3.0 * fpp * u1 * u2 + fppp * u1 * u1 * u1};
    }
    friend Jet3 inv(const Jet3& u) {
        const double iv = 1.0 / u.f0;
        return compose(u, iv, -iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv);
    }
    friend Jet3 operator/(const Jet3& a, const Jet3& b) { return a * inv(b); }
    friend Jet3 exp(const Jet3& u) {
        const double e = std::exp(u.f0);
        return compose(u, e, e, e, e);
    }
};

/// C-infinity smoothstep s with s = 0 on (-inf, 0], s = 1 on [1, inf),
/// s(t) = 1 / (1 + exp(1/t - 1/(1-t))) in between, in jet arithmetic.
/// All derivatives vanish at both plateau edges. The 1% guard bands return
/// the plateau exactly; the true value there is below 1e-42.
inline Jet3 smoothstep_jet(const Jet3& t) {
    constexpr double guard = 0.01;
    if (t.f0 <= guard) return Jet3(0.0);
    if (t.f0 >= 1.0 - guard) return Jet3(1.0);
    const Jet3 one(1.0);
    return inv(one + exp(inv(t) - inv(one - t)));
}

}  // namespace lasym
