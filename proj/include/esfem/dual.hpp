#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<double>> yields exact second
// derivatives of expressions written as generic lambdas over the scalar type.

#include <array>
#include <cmath>
#include <type_traits>

namespace esfem {

template <class T>
struct Dual {
    T v{};
    T d{};

    constexpr Dual() = default;
    constexpr Dual(double value) : v(value), d(0.0) {}  // NOLINT: implicit lift of constants
    constexpr Dual(T value, T derivative) : v(value), d(derivative) {}

    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
    Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b)
{
    const T inv = T(1.0) / b.v;
    return {a.v * inv, (a.d - a.v * inv * b.d) * inv};
}

template <class T> Dual<T> operator+(const Dual<T>& a, double s) { return {a.v + s, a.d}; }
template <class T> Dual<T> operator+(double s, const Dual<T>& a) { return {a.v + s, a.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, double s) { return {a.v - s, a.d}; }
template <class T> Dual<T> operator-(double s, const Dual<T>& a) { return {s - a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, double s) { return {a.v * s, a.d * s}; }
template <class T> Dual<T> operator*(double s, const Dual<T>& a) { return {a.v * s, a.d * s}; }
template <class T> Dual<T> operator/(const Dual<T>& a, double s) { return {a.v / s, a.d / s}; }
template <class T> Dual<T> operator/(double s, const Dual<T>& a) { return Dual<T>(s) / a; }

template <class T> Dual<T> sin(const Dual<T>& a) { using std::sin; using std::cos; return {sin(a.v), a.d * cos(a.v)}; }
template <class T> Dual<T> cos(const Dual<T>& a) { using std::sin; using std::cos; return {cos(a.v), -(a.d * sin(a.v))}; }
template <class T> Dual<T> exp(const Dual<T>& a) { using std::exp; const T e = exp(a.v); return {e, a.d * e}; }
template <class T> Dual<T> log(const Dual<T>& a) { using std::log; return {log(a.v), a.d / a.v}; }
template <class T> Dual<T> sqrt(const Dual<T>& a)
{
    using std::sqrt;
    const T s = sqrt(a.v);
    return {s, a.d / (2.0 * s)};
}

/// Strips all derivative layers.
inline double primal(double x) { return x; }
template <class T> double primal(const Dual<T>& a) { return primal(a.v); }

template <class S>
using Point = std::array<S, 3>;

/// Gradient in space of f(x, t) where f is generic in its scalar type.
template <class S, class F>
Point<S> ad_gradient(const F& f, const Point<S>& x, const S& t)
{
    using D = Dual<S>;
    Point<S> g;
    for (int k = 0; k < 3; ++k) {
        const Point<D> xd{D(x[0], S(k == 0 ? 1.0 : 0.0)), D(x[1], S(k == 1 ? 1.0 : 0.0)),
                          D(x[2], S(k == 2 ? 1.0 : 0.0))};
        g[k] = f(xd, D(t, S(0.0))).d;
    }
    return g;
}

template <class S, class F>
S ad_time_derivative(const F& f, const Point<S>& x, const S& t)
{
    using D = Dual<S>;
    const Point<D> xd{D(x[0], S(0.0)), D(x[1], S(0.0)), D(x[2], S(0.0))};
    return f(xd, D(t, S(1.0))).d;
}

/// Second derivative along directions i and j of (x, t); index 3 denotes time.
template <class S, class F>
S ad_second_derivative(const F& f, const Point<S>& x, const S& t, int i, int j)
{
    using D = Dual<S>;
    using DD = Dual<D>;
    auto seed = [&](const S& value, int slot) {
        return DD(D(value, S(slot == j ? 1.0 : 0.0)), D(S(slot == i ? 1.0 : 0.0), S(0.0)));
    };
    const Point<DD> xd{seed(x[0], 0), seed(x[1], 1), seed(x[2], 2)};
    return f(xd, seed(t, 3)).d.d;
}

template <class S, class F>
std::array<Point<S>, 3> ad_hessian(const F& f, const Point<S>& x, const S& t)
{
    std::array<Point<S>, 3> h;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            h[i][j] = ad_second_derivative(f, x, t, i, j);
            h[j][i] = h[i][j];
        }
    }
    return h;
}

}  // namespace esfem
