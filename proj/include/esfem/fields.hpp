#pragma once

#include "esfem/dual.hpp"
#include "esfem/types.hpp"

#include <functional>
#include <string>

namespace esfem {

enum class DiffMode { closed_form, finite_difference, dual_number };

namespace detail {

template <class F>
auto eval_point(const F& f, const Vec3& x, double t)
{
    return f(Point<double>{x[0], x[1], x[2]}, t);
}

inline Vec3 to_vec(const Point<double>& p) { return {p[0], p[1], p[2]}; }

inline Mat3 to_mat(const std::array<Point<double>, 3>& h)
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = h[i][j];
    return m;
}

}  // namespace detail

using ScalarFn = std::function<double(const Vec3&, double)>;
using VectorFn = std::function<Vec3(const Vec3&, double)>;
using MatrixFn = std::function<Mat3(const Vec3&, double)>;

/// Scalar field on R^3 x time. Derivatives that are not supplied are computed by
/// central differences with step fd_step().
class AmbientField {
public:
    AmbientField() = default;
    explicit AmbientField(ScalarFn value, double fd_step = 1e-4);

    /// Builds all derivative evaluators with dual numbers from a generic callable
    /// f(std::array<S,3> x, S t).
    template <class F>
    static AmbientField from_expression(F f, std::string name = {});

    static AmbientField constant(double c);

    AmbientField& with_gradient(VectorFn g);
    AmbientField& with_hessian(MatrixFn h);
    AmbientField& with_time_derivative(ScalarFn dt);
    AmbientField& named(std::string name);

    double value(const Vec3& x, double t) const { return value_(x, t); }
    Vec3 gradient(const Vec3& x, double t) const;
    Mat3 hessian(const Vec3& x, double t) const;
    double time_derivative(const Vec3& x, double t) const;

    bool has_value() const { return static_cast<bool>(value_); }
    bool has_closed_gradient() const { return static_cast<bool>(gradient_); }
    DiffMode mode() const { return mode_; }
    double fd_step() const { return fd_step_; }
    const std::string& name() const { return name_; }

private:
    ScalarFn value_;
    VectorFn gradient_;
    MatrixFn hessian_;
    ScalarFn time_derivative_;
    DiffMode mode_ = DiffMode::finite_difference;
    double fd_step_ = 1e-4;
    std::string name_;
};

/// Moving closed surface given as the zero set of d(x, t).
class LevelSetSurface {
public:
    LevelSetSurface() = default;
    LevelSetSurface(ScalarFn value, VectorFn gradient, ScalarFn time_derivative, double diameter);

    template <class F>
    static LevelSetSurface from_expression(F f, double diameter, std::string name = {});

    LevelSetSurface& with_hessian(MatrixFn h);
    LevelSetSurface& with_time_gradient(VectorFn g);
    LevelSetSurface& named(std::string name);

    double value(const Vec3& x, double t) const { return value_(x, t); }
    Vec3 gradient(const Vec3& x, double t) const { return gradient_(x, t); }
    double time_derivative(const Vec3& x, double t) const { return time_derivative_(x, t); }
    /// Spatial Hessian; central differences of the gradient when not supplied.
    Mat3 hessian(const Vec3& x, double t) const;
    /// d/dt of the spatial gradient; central differences in time when not supplied.
    Vec3 time_gradient(const Vec3& x, double t) const;

    double diameter() const { return diameter_; }
    /// Step used for all finite-difference fallbacks: 1e-4 of the surface diameter.
    double fd_step() const { return 1e-4 * diameter_; }
    bool is_static() const { return static_; }
    const std::string& name() const { return name_; }

    LevelSetSurface& mark_static();

private:
    ScalarFn value_;
    VectorFn gradient_;
    ScalarFn time_derivative_;
    MatrixFn hessian_;
    VectorFn time_gradient_;
    double diameter_ = 2.0;
    bool static_ = false;
    std::string name_;
};

/// Ellipsoid family x1^2/a(t) + x2^2 + x3^2 = R^2 with a(t) = 1 + A sin(omega t).
struct EllipsoidShape {
    double radius = 1.0;
    double amplitude = 0.0;
    double omega = 0.0;

    double axis_factor(double t) const;
    double axis_factor_rate(double t) const;
};

namespace surfaces {

LevelSetSurface sphere(double radius);
/// Sphere of radius R0 * exp(rate * t), so that R'/R = rate.
LevelSetSurface expanding_sphere(double radius0, double rate);
LevelSetSurface evolving_ellipsoid(const EllipsoidShape& shape);

}  // namespace surfaces

// ---------------------------------------------------------------------------

template <class F>
AmbientField AmbientField::from_expression(F f, std::string name)
{
    AmbientField field([f](const Vec3& x, double t) { return detail::eval_point(f, x, t); });
    field.gradient_ = [f](const Vec3& x, double t) {
        return detail::to_vec(ad_gradient<double>(f, Point<double>{x[0], x[1], x[2]}, t));
    };
    field.hessian_ = [f](const Vec3& x, double t) {
        return detail::to_mat(ad_hessian<double>(f, Point<double>{x[0], x[1], x[2]}, t));
    };
    field.time_derivative_ = [f](const Vec3& x, double t) {
        return ad_time_derivative<double>(f, Point<double>{x[0], x[1], x[2]}, t);
    };
    field.mode_ = DiffMode::dual_number;
    field.name_ = std::move(name);
    return field;
}

template <class F>
LevelSetSurface LevelSetSurface::from_expression(F f, double diameter, std::string name)
{
    LevelSetSurface s(
        [f](const Vec3& x, double t) { return detail::eval_point(f, x, t); },
        [f](const Vec3& x, double t) {
            return detail::to_vec(ad_gradient<double>(f, Point<double>{x[0], x[1], x[2]}, t));
        },
        [f](const Vec3& x, double t) {
            return ad_time_derivative<double>(f, Point<double>{x[0], x[1], x[2]}, t);
        },
        diameter);
    s.hessian_ = [f](const Vec3& x, double t) {
        return detail::to_mat(ad_hessian<double>(f, Point<double>{x[0], x[1], x[2]}, t));
    };
    s.time_gradient_ = [f](const Vec3& x, double t) {
        const Point<double> p{x[0], x[1], x[2]};
        return Vec3(ad_second_derivative<double>(f, p, t, 0, 3), ad_second_derivative<double>(f, p, t, 1, 3),
                    ad_second_derivative<double>(f, p, t, 2, 3));
    };
    s.name_ = std::move(name);
    return s;
}

}  // namespace esfem
