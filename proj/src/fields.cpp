#include "esfem/fields.hpp"

#include <cmath>
#include <utility>

namespace esfem {

AmbientField::AmbientField(ScalarFn value, double fd_step) : value_(std::move(value)), fd_step_(fd_step) {}

AmbientField AmbientField::constant(double c)
{
    AmbientField f([c](const Vec3&, double) { return c; });
    f.gradient_ = [](const Vec3&, double) { return Vec3::Zero().eval(); };
    f.hessian_ = [](const Vec3&, double) { return Mat3::Zero().eval(); };
    f.time_derivative_ = [](const Vec3&, double) { return 0.0; };
    f.mode_ = DiffMode::closed_form;
    f.name_ = "constant";
    return f;
}

AmbientField& AmbientField::with_gradient(VectorFn g)
{
    gradient_ = std::move(g);
    mode_ = DiffMode::closed_form;
    return *this;
}

AmbientField& AmbientField::with_hessian(MatrixFn h)
{
    hessian_ = std::move(h);
    return *this;
}

AmbientField& AmbientField::with_time_derivative(ScalarFn dt)
{
    time_derivative_ = std::move(dt);
    return *this;
}

AmbientField& AmbientField::named(std::string name)
{
    name_ = std::move(name);
    return *this;
}

Vec3 AmbientField::gradient(const Vec3& x, double t) const
{
    if (gradient_) return gradient_(x, t);
    Vec3 g;
    for (int k = 0; k < 3; ++k) {
        Vec3 e = Vec3::Zero();
        e[k] = fd_step_;
        g[k] = (value_(x + e, t) - value_(x - e, t)) / (2.0 * fd_step_);
    }
    return g;
}

Mat3 AmbientField::hessian(const Vec3& x, double t) const
{
    if (hessian_) return hessian_(x, t);
    Mat3 h;
    const double s = fd_step_;
    if (gradient_) {
        for (int k = 0; k < 3; ++k) {
            Vec3 e = Vec3::Zero();
            e[k] = s;
            h.col(k) = (gradient_(x + e, t) - gradient_(x - e, t)) / (2.0 * s);
        }
        return 0.5 * (h + h.transpose());
    }
    const double f0 = value_(x, t);
    for (int i = 0; i < 3; ++i) {
        Vec3 ei = Vec3::Zero();
        ei[i] = s;
        h(i, i) = (value_(x + ei, t) - 2.0 * f0 + value_(x - ei, t)) / (s * s);
        for (int j = i + 1; j < 3; ++j) {
            Vec3 ej = Vec3::Zero();
            ej[j] = s;
            h(i, j) = (value_(x + ei + ej, t) - value_(x + ei - ej, t) - value_(x - ei + ej, t) +
                       value_(x - ei - ej, t)) /
                      (4.0 * s * s);
            h(j, i) = h(i, j);
        }
    }
    return h;
}

double AmbientField::time_derivative(const Vec3& x, double t) const
{
    if (time_derivative_) return time_derivative_(x, t);
    return (value_(x, t + fd_step_) - value_(x, t - fd_step_)) / (2.0 * fd_step_);
}

// ---------------------------------------------------------------------------

LevelSetSurface::LevelSetSurface(ScalarFn value, VectorFn gradient, ScalarFn time_derivative, double diameter)
    : value_(std::move(value)),
      gradient_(std::move(gradient)),
      time_derivative_(std::move(time_derivative)),
      diameter_(diameter)
{
}

LevelSetSurface& LevelSetSurface::with_hessian(MatrixFn h)
{
    hessian_ = std::move(h);
    return *this;
}

LevelSetSurface& LevelSetSurface::with_time_gradient(VectorFn g)
{
    time_gradient_ = std::move(g);
    return *this;
}

LevelSetSurface& LevelSetSurface::named(std::string name)
{
    name_ = std::move(name);
    return *this;
}

LevelSetSurface& LevelSetSurface::mark_static()
{
    static_ = true;
    return *this;
}

Mat3 LevelSetSurface::hessian(const Vec3& x, double t) const
{
    if (hessian_) return hessian_(x, t);
    const double s = fd_step();
    Mat3 h;
    for (int k = 0; k < 3; ++k) {
        Vec3 e = Vec3::Zero();
        e[k] = s;
        h.col(k) = (gradient_(x + e, t) - gradient_(x - e, t)) / (2.0 * s);
    }
    return 0.5 * (h + h.transpose());
}

Vec3 LevelSetSurface::time_gradient(const Vec3& x, double t) const
{
    if (time_gradient_) return time_gradient_(x, t);
    const double s = fd_step();
    return (gradient_(x, t + s) - gradient_(x, t - s)) / (2.0 * s);
}

// ---------------------------------------------------------------------------

double EllipsoidShape::axis_factor(double t) const { return 1.0 + amplitude * std::sin(omega * t); }

double EllipsoidShape::axis_factor_rate(double t) const { return amplitude * omega * std::cos(omega * t); }

namespace surfaces {

LevelSetSurface sphere(double radius)
{
    const double r2 = radius * radius;
    LevelSetSurface s([r2](const Vec3& x, double) { return x.squaredNorm() - r2; },
                      [](const Vec3& x, double) { return Vec3(2.0 * x); },
                      [](const Vec3&, double) { return 0.0; }, 2.0 * radius);
    s.with_hessian([](const Vec3&, double) { return Mat3(2.0 * Mat3::Identity()); })
        .with_time_gradient([](const Vec3&, double) { return Vec3::Zero().eval(); })
        .named("sphere")
        .mark_static();
    return s;
}

LevelSetSurface expanding_sphere(double radius0, double rate)
{
    auto r2 = [radius0, rate](double t) { return radius0 * radius0 * std::exp(2.0 * rate * t); };
    LevelSetSurface s([r2](const Vec3& x, double t) { return x.squaredNorm() - r2(t); },
                      [](const Vec3& x, double) { return Vec3(2.0 * x); },
                      [r2, rate](const Vec3&, double t) { return -2.0 * rate * r2(t); }, 2.0 * radius0);
    s.with_hessian([](const Vec3&, double) { return Mat3(2.0 * Mat3::Identity()); })
        .with_time_gradient([](const Vec3&, double) { return Vec3::Zero().eval(); })
        .named("expanding_sphere");
    return s;
}

LevelSetSurface evolving_ellipsoid(const EllipsoidShape& shape)
{
    const double r2 = shape.radius * shape.radius;
    LevelSetSurface s(
        [shape, r2](const Vec3& x, double t) {
            return x[0] * x[0] / shape.axis_factor(t) + x[1] * x[1] + x[2] * x[2] - r2;
        },
        [shape](const Vec3& x, double t) { return Vec3(2.0 * x[0] / shape.axis_factor(t), 2.0 * x[1], 2.0 * x[2]); },
        [shape](const Vec3& x, double t) {
            const double a = shape.axis_factor(t);
            return -shape.axis_factor_rate(t) * x[0] * x[0] / (a * a);
        },
        2.0 * shape.radius * std::sqrt(1.0 + std::abs(shape.amplitude)));
    s.with_hessian([shape](const Vec3&, double t) {
         Mat3 h = 2.0 * Mat3::Identity();
         h(0, 0) = 2.0 / shape.axis_factor(t);
         return h;
     })
        .with_time_gradient([shape](const Vec3& x, double t) {
            const double a = shape.axis_factor(t);
            return Vec3(-2.0 * shape.axis_factor_rate(t) * x[0] / (a * a), 0.0, 0.0);
        })
        .named("ellipsoid");
    if (shape.amplitude == 0.0 || shape.omega == 0.0) s.mark_static();
    return s;
}

}  // namespace surfaces

}  // namespace esfem
