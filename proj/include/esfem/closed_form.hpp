#pragma once

#include "esfem/fields.hpp"
#include "esfem/types.hpp"

// Closed-form evaluators for u = exp(-rate t) x1 x2 on the ellipsoid family,
// with g(u) = u^3 - u and f = 0. Generated by tools/gen_closed_form.py.

namespace esfem::closed_form {

double product_decay_w(const Vec3& x, double t, const EllipsoidShape& shape, double eps, double rate);
Vec3 product_decay_w_gradient(const Vec3& x, double t, const EllipsoidShape& shape, double eps, double rate);
double product_decay_source(const Vec3& x, double t, const EllipsoidShape& shape, double eps, double rate);

}  // namespace esfem::closed_form
