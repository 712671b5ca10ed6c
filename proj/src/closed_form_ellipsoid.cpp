// Generated by tools/gen_closed_form.py. Do not edit by hand.

#include "esfem/closed_form.hpp"

#include <cmath>

namespace esfem::closed_form {

double product_decay_w(const Vec3& x, double t, const EllipsoidShape& shape, double eps, double rate)
{
  const double x1 = x[0];
  const double x2 = x[1];
  const double x3 = x[2];
  const double a = shape.axis_factor(t);
  const double a_dot = shape.axis_factor_rate(t);
  const double radius = shape.radius;
  const double decay = std::exp(-rate * t);
  (void)x3;
  (void)a_dot;
  (void)radius;
  const double c0 = pow(x1, 2);
  const double c1 = pow(x2, 2);
  const double c2 = pow(x3, 2);
  const double c3 = 1.0/(c1 + c2 + c0/pow(a, 2));
  const double c4 = 1.0/a;
  return decay*x1*x2*(c3*eps*(2*c4 + (c4 + 1)*(-c1*c3 - c2*c3 + c4 + 2 - c0*c3/pow(a, 3))) + (c0*c1*pow(decay, 2) - 1)/eps);
}

Vec3 product_decay_w_gradient(const Vec3& x, double t, const EllipsoidShape& shape, double eps, double rate)
{
  const double x1 = x[0];
  const double x2 = x[1];
  const double x3 = x[2];
  const double a = shape.axis_factor(t);
  const double a_dot = shape.axis_factor_rate(t);
  const double radius = shape.radius;
  const double decay = std::exp(-rate * t);
  (void)x3;
  (void)a_dot;
  (void)radius;
  const double c0 = pow(x1, 2);
  const double c1 = pow(x2, 2);
  const double c2 = (3*c0*c1*pow(decay, 2) - 1)/eps;
  const double c3 = 1.0/a;
  const double c4 = 2*c3;
  const double c5 = pow(x3, 2);
  const double c6 = c0/pow(a, 2);
  const double c7 = c1 + c5 + c6;
  const double c8 = 1.0/c7;
  const double c9 = c0*c8/pow(a, 3);
  const double c10 = c1*c8;
  const double c11 = c10 - c3;
  const double c12 = c5*c8 + c9;
  const double c13 = c11 + c12;
  const double c14 = c6*c8;
  const double c15 = c3 + 1;
  const double c16 = 2*c15;
  const double c17 = c13 - 2;
  const double c18 = -c17;
  const double c19 = c15*c18;
  const double c20 = c8*eps;
  const double c21 = decay*x2;
  const double c22 = 4*c3;
  const double c23 = c16*(c10 + c12 - 1);
  Vec3 grad_w;
  grad_w[0] = c21*(c2 + c20*(c13*c14*c16 - c14*c19 + c18*(-c14 + c15 - c9) + c4 - 4*c9));
  grad_w[1] = decay*x1*(c2 + c20*(-c10*c19 - c10*c22 + c10*c23 + c18*(-c10*c3 - c11 + 1) + c4));
  grad_w[2] = c21*eps*x1*x3*(c16*c17 - c22 + c23)/pow(c7, 2);
  return grad_w;
}

double product_decay_source(const Vec3& x, double t, const EllipsoidShape& shape, double eps, double rate)
{
  const double x1 = x[0];
  const double x2 = x[1];
  const double x3 = x[2];
  const double a = shape.axis_factor(t);
  const double a_dot = shape.axis_factor_rate(t);
  const double radius = shape.radius;
  const double decay = std::exp(-rate * t);
  (void)x3;
  (void)a_dot;
  (void)radius;
  const double c0 = pow(x2, 2);
  const double c1 = pow(x3, 2);
  const double c2 = pow(a, -2);
  const double c3 = pow(x1, 2);
  const double c4 = c2*c3;
  const double c5 = c0 + c1 + c4;
  const double c6 = pow(c5, -2);
  const double c7 = 1.0/a;
  const double c8 = 4*c7;
  const double c9 = 1.0/c5;
  const double c10 = c1*c9;
  const double c11 = c7 + 1;
  const double c12 = -c7;
  const double c13 = c0*c9;
  const double c14 = pow(a, -3);
  const double c15 = c14*c3;
  const double c16 = c15*c9;
  const double c17 = c13 + c16;
  const double c18 = c10 + c17;
  const double c19 = c12 + c18;
  const double c20 = c19 - 2;
  const double c21 = c11*c20;
  const double c22 = -c21;
  const double c23 = c18 - 1;
  const double c24 = c11*c23;
  const double c25 = 5*c10;
  const double c26 = 3*c10;
  const double c27 = c12 - 1;
  const double c28 = -c13;
  const double c29 = 4*c6;
  const double c30 = c1*c29;
  const double c31 = -c16;
  const double c32 = c0*c30 + c31 + 1;
  const double c33 = 2*c11;
  const double c34 = 8*c10*c24 - 16*c10*c7 + c20*(c26*c7 + c26 + c27) + c21*c25 + c22 + c33*(c15*c30 - c25 + c28 + c29*pow(x3, 4) + c32) + c8;
  const double c35 = pow(decay, 2);
  const double c36 = c3*c35;
  const double c37 = 1.0/eps;
  const double c38 = 6*c37;
  const double c39 = 12*c7;
  const double c40 = c13*c7;
  const double c41 = -16*c40;
  const double c42 = 4*c13;
  const double c43 = 3*c13;
  const double c44 = c27 + c40;
  const double c45 = c13 + c44;
  const double c46 = c23*c45;
  const double c47 = c20*c45;
  const double c48 = -c10;
  const double c49 = c0*c15;
  const double c50 = c6*eps;
  const double c51 = c36*c38 - c50*(c21*c43 + c22 + c24*c42 + c33*(-5*c13 + c29*c49 + c29*pow(x2, 4) + c32 + c48) + c39 + c41 + 4*c46 + 5*c47);
  const double c52 = c0*c36;
  const double c53 = -c37*(3*c52 - 1);
  const double c54 = 2*c7;
  const double c55 = -c54;
  const double c56 = 2*c13;
  const double c57 = -c20;
  const double c58 = c9*eps;
  const double c59 = c4*c9;
  const double c60 = c19*c59;
  const double c61 = c11 + c31 - c59;
  const double c62 = 2*c24;
  const double c63 = c0*c4;
  const double c64 = c6*c63;
  const double c65 = 3*c6;
  const double c66 = c63*c65;
  const double c67 = 2*c10 + 2*c16 + c27 + c56;
  const double c68 = c29*c63;
  const double c69 = c23*c61;
  const double c70 = c20*c61;
  const double c71 = c1*eps/pow(c5, 3);
  const double c72 = 16*c16;
  const double c73 = 4*c19;
  const double c74 = c11*c59;
  const double c75 = c73*c74;
  const double c76 = 3*c59;
  const double c77 = c0*c35*c38 + c2*c50*(-c21*c76 + c21 - c33*(-5*c16 + c28 + c30*c4 + c48 + c68 + c7 + c29*pow(x1, 4)/pow(a, 5)) - c39 + c61*c73 + 5*c70 + c72 - c75);
  return decay*x1*x2*((1.0/2.0)*a_dot*c14*c3*c9 + (1.0/2.0)*a_dot*c2*c3*c9 - 1.0/2.0*a_dot*c20*c59 + c0*c51*c9 + c2*c3*c77*c9 + c20*c9*(2*c1*c50*(-c21 - c24 - c55) + c53 + c58*(c0*c11*c57*c9 + 4*c0*c7*c9 - c24*c56 + c45*c57 - c54) + c7*(c53 + c58*(c11*c2*c3*c57*c9 + 4*c14*c3*c9 - c33*c60 - c54 - c57*c61))) + c34*c6*eps - c34*c71 - c51 - c54*c71*(-c20*(c11 - 3*c16 - c76) + 4*c21*c59 + c59*c62 + 4*c67*c74 - 2*c69 - c70 - c72 + c75 + c8) - c54*c9*(-c37*(9*c52 - 1) + c58*(c11*c67*c68 - c13*c70 + c13*c8 + 4*c16 + c19*c33*c64 - c20*(c17 + c44 - c49*c65 + c59 - c66) + c21*c66 + 2*c45*c60 + c47*c59 - 16*c49*c6 + c55 - c56*c69 + c62*c64)) - 2*c71*(14*c13*c24 + c20*(c27 + 3*c40 + c43) + c21*c42 + c41 + 2*c46 + c47 + c8) - c77 - rate);
}

}  // namespace esfem::closed_form
