#!/usr/bin/env python3
"""Generate closed-form evaluators for the product-decay manufactured solution.

Exact solution u = exp(-k t) x1 x2 on the ellipsoid level set
    d(x, t) = x1^2 / a(t) + x2^2 + x3^2 - R^2.
The chemical potential is extended off the surface with the level-set formula
    w = g(u) / eps - eps * (Lap u - n^T D^2 u n - H n . grad u)
and the source is b = u_t + v . grad u - LB(w) + u * V * H, which is what the
generic finite-difference route in geometry.cpp evaluates as well.

Usage: python3 tools/gen_closed_form.py > src/closed_form_ellipsoid.cpp
"""
import sympy as sp

x1, x2, x3 = sp.symbols("x1 x2 x3", real=True)
a, a_dot, radius, eps, decay, rate = sp.symbols("a a_dot radius eps decay rate", real=True)
X = [x1, x2, x3]

d = x1**2 / a + x2**2 + x3**2 - radius**2
d_t = -a_dot * x1**2 / a**2
u = decay * x1 * x2  # decay = exp(-rate t)


def grad(f):
    return [sp.diff(f, v) for v in X]


def hess(f):
    return [[sp.diff(f, v, w) for w in X] for v in X]


gd = grad(d)
hd = hess(d)
gnorm = sp.sqrt(sum(g**2 for g in gd))
nu = [g / gnorm for g in gd]
curv = (sum(hd[i][i] for i in range(3))
        - sum(nu[i] * hd[i][j] * nu[j] for i in range(3) for j in range(3))) / gnorm


def laplace_beltrami(f):
    g, h = grad(f), hess(f)
    return (sum(h[i][i] for i in range(3))
            - sum(nu[i] * h[i][j] * nu[j] for i in range(3) for j in range(3))
            - curv * sum(nu[i] * g[i] for i in range(3)))


w = (u**3 - u) / eps - eps * laplace_beltrami(u)
normal_speed = -d_t / gnorm
material = -rate * u + sum(normal_speed * nu[i] * sp.diff(u, X[i]) for i in range(3))
source = material - laplace_beltrami(w) + u * normal_speed * curv

outputs = [("w", w)] + [(f"grad_w[{i}]", gw) for i, gw in enumerate(grad(w))] + [("source", source)]


def emit(name, exprs, targets, ret):
    rep, red = sp.cse(exprs, symbols=sp.numbered_symbols("c"), optimizations="basic")
    lines = [f"{ret} {name}(const Vec3& x, double t, const EllipsoidShape& shape, double eps, double rate)",
             "{",
             "  const double x1 = x[0];",
             "  const double x2 = x[1];",
             "  const double x3 = x[2];",
             "  const double a = shape.axis_factor(t);",
             "  const double a_dot = shape.axis_factor_rate(t);",
             "  const double radius = shape.radius;",
             "  const double decay = std::exp(-rate * t);",
             "  (void)x3;",
             "  (void)a_dot;",
             "  (void)radius;"]
    for sym, e in rep:
        lines.append(f"  const double {sym} = {sp.ccode(e)};")
    if ret == "double":
        lines.append(f"  return {sp.ccode(red[0])};")
    else:
        lines.append("  Vec3 grad_w;")
        for tgt, e in zip(targets, red):
            lines.append(f"  {tgt} = {sp.ccode(e)};")
        lines.append("  return grad_w;")
    lines.append("}")
    return "\n".join(lines)


print("// Generated by tools/gen_closed_form.py. Do not edit by hand.")
print()
print('#include "esfem/closed_form.hpp"')
print()
print("#include <cmath>")
print()
print("namespace esfem::closed_form {")
print()
print(emit("product_decay_w", [w], None, "double"))
print()
print(emit("product_decay_w_gradient", [e for _, e in outputs[1:4]], [n for n, _ in outputs[1:4]], "Vec3"))
print()
print(emit("product_decay_source", [source], None, "double"))
print()
print("}  // namespace esfem::closed_form")
