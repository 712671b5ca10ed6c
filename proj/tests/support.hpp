#pragma once

#include "esfem/assembly.hpp"
#include "esfem/fields.hpp"
#include "esfem/mesh.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace test {

inline double slope(double e_coarse, double e_fine, double h_coarse, double h_fine)
{
    return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

inline esfem::SurfaceMesh unit_sphere_mesh(int level)
{
    return esfem::icosphere(level, 1.0, esfem::surfaces::sphere(1.0), 0.0);
}

/// x1 x2 as an ambient field with hand-written derivatives.
inline esfem::AmbientField product_field()
{
    using esfem::Vec3;
    esfem::AmbientField f([](const Vec3& x, double) { return x[0] * x[1]; });
    f.with_gradient([](const Vec3& x, double) { return Vec3(x[1], x[0], 0.0); });
    f.with_hessian([](const Vec3&, double) {
        esfem::Mat3 h = esfem::Mat3::Zero();
        h(0, 1) = h(1, 0) = 1.0;
        return h;
    });
    f.with_time_derivative([](const Vec3&, double) { return 0.0; });
    return f;
}

}  // namespace test
