#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstddef>
#include <vector>

namespace esfem {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Nodal coefficient vector of a piecewise linear finite element function.
using Vector = Eigen::VectorXd;

using Triangle = std::array<int, 3>;

}  // namespace esfem
