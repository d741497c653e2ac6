#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace hamnet {

using Vec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat = Eigen::MatrixXd;
using IntVec = Eigen::VectorXi;
using BitMat = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace hamnet
