#pragma once

#include <Eigen/Core>

namespace fatigue {

using Scalar  = double;
using Index   = Eigen::Index;
using ArrayX  = Eigen::ArrayX<Scalar>;
using ArrayXX = Eigen::ArrayXX<Scalar>;
using MatrixX = Eigen::MatrixX<Scalar>;

inline constexpr Scalar days_per_year = 365.0;

}  // namespace fatigue
