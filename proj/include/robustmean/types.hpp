#pragma once

#include <Eigen/Dense>

namespace robustmean {

// Observations are rows; row-major storage keeps per-observation access
// contiguous and matches C-ordered numpy arrays.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace robustmean
