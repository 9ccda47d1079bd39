#pragma once

#include <array>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace goest {

/// Coordinates in (0,1)^d. The second entry is unused (zero) in 1D.
using Point = std::array<double, 2>;

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

}  // namespace goest
