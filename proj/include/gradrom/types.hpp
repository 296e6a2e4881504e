#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace gradrom {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;
using Vector2 = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Thrown on invalid user-facing configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a solve fails to converge or an input is numerically unusable
// (CLI exit code 3).
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on file format or filesystem problems (CLI exit code 4).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gradrom
