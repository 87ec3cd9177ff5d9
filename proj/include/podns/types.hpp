#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace podns {

using Real = double;
using Index = std::int64_t;

using Vector = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Column-major dense storage.
using DenseMatrix = Eigen::MatrixXd;

// Compressed-row storage; within each row column indices are sorted.
using SparseMatrix = Eigen::SparseMatrix<Real, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<Real>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrix : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct SingularReducedSystem : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct TopologyError : Error { using Error::Error; };
struct UnknownTag : Error { using Error::Error; };
struct UnknownProblem : Error { using Error::Error; };
struct IncompatibleData : Error { using Error::Error; };
struct ZeroSnapshot : Error { using Error::Error; };
struct AllZero : Error { using Error::Error; };
struct DegenerateSet : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct StageError : Error { using Error::Error; };

}  // namespace podns
