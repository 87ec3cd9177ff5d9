#pragma once

#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include "podns/types.hpp"

namespace podns {

struct SvdResult {
  DenseMatrix U;
  Vector singular_values;  // descending, nonnegative
  DenseMatrix V;
};

// Direct sparse LU solve.  One step of iterative refinement keeps the
// relative residual near machine precision for well-posed systems.
inline Vector sparse_solve(const SparseMatrix& A, const Vector& b) {
  if (A.rows() != A.cols())
    throw DimensionMismatch("sparse_solve: matrix is not square");
  if (b.size() != A.rows())
    throw DimensionMismatch("sparse_solve: rhs length mismatch");
  if (b.size() == 0) return Vector();
  const Real bnorm = b.norm();
  if (bnorm == 0.0) return Vector::Zero(A.rows());

  Eigen::SparseMatrix<Real> Ac(A);  // SparseLU wants column-major
  Eigen::SparseLU<Eigen::SparseMatrix<Real>> lu;
  lu.compute(Ac);
  if (lu.info() != Eigen::Success)
    throw SingularMatrix("sparse_solve: factorization failed (" +
                         lu.lastErrorMessage() + ")");
  Vector x = lu.solve(b);
  Vector r = b - A * x;
  x += lu.solve(r);
  return x;
}

// Dense LU with partial pivoting, for the small reduced systems.
inline Vector dense_solve(const DenseMatrix& A, const Vector& b) {
  if (A.rows() != A.cols())
    throw DimensionMismatch("dense_solve: matrix is not square");
  if (b.size() != A.rows())
    throw DimensionMismatch("dense_solve: rhs length mismatch");
  if (b.size() == 0) return Vector();

  Eigen::PartialPivLU<DenseMatrix> lu(A);
  const Vector d = lu.matrixLU().diagonal().cwiseAbs();
  const Real dmax = d.maxCoeff();
  if (dmax == 0.0 || d.minCoeff() < 1e-14 * dmax)
    throw SingularMatrix("dense_solve: zero pivot beyond tolerance");
  Vector x = lu.solve(b);
  x += lu.solve(b - A * x);
  return x;
}

// Thin SVD via bidiagonal divide-and-conquer.
inline SvdResult thin_svd(const DenseMatrix& X) {
  if (X.rows() < 1 || X.cols() < 1)
    throw DimensionMismatch("thin_svd: empty matrix");
  Eigen::BDCSVD<DenseMatrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw ConvergenceFailure("thin_svd: iteration cap exceeded");
  return SvdResult{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

}  // namespace podns
