#include "bpch/linear_solver.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

namespace bpch {

CoupledSolver::CoupledSolver(const StructuredMesh& mesh)
    : banded_(mesh.dim() == 1), n_(static_cast<Eigen::Index>(mesh.num_nodes())) {
  if (banded_) {
    band_.assign(static_cast<std::size_t>(ldab_ * 2 * n_), 0.0);
    pivots_.assign(static_cast<std::size_t>(2 * n_), 0);
  }
}

void CoupledSolver::factorize(const SparseMatrix& a) {
  if (a.rows() != 2 * n_ || a.cols() != 2 * n_) {
    throw SolverError("coupled system has wrong dimensions");
  }
  if (!banded_) {
    if (!analyzed_) {
      lu_.analyzePattern(a);
      analyzed_ = true;
    }
    lu_.factorize(a);
    if (lu_.info() != Eigen::Success) {
      throw SolverError("sparse LU factorization failed: " + lu_.lastErrorMessage());
    }
    return;
  }

  std::fill(band_.begin(), band_.end(), 0.0);
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      const Eigen::Index i = interleaved(it.row());
      const Eigen::Index j = interleaved(it.col());
      if (i - j > kLower || j - i > kUpper) {
        throw SolverError("coupled system is not banded as expected");
      }
      band_[static_cast<std::size_t>(kLower + kUpper + i - j + j * ldab_)] += it.value();
    }
  }
  const lapack_int m = static_cast<lapack_int>(2 * n_);
  const lapack_int info =
      LAPACKE_dgbtrf(LAPACK_COL_MAJOR, m, m, kLower, kUpper, band_.data(), ldab_, pivots_.data());
  if (info != 0) {
    throw SolverError("banded LU factorization failed (info = " + std::to_string(info) + ")");
  }
}

Vector CoupledSolver::solve(const Vector& b) const {
  if (!banded_) return lu_.solve(b);
  Vector z(2 * n_);
  for (Eigen::Index r = 0; r < 2 * n_; ++r) z[interleaved(r)] = b[r];
  const lapack_int m = static_cast<lapack_int>(2 * n_);
  const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', m, kLower, kUpper, 1,
                                         band_.data(), ldab_, pivots_.data(), z.data(), m);
  if (info != 0) throw SolverError("banded solve failed");
  Vector x(2 * n_);
  for (Eigen::Index r = 0; r < 2 * n_; ++r) x[r] = z[interleaved(r)];
  return x;
}

double backward_error(const SparseMatrix& a, const Vector& x, const Vector& b) {
  Vector row_abs = Vector::Zero(a.rows());
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) row_abs[it.row()] += std::abs(it.value());
  }
  const double denom = row_abs.maxCoeff() * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
  const double r = (b - a * x).lpNorm<Eigen::Infinity>();
  return denom > 0.0 ? r / denom : r;
}

}  // namespace bpch
