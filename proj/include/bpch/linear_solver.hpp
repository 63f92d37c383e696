#pragma once

#include <Eigen/SparseLU>

#include <stdexcept>
#include <vector>

#include "bpch/fespace.hpp"

namespace bpch {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Direct solver for the 2n x 2n coupled (phi, mu) systems of a mesh.
///
/// On interval meshes the unknowns are interleaved (phi_0, mu_0, phi_1, ...)
/// which makes the matrix banded with three sub- and super-diagonals; it is
/// factorized with LAPACK's banded LU (partial pivoting). On 2D meshes a
/// general sparse LU is used, with the symbolic analysis done once.
class CoupledSolver {
 public:
  explicit CoupledSolver(const StructuredMesh& mesh);

  /// Throws SolverError if the matrix is singular.
  void factorize(const SparseMatrix& a);
  Vector solve(const Vector& b) const;

 private:
  Eigen::Index interleaved(Eigen::Index r) const { return r < n_ ? 2 * r : 2 * (r - n_) + 1; }

  bool banded_;
  Eigen::Index n_;
  static constexpr int kLower = 3;
  static constexpr int kUpper = 3;
  int ldab_ = 2 * kLower + kUpper + 1;
  std::vector<double> band_;
  std::vector<int> pivots_;

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  bool analyzed_ = false;
};

/// Normwise backward error ||b - Ax||_inf / (||A||_inf ||x||_inf + ||b||_inf).
double backward_error(const SparseMatrix& a, const Vector& x, const Vector& b);

}  // namespace bpch
