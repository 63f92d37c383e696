#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bpch/mesh.hpp"

namespace bpch {

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// P1 function: one value per mesh node.
struct NodalField {
  MeshPtr mesh;
  Vector values;

  NodalField() = default;
  NodalField(MeshPtr m, Vector v);
  /// Constant field.
  NodalField(MeshPtr m, double value);

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  double operator[](std::size_t i) const { return values[static_cast<Eigen::Index>(i)]; }
  std::span<const double> span() const { return {values.data(), size()}; }
};

/// Per-element diagonal coefficient (one entry per axis), i.e. a P0
/// diagonal matrix function. In 1D only entry [0] is used.
struct ElementDiagCoeff {
  int dim = 1;
  std::vector<std::array<double, 2>> entries;

  ElementDiagCoeff() = default;
  ElementDiagCoeff(int d, std::size_t num_elements, double fill = 0.0)
      : dim(d), entries(num_elements, {fill, d == 2 ? fill : 0.0}) {}

  std::size_t size() const { return entries.size(); }
  double operator()(std::size_t e, int k) const { return entries[e][static_cast<std::size_t>(k)]; }
  double& operator()(std::size_t e, int k) { return entries[e][static_cast<std::size_t>(k)]; }
};

/// Quadrature point on the reference simplex in barycentric coordinates
/// with respect to (x0, x1[, x2]); weights sum to one.
struct QuadPoint {
  std::array<double, 3> bary;
  double weight;
};

/// Rule exact for polynomials of degree 4 on intervals (3-point Gauss,
/// exact to degree 5) and triangles (6-point symmetric rule).
std::span<const QuadPoint> quadrature_rule(int dim);

/// Discrete gradient of a P1 function on element e: the difference quotient
/// along each axis.
std::array<double, 2> element_gradient(const StructuredMesh& mesh, std::span<const double> values,
                                       std::size_t e);

/// Diagonal of the lumped mass matrix, w_i = integral of the i-th hat.
Vector lumped_mass(const StructuredMesh& mesh);

/// (f, g)_h = sum_i w_i f_i g_i.
double lumped_inner(const NodalField& f, const NodalField& g);

/// Consistent (exact) P1 mass matrix.
SparseMatrix consistent_mass(const StructuredMesh& mesh);

/// Stiffness matrix A_ij = sum_e sum_k d_k d_k(phi_j) d_k(phi_i) |I_e|.
SparseMatrix stiffness(const StructuredMesh& mesh, const ElementDiagCoeff& coeff);
/// Unit-coefficient stiffness (Laplacian).
SparseMatrix stiffness(const StructuredMesh& mesh);

/// Nodal interpolation I_h: result_i = fn(f_i, g_i, ...).
template <class Fn, class... Fields>
NodalField interpolate(Fn&& fn, const NodalField& first, const Fields&... rest) {
  const std::size_t n = first.size();
  if (((rest.size() != n) || ...)) {
    throw AssemblyError("interpolate: field sizes differ");
  }
  Vector out(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double v = fn(first[i], rest[i]...);
    if (!std::isfinite(v)) {
      throw EvaluationError("interpolate: non-finite value at node " + std::to_string(i));
    }
    out[static_cast<Eigen::Index>(i)] = v;
  }
  return NodalField(first.mesh, std::move(out));
}

/// b_i = integral of g(f(x), ...) * phi_i(x), computed elementwise with
/// quadrature_rule(). The fields are P1 and evaluated at quadrature points.
template <class Fn, class... Fields>
Vector quad_l2_product(const StructuredMesh& mesh, Fn&& g, const Fields&... fields) {
  const auto rule = quadrature_rule(mesh.dim());
  const int nv = mesh.dim() + 1;
  const double measure = mesh.element_measure();
  Vector b = Vector::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (const Element& el : mesh.elements()) {
    for (const QuadPoint& q : rule) {
      auto at_point = [&](const NodalField& f) {
        double v = 0.0;
        for (int a = 0; a < nv; ++a) v += q.bary[a] * f[el.nodes[a]];
        return v;
      };
      const double gv = g(at_point(fields)...);
      if (!std::isfinite(gv)) {
        throw EvaluationError("quad_l2_product: non-finite integrand");
      }
      const double wg = q.weight * measure * gv;
      for (int a = 0; a < nv; ++a) {
        b[static_cast<Eigen::Index>(el.nodes[a])] += wg * q.bary[a];
      }
    }
  }
  return b;
}

/// Integral of g(f(x), ...) with quadrature_rule().
template <class Fn, class... Fields>
double quad_integral(const StructuredMesh& mesh, Fn&& g, const Fields&... fields) {
  const auto rule = quadrature_rule(mesh.dim());
  const int nv = mesh.dim() + 1;
  double total = 0.0;
  for (const Element& el : mesh.elements()) {
    double local = 0.0;
    for (const QuadPoint& q : rule) {
      auto at_point = [&](const NodalField& f) {
        double v = 0.0;
        for (int a = 0; a < nv; ++a) v += q.bary[a] * f[el.nodes[a]];
        return v;
      };
      local += q.weight * g(at_point(fields)...);
    }
    total += local * mesh.element_measure();
  }
  return total;
}

/// Element averages of a pointwise function of P1 fields, by quadrature.
template <class Fn, class... Fields>
std::vector<double> quad_element_average(const StructuredMesh& mesh, Fn&& g,
                                         const Fields&... fields) {
  const auto rule = quadrature_rule(mesh.dim());
  const int nv = mesh.dim() + 1;
  std::vector<double> avg(mesh.num_elements(), 0.0);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    for (const QuadPoint& q : rule) {
      auto at_point = [&](const NodalField& f) {
        double v = 0.0;
        for (int a = 0; a < nv; ++a) v += q.bary[a] * f[el.nodes[a]];
        return v;
      };
      avg[e] += q.weight * g(at_point(fields)...);
    }
  }
  return avg;
}

/// Exact L2 norm of a P1 function.
double l2_norm(const NodalField& f);

/// Nodal interpolant of a coarse P1 function on the nodes of a refining mesh.
NodalField prolongate(const NodalField& coarse, const MeshPtr& fine);

/// ||ref - I(f)||_L2 evaluated exactly on the reference mesh, where I(f) is
/// the nodal interpolant of f on the reference nodes.
double l2_error(const NodalField& f, const NodalField& ref);

}  // namespace bpch
