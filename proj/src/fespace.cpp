#include "bpch/fespace.hpp"

#include <string>

namespace bpch {

namespace {

const std::array<QuadPoint, 3> kGauss3 = [] {
  const double r = 0.5 * std::sqrt(3.0 / 5.0);
  return std::array<QuadPoint, 3>{{
      {{0.5 + r, 0.5 - r, 0.0}, 5.0 / 18.0},
      {{0.5, 0.5, 0.0}, 8.0 / 18.0},
      {{0.5 - r, 0.5 + r, 0.0}, 5.0 / 18.0},
  }};
}();

// Symmetric 6-point rule, degree 4.
const std::array<QuadPoint, 6> kTriangle6 = [] {
  const double a1 = 0.445948490915965;
  const double w1 = 0.223381589678011;
  const double a2 = 0.091576213509771;
  const double w2 = 0.109951743655322;
  return std::array<QuadPoint, 6>{{
      {{a1, a1, 1.0 - 2.0 * a1}, w1},
      {{a1, 1.0 - 2.0 * a1, a1}, w1},
      {{1.0 - 2.0 * a1, a1, a1}, w1},
      {{a2, a2, 1.0 - 2.0 * a2}, w2},
      {{a2, 1.0 - 2.0 * a2, a2}, w2},
      {{1.0 - 2.0 * a2, a2, a2}, w2},
  }};
}();

void require_same_mesh(const NodalField& f, const NodalField& g, const char* what) {
  if (f.size() != g.size() || (f.mesh && g.mesh && f.mesh != g.mesh &&
                               f.mesh->num_nodes() != g.mesh->num_nodes())) {
    throw AssemblyError(std::string(what) + ": fields live on different meshes");
  }
}

}  // namespace

NodalField::NodalField(MeshPtr m, Vector v) : mesh(std::move(m)), values(std::move(v)) {
  if (mesh && static_cast<std::size_t>(values.size()) != mesh->num_nodes()) {
    throw AssemblyError("NodalField: " + std::to_string(values.size()) + " values for " +
                        std::to_string(mesh->num_nodes()) + " nodes");
  }
}

NodalField::NodalField(MeshPtr m, double value)
    : mesh(std::move(m)),
      values(Vector::Constant(static_cast<Eigen::Index>(mesh->num_nodes()), value)) {}

std::span<const QuadPoint> quadrature_rule(int dim) {
  if (dim == 1) return {kGauss3.data(), kGauss3.size()};
  return {kTriangle6.data(), kTriangle6.size()};
}

std::array<double, 2> element_gradient(const StructuredMesh& mesh, std::span<const double> values,
                                       std::size_t e) {
  const Element& el = mesh.element(e);
  std::array<double, 2> g{0.0, 0.0};
  for (int k = 0; k < mesh.dim(); ++k) {
    g[k] = (values[el.nodes[k + 1]] - values[el.nodes[0]]) / el.step[k];
  }
  return g;
}

Vector lumped_mass(const StructuredMesh& mesh) {
  Vector w = Vector::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  const int nv = mesh.dim() + 1;
  const double share = mesh.element_measure() / nv;
  for (const Element& el : mesh.elements()) {
    for (int a = 0; a < nv; ++a) w[static_cast<Eigen::Index>(el.nodes[a])] += share;
  }
  return w;
}

double lumped_inner(const NodalField& f, const NodalField& g) {
  require_same_mesh(f, g, "lumped_inner");
  const Vector w = lumped_mass(*f.mesh);
  return (w.array() * f.values.array() * g.values.array()).sum();
}

SparseMatrix consistent_mass(const StructuredMesh& mesh) {
  const int nv = mesh.dim() + 1;
  // exact integral of phi_a phi_b on a simplex: |I| (1 + delta_ab) / ((d+1)(d+2))
  const double base = mesh.element_measure() / static_cast<double>(nv * (nv + 1));
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh.num_elements() * nv * nv);
  for (const Element& el : mesh.elements()) {
    for (int a = 0; a < nv; ++a) {
      for (int b = 0; b < nv; ++b) {
        trips.emplace_back(static_cast<int>(el.nodes[a]), static_cast<int>(el.nodes[b]),
                           a == b ? 2.0 * base : base);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SparseMatrix stiffness(const StructuredMesh& mesh, const ElementDiagCoeff& coeff) {
  if (coeff.size() != mesh.num_elements()) {
    throw AssemblyError("stiffness: coefficient has " + std::to_string(coeff.size()) +
                        " elements, mesh has " + std::to_string(mesh.num_elements()));
  }
  const int dim = mesh.dim();
  const int nv = dim + 1;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh.num_elements() * nv * nv);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    // basis derivative along axis k: -1/step at x0, +1/step at x_k, 0 elsewhere
    double local[3][3] = {};
    for (int k = 0; k < dim; ++k) {
      const double d = coeff(e, k);
      if (!(d >= 0.0) || !std::isfinite(d)) {
        throw AssemblyError("stiffness: invalid coefficient " + std::to_string(d) +
                            " on element " + std::to_string(e));
      }
      const double c = d * mesh.element_measure() / (el.step[k] * el.step[k]);
      local[0][0] += c;
      local[k + 1][k + 1] += c;
      local[0][k + 1] -= c;
      local[k + 1][0] -= c;
    }
    for (int a = 0; a < nv; ++a) {
      for (int b = 0; b < nv; ++b) {
        trips.emplace_back(static_cast<int>(el.nodes[a]), static_cast<int>(el.nodes[b]),
                           local[a][b]);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  SparseMatrix a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

SparseMatrix stiffness(const StructuredMesh& mesh) {
  return stiffness(mesh, ElementDiagCoeff(mesh.dim(), mesh.num_elements(), 1.0));
}

double l2_norm(const NodalField& f) {
  const SparseMatrix m = consistent_mass(*f.mesh);
  return std::sqrt(std::max(0.0, f.values.dot(m * f.values)));
}

NodalField prolongate(const NodalField& coarse, const MeshPtr& fine) {
  if (!fine->refines(*coarse.mesh)) {
    throw MeshError("prolongate: reference mesh does not refine the coarse mesh");
  }
  if (fine == coarse.mesh) return coarse;
  Vector v(static_cast<Eigen::Index>(fine->num_nodes()));
  for (std::size_t i = 0; i < fine->num_nodes(); ++i) {
    const auto& x = fine->coord(i);
    v[static_cast<Eigen::Index>(i)] = coarse.mesh->evaluate(coarse.span(), x[0], x[1]);
  }
  return NodalField(fine, std::move(v));
}

double l2_error(const NodalField& f, const NodalField& ref) {
  const NodalField fine = prolongate(f, ref.mesh);
  return l2_norm(NodalField(ref.mesh, ref.values - fine.values));
}

}  // namespace bpch
