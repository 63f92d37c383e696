#include "bpch/potentials.hpp"

namespace bpch {

double gradient_energy(const NodalField& phi) {
  const StructuredMesh& mesh = *phi.mesh;
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto g = element_gradient(mesh, phi.span(), e);
    total += (g[0] * g[0] + g[1] * g[1]) * mesh.element_measure();
  }
  return 0.5 * total;
}

double energy_lumped(const NodalField& phi, double eta) {
  const Vector w = lumped_mass(*phi.mesh);
  double potential_part = 0.0;
  for (Eigen::Index i = 0; i < phi.values.size(); ++i) {
    potential_part += w[i] * potential::F(phi.values[i], eta);
  }
  return gradient_energy(phi) + potential_part;
}

double energy_quadrature(const NodalField& phi, double eta) {
  const double potential_part = quad_integral(
      *phi.mesh, [eta](double p) { return potential::F(p, eta); }, phi);
  return gradient_energy(phi) + potential_part;
}

}  // namespace bpch
