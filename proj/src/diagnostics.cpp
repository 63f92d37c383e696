#include "bpch/diagnostics.hpp"

#include <algorithm>

#include "bpch/mobility.hpp"
#include "bpch/potentials.hpp"

namespace bpch {

double volume(const NodalField& phi) { return lumped_mass(*phi.mesh).dot(phi.values); }

double singular_integral(const NodalField& phi, double eps, SingularFunctional which) {
  const Vector w = lumped_mass(*phi.mesh);
  double total = 0.0;
  if (which == SingularFunctional::G) {
    const GFunctional g(eps);
    for (Eigen::Index i = 0; i < w.size(); ++i) total += w[i] * g.value(phi.values[i]);
  } else {
    const JFunctional j(eps);
    for (Eigen::Index i = 0; i < w.size(); ++i) total += w[i] * j.value(phi.values[i]);
  }
  return total;
}

std::pair<double, double> overshoot_norms(const NodalField& phi) {
  const Vector neg = phi.values.array().min(0.0).matrix();
  const Vector over = (phi.values.array() - 1.0).max(0.0).matrix();
  if (neg.isZero(0.0) && over.isZero(0.0)) return {0.0, 0.0};
  const SparseMatrix mass = consistent_mass(*phi.mesh);
  return {neg.dot(mass * neg), over.dot(mass * over)};
}

double scheme_energy(const NodalField& phi, Scheme scheme, double eta) {
  return scheme == Scheme::GEps ? energy_lumped(phi, eta) : energy_quadrature(phi, eta);
}

SeriesRecord make_record(std::size_t step, double time, const NodalField& phi, Scheme scheme,
                         double eta, double eps, int picard_iters) {
  SeriesRecord r;
  r.step = step;
  r.time = time;
  r.energy = scheme_energy(phi, scheme, eta);
  r.volume = volume(phi);
  r.min_phi = phi.values.minCoeff();
  r.max_phi = phi.values.maxCoeff();
  r.int_G_eps = singular_integral(phi, eps, SingularFunctional::G);
  r.int_J_eps = singular_integral(phi, eps, SingularFunctional::J);
  std::tie(r.neg_part_sq, r.over_part_sq) = overshoot_norms(phi);
  r.picard_iters = picard_iters;
  return r;
}

}  // namespace bpch
