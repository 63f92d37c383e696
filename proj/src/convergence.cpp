#include "bpch/convergence.hpp"

#include <cmath>
#include <string>

namespace bpch {

namespace {

void validate(const ConvergenceSpec& spec) {
  if (spec.sizes.empty()) throw std::invalid_argument("sizes: at least one size required");
  for (std::size_t n : spec.sizes) {
    if (n < 2 || spec.reference % n != 0) {
      throw std::invalid_argument("sizes: " + std::to_string(n) +
                                  " does not divide the reference size " +
                                  std::to_string(spec.reference));
    }
  }
}

NodalField final_field(const ConvergenceSpec& spec, std::size_t n, Scheme scheme) {
  const MeshPtr mesh = build_interval(n);
  SimulationConfig cfg;
  cfg.params = spec.params;
  cfg.params.scheme = scheme;
  cfg.steps = spec.steps;
  cfg.record_every = spec.steps > 0 ? spec.steps : 1;
  cfg.abort_on_fail = true;
  SimulationResult res = run_simulation(make_initial(spec.initial, mesh), cfg);
  if (res.status != RunStatus::Completed) {
    throw SolverError("Picard iteration did not converge at N=" + std::to_string(n) +
                      ", step " + std::to_string(res.first_failure.value_or(0)));
  }
  return res.phi;
}

}  // namespace

double convergence_rate(double e, double e_next, double h, double h_next) {
  return std::log(e / e_next) / std::log(h / h_next);
}

NodalField convergence_reference(const ConvergenceSpec& spec) {
  validate(spec);
  return final_field(spec, spec.reference, spec.reference_scheme.value_or(spec.params.scheme));
}

std::vector<ConvergenceRow> convergence_study(const ConvergenceSpec& spec,
                                              const NodalField& reference) {
  validate(spec);
  std::vector<ConvergenceRow> rows;
  for (std::size_t n : spec.sizes) {
    ConvergenceRow row;
    row.n = n;
    if (n == spec.reference && spec.reference_scheme.value_or(spec.params.scheme) ==
                                   spec.params.scheme) {
      row.e2 = 0.0;
    } else {
      row.e2 = l2_error(final_field(spec, n, spec.params.scheme), reference);
    }
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      row.r2 = convergence_rate(prev.e2, row.e2, 1.0 / static_cast<double>(prev.n),
                                1.0 / static_cast<double>(n));
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConvergenceRow> convergence_study(const ConvergenceSpec& spec) {
  return convergence_study(spec, convergence_reference(spec));
}

}  // namespace bpch
