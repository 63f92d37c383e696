#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bpch/initial_conditions.hpp"
#include "bpch/schemes.hpp"

namespace bpch {

struct ConvergenceSpec {
  SchemeParams params;
  InitialSpec initial;
  std::size_t steps = 0;  // identical for every resolution
  std::vector<std::size_t> sizes;
  std::size_t reference = 12000;
  /// Scheme used for the reference solution; defaults to params.scheme.
  std::optional<Scheme> reference_scheme;
};

struct ConvergenceRow {
  std::size_t n = 0;
  double e2 = 0.0;
  std::optional<double> r2;  // empty for the first size
};

/// r2 = log(e / e_next) / log(h / h_next).
double convergence_rate(double e, double e_next, double h, double h_next);

/// Runs the reference and every study size in 1D to the common final time
/// and returns e2 = ||phi_ref - I(phi_N)||_L2 per size together with the
/// pairwise rates. Throws SolverError if the reference run fails to converge.
std::vector<ConvergenceRow> convergence_study(const ConvergenceSpec& spec);

/// Same, reusing an already computed reference solution.
std::vector<ConvergenceRow> convergence_study(const ConvergenceSpec& spec,
                                              const NodalField& reference);

/// The reference solution of `spec` (final phi).
NodalField convergence_reference(const ConvergenceSpec& spec);

}  // namespace bpch
