#pragma once

#include <cstddef>
#include <utility>

#include "bpch/fespace.hpp"

namespace bpch {

enum class Scheme { GEps, JEps, M0, Const };

/// Per-step observables written to series.csv.
struct SeriesRecord {
  std::size_t step = 0;
  double time = 0.0;
  double energy = 0.0;  // E_h for GEps, quadrature E otherwise
  double volume = 0.0;
  double min_phi = 0.0;
  double max_phi = 0.0;
  double int_G_eps = 0.0;
  double int_J_eps = 0.0;
  double neg_part_sq = 0.0;
  double over_part_sq = 0.0;
  int picard_iters = 0;
};

enum class SingularFunctional { G, J };

/// Integral of phi (exact for P1, equal to the lumped sum).
double volume(const NodalField& phi);

/// Integral of I_h(G_eps(phi)) or I_h(J_eps(phi)), i.e. sum_i w_i G_eps(phi_i).
double singular_integral(const NodalField& phi, double eps, SingularFunctional which);

/// Exact integrals of (I_h(phi_-))^2 and (I_h((phi - 1)_+))^2.
std::pair<double, double> overshoot_norms(const NodalField& phi);

/// E_h for the GEps scheme, quadrature energy for the others.
double scheme_energy(const NodalField& phi, Scheme scheme, double eta);

SeriesRecord make_record(std::size_t step, double time, const NodalField& phi, Scheme scheme,
                         double eta, double eps, int picard_iters);

}  // namespace bpch
