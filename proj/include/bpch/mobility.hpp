#pragma once

#include <stdexcept>

#include "bpch/fespace.hpp"

namespace bpch {

/// Truncation parameter of the mobility, 0 < eps < 1/2.
class Truncation {
 public:
  explicit Truncation(double eps);
  double eps() const { return eps_; }

 private:
  double eps_;
};

/// M(phi) = phi (1 - phi).
inline double mobility(double phi) { return phi * (1.0 - phi); }

/// Degenerate mobility truncated by zero outside [0, 1].
inline double mobility_M0(double phi) {
  return (phi >= 0.0 && phi <= 1.0) ? phi * (1.0 - phi) : 0.0;
}

/// Mobility clamped at phi = eps and phi = 1 - eps.
double mobility_Meps(double phi, double eps);

/// G_eps with G_eps'' = 1 / M_eps: phi ln phi + (1-phi) ln(1-phi) + 1 on
/// [eps, 1-eps], continued by its second-order Taylor polynomial outside.
class GFunctional {
 public:
  explicit GFunctional(double eps);
  double eps() const { return eps_; }
  double value(double phi) const;
  double d1(double phi) const;
  double d2(double phi) const;
  /// (phi_b - phi_a) / (G'(phi_b) - G'(phi_a)) with the fallback 1/G''(phi_a)
  /// for (numerically) equal arguments; clamped to at most 1/4.
  double mobility_quotient(double phi_a, double phi_b) const;

 private:
  double eps_;
  double g_knot_, dg_knot_, ddg_knot_;  // G, G', G'' at phi = eps
};

/// J_eps with J_eps'' = 1 / sqrt(M_eps), built like GFunctional from
/// J(phi) = (1 - 2 phi) asin(sqrt(1-phi)) + sqrt(phi (1-phi)) + 2 asin(sqrt(1/2)) phi.
class JFunctional {
 public:
  explicit JFunctional(double eps);
  double eps() const { return eps_; }
  double value(double phi) const;
  double d1(double phi) const;
  double d2(double phi) const;
  /// ((phi_b - phi_a) / (J'(phi_b) - J'(phi_a)))^2 with the fallback
  /// (1/J''(phi_a))^2; clamped to at most 1/4.
  double mobility_quotient(double phi_a, double phi_b) const;

 private:
  double eps_;
  double j_knot_, dj_knot_, ddj_knot_;
};

/// G_eps^(order)(phi), order in {0, 1, 2}.
double g_family(double phi, double eps, int order);
/// J_eps^(order)(phi), order in {0, 1, 2}.
double j_family(double phi, double eps, int order);

/// Relative threshold below which two nodal values are treated as equal by
/// the difference-quotient coefficients.
inline constexpr double kEqualNodesTol = 1e-12;

/// P0 diagonal mobility M^G: per element and axis the quotient
/// (phi(x_k) - phi(x_0)) / (G'(phi(x_k)) - G'(phi(x_0))).
ElementDiagCoeff element_mobility_G(const NodalField& phi, double eps);

/// P0 diagonal mobility M^J: the squared quotient with J' in place of G'.
ElementDiagCoeff element_mobility_J(const NodalField& phi, double eps);

/// P0 diagonal matrix R with grad I_h(Fc'(phi)) = R grad phi.
ElementDiagCoeff element_R(const NodalField& phi, double eta);

/// Element average of M0(phi) at quadrature points (same value on every axis).
ElementDiagCoeff element_mobility_M0(const NodalField& phi);

}  // namespace bpch
