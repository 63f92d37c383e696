#pragma once

#include "bpch/fespace.hpp"

namespace bpch {

/// Ginzburg-Landau double well F(phi) = phi^2 (phi - 1)^2 / (4 eta^2) and
/// its convex/concave splitting F = Fc + Fe with
///   Fc(phi) = (phi^4 - 2 phi^3 + 3/2 phi^2) / (4 eta^2),
///   Fe(phi) = -phi^2 / (8 eta^2).
/// The polynomials are evaluated as-is for any real phi.
namespace potential {

inline double F(double phi, double eta) {
  const double s = phi * (phi - 1.0);
  return s * s / (4.0 * eta * eta);
}

inline double Fp(double phi, double eta) {
  return (phi * phi * phi - 1.5 * phi * phi + 0.5 * phi) / (eta * eta);
}

inline double Fpp(double phi, double eta) {
  return (3.0 * phi * phi - 3.0 * phi + 0.5) / (eta * eta);
}

inline double Fc(double phi, double eta) {
  const double p2 = phi * phi;
  return (p2 * p2 - 2.0 * p2 * phi + 1.5 * p2) / (4.0 * eta * eta);
}

inline double Fcp(double phi, double eta) {
  return (phi * phi * phi - 1.5 * phi * phi + 0.75 * phi) / (eta * eta);
}

inline double Fcpp(double phi, double eta) {
  const double d = phi - 0.5;
  return 3.0 * d * d / (eta * eta);
}

inline double Fe(double phi, double eta) { return -phi * phi / (8.0 * eta * eta); }

inline double Fep(double phi, double eta) { return -phi / (4.0 * eta * eta); }

inline double Fepp(double /*phi*/, double eta) { return -1.0 / (4.0 * eta * eta); }

/// Divided difference (Fc'(b) - Fc'(a)) / (b - a), expanded so that it is
/// exact when a == b (it then equals Fc''(a)).
inline double Fcp_divided_difference(double a, double b, double eta) {
  return (a * a + a * b + b * b - 1.5 * (a + b) + 0.75) / (eta * eta);
}

}  // namespace potential

/// 1/2 (grad phi, grad phi), exact for P1.
double gradient_energy(const NodalField& phi);

/// E_h(phi) = 1/2 |grad phi|^2 + integral of I_h(F(phi)) (lumped potential).
double energy_lumped(const NodalField& phi, double eta);

/// E(phi) = 1/2 |grad phi|^2 + integral of F(phi) by degree-4 quadrature.
double energy_quadrature(const NodalField& phi, double eta);

}  // namespace bpch
