#include "bpch/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bpch/potentials.hpp"

namespace bpch {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Both functionals are symmetric about 1/2 (first derivatives antisymmetric),
// so everything is evaluated on the lower half. 1 - phi is exact for
// phi in [1/2, 2], which keeps the upper knot 1 - eps distinct from 1 even
// when eps is below the double-precision spacing near 1.
struct Folded {
  double x;     // distance to the nearer pure phase, min(phi, 1 - phi)
  double sign;  // +1 below 1/2, -1 above
};

Folded fold(double phi) {
  if (phi > 0.5) return {1.0 - phi, -1.0};
  return {phi, 1.0};
}

// -1: below eps, 0: inside [eps, 1 - eps], +1: above 1 - eps
int branch(double phi, double eps) {
  const Folded f = fold(phi);
  if (f.x < eps) return f.sign > 0 ? -1 : 1;
  return 0;
}

double one_minus(double phi) { return 1.0 - phi; }

bool nearly_equal(double a, double b) {
  return std::abs(b - a) <= kEqualNodesTol * (1.0 + std::abs(a));
}

void require_finite(double v, std::size_t e) {
  if (!std::isfinite(v)) {
    throw EvaluationError("non-finite nodal value on element " + std::to_string(e));
  }
}

template <class Quotient>
ElementDiagCoeff element_quotients(const NodalField& phi, Quotient&& quotient) {
  const StructuredMesh& mesh = *phi.mesh;
  ElementDiagCoeff coeff(mesh.dim(), mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    const double a = phi[el.nodes[0]];
    require_finite(a, e);
    for (int k = 0; k < mesh.dim(); ++k) {
      const double b = phi[el.nodes[k + 1]];
      require_finite(b, e);
      coeff(e, k) = quotient(a, b);
    }
  }
  return coeff;
}

}  // namespace

Truncation::Truncation(double eps) : eps_(eps) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw std::invalid_argument("truncation parameter eps must lie in (0, 0.5), got " +
                                std::to_string(eps));
  }
}

double mobility_Meps(double phi, double eps) {
  double x = fold(phi).x;
  x = std::max(x, eps);
  return x * one_minus(x);
}

// ---------------------------------------------------------------------------
// G_eps

GFunctional::GFunctional(double eps) : eps_(Truncation(eps).eps()) {
  g_knot_ = eps_ * std::log(eps_) + (1.0 - eps_) * std::log1p(-eps_) + 1.0;
  dg_knot_ = std::log(eps_) - std::log1p(-eps_);
  ddg_knot_ = 1.0 / (eps_ * (1.0 - eps_));
}

double GFunctional::value(double phi) const {
  const double x = fold(phi).x;
  if (x < eps_) {
    const double d = x - eps_;
    return g_knot_ + dg_knot_ * d + 0.5 * ddg_knot_ * d * d;
  }
  return x * std::log(x) + one_minus(x) * std::log1p(-x) + 1.0;
}

double GFunctional::d1(double phi) const {
  const Folded f = fold(phi);
  if (f.x < eps_) return f.sign * (dg_knot_ + ddg_knot_ * (f.x - eps_));
  return f.sign * (std::log(f.x) - std::log1p(-f.x));
}

double GFunctional::d2(double phi) const {
  const double x = fold(phi).x;
  if (x < eps_) return ddg_knot_;
  return 1.0 / (x * one_minus(x));
}

double GFunctional::mobility_quotient(double a, double b) const {
  if (nearly_equal(a, b)) return std::min(1.0 / d2(a), 0.25);
  const int ba = branch(a, eps_);
  const int bb = branch(b, eps_);
  if (ba == bb && ba != 0) return 1.0 / ddg_knot_;
  const double delta = b - a;
  double dg;
  if (ba == 0 && bb == 0) {
    // ln(b/a) - ln((1-b)/(1-a)) without cancellation
    dg = std::log1p(delta / a) - std::log1p(-delta / one_minus(a));
  } else {
    dg = d1(b) - d1(a);
  }
  return std::min(delta / dg, 0.25);
}

// ---------------------------------------------------------------------------
// J_eps

namespace {

double j_inner(double x) {
  const double as = std::asin(std::sqrt(x));
  return (1.0 - 2.0 * x) * (kHalfPi - as) + std::sqrt(x * one_minus(x)) + kHalfPi * x;
}

double dj_inner(double x) { return 2.0 * std::asin(std::sqrt(x)) - kHalfPi; }

double ddj_inner(double x) { return 1.0 / std::sqrt(x * one_minus(x)); }

}  // namespace

JFunctional::JFunctional(double eps) : eps_(Truncation(eps).eps()) {
  j_knot_ = j_inner(eps_);
  dj_knot_ = dj_inner(eps_);
  ddj_knot_ = ddj_inner(eps_);
}

double JFunctional::value(double phi) const {
  const double x = fold(phi).x;
  if (x < eps_) {
    const double d = x - eps_;
    return j_knot_ + dj_knot_ * d + 0.5 * ddj_knot_ * d * d;
  }
  return j_inner(x);
}

double JFunctional::d1(double phi) const {
  const Folded f = fold(phi);
  if (f.x < eps_) return f.sign * (dj_knot_ + ddj_knot_ * (f.x - eps_));
  return f.sign * dj_inner(f.x);
}

double JFunctional::d2(double phi) const {
  const double x = fold(phi).x;
  if (x < eps_) return ddj_knot_;
  return ddj_inner(x);
}

double JFunctional::mobility_quotient(double a, double b) const {
  if (nearly_equal(a, b)) {
    const double r = 1.0 / d2(a);
    return std::min(r * r, 0.25);
  }
  const int ba = branch(a, eps_);
  const int bb = branch(b, eps_);
  if (ba == bb && ba != 0) {
    const double r = 1.0 / ddj_knot_;
    return r * r;
  }
  const double delta = b - a;
  double dj;
  if (ba == 0 && bb == 0) {
    // asin(sqrt b) - asin(sqrt a) = asin((b - a) / (sqrt(b(1-a)) + sqrt(a(1-b))))
    const double s = std::sqrt(b * one_minus(a)) + std::sqrt(a * one_minus(b));
    dj = 2.0 * std::asin(std::clamp(delta / s, -1.0, 1.0));
  } else {
    dj = d1(b) - d1(a);
  }
  const double r = delta / dj;
  return std::min(r * r, 0.25);
}

double g_family(double phi, double eps, int order) {
  const GFunctional g(eps);
  switch (order) {
    case 0: return g.value(phi);
    case 1: return g.d1(phi);
    case 2: return g.d2(phi);
    default: throw std::invalid_argument("g_family: order must be 0, 1 or 2");
  }
}

double j_family(double phi, double eps, int order) {
  const JFunctional j(eps);
  switch (order) {
    case 0: return j.value(phi);
    case 1: return j.d1(phi);
    case 2: return j.d2(phi);
    default: throw std::invalid_argument("j_family: order must be 0, 1 or 2");
  }
}

ElementDiagCoeff element_mobility_G(const NodalField& phi, double eps) {
  const GFunctional g(eps);
  return element_quotients(phi, [&g](double a, double b) { return g.mobility_quotient(a, b); });
}

ElementDiagCoeff element_mobility_J(const NodalField& phi, double eps) {
  const JFunctional j(eps);
  return element_quotients(phi, [&j](double a, double b) { return j.mobility_quotient(a, b); });
}

ElementDiagCoeff element_R(const NodalField& phi, double eta) {
  return element_quotients(phi, [eta](double a, double b) {
    return potential::Fcp_divided_difference(a, b, eta);
  });
}

ElementDiagCoeff element_mobility_M0(const NodalField& phi) {
  const StructuredMesh& mesh = *phi.mesh;
  const auto avg = quad_element_average(mesh, [](double p) { return mobility_M0(p); }, phi);
  ElementDiagCoeff coeff(mesh.dim(), mesh.num_elements());
  for (std::size_t e = 0; e < avg.size(); ++e) {
    coeff(e, 0) = avg[e];
    if (mesh.dim() == 2) coeff(e, 1) = avg[e];
  }
  return coeff;
}

}  // namespace bpch
