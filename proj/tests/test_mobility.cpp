#include <doctest.h>

#include <numbers>
#include <random>

#include "bpch/mobility.hpp"
#include "bpch/potentials.hpp"
#include "oracles.hpp"

using namespace bpch;

namespace {

NodalField random_field(const MeshPtr& m, double lo, double hi, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(static_cast<Eigen::Index>(m->num_nodes()));
  for (auto& x : v) x = u(gen);
  return NodalField(m, v);
}

NodalField pair_field(double a, double b) {
  return NodalField(build_interval(2), Vector{{a, b, b}});
}

}  // namespace

TEST_CASE("degenerate and truncated mobility") {
  CHECK(mobility_M0(0.5) == 0.25);
  CHECK(mobility_M0(-0.1) == 0.0);
  CHECK(mobility_M0(1.2) == 0.0);
  CHECK(mobility_M0(0.015) == doctest::Approx(0.014775).epsilon(1e-13));
  CHECK(mobility_Meps(0.001, 0.015) == doctest::Approx(0.014775).epsilon(1e-13));
  CHECK(mobility_Meps(0.999, 0.015) == doctest::Approx(0.014775).epsilon(1e-12));
  for (double eps : {1e-20, 1e-3, 0.3, 0.49}) CHECK(mobility_Meps(0.5, eps) == 0.25);
}

TEST_CASE("truncated mobility stays within eps(1-eps) of M0") {
  for (double eps : {1e-4, 1e-2, 0.1, 0.3}) {
    double worst = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double p = -0.5 + 2.0 * i / 20000.0;
      worst = std::max(worst, std::abs(mobility_Meps(p, eps) - mobility_M0(p)));
    }
    CHECK(worst <= eps * (1 - eps) * (1 + 1e-12));
  }
}

TEST_CASE("truncation parameter range") {
  CHECK_THROWS_AS(Truncation(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Truncation(0.5), std::invalid_argument);
  CHECK_THROWS_AS(Truncation(-1e-3), std::invalid_argument);
  CHECK_NOTHROW(Truncation(1e-20));
  CHECK_THROWS_AS(g_family(0.3, 0.1, 3), std::invalid_argument);
  CHECK_THROWS_AS(j_family(0.3, 0.1, -1), std::invalid_argument);
}

TEST_CASE("G family values") {
  CHECK(g_family(0.5, 1e-3, 0) == doctest::Approx(1 - std::log(2.0)).epsilon(1e-14));
  CHECK(g_family(0.5, 1e-3, 1) == 0.0);
  CHECK(g_family(0.5, 1e-3, 2) == doctest::Approx(4.0));
  CHECK(g_family(-0.1, 0.1, 0) == doctest::Approx(1.336584).epsilon(1e-6));
  const double eps = 0.01;
  CHECK(g_family(eps, eps, 0) ==
        doctest::Approx(eps * std::log(eps) + (1 - eps) * std::log(1 - eps) + 1).epsilon(1e-14));
}

TEST_CASE("J family values") {
  CHECK(j_family(0.5, 1e-3, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(j_family(0.5, 1e-3, 2) == doctest::Approx(2.0));
  CHECK(j_family(0.5, 1e-3, 0) == doctest::Approx(0.5 + std::numbers::pi / 4).epsilon(1e-14));
}

TEST_CASE("functionals match a long double oracle") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (double eps : {1e-2, 1e-4, 1e-8}) {
    for (int i = 0; i < 500; ++i) {
      const double p = u(gen);
      CHECK(g_family(p, eps, 0) == doctest::Approx(oracle::G(p, eps)).epsilon(1e-11));
      CHECK(j_family(p, eps, 0) == doctest::Approx(oracle::J(p, eps)).epsilon(1e-11));
    }
  }
}

TEST_CASE("lower bounds outside the truncation interval") {
  std::mt19937 gen(3);
  for (double eps : {1e-1, 1e-2, 1e-4}) {
    std::uniform_real_distribution<double> below(-1.0, eps);
    std::uniform_real_distribution<double> above(1 - eps, 2.0);
    for (int i = 0; i < 300; ++i) {
      const double p = below(gen);
      const double neg = std::min(p, 0.0);
      CHECK(g_family(p, eps, 0) >= neg * neg / (2 * eps * (1 - eps)) * (1 - 1e-12));
      const double q = above(gen);
      const double over = std::max(q - 1.0, 0.0);
      CHECK(j_family(q, eps, 0) >= over * over / (2 * std::sqrt(eps * (1 - eps))) * (1 - 1e-12));
      CHECK(g_family(q, eps, 0) >= 0.0);
      CHECK(j_family(p, eps, 0) >= 0.0);
    }
  }
}

TEST_CASE("second derivatives are the reciprocal mobilities") {
  for (double eps : {1e-3, 0.05}) {
    for (double p : {-0.3, 0.0, 0.02, 0.3, 0.5, 0.97, 1.0, 1.4}) {
      CHECK(g_family(p, eps, 2) == doctest::Approx(1.0 / mobility_Meps(p, eps)).epsilon(1e-13));
      CHECK(j_family(p, eps, 2) ==
            doctest::Approx(1.0 / std::sqrt(mobility_Meps(p, eps))).epsilon(1e-13));
      CHECK(g_family(p, eps, 2) > 0.0);
      CHECK(j_family(p, eps, 2) > 0.0);
    }
  }
}

TEST_CASE("functionals are C2 across the knots") {
  const double eps = 0.05;
  for (int order = 0; order <= 2; ++order) {
    for (double knot : {eps, 1 - eps}) {
      for (auto fam : {&g_family, &j_family}) {
        const double d1 = 1e-5, d2 = 1e-6;
        const double jump1 = std::abs(fam(knot + d1, eps, order) - fam(knot - d1, eps, order));
        const double jump2 = std::abs(fam(knot + d2, eps, order) - fam(knot - d2, eps, order));
        // continuous: the jump shrinks linearly with the offset
        CHECK(jump2 <= jump1 * 0.2 + 1e-12);
      }
    }
  }
}

TEST_CASE("derivatives match central differences") {
  const double eps = 0.02;
  for (double p : {-0.4, 0.01, 0.2, 0.5, 0.75, 0.99, 1.3}) {
    for (auto fam : {&g_family, &j_family}) {
      for (int order = 0; order < 2; ++order) {
        const double d = 1e-6;
        const double fd = (fam(p + d, eps, order) - fam(p - d, eps, order)) / (2 * d);
        CHECK(fd == doctest::Approx(fam(p, eps, order + 1)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("first derivatives are strictly increasing") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (double eps : {1e-2, 1e-6}) {
    for (int i = 0; i < 1000; ++i) {
      double a = u(gen), b = u(gen);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-9) continue;
      CHECK(g_family(a, eps, 1) < g_family(b, eps, 1));
      CHECK(j_family(a, eps, 1) < j_family(b, eps, 1));
    }
  }
}

TEST_CASE("element mobility examples") {
  CHECK(element_mobility_G(pair_field(0.5, 0.5), 1e-3)(0, 0) == 0.25);
  CHECK(element_mobility_G(pair_field(0.2, 0.8), 0.1)(0, 0) ==
        doctest::Approx(0.6 / std::log(16.0)).epsilon(1e-13));
  CHECK(element_mobility_J(pair_field(0.5, 0.5), 1e-3)(0, 0) == doctest::Approx(0.25));
  CHECK(element_mobility_J(pair_field(0.2, 0.8), 0.1)(0, 0) ==
        doctest::Approx(0.217342).epsilon(1e-5));
  const double eta = 0.01;
  CHECK(element_R(pair_field(0.5, 0.5), eta)(0, 0) == 0.0);
  CHECK(element_R(pair_field(0.2, 0.8), eta)(0, 0) ==
        doctest::Approx(0.09 / (eta * eta)).epsilon(1e-13));
  CHECK(element_mobility_M0(pair_field(0.5, 0.5))(0, 0) == doctest::Approx(0.25));
}

TEST_CASE("element coefficients reject non-finite values") {
  const NodalField bad(build_interval(2), Vector{{0.1, std::nan(""), 0.3}});
  CHECK_THROWS_AS(element_mobility_G(bad, 0.01), EvaluationError);
  CHECK_THROWS_AS(element_mobility_J(bad, 0.01), EvaluationError);
  CHECK_THROWS_AS(element_R(bad, 0.01), EvaluationError);
}

TEST_CASE("mean-value bound on random fields") {
  for (const MeshPtr& m : {build_interval(64), build_grid(8, 8)}) {
    for (double eps : {1e-1, 1e-3, 1e-8, 1e-20}) {
      const NodalField phi = random_field(m, -1.0, 2.0, 17);
      const ElementDiagCoeff g = element_mobility_G(phi, eps);
      const ElementDiagCoeff j = element_mobility_J(phi, eps);
      for (std::size_t e = 0; e < m->num_elements(); ++e) {
        for (int k = 0; k < m->dim(); ++k) {
          CHECK(g(e, k) > 0.0);
          CHECK(g(e, k) <= 0.25);
          CHECK(j(e, k) > 0.0);
          CHECK(j(e, k) <= 0.25);
        }
      }
    }
  }
}

TEST_CASE("discrete chain rule identities on random fields") {
  // the right-hand sides are differences of nodal values taken in long double
  for (const MeshPtr& m : {build_interval(64), build_grid(8, 8)}) {
    for (unsigned seed = 0; seed < 10; ++seed) {
      const double eps = 1e-3;
      const double eta = 0.01;
      const NodalField phi = random_field(m, -1.0, 2.0, seed);
      const ElementDiagCoeff mg = element_mobility_G(phi, eps);
      const ElementDiagCoeff mj = element_mobility_J(phi, eps);
      const ElementDiagCoeff r = element_R(phi, eta);
      double worst = 0.0;
      for (const Element& el : m->elements()) {
        const std::size_t e = &el - m->elements().data();
        for (int k = 0; k < m->dim(); ++k) {
          const long double a = phi[el.nodes[0]], b = phi[el.nodes[k + 1]];
          const long double dg = oracle::G1(b, eps) - oracle::G1(a, eps);
          const long double dj = oracle::J1(b, eps) - oracle::J1(a, eps);
          const long double df = oracle::Fcp(b, eta) - oracle::Fcp(a, eta);
          const long double d = b - a;
          worst = std::max(worst, static_cast<double>(std::fabs(mg(e, k) * dg - d) / std::fabs(d)));
          worst = std::max(worst, static_cast<double>(
                                      std::fabs(std::sqrt(static_cast<long double>(mj(e, k))) * dj - d) /
                                      std::fabs(d)));
          worst = std::max(worst, static_cast<double>(std::fabs(r(e, k) * d - df) / std::fabs(df)));
        }
      }
      CHECK(worst <= 1e-11);
    }
  }
}
