#include <doctest.h>

#include <random>

#include "bpch/initial_conditions.hpp"
#include "bpch/potentials.hpp"
#include "bpch/schemes.hpp"
#include "oracles.hpp"

using namespace bpch;

namespace {

SchemeParams params_for(Scheme s, double eta, double eps, double dt) {
  SchemeParams p;
  p.scheme = s;
  p.eta = eta;
  p.eps = eps;
  p.dt = dt;
  return p;
}

constexpr Scheme kAll[] = {Scheme::GEps, Scheme::JEps, Scheme::M0, Scheme::Const};

// Spinodal data made symmetric under x -> 1 - x (1D) or the point reflection (2D).
NodalField symmetric_noise(const MeshPtr& m, double amplitude, unsigned seed) {
  const NodalField raw = spinodal(m, amplitude, seed);
  Vector v = raw.values;
  const auto n = v.size();
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 0.5 * (raw[i] + raw[n - 1 - i]);
  return NodalField(m, v);
}

}  // namespace

TEST_CASE("scheme names") {
  CHECK(parse_scheme("geps") == Scheme::GEps);
  CHECK(parse_scheme("JEPS") == Scheme::JEps);
  CHECK(parse_scheme("m0") == Scheme::M0);
  CHECK(parse_scheme("Const") == Scheme::Const);
  CHECK_THROWS_AS(parse_scheme("ADI"), std::invalid_argument);
  for (Scheme s : kAll) CHECK(parse_scheme(to_string(s)) == s);
}

TEST_CASE("parameter validation") {
  SchemeParams p;
  CHECK_NOTHROW(p.validate());
  p.eps = 0.7;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.scheme = Scheme::M0;
  CHECK_NOTHROW(p.validate());
  p.dt = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.dt = 1e-9;
  p.picard_tol = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.picard_tol = 1e-8;
  p.picard_max_iter = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("constant state is a fixed point after one iteration") {
  for (const MeshPtr& m : {build_interval(20), build_grid(5, 5)}) {
    for (Scheme s : kAll) {
      const SchemeParams p = params_for(s, 0.01, 1e-3, 1e-6);
      const NodalField phi(m, 0.5);
      const NodalField mu = initial_mu(phi, p);
      CHECK(mu.values.cwiseAbs().maxCoeff() <= 1e-12);
      PicardStepper st(m, p);
      const StepResult r = st.step(phi, mu);
      CHECK(r.report.converged);
      CHECK(r.report.iterations == 1);
      CHECK((r.phi.values.array() - 0.5).abs().maxCoeff() <= 1e-14);
      CHECK(r.mu.values.cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("single-step entry points check the scheme") {
  const MeshPtr m = build_interval(10);
  const NodalField phi(m, 0.5);
  const NodalField mu(m, 0.0);
  const SchemeParams g = params_for(Scheme::GEps, 0.01, 1e-3, 1e-6);
  const SchemeParams j = params_for(Scheme::JEps, 0.01, 1e-3, 1e-6);
  const SchemeParams c = params_for(Scheme::Const, 0.01, 1e-3, 1e-6);
  CHECK(picard_step_geps(phi, mu, g).report.converged);
  CHECK(picard_step_jeps(phi, mu, j).report.converged);
  CHECK(picard_step_m0(phi, mu, c).report.converged);
  CHECK_THROWS_AS(picard_step_geps(phi, mu, j), std::invalid_argument);
  CHECK_THROWS_AS(picard_step_m0(phi, mu, g), std::invalid_argument);
}

TEST_CASE("initial chemical potential against a dense oracle") {
  const int nx = 50;
  const double eta = 0.05;
  const MeshPtr m = build_interval(nx);
  const NodalField phi = spinodal(m, 0.4, 3);
  const oracle::Dense k = oracle::stiffness_1d(std::vector<double>(nx, 1.0));
  const oracle::Vec w = oracle::lumped_1d(nx);
  auto fp = [eta](double p) { return potential::Fp(p, eta); };

  oracle::Vec lumped_mu(nx + 1);
  const oracle::Vec kphi = k * phi.values;
  for (int i = 0; i <= nx; ++i) lumped_mu[i] = kphi[i] / w[i] + fp(phi[i]);
  const NodalField g = initial_mu(phi, params_for(Scheme::GEps, eta, 1e-3, 1e-6));
  const double scale = lumped_mu.cwiseAbs().maxCoeff();
  CHECK((g.values - lumped_mu).cwiseAbs().maxCoeff() <= 1e-12 * scale);

  const oracle::Vec rhs = kphi + oracle::load_1d(phi.values, fp);
  const oracle::Vec consistent_mu = oracle::mass_1d(nx).fullPivLu().solve(rhs);
  for (Scheme s : {Scheme::M0, Scheme::Const}) {
    const NodalField mu = initial_mu(phi, params_for(s, eta, 1e-3, 1e-6));
    CHECK((mu.values - consistent_mu).cwiseAbs().maxCoeff() <=
          1e-12 * consistent_mu.cwiseAbs().maxCoeff());
  }

  // the J scheme keeps lumped mass with the quadrature potential term
  const oracle::Vec j_mu = rhs.cwiseQuotient(w);
  const NodalField j = initial_mu(phi, params_for(Scheme::JEps, eta, 1e-3, 1e-6));
  CHECK((j.values - j_mu).cwiseAbs().maxCoeff() <= 1e-12 * j_mu.cwiseAbs().maxCoeff());
}

TEST_CASE("conservation, energy decay and fixed-point consistency") {
  struct Case {
    MeshPtr mesh;
    NodalField phi0;
    double eta, eps, dt;
    std::size_t steps;
  };
  const MeshPtr line = build_interval(200);
  const MeshPtr square = build_grid(12, 12);
  const std::vector<Case> cases = {
      {line, two_balls(line, 0.005), 0.005, 1e-20, 1e-10, 30},
      {line, spinodal(line, 0.2, 4), 0.02, 1e-3, 1e-7, 20},
      {square, spinodal(square, 0.2, 6), 0.05, 1e-4, 1e-6, 10},
  };
  for (const Case& c : cases) {
    for (Scheme s : kAll) {
      CAPTURE(to_string(s));
      CAPTURE(c.mesh->dim());
      const SchemeParams p = params_for(s, c.eta, c.eps, c.dt);
      PicardStepper st(c.mesh, p);
      NodalField phi = c.phi0;
      NodalField mu = st.initial_mu(phi);
      for (std::size_t n = 0; n < c.steps; ++n) {
        const StepResult r = st.step(phi, mu);
        REQUIRE(r.report.converged);
        CHECK(r.report.final_rel_increment <= p.picard_tol);
        CHECK(r.report.linear_residual <= p.linear_rtol);
        const double v0 = volume(phi), v1 = volume(r.phi);
        CHECK(std::abs(v1 - v0) <= 1e-11 * (1 + std::abs(v0)));
        const double e0 = scheme_energy(phi, s, p.eta), e1 = scheme_energy(r.phi, s, p.eta);
        CHECK(e1 - e0 <= 10 * p.picard_tol * (1 + std::abs(e0)));
        CHECK(st.scheme_residual(phi, r.phi, r.mu) <= 100 * p.picard_tol);
        phi = r.phi;
        mu = r.mu;
      }
    }
  }
}

TEST_CASE("reflection symmetry") {
  const MeshPtr line = build_interval(100);
  const MeshPtr square = build_grid(10, 10);
  for (const MeshPtr& m : {line, square}) {
    const NodalField phi0 = symmetric_noise(m, 0.3, 2);
    for (Scheme s : kAll) {
      SimulationConfig cfg;
      cfg.params = params_for(s, 0.03, 1e-3, 1e-6);
      cfg.steps = 10;
      const SimulationResult r = run_simulation(phi0, cfg);
      REQUIRE(r.status == RunStatus::Completed);
      const auto n = r.phi.values.size();
      double asym = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        asym = std::max(asym, std::abs(r.phi[i] - r.phi[n - 1 - i]));
      }
      CHECK(asym <= 1e-10);
    }
  }
}

TEST_CASE("M0 overshoots far more than the singular schemes at N=200") {
  const MeshPtr m = build_interval(200);
  const NodalField phi0 = two_balls(m, 0.005);
  double minimum[3];
  int k = 0;
  for (Scheme s : {Scheme::GEps, Scheme::JEps, Scheme::M0}) {
    SimulationConfig cfg;
    cfg.params = params_for(s, 0.005, 1e-20, 1e-10);
    cfg.steps = 50;
    const SimulationResult r = run_simulation(phi0, cfg);
    REQUIRE(r.status == RunStatus::Completed);
    double lo = 0.0;
    for (const SeriesRecord& rec : r.series) lo = std::min(lo, rec.min_phi);
    minimum[k++] = lo;
  }
  CHECK(minimum[2] < -1e-4);
  CHECK(minimum[0] > -1e-10);
  CHECK(minimum[1] > -1e-10);
  CHECK(minimum[2] < 1e3 * std::min(minimum[0], minimum[1]));
}

TEST_CASE("run bookkeeping") {
  const MeshPtr m = build_interval(40);
  const NodalField phi0 = spinodal(m, 0.2, 1);
  SimulationConfig cfg;
  cfg.params = params_for(Scheme::GEps, 0.02, 1e-3, 1e-7);

  cfg.steps = 0;
  const SimulationResult none = run_simulation(phi0, cfg);
  REQUIRE(none.series.size() == 1);
  CHECK(none.series[0].step == 0);
  CHECK(none.series[0].picard_iters == 0);
  CHECK(none.phi.values == phi0.values);
  CHECK(none.status == RunStatus::Completed);

  cfg.steps = 7;
  cfg.record_every = 3;
  cfg.snapshot_every = 5;
  std::vector<std::size_t> seen;
  const SimulationResult r =
      run_simulation(phi0, cfg, [&seen](const Snapshot& s) { seen.push_back(s.step); });
  std::vector<std::size_t> steps;
  for (const auto& rec : r.series) steps.push_back(rec.step);
  CHECK(steps == std::vector<std::size_t>{0, 3, 6, 7});
  CHECK(seen == std::vector<std::size_t>{0, 5, 7});
  CHECK(r.snapshots.empty());
  CHECK(r.reports.size() == 7);
  CHECK(r.series[1].time == doctest::Approx(3e-7));

  cfg.record_every = 0;
  CHECK_THROWS_AS(run_simulation(phi0, cfg), std::invalid_argument);
}

TEST_CASE("non-convergence is reported, not thrown") {
  const MeshPtr m = build_interval(100);
  const NodalField phi0 = two_balls(m, 0.01);
  SimulationConfig cfg;
  cfg.params = params_for(Scheme::GEps, 0.01, 1e-2, 1e-7);
  cfg.params.picard_max_iter = 1;
  cfg.steps = 5;

  PicardStepper st(m, cfg.params);
  const StepResult one = st.step(phi0, st.initial_mu(phi0));
  CHECK_FALSE(one.report.converged);
  CHECK(one.report.iterations == 1);
  CHECK(one.report.final_rel_increment > cfg.params.picard_tol);

  const SimulationResult aborted = run_simulation(phi0, cfg);
  CHECK(aborted.status == RunStatus::PicardFailure);
  CHECK(aborted.steps_taken == 1);
  REQUIRE(aborted.first_failure.has_value());
  CHECK(*aborted.first_failure == 1);
  CHECK(aborted.series.size() == 2);
  CHECK(aborted.phi.values.allFinite());

  cfg.abort_on_fail = false;
  const SimulationResult carried = run_simulation(phi0, cfg);
  CHECK(carried.status == RunStatus::PicardFailure);
  CHECK(carried.steps_taken == 5);
  CHECK(carried.failed_steps == 5);
  CHECK(carried.series.size() == 6);
}
