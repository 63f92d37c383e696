#include "bpch/schemes.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cctype>
#include <cmath>

#include "bpch/mobility.hpp"
#include "bpch/potentials.hpp"

namespace bpch {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::GEps: return "GEPS";
    case Scheme::JEps: return "JEPS";
    case Scheme::M0: return "M0";
    case Scheme::Const: return "CONST";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (up == "GEPS") return Scheme::GEps;
  if (up == "JEPS") return Scheme::JEps;
  if (up == "M0") return Scheme::M0;
  if (up == "CONST") return Scheme::Const;
  throw std::invalid_argument("unknown scheme '" + name + "' (expected GEPS, JEPS, M0, CONST)");
}

void SchemeParams::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw std::invalid_argument(key + ": " + why);
  };
  if (!(eta > 0.0) || !std::isfinite(eta)) fail("eta", "must be positive");
  if (scheme == Scheme::GEps || scheme == Scheme::JEps) {
    if (!(eps > 0.0 && eps < 0.5)) fail("eps", "must lie in (0, 0.5)");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt", "must be positive");
  if (!(picard_tol > 0.0 && picard_tol < 1.0)) fail("picard_tol", "must lie in (0, 1)");
  if (picard_max_iter < 1) fail("picard_max_iter", "must be at least 1");
  if (!(linear_rtol > 0.0)) fail("linear_rtol", "must be positive");
}

namespace {

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b) {
  const double nb = b.norm();
  const double nr = (b - a * x).norm();
  return nb > 0.0 ? nr / nb : nr;
}

double mass_norm_sq(const SparseMatrix& m, const Vector& v) { return v.dot(m * v); }

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

PicardStepper::PicardStepper(MeshPtr mesh, SchemeParams params)
    : mesh_(std::move(mesh)), params_(params), solver_(*mesh_) {
  params_.validate();
  lumped_ = params_.scheme == Scheme::GEps || params_.scheme == Scheme::JEps;
  lumped_weights_ = lumped_mass(*mesh_);
  norm_mass_ = consistent_mass(*mesh_);
  if (lumped_) {
    const auto n = static_cast<Eigen::Index>(mesh_->num_nodes());
    mass_.resize(n, n);
    std::vector<Eigen::Triplet<double>> diag;
    diag.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) diag.emplace_back(i, i, lumped_weights_[i]);
    mass_.setFromTriplets(diag.begin(), diag.end());
  } else {
    mass_ = norm_mass_;
  }
  stiffness_ = stiffness(*mesh_);
}

ElementDiagCoeff PicardStepper::mobility_coefficient(const NodalField& phi) const {
  switch (params_.scheme) {
    case Scheme::GEps: return element_mobility_G(phi, params_.eps);
    case Scheme::JEps: return element_mobility_J(phi, params_.eps);
    case Scheme::M0: return element_mobility_M0(phi);
    case Scheme::Const: return ElementDiagCoeff(mesh_->dim(), mesh_->num_elements(), 1.0);
  }
  throw std::logic_error("unreachable scheme");
}

Vector PicardStepper::potential_rhs(const NodalField& phi_l, const NodalField& phi_n) const {
  const double eta = params_.eta;
  auto fprime = [eta](double pl, double pn) {
    return potential::Fcp(pl, eta) + potential::Fep(pn, eta);
  };
  if (params_.scheme == Scheme::GEps) {
    const NodalField nodal = interpolate(fprime, phi_l, phi_n);
    return lumped_weights_.cwiseProduct(nodal.values);
  }
  return quad_l2_product(*mesh_, fprime, phi_l, phi_n);
}

SparseMatrix PicardStepper::assemble(const ElementDiagCoeff& mobility) const {
  const auto n = static_cast<Eigen::Index>(mesh_->num_nodes());
  const SparseMatrix kd = stiffness(*mesh_, mobility);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(2 * mass_.nonZeros() + kd.nonZeros() +
                                         stiffness_.nonZeros()));
  auto append = [&trips](const SparseMatrix& m, Eigen::Index row0, Eigen::Index col0,
                         double scale) {
    for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
      for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
        trips.emplace_back(it.row() + row0, it.col() + col0, scale * it.value());
      }
    }
  };
  append(mass_, 0, 0, 1.0);
  append(kd, 0, n, params_.dt);
  append(stiffness_, n, 0, -1.0);
  append(mass_, n, n, 1.0);
  SparseMatrix a(2 * n, 2 * n);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

Vector PicardStepper::assemble_rhs(const NodalField& phi_n, const Vector& potential) const {
  const auto n = static_cast<Eigen::Index>(mesh_->num_nodes());
  Vector b(2 * n);
  b.head(n) = mass_ * phi_n.values;
  b.tail(n) = potential;
  return b;
}

StepResult PicardStepper::step(const NodalField& phi_n, const NodalField& mu_n) {
  const auto n = static_cast<Eigen::Index>(mesh_->num_nodes());
  StepResult out{phi_n, mu_n, {}};
  NodalField phi_l = phi_n;
  NodalField mu_l = mu_n;

  for (int it = 1; it <= params_.picard_max_iter; ++it) {
    const SparseMatrix a = assemble(mobility_coefficient(phi_l));
    const Vector b = assemble_rhs(phi_n, potential_rhs(phi_l, phi_n));
    solver_.factorize(a);
    Vector x = solver_.solve(b);
    double res = backward_error(a, x, b);
    // a few refinement sweeps if the direct solve is not accurate enough
    for (int r = 0; r < 3 && res > params_.linear_rtol && all_finite(x); ++r) {
      x += solver_.solve(b - a * x);
      res = backward_error(a, x, b);
    }
    out.report.linear_residual = std::max(out.report.linear_residual, res);
    out.report.iterations = it;

    if (!all_finite(x)) {
      out.report.converged = false;
      out.phi = phi_l;
      out.mu = mu_l;
      return out;
    }

    NodalField phi_next(mesh_, x.head(n));
    NodalField mu_next(mesh_, x.tail(n));
    const double num = mass_norm_sq(norm_mass_, phi_next.values - phi_l.values) +
                       mass_norm_sq(norm_mass_, mu_next.values - mu_l.values);
    const double den = mass_norm_sq(norm_mass_, phi_next.values) +
                       mass_norm_sq(norm_mass_, mu_next.values);
    const double inc = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    out.report.final_rel_increment = inc;
    phi_l = std::move(phi_next);
    mu_l = std::move(mu_next);
    if (inc <= params_.picard_tol) {
      out.report.converged = true;
      break;
    }
  }
  out.phi = std::move(phi_l);
  out.mu = std::move(mu_l);
  return out;
}

NodalField PicardStepper::initial_mu(const NodalField& phi0) const {
  const Vector rhs = stiffness_ * phi0.values + potential_rhs(phi0, phi0);
  if (lumped_) {
    return NodalField(mesh_, rhs.cwiseQuotient(lumped_weights_));
  }
  Eigen::SimplicialLDLT<SparseMatrix> chol(mass_);
  if (chol.info() != Eigen::Success) throw SolverError("mass matrix factorization failed");
  return NodalField(mesh_, chol.solve(rhs));
}

double PicardStepper::scheme_residual(const NodalField& phi_n, const NodalField& phi,
                                      const NodalField& mu) const {
  const auto n = static_cast<Eigen::Index>(mesh_->num_nodes());
  const SparseMatrix a = assemble(mobility_coefficient(phi));
  const Vector b = assemble_rhs(phi_n, potential_rhs(phi, phi_n));
  Vector x(2 * n);
  x.head(n) = phi.values;
  x.tail(n) = mu.values;
  return relative_residual(a, x, b);
}

NodalField initial_mu(const NodalField& phi0, const SchemeParams& params) {
  return PicardStepper(phi0.mesh, params).initial_mu(phi0);
}

namespace {

StepResult single_step(const NodalField& phi_n, const NodalField& mu_n, SchemeParams params,
                       std::initializer_list<Scheme> allowed, const char* name) {
  if (std::find(allowed.begin(), allowed.end(), params.scheme) == allowed.end()) {
    throw std::invalid_argument(std::string(name) + ": scheme " + to_string(params.scheme) +
                                " not handled here");
  }
  PicardStepper stepper(phi_n.mesh, params);
  return stepper.step(phi_n, mu_n);
}

}  // namespace

StepResult picard_step_geps(const NodalField& phi_n, const NodalField& mu_n,
                            const SchemeParams& params) {
  return single_step(phi_n, mu_n, params, {Scheme::GEps}, "picard_step_geps");
}

StepResult picard_step_jeps(const NodalField& phi_n, const NodalField& mu_n,
                            const SchemeParams& params) {
  return single_step(phi_n, mu_n, params, {Scheme::JEps}, "picard_step_jeps");
}

StepResult picard_step_m0(const NodalField& phi_n, const NodalField& mu_n,
                          const SchemeParams& params) {
  return single_step(phi_n, mu_n, params, {Scheme::M0, Scheme::Const}, "picard_step_m0");
}

SimulationResult run_simulation(const NodalField& phi0, const SimulationConfig& config,
                                const SnapshotCallback& on_snapshot) {
  if (config.record_every == 0) throw std::invalid_argument("record_every: must be positive");
  const SchemeParams& p = config.params;
  PicardStepper stepper(phi0.mesh, p);

  SimulationResult result;
  result.phi = phi0;
  result.mu = stepper.initial_mu(phi0);
  result.reports.reserve(config.steps);

  auto record = [&](std::size_t step, int iters) {
    result.series.push_back(
        make_record(step, static_cast<double>(step) * p.dt, result.phi, p.scheme, p.eta,
                    p.eps, iters));
  };
  auto snapshot = [&](std::size_t step) {
    Snapshot s{step, static_cast<double>(step) * p.dt, result.phi, result.mu};
    if (on_snapshot) {
      on_snapshot(s);
    } else {
      result.snapshots.push_back(std::move(s));
    }
  };

  record(0, 0);
  if (config.snapshot_every > 0) snapshot(0);

  for (std::size_t step = 1; step <= config.steps; ++step) {
    StepResult sr = stepper.step(result.phi, result.mu);
    result.phi = std::move(sr.phi);
    result.mu = std::move(sr.mu);
    result.reports.push_back(sr.report);
    result.steps_taken = step;
    const bool failed = !sr.report.converged;
    if (failed) {
      ++result.failed_steps;
      if (!result.first_failure) result.first_failure = step;
    }
    const bool last = step == config.steps;
    const bool abort = failed && config.abort_on_fail;
    if (step % config.record_every == 0 || last || failed) record(step, sr.report.iterations);
    if (config.snapshot_every > 0 && (step % config.snapshot_every == 0 || last || abort)) {
      snapshot(step);
    }
    if (abort) {
      result.status = RunStatus::PicardFailure;
      return result;
    }
  }
  if (result.failed_steps > 0) result.status = RunStatus::PicardFailure;
  return result;
}

}  // namespace bpch
