#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpch/diagnostics.hpp"
#include "bpch/fespace.hpp"
#include "bpch/linear_solver.hpp"

namespace bpch {

std::string to_string(Scheme s);
/// Accepts GEPS, JEPS, M0, CONST (case-insensitive).
Scheme parse_scheme(const std::string& name);

struct SchemeParams {
  Scheme scheme = Scheme::GEps;
  double eta = 0.005;
  double eps = 1e-8;  // truncation; ignored by M0 and CONST
  double dt = 1e-10;
  double picard_tol = 1e-8;
  int picard_max_iter = 500;
  double linear_rtol = 1e-12;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct StepReport {
  int iterations = 0;
  bool converged = false;
  double final_rel_increment = 0.0;
  /// Largest normwise backward error of the inner linear solves.
  double linear_residual = 0.0;
};

struct StepResult {
  NodalField phi;
  NodalField mu;
  StepReport report;
};

/// Picard solver for one time step of a scheme on a fixed mesh.
///
/// Each Picard iterate solves the coupled linear system in (phi, mu)
///
///   Mp phi + dt K_D mu  = Mp phi^n
///   -K phi + Mm mu      = f(phi^l, phi^n)
///
/// where K is the unit stiffness and K_D the stiffness weighted by the
/// scheme's mobility evaluated at phi^l. GEps/JEps use the lumped mass for
/// Mp and Mm; M0/Const use the consistent mass. The potential term f is the
/// lumped product of I_h(Fc'(phi^l) + Fe'(phi^n)) for GEps and the
/// quadrature product of Fc'(phi^l) + Fe'(phi^n) for the other schemes.
/// The first equation is the mass balance multiplied by dt.
class PicardStepper {
 public:
  PicardStepper(MeshPtr mesh, SchemeParams params);

  const SchemeParams& params() const { return params_; }
  const MeshPtr& mesh() const { return mesh_; }

  StepResult step(const NodalField& phi_n, const NodalField& mu_n);

  /// mu solving the second scheme equation for phi = phi^n = phi0.
  NodalField initial_mu(const NodalField& phi0) const;

  /// Relative residual ||b - A x|| / ||b|| of the nonlinear scheme
  /// equations at x = (phi, mu), with A and b built from phi.
  double scheme_residual(const NodalField& phi_n, const NodalField& phi,
                         const NodalField& mu) const;

 private:
  ElementDiagCoeff mobility_coefficient(const NodalField& phi) const;
  Vector potential_rhs(const NodalField& phi_l, const NodalField& phi_n) const;
  SparseMatrix assemble(const ElementDiagCoeff& mobility) const;
  Vector assemble_rhs(const NodalField& phi_n, const Vector& potential) const;

  MeshPtr mesh_;
  SchemeParams params_;
  bool lumped_;
  Vector lumped_weights_;
  SparseMatrix mass_;         // lumped (diagonal) or consistent
  SparseMatrix norm_mass_;    // consistent mass, for the stopping rule
  SparseMatrix stiffness_;
  CoupledSolver solver_;
};

NodalField initial_mu(const NodalField& phi0, const SchemeParams& params);

StepResult picard_step_geps(const NodalField& phi_n, const NodalField& mu_n,
                            const SchemeParams& params);
StepResult picard_step_jeps(const NodalField& phi_n, const NodalField& mu_n,
                            const SchemeParams& params);
/// M0 scheme; with params.scheme == Scheme::Const the mobility is 1.
StepResult picard_step_m0(const NodalField& phi_n, const NodalField& mu_n,
                          const SchemeParams& params);

struct SimulationConfig {
  SchemeParams params;
  std::size_t steps = 0;
  std::size_t record_every = 1;
  std::size_t snapshot_every = 0;  // 0 disables snapshots
  bool abort_on_fail = true;
};

struct Snapshot {
  std::size_t step = 0;
  double time = 0.0;
  NodalField phi;
  NodalField mu;
};

enum class RunStatus { Completed, PicardFailure };

struct SimulationResult {
  NodalField phi;
  NodalField mu;
  std::vector<SeriesRecord> series;
  std::vector<Snapshot> snapshots;
  RunStatus status = RunStatus::Completed;
  std::size_t steps_taken = 0;
  std::size_t failed_steps = 0;
  std::optional<std::size_t> first_failure;
  /// Per-step reports, index = step - 1.
  std::vector<StepReport> reports;
};

using SnapshotCallback = std::function<void(const Snapshot&)>;

/// Advances phi0 by config.steps time steps. The initial mu comes from
/// initial_mu(). A record is taken at step 0, every record_every steps, at
/// the last step and at a failing step. When a step does not converge and
/// abort_on_fail is set the run stops there with RunStatus::PicardFailure.
SimulationResult run_simulation(const NodalField& phi0, const SimulationConfig& config,
                                const SnapshotCallback& on_snapshot = {});

}  // namespace bpch
