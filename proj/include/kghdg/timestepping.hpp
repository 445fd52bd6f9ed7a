#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "kghdg/condense.hpp"
#include "kghdg/nonlinear.hpp"
#include "kghdg/projection.hpp"
#include "kghdg/space.hpp"

namespace kghdg {

using SpaceTimeField = std::function<double(const Point&, double)>;

/// Data of u_tt - lap u + u^3 - u = g with u(0) = u0, u_t(0) = u1.
struct ProblemData {
  ScalarField u0;
  ScalarField laplacian_u0;
  VectorField grad_u0;
  ScalarField u1;
  VectorField grad_u1;
  SpaceTimeField source;    ///< empty: g = 0
  SpaceTimeField dirichlet; ///< empty: homogeneous boundary values
};

enum class Scheme { conservative, nonconservative };

struct TimeConfig {
  double dt = 0.1;
  double final_time = 1.0;
  Scheme scheme = Scheme::conservative;
  NewtonConfig newton{};
  /// Steps computed past final_time (the energy table needs level N + 1).
  std::size_t extra_steps = 0;
  /// Non-conservative scheme only: refactor the trace matrix at every step.
  bool refactor_every_step = false;

  /// Number of steps N = T / dt, rounded to the nearest integer.
  std::size_t steps() const;
  /// Throws ConfigError for dt <= 0 or dt > T; rounds dt to T / N and warns
  /// on `warn` when T / dt is not an integer.
  void validate(std::ostream* warn = nullptr);
};

/// Two consecutive time levels, (U^{n-1}, Q^{n-1}, Uhat^{n-1}) and (U^n, Q^n, Uhat^n).
struct StepWindow {
  HdgState previous;
  HdgState current;
  std::size_t n = 0;
};

struct StepRecord {
  std::size_t n = 0; ///< index of the level just computed
  double t = 0.0;
  std::size_t newton_iterations = 0;
  double residual = 0.0;
  double energy = 0.0; ///< energy of the pair (n - 1, n)
};

/// Algebraic system of one implicit step in the full unknown vector
/// (Discretization::pack ordering):
///
///   element rows  A_K(c) [q; u] - G_K uhat + alpha (F(u, partner), w) = loads,
///   face rows     transmission conditions, boundary rows uhat = prescribed,
///
/// where A_K(c) is the local HDG operator with reaction c * mass and F the
/// discrete gradient of the potential. alpha = 0 gives a linear step.
class StepSystem {
public:
  StepSystem(const Discretization& disc, double mass_coeff, double nonlinear_coeff,
             Eigen::VectorXd partner, HdgLoads loads);

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const;
  /// Assembled Jacobian of `residual` at x.
  SparseMatrix jacobian(const Eigen::VectorXd& x) const;
  /// J(x)^{-1} r through static condensation.
  Eigen::VectorXd newton_increment(const Eigen::VectorXd& x, const Eigen::VectorXd& r) const;
  NewtonResult solve(Eigen::VectorXd x0, const NewtonConfig& cfg) const;

  ElementMatrices reactions(const Eigen::VectorXd& u) const;

private:
  Eigen::VectorXd element_u(const Eigen::VectorXd& x) const;

  const Discretization* disc_;
  double mass_coeff_;
  double nonlinear_coeff_;
  Eigen::VectorXd partner_;
  HdgLoads loads_;
  double scale_;
};

/// Fully discrete schemes for the Klein-Gordon equation on a fixed discretisation.
class TimeStepper {
public:
  TimeStepper(const Discretization& disc, ProblemData data, TimeConfig cfg);

  const TimeConfig& config() const { return cfg_; }
  const Discretization& discretization() const { return *disc_; }

  /// Level 0 and the discrete initial velocity. Standard spaces use the
  /// elliptic HDG solve and the HDG projection of (u1, grad u1); the enriched
  /// spaces use L2 projections.
  StepWindow initialize();
  const Eigen::VectorXd& velocity() const { return velocity_; }

  HdgState first_step(const HdgState& s0);
  HdgState step_conservative(const HdgState& prev, const HdgState& cur, double dt);
  HdgState step_nonconservative(const HdgState& prev, const HdgState& cur);
  /// One step of the configured scheme; uses first_step when window.n == 0.
  void advance(StepWindow& window);

  /// The algebraic system solved by step_conservative (exposed for verification).
  StepSystem conservative_system(const HdgState& prev, const HdgState& cur, double dt) const;

  /// Discrete energy of two consecutive levels a (older) and b:
  /// |(b - a)/dt|^2 + (|Qa|^2 + |Qb|^2 + |a - ahat|_+^2 + |b - bhat|_+^2 + 2(F(a),1) + 2(F(b),1)) / 2.
  double discrete_energy(const HdgState& a, const HdgState& b, double dt) const;
  /// Semi-discrete energy (|v|^2 + |Q|^2 + |U - Uhat|_+^2 + 2(F(U),1)) / 2 for velocity coefficients v.
  double semidiscrete_energy(const HdgState& s, const Eigen::VectorXd& velocity) const;

  std::size_t last_newton_iterations() const { return last_iterations_; }
  double last_residual() const { return last_residual_; }
  std::size_t factorizations() const;

private:
  Eigen::VectorXd mass_times(const Eigen::VectorXd& u) const;
  Eigen::VectorXd source_load(double t) const;
  Eigen::VectorXd f_load(const Eigen::VectorXd& u) const;
  Eigen::VectorXd stiffness_apply(const HdgState& s) const;
  Eigen::VectorXd boundary_at(double t) const;
  HdgLoads element_loads(const Eigen::VectorXd& u_rows, double t) const;
  HdgState solve_implicit(double mass_coeff, double nonlinear_coeff, const Eigen::VectorXd& partner,
                          const Eigen::VectorXd& u_rows, double t, const HdgState& guess);

  const Discretization* disc_;
  ProblemData data_;
  TimeConfig cfg_;
  Eigen::VectorXd velocity_;
  std::size_t last_iterations_ = 0;
  double last_residual_ = 0.0;
  std::unique_ptr<CondensedSystem> linear_first_;
  std::unique_ptr<CondensedSystem> linear_interior_;
  std::size_t discarded_factorizations_ = 0;
};

struct RunResult {
  HdgState initial;
  HdgState final_state;
  HdgState before_final; ///< level N - 1
  std::vector<StepRecord> records;
  std::vector<double> energy; ///< energy[j] = energy of the pair (j, j + 1)
  double semidiscrete_energy0 = 0.0;
  double step_seconds = 0.0;    ///< wall time spent in the N (+ extra) steps
  std::size_t factorizations = 0;
};

/// Initialise, then march N + extra_steps steps. `on_step` sees every new window.
RunResult run(const Discretization& disc, const ProblemData& data, TimeConfig cfg,
              const std::function<void(const StepWindow&)>& on_step = {});

/// Write records as CSV with header n,t,newton_iterations,residual,energy.
void write_step_csv(std::ostream& os, const std::vector<StepRecord>& records);

} // namespace kghdg
