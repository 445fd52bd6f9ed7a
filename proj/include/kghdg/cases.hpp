#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "kghdg/timestepping.hpp"

namespace kghdg {

using SpaceTimeVector = std::function<Eigen::Vector2d(const Point&, double)>;

enum class BoundaryKind { homogeneous, exact_trace };

/// A test problem on the unit square. Cases with a known solution fill the
/// exact_* members; the energy-only case leaves them empty.
struct ManufacturedCase {
  int id = 0;
  std::string name;
  BoundaryKind boundary = BoundaryKind::homogeneous;
  double final_time = 1.0;

  SpaceTimeField exact_u;
  SpaceTimeField exact_ut;
  SpaceTimeField exact_utt;
  SpaceTimeVector exact_grad;
  SpaceTimeField exact_laplacian;
  SpaceTimeField source; ///< empty: g = 0

  ScalarField u0;
  ScalarField u1;
  ScalarField laplacian_u0;
  VectorField grad_u0;
  VectorField grad_u1;

  bool has_exact() const { return static_cast<bool>(exact_u); }
  ProblemData problem() const;
  /// u_tt - lap u + u^3 - u - g at (x, t); requires the exact solution.
  double pde_residual(const Point& x, double t) const;
};

/// Examples 1 to 4; throws ConfigError for any other id.
ManufacturedCase builtin_case(int id);

/// Largest |pde_residual| over `samples` pseudo-random points of [0,1]^2 x [0, T].
double max_pde_residual(const ManufacturedCase& c, int samples = 50, unsigned seed = 12345);

/// Throws ConfigError when the sampled residual exceeds `tol` (no-op without an exact solution).
void validate_case(const ManufacturedCase& c, double tol = 1e-10);

} // namespace kghdg
