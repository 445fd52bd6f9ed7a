#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "kghdg/error.hpp"

namespace kghdg {

/// The Klein-Gordon nonlinearity f(s) = s^3 - s and its potential F(s) = (1 - s^2)^2 / 4.
namespace nonlinearity {

inline double f(double s) { return s * s * s - s; }
inline double df(double s) { return 3.0 * s * s - 1.0; }
inline double potential(double s) {
  const double a = 1.0 - s * s;
  return 0.25 * a * a;
}

/// Difference quotient (F(a) - F(b)) / (a - b) in closed form, with its partials.
struct DiscreteGradient {
  double value;
  double d_a;
  double d_b;
};

inline DiscreteGradient discrete_gradient(double a, double b) {
  const double sum = a + b;
  const double sq = a * a + b * b - 2.0;
  return {0.25 * sum * sq, 0.25 * sq + 0.5 * a * sum, 0.25 * sq + 0.5 * b * sum};
}

} // namespace nonlinearity

struct NewtonConfig {
  double tolerance = 1e-12;
  std::size_t max_iterations = 30;
  double damping = 1.0; ///< step length multiplier in (0, 1]
};

struct NewtonResult {
  Eigen::VectorXd x;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::vector<double> history; ///< residual norm before each iteration, then the final one
};

/// Root-mean-square norm used for all Newton residuals.
inline double rms_norm(const Eigen::VectorXd& r) {
  return r.size() == 0 ? 0.0 : r.norm() / std::sqrt(static_cast<double>(r.size()));
}

/// Newton iteration x <- x - damping * J(x)^{-1} R(x).
///
/// `linear_solve(x, r)` must return J(x)^{-1} r. Stops once
/// rms(R) <= tolerance * residual_scale. Throws NewtonError when
/// max_iterations is reached first.
template <class Residual, class LinearSolve>
NewtonResult newton_solve(Residual&& residual, LinearSolve&& linear_solve, Eigen::VectorXd x0,
                          const NewtonConfig& cfg, double residual_scale = 1.0) {
  if (!(cfg.tolerance > 0.0)) throw ConfigError("Newton tolerance must be positive");
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) throw ConfigError("Newton damping must lie in (0, 1]");
  NewtonResult out;
  out.x = std::move(x0);
  Eigen::VectorXd r = residual(out.x);
  double norm = rms_norm(r);
  out.history.push_back(norm);
  const double target = cfg.tolerance * residual_scale;
  while (norm > target) {
    if (out.iterations >= cfg.max_iterations || !std::isfinite(norm)) {
      throw NewtonError("Newton did not converge after " + std::to_string(out.iterations) +
                            " iterations (residual " + std::to_string(norm) + ")",
                        out.iterations, norm);
    }
    const Eigen::VectorXd dx = linear_solve(out.x, r);
    out.x -= cfg.damping * dx;
    ++out.iterations;
    r = residual(out.x);
    norm = rms_norm(r);
    out.history.push_back(norm);
  }
  out.residual = norm;
  return out;
}

/// Dense-Jacobian convenience overload; throws SingularMatrixError on a singular Jacobian.
NewtonResult newton_solve_dense(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
                                const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
                                Eigen::VectorXd x0, const NewtonConfig& cfg);

} // namespace kghdg
