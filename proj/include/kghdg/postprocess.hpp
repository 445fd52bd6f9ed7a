#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "kghdg/basis.hpp"
#include "kghdg/quadrature.hpp"
#include "kghdg/space.hpp"

namespace kghdg {

/// Elementwise P_{k+1} reconstruction u*_h, coefficients in TriangleBasis(k + 1).
struct PostprocessedField {
  int degree = 0;
  double time = 0.0;
  Eigen::VectorXd coeffs; ///< dim_triangle(degree) entries per element

  std::size_t dim() const { return dim_triangle(degree); }
  auto block(std::size_t k) const {
    return coeffs.segment(static_cast<Eigen::Index>(k * dim()), static_cast<Eigen::Index>(dim()));
  }
};

/// Local reconstruction on one element of `disc`:
///   (grad u*, grad w)_K = (q_h, grad w)_K  for all w in P_{k+1}(K),
///   (u*, 1)_K = (u_h, 1)_K,
/// solved as a bordered system. `u` and `q` are the element blocks.
class Postprocessor {
public:
  explicit Postprocessor(const Discretization& disc);

  int degree() const { return basis_.degree(); }
  const TriangleBasis& basis() const { return basis_; }

  Eigen::VectorXd element(std::size_t k, const Eigen::VectorXd& u, const Eigen::VectorXd& q) const;
  PostprocessedField apply(const HdgState& s) const;

  /// Residuals of the defining conditions for a candidate u* on element k:
  /// the gradient moments (q_h - grad u*, grad w) and the mean difference.
  Eigen::VectorXd gradient_residual(std::size_t k, const Eigen::VectorXd& ustar,
                                    const Eigen::VectorXd& q) const;
  double mean_defect(std::size_t k, const Eigen::VectorXd& ustar, const Eigen::VectorXd& u) const;

private:
  Eigen::MatrixXd stiffness(std::size_t k) const;
  Eigen::VectorXd load(std::size_t k, const Eigen::VectorXd& q) const;

  const Discretization* disc_;
  TriangleBasis basis_;
  TriangleQuadrature rule_;
  std::vector<Eigen::MatrixX2d> grads_;  // reference gradients of the P_{k+1} basis per point
  Eigen::MatrixXd q_values_;             // q basis values per point
  Eigen::VectorXd integrals_;            // (phi_i, 1) on the reference triangle
};

/// Shorthand for Postprocessor(disc).apply(s).
PostprocessedField postprocess(const Discretization& disc, const HdgState& s);

} // namespace kghdg
