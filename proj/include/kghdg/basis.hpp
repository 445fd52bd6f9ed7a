#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "kghdg/mesh.hpp"

namespace kghdg {

inline constexpr int kMaxBasisDegree = 4;

inline constexpr std::size_t dim_triangle(int k) {
  return static_cast<std::size_t>((k + 1) * (k + 2) / 2);
}
inline constexpr std::size_t dim_edge(int k) { return static_cast<std::size_t>(k + 1); }

/// Hierarchical orthonormal basis of P_k on the reference triangle.
///
/// Orthonormal with respect to the mean inner product 2 * int_ref phi_i phi_j,
/// so phi_0 == 1 and the mass matrix on an element K is |K| times the identity.
/// The first dim_triangle(j) functions span P_j for every j <= k.
class TriangleBasis {
public:
  explicit TriangleBasis(int k);

  int degree() const { return degree_; }
  std::size_t dim() const { return dim_; }

  Eigen::VectorXd values(const Point& xi) const;
  /// Row i holds the reference gradient of basis function i.
  Eigen::MatrixX2d gradients(const Point& xi) const;

  /// Monomial exponents (a, b) of x^a y^b in graded order.
  const std::vector<std::array<int, 2>>& exponents() const { return exponents_; }
  /// Row i: coefficients of basis function i in the monomial basis.
  const Eigen::MatrixXd& monomial_coefficients() const { return coeffs_; }

private:
  int degree_;
  std::size_t dim_;
  std::vector<std::array<int, 2>> exponents_;
  Eigen::MatrixXd coeffs_;
};

/// Orthonormal Legendre basis of P_k on [0, 1]: psi_j(s) = sqrt(2j + 1) P_j(2s - 1).
class EdgeBasis {
public:
  explicit EdgeBasis(int k);

  int degree() const { return degree_; }
  std::size_t dim() const { return dim_edge(degree_); }

  Eigen::VectorXd values(double s) const;

private:
  int degree_;
};

TriangleBasis triangle_basis(int k);
EdgeBasis edge_basis(int k);

} // namespace kghdg
