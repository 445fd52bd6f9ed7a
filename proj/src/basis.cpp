#include "kghdg/basis.hpp"

#include <cmath>
#include <string>

#include "kghdg/error.hpp"

namespace kghdg {
namespace {

void check_basis_degree(int k) {
  if (k < 0 || k > kMaxBasisDegree)
    throw ConfigError("polynomial degree " + std::to_string(k) + " outside [0, " +
                      std::to_string(kMaxBasisDegree) + "]");
}

long double factorial(int n) {
  long double r = 1.0L;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

} // namespace

TriangleBasis::TriangleBasis(int k) : degree_(k), dim_(0) {
  check_basis_degree(k);
  dim_ = dim_triangle(k);
  for (int d = 0; d <= k; ++d)
    for (int j = 0; j <= d; ++j) exponents_.push_back({d - j, j});

  // Gram matrix of the monomials under 2 * int_ref, from int x^a y^b = a! b! / (a + b + 2)!
  using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const auto n = static_cast<Eigen::Index>(dim_);
  MatrixL gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const int a = exponents_[i][0] + exponents_[j][0];
      const int b = exponents_[i][1] + exponents_[j][1];
      gram(i, j) = 2.0L * factorial(a) * factorial(b) / factorial(a + b + 2);
    }
  // gram = L L^T; the rows of L^{-1} are the Gram-Schmidt coefficients
  Eigen::LLT<MatrixL> llt(gram);
  MatrixL inv_l = llt.matrixL().solve(MatrixL::Identity(n, n));
  coeffs_ = inv_l.cast<double>();
}

Eigen::VectorXd TriangleBasis::values(const Point& xi) const {
  Eigen::VectorXd mono(dim_);
  double xp[kMaxBasisDegree + 1], yp[kMaxBasisDegree + 1];
  xp[0] = yp[0] = 1.0;
  for (int p = 1; p <= degree_; ++p) {
    xp[p] = xp[p - 1] * xi.x();
    yp[p] = yp[p - 1] * xi.y();
  }
  for (std::size_t i = 0; i < dim_; ++i) mono[i] = xp[exponents_[i][0]] * yp[exponents_[i][1]];
  return coeffs_ * mono;
}

Eigen::MatrixX2d TriangleBasis::gradients(const Point& xi) const {
  Eigen::MatrixX2d mono(dim_, 2);
  double xp[kMaxBasisDegree + 1], yp[kMaxBasisDegree + 1];
  xp[0] = yp[0] = 1.0;
  for (int p = 1; p <= degree_; ++p) {
    xp[p] = xp[p - 1] * xi.x();
    yp[p] = yp[p - 1] * xi.y();
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    const int a = exponents_[i][0], b = exponents_[i][1];
    mono(i, 0) = a > 0 ? a * xp[a - 1] * yp[b] : 0.0;
    mono(i, 1) = b > 0 ? b * xp[a] * yp[b - 1] : 0.0;
  }
  return coeffs_ * mono;
}

EdgeBasis::EdgeBasis(int k) : degree_(k) { check_basis_degree(k); }

Eigen::VectorXd EdgeBasis::values(double s) const {
  Eigen::VectorXd v(dim());
  const double z = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = z;
  v[0] = 1.0;
  if (degree_ >= 1) v[1] = std::sqrt(3.0) * z;
  for (int j = 2; j <= degree_; ++j) {
    const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
    v[j] = std::sqrt(2.0 * j + 1.0) * p2;
  }
  return v;
}

TriangleBasis triangle_basis(int k) { return TriangleBasis(k); }
EdgeBasis edge_basis(int k) { return EdgeBasis(k); }

} // namespace kghdg
