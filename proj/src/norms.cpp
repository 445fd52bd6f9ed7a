#include "kghdg/norms.hpp"

#include <algorithm>
#include <cmath>

#include "kghdg/quadrature.hpp"

namespace kghdg {

using Index = Eigen::Index;

double l2_error(const Discretization& disc, const TriangleBasis& basis, const Eigen::VectorXd& c,
                const ScalarField& f) {
  const int deg = std::max(disc.reference().error_volume.degree, 2 * basis.degree() + 8);
  const TriangleQuadrature rule = triangle_quadrature(deg);
  Eigen::MatrixXd table(static_cast<Index>(rule.size()), static_cast<Index>(basis.dim()));
  for (std::size_t p = 0; p < rule.size(); ++p)
    table.row(static_cast<Index>(p)) = basis.values(rule.points[p]).transpose();
  const auto n = static_cast<Index>(basis.dim());
  double sum = 0.0;
  for (std::size_t k = 0; k < disc.num_elements(); ++k) {
    const ElementGeometry& g = disc.mesh().geometry(k);
    const Eigen::VectorXd vals = table * c.segment(static_cast<Index>(k) * n, n);
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const double e = f(g.map(rule.points[p])) - vals[static_cast<Index>(p)];
      sum += rule.weights[p] * g.det_jacobian * e * e;
    }
  }
  return std::sqrt(sum);
}

double l2_error_vector(const Discretization& disc, const Eigen::VectorXd& q, const VectorField& f) {
  const TriangleQuadrature& rule = disc.reference().error_volume;
  const TriangleBasis& basis = disc.reference().q_basis;
  Eigen::MatrixXd table(static_cast<Index>(rule.size()), static_cast<Index>(basis.dim()));
  for (std::size_t p = 0; p < rule.size(); ++p)
    table.row(static_cast<Index>(p)) = basis.values(rule.points[p]).transpose();
  const auto nq = static_cast<Index>(basis.dim());
  double sum = 0.0;
  for (std::size_t k = 0; k < disc.num_elements(); ++k) {
    const ElementGeometry& g = disc.mesh().geometry(k);
    const auto block = disc.q_block(q, k);
    const Eigen::VectorXd qx = table * block.head(nq);
    const Eigen::VectorXd qy = table * block.tail(nq);
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const auto i = static_cast<Index>(p);
      const Eigen::Vector2d e = f(g.map(rule.points[p])) - Eigen::Vector2d(qx[i], qy[i]);
      sum += rule.weights[p] * g.det_jacobian * e.squaredNorm();
    }
  }
  return std::sqrt(sum);
}

ErrorNorms error_norms(const Discretization& disc, const HdgState& s,
                       const std::optional<PostprocessedField>& ustar, const ScalarField& u,
                       const VectorField& grad_u) {
  ErrorNorms out;
  out.u = l2_error(disc, disc.reference().u_basis, s.u, u);
  out.q = l2_error_vector(disc, s.q, grad_u);
  if (ustar) out.ustar = l2_error(disc, TriangleBasis(ustar->degree), ustar->coeffs, u);
  return out;
}

} // namespace kghdg
