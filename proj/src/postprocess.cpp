#include "kghdg/postprocess.hpp"

#include "kghdg/error.hpp"

namespace kghdg {

using Index = Eigen::Index;

Postprocessor::Postprocessor(const Discretization& disc)
    : disc_(&disc),
      basis_(disc.config().q_degree() + 1),
      rule_(triangle_quadrature(2 * (disc.config().q_degree() + 1))) {
  const auto np = static_cast<Index>(rule_.size());
  grads_.resize(rule_.size());
  q_values_.resize(np, static_cast<Index>(disc.nq()));
  integrals_ = Eigen::VectorXd::Zero(static_cast<Index>(basis_.dim()));
  for (std::size_t p = 0; p < rule_.size(); ++p) {
    grads_[p] = basis_.gradients(rule_.points[p]);
    q_values_.row(static_cast<Index>(p)) = disc.reference().q_basis.values(rule_.points[p]).transpose();
    integrals_ += rule_.weights[p] * basis_.values(rule_.points[p]);
  }
}

Eigen::MatrixXd Postprocessor::stiffness(std::size_t k) const {
  const ElementGeometry& g = disc_->mesh().geometry(k);
  const auto n = static_cast<Index>(basis_.dim());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t p = 0; p < rule_.size(); ++p) {
    const Eigen::MatrixX2d gp = grads_[p] * g.inverse_jacobian;
    s.noalias() += rule_.weights[p] * g.det_jacobian * gp * gp.transpose();
  }
  return s;
}

Eigen::VectorXd Postprocessor::load(std::size_t k, const Eigen::VectorXd& q) const {
  const ElementGeometry& g = disc_->mesh().geometry(k);
  const auto nq = static_cast<Index>(disc_->nq());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Index>(basis_.dim()));
  for (std::size_t p = 0; p < rule_.size(); ++p) {
    const auto row = q_values_.row(static_cast<Index>(p));
    const Eigen::Vector2d qp(row.dot(q.head(nq)), row.dot(q.tail(nq)));
    b.noalias() += rule_.weights[p] * g.det_jacobian * (grads_[p] * g.inverse_jacobian) * qp;
  }
  return b;
}

Eigen::VectorXd Postprocessor::element(std::size_t k, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& q) const {
  const auto n = static_cast<Index>(basis_.dim());
  const double det = disc_->mesh().geometry(k).det_jacobian;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
  a.topLeftCorner(n, n) = stiffness(k);
  a.block(0, n, n, 1) = det * integrals_;
  a.block(n, 0, 1, n) = det * integrals_.transpose();
  Eigen::VectorXd rhs(n + 1);
  rhs.head(n) = load(k, q);
  // u basis has phi_0 = 1 and mean-orthonormal higher modes
  rhs[n] = disc_->mesh().geometry(k).area() * u[0];
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  return lu.solve(rhs).head(n);
}

PostprocessedField Postprocessor::apply(const HdgState& s) const {
  const Discretization& d = *disc_;
  PostprocessedField out;
  out.degree = basis_.degree();
  out.time = s.time;
  out.coeffs.resize(static_cast<Index>(d.num_elements() * out.dim()));
  for (std::size_t k = 0; k < d.num_elements(); ++k)
    out.coeffs.segment(static_cast<Index>(k * out.dim()), static_cast<Index>(out.dim())) =
        element(k, d.u_block(s.u, k), d.q_block(s.q, k));
  return out;
}

Eigen::VectorXd Postprocessor::gradient_residual(std::size_t k, const Eigen::VectorXd& ustar,
                                                 const Eigen::VectorXd& q) const {
  return load(k, q) - stiffness(k) * ustar;
}

double Postprocessor::mean_defect(std::size_t k, const Eigen::VectorXd& ustar,
                                  const Eigen::VectorXd& u) const {
  const double det = disc_->mesh().geometry(k).det_jacobian;
  return det * integrals_.dot(ustar) - disc_->mesh().geometry(k).area() * u[0];
}

PostprocessedField postprocess(const Discretization& disc, const HdgState& s) {
  return Postprocessor(disc).apply(s);
}

} // namespace kghdg
