#include "kghdg/local.hpp"

#include <string>

#include "kghdg/error.hpp"

namespace kghdg {

void SpaceConfig::validate() const {
  if (!(tau > 0.0)) throw ConfigError("stabilization tau must be positive");
  if (k < 0) throw ConfigError("polynomial degree must be non-negative");
  if (u_degree() > kMaxBasisDegree)
    throw ConfigError("displacement degree " + std::to_string(u_degree()) +
                      " exceeds the supported maximum " + std::to_string(kMaxBasisDegree));
}

ReferenceElement::ReferenceElement(const SpaceConfig& cfg)
    : u_basis(cfg.u_degree()),
      q_basis(cfg.q_degree()),
      trace_basis(cfg.trace_degree()),
      volume(triangle_quadrature(std::max(4 * cfg.u_degree(), 2 * cfg.u_degree() + 4))),
      face(edge_quadrature(2 * cfg.u_degree() + 2)),
      error_volume(triangle_quadrature(2 * cfg.u_degree() + 8)) {
  const auto np = static_cast<Eigen::Index>(volume.size());
  u_values.resize(np, static_cast<Eigen::Index>(nu()));
  q_values.resize(np, static_cast<Eigen::Index>(nq()));
  u_gradients.resize(volume.size());
  q_gradients.resize(volume.size());
  for (Eigen::Index p = 0; p < np; ++p) {
    u_values.row(p) = u_basis.values(volume.points[p]).transpose();
    q_values.row(p) = q_basis.values(volume.points[p]).transpose();
    u_gradients[p] = u_basis.gradients(volume.points[p]);
    q_gradients[p] = q_basis.gradients(volume.points[p]);
  }
  trace_values.resize(static_cast<Eigen::Index>(face.size()), static_cast<Eigen::Index>(nm()));
  for (std::size_t p = 0; p < face.size(); ++p)
    trace_values.row(static_cast<Eigen::Index>(p)) = trace_basis.values(face.points[p]).transpose();
}

LocalMatrices assemble_local(const Mesh& mesh, std::size_t k, const SpaceConfig& cfg,
                             const ReferenceElement& ref) {
  const ElementGeometry& g = mesh.geometry(k);
  const auto nu = static_cast<Eigen::Index>(ref.nu());
  const auto nq = static_cast<Eigen::Index>(ref.nq());
  const auto nm = static_cast<Eigen::Index>(ref.nm());

  LocalMatrices lm;
  lm.area = g.area();
  lm.diameter = g.diameter;
  lm.mass_q = Eigen::MatrixXd::Zero(2 * nq, 2 * nq);
  lm.mass_u = Eigen::MatrixXd::Zero(nu, nu);
  lm.div = Eigen::MatrixXd::Zero(2 * nq, nu);
  lm.grad_w = Eigen::MatrixXd::Zero(nu, 2 * nq);
  lm.trace_v = Eigen::MatrixXd::Zero(2 * nq, 3 * nm);
  lm.flux_w = Eigen::MatrixXd::Zero(nu, 2 * nq);
  lm.stab_uu = Eigen::MatrixXd::Zero(nu, nu);
  lm.stab_utrace = Eigen::MatrixXd::Zero(nu, 3 * nm);

  for (std::size_t p = 0; p < ref.volume.size(); ++p) {
    const double w = ref.volume.weights[p] * g.det_jacobian;
    const Eigen::VectorXd phi_u = ref.u_values.row(static_cast<Eigen::Index>(p)).transpose();
    const Eigen::VectorXd phi_q = ref.q_values.row(static_cast<Eigen::Index>(p)).transpose();
    const Eigen::MatrixX2d grad_u = ref.u_gradients[p] * g.inverse_jacobian;
    const Eigen::MatrixX2d grad_q = ref.q_gradients[p] * g.inverse_jacobian;

    lm.mass_u.noalias() += w * phi_u * phi_u.transpose();
    const Eigen::MatrixXd mq = w * phi_q * phi_q.transpose();
    for (int c = 0; c < 2; ++c) {
      lm.mass_q.block(c * nq, c * nq, nq, nq) += mq;
      lm.div.block(c * nq, 0, nq, nu).noalias() += w * grad_q.col(c) * phi_u.transpose();
      lm.grad_w.block(0, c * nq, nu, nq).noalias() += w * grad_u.col(c) * phi_q.transpose();
    }
  }

  const double sigma_scale = cfg.variant == Variant::enriched ? 1.0 / g.diameter : 1.0;
  for (int e = 0; e < 3; ++e) {
    const std::size_t fid = mesh.face_of(k, e);
    const Face& face = mesh.faces()[fid];
    const Point a = mesh.vertices()[face.vertices[0]];
    const Point b = mesh.vertices()[face.vertices[1]];
    const Point n = g.normals[e];
    const double len = face.length;
    const double sigma = cfg.tau * sigma_scale;

    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(nm, nu);
    for (std::size_t p = 0; p < ref.face.size(); ++p) {
      const double s = ref.face.points[p];
      const Point xi = g.pullback(a + s * (b - a));
      const Eigen::VectorXd phi_u = ref.u_basis.values(xi);
      const Eigen::VectorXd phi_q = ref.q_basis.values(xi);
      const Eigen::VectorXd psi = ref.trace_values.row(static_cast<Eigen::Index>(p)).transpose();
      const double w = ref.face.weights[p] * len;

      proj.noalias() += ref.face.weights[p] * psi * phi_u.transpose();
      for (int c = 0; c < 2; ++c) {
        lm.trace_v.block(c * nq, e * nm, nq, nm).noalias() += (w * n[c]) * phi_q * psi.transpose();
        lm.flux_w.block(0, c * nq, nu, nq).noalias() += (w * n[c]) * phi_u * phi_q.transpose();
      }
    }
    lm.face_projection[e] = proj;
    lm.stab_weight[e] = sigma * len;
    lm.stab_uu.noalias() += lm.stab_weight[e] * proj.transpose() * proj;
    lm.stab_utrace.block(0, e * nm, nu, nm) = lm.stab_weight[e] * proj.transpose();
  }
  return lm;
}

LocalMatrices assemble_local(const Mesh& mesh, std::size_t k, const SpaceConfig& cfg) {
  cfg.validate();
  if (k >= mesh.num_elements()) throw ConfigError("element index out of range");
  const ReferenceElement ref(cfg);
  return assemble_local(mesh, k, cfg, ref);
}

Eigen::MatrixXd LocalMatrices::element_operator(const Eigen::MatrixXd& reaction) const {
  const Eigen::Index n2q = mass_q.rows();
  const Eigen::Index nu = mass_u.rows();
  Eigen::MatrixXd a(n2q + nu, n2q + nu);
  a.topLeftCorner(n2q, n2q) = mass_q;
  a.topRightCorner(n2q, nu) = div;
  a.bottomLeftCorner(nu, n2q) = grad_w - flux_w;
  a.bottomRightCorner(nu, nu) = stab_uu + reaction;
  return a;
}

Eigen::MatrixXd LocalMatrices::trace_coupling() const {
  const Eigen::Index n2q = mass_q.rows();
  const Eigen::Index nu = mass_u.rows();
  Eigen::MatrixXd g(n2q + nu, trace_v.cols());
  g.topRows(n2q) = trace_v;
  g.bottomRows(nu) = stab_utrace;
  return g;
}

Eigen::MatrixXd LocalMatrices::transmission_rows() const {
  const Eigen::Index n2q = mass_q.rows();
  const Eigen::Index nu = mass_u.rows();
  Eigen::MatrixXd h(trace_v.cols(), n2q + nu);
  h.leftCols(n2q) = trace_v.transpose();
  h.rightCols(nu) = -stab_utrace.transpose();
  return h;
}

Eigen::VectorXd LocalMatrices::transmission_diagonal() const {
  const Eigen::Index nm = trace_v.cols() / 3;
  Eigen::VectorXd d(3 * nm);
  for (int e = 0; e < 3; ++e) d.segment(e * nm, nm).setConstant(stab_weight[e]);
  return d;
}

} // namespace kghdg
