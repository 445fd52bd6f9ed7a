#include "kghdg/space.hpp"

#include "kghdg/local.hpp"

namespace kghdg {

Discretization::Discretization(const Discretization&) = default;
Discretization::Discretization(Discretization&&) noexcept = default;
Discretization& Discretization::operator=(const Discretization&) = default;
Discretization& Discretization::operator=(Discretization&&) noexcept = default;
Discretization::~Discretization() = default;

const LocalMatrices& Discretization::local(std::size_t k) const { return locals_[k]; }

Discretization::Discretization(Mesh mesh, SpaceConfig cfg)
    : mesh_(std::move(mesh)), cfg_((cfg.validate(), cfg)), ref_(cfg_) {
  locals_.reserve(mesh_.num_elements());
  for (std::size_t k = 0; k < mesh_.num_elements(); ++k)
    locals_.push_back(assemble_local(mesh_, k, cfg_, ref_));

  interior_index_.assign(mesh_.num_faces(), -1);
  for (std::size_t f = 0; f < mesh_.num_faces(); ++f)
    if (!mesh_.faces()[f].boundary) interior_index_[f] = static_cast<std::ptrdiff_t>(num_interior_++);
}

HdgState Discretization::zero_state(double t) const {
  HdgState s;
  s.time = t;
  s.q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * nq() * num_elements()));
  s.u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nu() * num_elements()));
  s.trace = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nm() * num_faces()));
  return s;
}

Eigen::VectorXd Discretization::element_traces(const Eigen::VectorXd& trace, std::size_t k) const {
  const auto m = static_cast<Eigen::Index>(nm());
  Eigen::VectorXd out(3 * m);
  for (int e = 0; e < 3; ++e) out.segment(e * m, m) = trace_block(trace, mesh_.face_of(k, e));
  return out;
}

void Discretization::volume_points(std::size_t k, std::vector<Point>& x, Eigen::VectorXd& w) const {
  const ElementGeometry& g = mesh_.geometry(k);
  const auto& rule = ref_.volume;
  x.resize(rule.size());
  w.resize(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t p = 0; p < rule.size(); ++p) {
    x[p] = g.map(rule.points[p]);
    w[static_cast<Eigen::Index>(p)] = rule.weights[p] * g.det_jacobian;
  }
}

Eigen::VectorXd Discretization::pack(const HdgState& s) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(full_size()));
  const auto ne = static_cast<Eigen::Index>(element_dofs());
  const auto q2 = static_cast<Eigen::Index>(2 * nq());
  const auto u = static_cast<Eigen::Index>(nu());
  for (std::size_t k = 0; k < num_elements(); ++k) {
    const auto off = static_cast<Eigen::Index>(k) * ne;
    x.segment(off, q2) = q_block(s.q, k);
    x.segment(off + q2, u) = u_block(s.u, k);
  }
  x.tail(s.trace.size()) = s.trace;
  return x;
}

HdgState Discretization::unpack(const Eigen::VectorXd& x, double t) const {
  HdgState s = zero_state(t);
  const auto ne = static_cast<Eigen::Index>(element_dofs());
  const auto q2 = static_cast<Eigen::Index>(2 * nq());
  const auto u = static_cast<Eigen::Index>(nu());
  for (std::size_t k = 0; k < num_elements(); ++k) {
    const auto off = static_cast<Eigen::Index>(k) * ne;
    q_block(s.q, k) = x.segment(off, q2);
    u_block(s.u, k) = x.segment(off + q2, u);
  }
  s.trace = x.tail(s.trace.size());
  return s;
}

} // namespace kghdg
