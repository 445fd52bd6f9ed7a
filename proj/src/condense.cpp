#include "kghdg/condense.hpp"

#include "kghdg/error.hpp"
#include "kghdg/local.hpp"

namespace kghdg {
namespace {

using Index = Eigen::Index;

double load_at(const Eigen::VectorXd& v, Index i) { return v.size() == 0 ? 0.0 : v[i]; }

} // namespace

ElementMatrices mass_reactions(const Discretization& disc, double coeff) {
  ElementMatrices r(disc.num_elements());
  for (std::size_t k = 0; k < disc.num_elements(); ++k) r[k] = coeff * disc.local(k).mass_u;
  return r;
}

HdgLoads zero_loads(const Discretization& disc) {
  HdgLoads l;
  l.element = Eigen::VectorXd::Zero(static_cast<Index>(disc.num_elements() * disc.element_dofs()));
  return l;
}

CondensedSystem::CondensedSystem(const Discretization& disc, const ElementMatrices& reactions)
    : disc_(&disc) {
  const std::size_t ne = disc.num_elements();
  if (reactions.size() != ne) throw ConfigError("one reaction block per element is required");
  const auto nm = static_cast<Index>(disc.nm());
  const auto n = static_cast<Index>(disc.num_interior_faces()) * nm;

  inverse_.resize(ne);
  recovery_.resize(ne);
  schur_.resize(ne);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(ne * 9 * static_cast<std::size_t>(nm * nm));

  for (std::size_t k = 0; k < ne; ++k) {
    const LocalMatrices& lm = disc.local(k);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(lm.element_operator(reactions[k]));
    if (!lu.isInvertible())
      throw SingularMatrixError("local HDG block of element " + std::to_string(k) +
                                " is singular (check tau > 0 and the element geometry)");
    inverse_[k] = lu.inverse();
    recovery_[k] = inverse_[k] * lm.trace_coupling();
    schur_[k] = lm.transmission_rows() * recovery_[k];
    schur_[k].diagonal() += lm.transmission_diagonal();

    for (int a = 0; a < 3; ++a) {
      const auto ra = disc.interior_index(disc.mesh().face_of(k, a));
      if (ra < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const auto cb = disc.interior_index(disc.mesh().face_of(k, b));
        if (cb < 0) continue;
        for (Index i = 0; i < nm; ++i)
          for (Index j = 0; j < nm; ++j)
            triplets.emplace_back(ra * nm + i, cb * nm + j, schur_[k](a * nm + i, b * nm + j));
      }
    }
  }
  matrix_.resize(n, n);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
}

void CondensedSystem::factorize() const {
  auto lu = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
  lu->analyzePattern(matrix_);
  lu->factorize(matrix_);
  if (lu->info() != Eigen::Success)
    throw SingularMatrixError("condensed trace matrix is singular: " + lu->lastErrorMessage());
  lu_ = std::move(lu);
  ++factorizations_;
}

Eigen::VectorXd CondensedSystem::rhs(const HdgLoads& loads) const {
  const Discretization& d = *disc_;
  const auto nm = static_cast<Index>(d.nm());
  const auto nel = static_cast<Index>(d.element_dofs());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(matrix_.rows());

  for (std::size_t f = 0; f < d.num_faces(); ++f) {
    const auto r = d.interior_index(f);
    if (r < 0 || loads.face.size() == 0) continue;
    b.segment(r * nm, nm) = loads.face.segment(static_cast<Index>(f) * nm, nm);
  }
  for (std::size_t k = 0; k < d.num_elements(); ++k) {
    const LocalMatrices& lm = d.local(k);
    Eigen::VectorXd contrib = Eigen::VectorXd::Zero(3 * nm);
    if (loads.element.size() != 0)
      contrib = lm.transmission_rows() *
                (inverse_[k] * loads.element.segment(static_cast<Index>(k) * nel, nel));
    for (int e = 0; e < 3; ++e) {
      const std::size_t f = d.mesh().face_of(k, e);
      if (!d.mesh().faces()[f].boundary || loads.boundary.size() == 0) continue;
      contrib += schur_[k].middleCols(e * nm, nm) * loads.boundary.segment(static_cast<Index>(f) * nm, nm);
    }
    for (int e = 0; e < 3; ++e) {
      const auto r = d.interior_index(d.mesh().face_of(k, e));
      if (r >= 0) b.segment(r * nm, nm) -= contrib.segment(e * nm, nm);
    }
  }
  return b;
}

Eigen::VectorXd CondensedSystem::solve_traces(const Eigen::VectorXd& rhs) const {
  if (matrix_.rows() == 0) return Eigen::VectorXd();
  if (!lu_) factorize();
  Eigen::VectorXd x = lu_->solve(rhs);
  if (lu_->info() != Eigen::Success) throw SingularMatrixError("condensed trace solve failed");
  return x;
}

Eigen::VectorXd CondensedSystem::full_traces(const Eigen::VectorXd& interior,
                                             const HdgLoads& loads) const {
  const Discretization& d = *disc_;
  const auto nm = static_cast<Index>(d.nm());
  Eigen::VectorXd t = Eigen::VectorXd::Zero(static_cast<Index>(d.num_faces()) * nm);
  for (std::size_t f = 0; f < d.num_faces(); ++f) {
    const auto r = d.interior_index(f);
    const auto off = static_cast<Index>(f) * nm;
    if (r >= 0)
      t.segment(off, nm) = interior.segment(r * nm, nm);
    else if (loads.boundary.size() != 0)
      t.segment(off, nm) = loads.boundary.segment(off, nm);
  }
  return t;
}

HdgState CondensedSystem::recover(const Eigen::VectorXd& interior_traces, const HdgLoads& loads,
                                  double t) const {
  const Discretization& d = *disc_;
  const auto nel = static_cast<Index>(d.element_dofs());
  const auto q2 = static_cast<Index>(2 * d.nq());
  HdgState s = d.zero_state(t);
  s.trace = full_traces(interior_traces, loads);
  for (std::size_t k = 0; k < d.num_elements(); ++k) {
    Eigen::VectorXd x = recovery_[k] * d.element_traces(s.trace, k);
    if (loads.element.size() != 0)
      x.noalias() += inverse_[k] * loads.element.segment(static_cast<Index>(k) * nel, nel);
    d.q_block(s.q, k) = x.head(q2);
    d.u_block(s.u, k) = x.tail(nel - q2);
  }
  return s;
}

HdgState CondensedSystem::solve(const HdgLoads& loads, double t) const {
  return recover(solve_traces(rhs(loads)), loads, t);
}

SparseMatrix assemble_monolithic(const Discretization& disc, const ElementMatrices& reactions) {
  const auto nel = static_cast<Index>(disc.element_dofs());
  const auto nm = static_cast<Index>(disc.nm());
  const Index face0 = static_cast<Index>(disc.num_elements()) * nel;
  std::vector<Eigen::Triplet<double>> t;

  for (std::size_t k = 0; k < disc.num_elements(); ++k) {
    const LocalMatrices& lm = disc.local(k);
    const Index off = static_cast<Index>(k) * nel;
    const Eigen::MatrixXd a = lm.element_operator(reactions[k]);
    const Eigen::MatrixXd g = lm.trace_coupling();
    const Eigen::MatrixXd h = lm.transmission_rows();
    const Eigen::VectorXd dd = lm.transmission_diagonal();
    for (Index i = 0; i < nel; ++i)
      for (Index j = 0; j < nel; ++j)
        if (a(i, j) != 0.0) t.emplace_back(off + i, off + j, a(i, j));
    for (int e = 0; e < 3; ++e) {
      const std::size_t f = disc.mesh().face_of(k, e);
      const Index foff = face0 + static_cast<Index>(f) * nm;
      for (Index i = 0; i < nel; ++i)
        for (Index j = 0; j < nm; ++j) t.emplace_back(off + i, foff + j, -g(i, e * nm + j));
      if (disc.mesh().faces()[f].boundary) continue;
      for (Index i = 0; i < nm; ++i) {
        for (Index j = 0; j < nel; ++j) t.emplace_back(foff + i, off + j, h(e * nm + i, j));
        t.emplace_back(foff + i, foff + i, dd[e * nm + i]);
      }
    }
  }
  for (std::size_t f = 0; f < disc.num_faces(); ++f) {
    if (!disc.mesh().faces()[f].boundary) continue;
    const Index foff = face0 + static_cast<Index>(f) * nm;
    for (Index i = 0; i < nm; ++i) t.emplace_back(foff + i, foff + i, 1.0);
  }
  const auto n = static_cast<Index>(disc.full_size());
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::VectorXd monolithic_rhs(const Discretization& disc, const HdgLoads& loads) {
  const auto nm = static_cast<Index>(disc.nm());
  const Index face0 = static_cast<Index>(disc.num_elements() * disc.element_dofs());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Index>(disc.full_size()));
  if (loads.element.size() != 0) b.head(face0) = loads.element;
  for (std::size_t f = 0; f < disc.num_faces(); ++f) {
    const Index off = static_cast<Index>(f) * nm;
    const bool bnd = disc.mesh().faces()[f].boundary;
    for (Index i = 0; i < nm; ++i)
      b[face0 + off + i] = bnd ? load_at(loads.boundary, off + i) : load_at(loads.face, off + i);
  }
  return b;
}

HdgState solve_monolithic(const Discretization& disc, const ElementMatrices& reactions,
                          const HdgLoads& loads, double t) {
  const SparseMatrix a = assemble_monolithic(disc, reactions);
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SingularMatrixError("monolithic HDG system is singular");
  const Eigen::VectorXd x = lu.solve(monolithic_rhs(disc, loads));
  return disc.unpack(x, t);
}

} // namespace kghdg
