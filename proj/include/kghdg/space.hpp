#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "kghdg/basis.hpp"
#include "kghdg/mesh.hpp"
#include "kghdg/quadrature.hpp"

namespace kghdg {

enum class Variant {
  standard, ///< u, q and traces all of degree k; flux q.n - tau (u - uhat)
  enriched  ///< u of degree k + 1, q and traces of degree k; flux q.n - (tau / h_K)(P u - uhat)
};

struct SpaceConfig {
  int k = 1;
  Variant variant = Variant::standard;
  double tau = 1.0;

  int u_degree() const { return variant == Variant::enriched ? k + 1 : k; }
  int q_degree() const { return k; }
  int trace_degree() const { return k; }
  /// Throws ConfigError unless tau > 0 and every degree is supported.
  void validate() const;
};

/// Bases, quadrature rules and basis tables at the reference quadrature points.
struct ReferenceElement {
  explicit ReferenceElement(const SpaceConfig& cfg);

  TriangleBasis u_basis;
  TriangleBasis q_basis;
  EdgeBasis trace_basis;
  TriangleQuadrature volume;
  EdgeQuadrature face;
  TriangleQuadrature error_volume;

  Eigen::MatrixXd u_values; ///< (points x dim u)
  Eigen::MatrixXd q_values; ///< (points x dim q)
  std::vector<Eigen::MatrixX2d> u_gradients; ///< per point, reference gradients
  std::vector<Eigen::MatrixX2d> q_gradients;
  Eigen::MatrixXd trace_values; ///< (face points x dim trace)

  std::size_t nu() const { return u_basis.dim(); }
  std::size_t nq() const { return q_basis.dim(); }
  std::size_t nm() const { return trace_basis.dim(); }
};

/// Coefficients of (u_h, q_h, uhat_h) at one time level.
///
/// `q` holds, per element, the x-component block followed by the y-component
/// block; `trace` holds one block per face (boundary faces included).
struct HdgState {
  double time = 0.0;
  Eigen::VectorXd q;
  Eigen::VectorXd u;
  Eigen::VectorXd trace;
};

struct LocalMatrices;

/// A mesh together with the HDG spaces on it and the per-element local blocks.
class Discretization {
public:
  Discretization(Mesh mesh, SpaceConfig cfg);
  Discretization(const Discretization&);
  Discretization(Discretization&&) noexcept;
  Discretization& operator=(const Discretization&);
  Discretization& operator=(Discretization&&) noexcept;
  ~Discretization();

  const Mesh& mesh() const { return mesh_; }
  const SpaceConfig& config() const { return cfg_; }
  const ReferenceElement& reference() const { return ref_; }
  const LocalMatrices& local(std::size_t k) const;

  std::size_t num_elements() const { return mesh_.num_elements(); }
  std::size_t num_faces() const { return mesh_.num_faces(); }
  std::size_t nu() const { return ref_.nu(); }
  std::size_t nq() const { return ref_.nq(); }
  std::size_t nm() const { return ref_.nm(); }
  /// Element unknowns: 2 nq flux coefficients then nu displacement coefficients.
  std::size_t element_dofs() const { return 2 * nq() + nu(); }

  /// Position of an interior face among the global trace unknowns, -1 on the boundary.
  std::ptrdiff_t interior_index(std::size_t face) const { return interior_index_[face]; }
  std::size_t num_interior_faces() const { return num_interior_; }

  HdgState zero_state(double t = 0.0) const;

  auto u_block(Eigen::VectorXd& u, std::size_t k) const {
    return u.segment(static_cast<Eigen::Index>(k * nu()), static_cast<Eigen::Index>(nu()));
  }
  auto u_block(const Eigen::VectorXd& u, std::size_t k) const {
    return u.segment(static_cast<Eigen::Index>(k * nu()), static_cast<Eigen::Index>(nu()));
  }
  auto q_block(Eigen::VectorXd& q, std::size_t k) const {
    return q.segment(static_cast<Eigen::Index>(2 * k * nq()), static_cast<Eigen::Index>(2 * nq()));
  }
  auto q_block(const Eigen::VectorXd& q, std::size_t k) const {
    return q.segment(static_cast<Eigen::Index>(2 * k * nq()), static_cast<Eigen::Index>(2 * nq()));
  }
  auto trace_block(Eigen::VectorXd& t, std::size_t f) const {
    return t.segment(static_cast<Eigen::Index>(f * nm()), static_cast<Eigen::Index>(nm()));
  }
  auto trace_block(const Eigen::VectorXd& t, std::size_t f) const {
    return t.segment(static_cast<Eigen::Index>(f * nm()), static_cast<Eigen::Index>(nm()));
  }

  /// Traces of the three faces of element k, stacked in local edge order.
  Eigen::VectorXd element_traces(const Eigen::VectorXd& trace, std::size_t k) const;

  /// Physical quadrature points and weights (reference weights times det J) of element k.
  void volume_points(std::size_t k, std::vector<Point>& x, Eigen::VectorXd& w) const;

  /// Full unknown vector: per element [q, u], then all face traces.
  Eigen::VectorXd pack(const HdgState& s) const;
  HdgState unpack(const Eigen::VectorXd& x, double t) const;
  std::size_t full_size() const { return num_elements() * element_dofs() + num_faces() * nm(); }

private:
  Mesh mesh_;
  SpaceConfig cfg_;
  ReferenceElement ref_;
  std::vector<LocalMatrices> locals_;
  std::vector<std::ptrdiff_t> interior_index_;
  std::size_t num_interior_ = 0;
};

} // namespace kghdg
