#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Dense>

#include "kghdg/mesh.hpp"
#include "kghdg/space.hpp"

namespace kghdg {

/// Element blocks of the HDG forms on one triangle K.
///
/// Flux unknowns are ordered (x-component block, y-component block); traces
/// are stacked over the three local edges, each in the parametrisation of the
/// global face. sigma is tau (standard) or tau / h_K (enriched), and P_E is
/// the L2 projection onto P_k(E).
struct LocalMatrices {
  Eigen::MatrixXd mass_q;        ///< (q, v)_K                       2nq x 2nq
  Eigen::MatrixXd mass_u;        ///< (u, w)_K                       nu x nu
  Eigen::MatrixXd div;           ///< (u, div v)_K; row v, col u     2nq x nu
  Eigen::MatrixXd trace_v;       ///< <uhat, v.n>_dK; row v, col uhat 2nq x 3nm
  Eigen::MatrixXd grad_w;        ///< (q, grad w)_K; row w, col q     nu x 2nq
  Eigen::MatrixXd flux_w;        ///< <q.n, w>_dK; row w, col q       nu x 2nq
  Eigen::MatrixXd stab_uu;       ///< <sigma P_E u, P_E w>_dK         nu x nu
  Eigen::MatrixXd stab_utrace;   ///< <sigma uhat, w>_dK; row w       nu x 3nm
  std::array<Eigen::MatrixXd, 3> face_projection; ///< P_E of u-basis traces, nm x nu
  std::array<double, 3> stab_weight{};            ///< sigma |E| per local edge
  double area = 0.0;
  double diameter = 0.0;

  /// Local matrix of the (q, u) unknowns for a given reaction block on the u-rows.
  Eigen::MatrixXd element_operator(const Eigen::MatrixXd& reaction) const;
  /// Right-hand side coupling: element_operator * [q; u] = loads + coupling * traces.
  Eigen::MatrixXd trace_coupling() const;
  /// Element contribution to the transmission rows: <qhat.n, mu> = rows * [q; u] + diag * traces.
  Eigen::MatrixXd transmission_rows() const;
  Eigen::VectorXd transmission_diagonal() const;
};

/// Local blocks of element k of `mesh` using the bases and rules of `ref`.
LocalMatrices assemble_local(const Mesh& mesh, std::size_t k, const SpaceConfig& cfg,
                             const ReferenceElement& ref);

/// Convenience overload that builds the reference data itself.
LocalMatrices assemble_local(const Mesh& mesh, std::size_t k, const SpaceConfig& cfg);

} // namespace kghdg
