#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "kghdg/space.hpp"

namespace kghdg {

using SparseMatrix = Eigen::SparseMatrix<double>;
/// One nu x nu block per element, added to the displacement rows of the local operator.
using ElementMatrices = std::vector<Eigen::MatrixXd>;

/// Right-hand side data of a linear HDG solve.
///
/// `element` has element_dofs() entries per element (flux rows, then
/// displacement rows). `face` holds a load per trace dof on interior faces
/// (empty means zero). `boundary` holds prescribed trace values; only its
/// boundary-face entries are read (empty means homogeneous).
struct HdgLoads {
  Eigen::VectorXd element;
  Eigen::VectorXd face;
  Eigen::VectorXd boundary;
};

/// Elimination of the element unknowns in favour of the interior face traces.
///
/// The element equations read A_K [q; u] = F_K + G_K uhat_K, so
/// [q; u] = A_K^{-1} F_K + A_K^{-1} G_K uhat_K; inserting this into the
/// transmission conditions gives a sparse system in the interior traces only.
/// The matrix depends on the reaction blocks alone, so one factorisation can
/// serve any number of right-hand sides.
class CondensedSystem {
public:
  CondensedSystem(const Discretization& disc, const ElementMatrices& reactions);

  const SparseMatrix& matrix() const { return matrix_; }
  std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }

  /// Condensed right-hand side for the given loads.
  Eigen::VectorXd rhs(const HdgLoads& loads) const;
  /// Interior traces from a condensed right-hand side (factorises on first use).
  Eigen::VectorXd solve_traces(const Eigen::VectorXd& rhs) const;
  /// Element unknowns and full trace vector from the interior traces.
  HdgState recover(const Eigen::VectorXd& interior_traces, const HdgLoads& loads, double t) const;
  /// rhs, solve_traces and recover in one go.
  HdgState solve(const HdgLoads& loads, double t) const;

  /// Number of sparse LU factorisations performed so far.
  std::size_t factorizations() const { return factorizations_; }

private:
  void factorize() const;
  Eigen::VectorXd full_traces(const Eigen::VectorXd& interior, const HdgLoads& loads) const;

  const Discretization* disc_;
  std::vector<Eigen::MatrixXd> inverse_;  // A_K^{-1}
  std::vector<Eigen::MatrixXd> recovery_; // A_K^{-1} G_K
  std::vector<Eigen::MatrixXd> schur_;    // H_K A_K^{-1} G_K + D_K
  SparseMatrix matrix_;
  mutable std::shared_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
  mutable std::size_t factorizations_ = 0;
};

/// Reaction blocks equal to `coeff` times the element mass matrix.
ElementMatrices mass_reactions(const Discretization& disc, double coeff);

/// Zero loads of the right sizes.
HdgLoads zero_loads(const Discretization& disc);

/// Full (uncondensed) system over every element and face unknown, in the
/// ordering of Discretization::pack. Boundary faces get identity rows.
SparseMatrix assemble_monolithic(const Discretization& disc, const ElementMatrices& reactions);
Eigen::VectorXd monolithic_rhs(const Discretization& disc, const HdgLoads& loads);
HdgState solve_monolithic(const Discretization& disc, const ElementMatrices& reactions,
                          const HdgLoads& loads, double t);

} // namespace kghdg
