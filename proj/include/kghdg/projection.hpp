#pragma once

#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "kghdg/basis.hpp"
#include "kghdg/mesh.hpp"
#include "kghdg/space.hpp"

namespace kghdg {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Eigen::Vector2d(const Point&)>;

/// Elementwise L2 projection onto the span of `basis`; one block of basis.dim() per element.
Eigen::VectorXd l2_project_element(const Mesh& mesh, const TriangleBasis& basis,
                                   const ScalarField& f, int quadrature_degree = -1);

/// Facewise L2 projection onto P_k(E), in the parametrisation of each face.
/// With `boundary_only`, interior faces are left at zero.
Eigen::VectorXd l2_project_face(const Mesh& mesh, const EdgeBasis& basis, const ScalarField& f,
                                bool boundary_only = false, int quadrature_degree = -1);

/// Projections onto the displacement, flux and trace spaces of `disc`.
Eigen::VectorXd project_u(const Discretization& disc, const ScalarField& f);
Eigen::VectorXd project_q(const Discretization& disc, const VectorField& f);
Eigen::VectorXd project_trace(const Discretization& disc, const ScalarField& f,
                              bool boundary_only = false);

struct HdgProjection {
  Eigen::VectorXd u; ///< Pi_W u
  Eigen::VectorXd q; ///< Pi_V q
};

/// The HDG projection pair: moments of degree k - 1 plus matching of
/// q.n - tau u on every face, solved element by element. For the enriched
/// variant both components are plain L2 projections.
HdgProjection hdg_project(const Discretization& disc, const ScalarField& u, const VectorField& q);

} // namespace kghdg
