#pragma once

#include <optional>

#include <Eigen/Dense>

#include "kghdg/basis.hpp"
#include "kghdg/postprocess.hpp"
#include "kghdg/projection.hpp"
#include "kghdg/space.hpp"

namespace kghdg {

struct ErrorNorms {
  double u = 0.0;
  double q = 0.0;
  double ustar = 0.0; ///< zero when no reconstruction was supplied
};

/// Broken L2 norm of (f - sum_i c_i phi_i) over the mesh, with `c` holding one
/// block of basis.dim() coefficients per element. Uses the error rule of `disc`
/// or a raised one if `basis` is of higher degree.
double l2_error(const Discretization& disc, const TriangleBasis& basis, const Eigen::VectorXd& c,
                const ScalarField& f);

/// Broken L2 norm of (f - q_h) for per-element [qx, qy] blocks in the flux space.
double l2_error_vector(const Discretization& disc, const Eigen::VectorXd& q, const VectorField& f);

/// ||u - u_h||, ||q - q_h|| and (optionally) ||u - u*_h||.
ErrorNorms error_norms(const Discretization& disc, const HdgState& s,
                       const std::optional<PostprocessedField>& ustar, const ScalarField& u,
                       const VectorField& grad_u);

} // namespace kghdg
