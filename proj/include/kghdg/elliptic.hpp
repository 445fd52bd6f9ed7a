#pragma once

#include <optional>

#include "kghdg/projection.hpp"
#include "kghdg/space.hpp"

namespace kghdg {

/// HDG solution of the elliptic problem -div q = -lap(u0), q = grad u at t = 0.
///
/// Boundary traces are the face L2 projection of `dirichlet` when given, zero
/// otherwise.
HdgState solve_elliptic_init(const Discretization& disc, const ScalarField& laplacian_u0,
                             const std::optional<ScalarField>& dirichlet = std::nullopt);

} // namespace kghdg
