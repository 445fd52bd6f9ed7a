#include "kghdg/elliptic.hpp"

#include "kghdg/condense.hpp"
#include "kghdg/local.hpp"

namespace kghdg {

HdgState solve_elliptic_init(const Discretization& disc, const ScalarField& laplacian_u0,
                             const std::optional<ScalarField>& dirichlet) {
  const auto nel = static_cast<Eigen::Index>(disc.element_dofs());
  const auto q2 = static_cast<Eigen::Index>(2 * disc.nq());
  const auto nu = static_cast<Eigen::Index>(disc.nu());

  HdgLoads loads = zero_loads(disc);
  const Eigen::VectorXd lap = project_u(disc, laplacian_u0);
  for (std::size_t k = 0; k < disc.num_elements(); ++k) {
    // (q, grad w) - <qhat.n, w> = -(div q, w) + stabilization = (-lap u0, w)
    const auto i = static_cast<Eigen::Index>(k);
    loads.element.segment(i * nel + q2, nu) = -disc.local(k).area * lap.segment(i * nu, nu);
  }
  if (dirichlet) loads.boundary = project_trace(disc, *dirichlet, true);

  const CondensedSystem sys(disc, mass_reactions(disc, 0.0));
  return sys.solve(loads, 0.0);
}

} // namespace kghdg
