#include "kghdg/nonlinear.hpp"

namespace kghdg {

NewtonResult newton_solve_dense(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
                                const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
                                Eigen::VectorXd x0, const NewtonConfig& cfg) {
  auto solve = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& r) -> Eigen::VectorXd {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jacobian(x));
    if (!lu.isInvertible()) throw SingularMatrixError("singular Jacobian in Newton iteration");
    return lu.solve(r);
  };
  return newton_solve(residual, solve, std::move(x0), cfg);
}

} // namespace kghdg
