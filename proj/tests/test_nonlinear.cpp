#include <doctest.h>

#include <cmath>
#include <random>

#include "kghdg/nonlinear.hpp"

using namespace kghdg;
namespace nl = kghdg::nonlinearity;

TEST_SUITE("nonlinear") {

TEST_CASE("discrete gradient closed form") {
  for (double a : {0.0, 1.0, -2.0}) CHECK(nl::discrete_gradient(a, a).value == doctest::Approx(a * a * a - a));
  CHECK(nl::discrete_gradient(1.0, -1.0).value == 0.0);
  CHECK(nl::discrete_gradient(2.0, 0.0).value == doctest::Approx(1.0));
  CHECK((nl::potential(2.0) - nl::potential(0.0)) / 2.0 == doctest::Approx(1.0));
  CHECK(nl::potential(0.0) == doctest::Approx(0.25));
}

TEST_CASE("symmetry, mean value identity and partials") {
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double a = u(gen), b = u(gen);
    const auto g = nl::discrete_gradient(a, b);
    CHECK(g.value == doctest::Approx(nl::discrete_gradient(b, a).value).epsilon(1e-15));
    const double scale = std::pow(1.0 + std::abs(a) + std::abs(b), 4);
    CHECK(std::abs(g.value * (a - b) - (nl::potential(a) - nl::potential(b))) <= 1e-12 * scale);
    const double h = 1e-6;
    const double da = (nl::discrete_gradient(a + h, b).value - nl::discrete_gradient(a - h, b).value) / (2 * h);
    const double db = (nl::discrete_gradient(a, b + h).value - nl::discrete_gradient(a, b - h).value) / (2 * h);
    CHECK(g.d_a == doctest::Approx(da).epsilon(1e-7));
    CHECK(g.d_b == doctest::Approx(db).epsilon(1e-7));
  }
  CHECK(nl::df(2.0) == doctest::Approx(11.0));
}

TEST_CASE("scalar Newton converges quadratically") {
  NewtonConfig cfg;
  cfg.tolerance = 1e-14;
  auto r = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, nl::f(x[0])); };
  auto j = [](const Eigen::VectorXd& x) { return Eigen::MatrixXd::Constant(1, 1, nl::df(x[0])); };
  const NewtonResult res = newton_solve_dense(r, j, Eigen::VectorXd::Constant(1, 2.0), cfg);
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(res.iterations <= 8);
  // |x_n - 1| from the residual: f(x) ~ 2 (x - 1) near the root
  std::vector<double> err;
  for (double h : res.history) err.push_back(h / 2.0);
  for (std::size_t i = 1; i + 1 < err.size(); ++i)
    if (err[i] < 1e-2 && err[i + 1] > 1e-13) CHECK(err[i + 1] / (err[i] * err[i]) < 10.0);
}

TEST_CASE("linear residual converges in one iteration") {
  Eigen::Matrix3d a;
  a << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  const Eigen::Vector3d b(1, 2, 3);
  auto r = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x - b; };
  auto j = [&](const Eigen::VectorXd&) -> Eigen::MatrixXd { return a; };
  const NewtonResult res = newton_solve_dense(r, j, Eigen::VectorXd::Zero(3), NewtonConfig{});
  CHECK(res.iterations == 1);
  CHECK((a * res.x - b).norm() < 1e-13);
}

TEST_CASE("failure modes") {
  NewtonConfig cfg;
  cfg.max_iterations = 3;
  auto r = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, x[0] * x[0] + 1.0); };
  auto j = [](const Eigen::VectorXd& x) { return Eigen::MatrixXd::Constant(1, 1, 2.0 * x[0]); };
  CHECK_THROWS_AS(newton_solve_dense(r, j, Eigen::VectorXd::Constant(1, 0.5), cfg), NewtonError);
  CHECK_THROWS_AS(newton_solve_dense(r, j, Eigen::VectorXd::Constant(1, 0.0), cfg), SingularMatrixError);
  cfg.tolerance = -1.0;
  CHECK_THROWS_AS(newton_solve_dense(r, j, Eigen::VectorXd::Constant(1, 0.5), cfg), ConfigError);
  try {
    NewtonConfig c2;
    c2.max_iterations = 2;
    newton_solve_dense(r, j, Eigen::VectorXd::Constant(1, 0.5), c2);
  } catch (const NewtonError& e) {
    CHECK(e.iterations() == 2);
    CHECK(e.residual() > 0.0);
  }
}

}
