#include <doctest.h>

#include <cmath>
#include <random>

#include "kghdg/postprocess.hpp"
#include "kghdg/projection.hpp"

using namespace kghdg;
using Eigen::Index;

namespace {

Eigen::VectorXd random_vector(Index n, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = u(gen);
  return v;
}

} // namespace

TEST_SUITE("postprocess") {

TEST_CASE("constant u with zero flux") {
  const Discretization d(build_structured(1), {2, Variant::standard, 1.0});
  HdgState s = d.zero_state();
  for (std::size_t k = 0; k < d.num_elements(); ++k) d.u_block(s.u, k)[0] = 3.0;
  const PostprocessedField p = postprocess(d, s);
  const TriangleBasis b(3);
  for (std::size_t k = 0; k < d.num_elements(); ++k)
    for (const Point& xi : {Point(0.1, 0.2), Point(0.5, 0.3)})
      CHECK(p.block(k).dot(b.values(xi)) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("exact gradient recovers the polynomial") {
  // p = x^3 - x y^2 + 2 y, in P_3 = P_{k+1} for k = 2
  auto p = [](const Point& x) { return x.x() * x.x() * x.x() - x.x() * x.y() * x.y() + 2.0 * x.y(); };
  auto gp = [](const Point& x) -> Eigen::Vector2d {
    return {3.0 * x.x() * x.x() - x.y() * x.y(), -2.0 * x.x() * x.y() + 2.0};
  };
  const Discretization d(build_structured(2), {2, Variant::standard, 1.0});
  HdgState s = d.zero_state();
  s.u = project_u(d, p);
  s.q = project_q(d, gp);
  const PostprocessedField ps = postprocess(d, s);
  const TriangleBasis b(3);
  for (std::size_t k = 0; k < d.num_elements(); ++k) {
    const ElementGeometry& g = d.mesh().geometry(k);
    for (const Point& xi : {Point(0.1, 0.2), Point(0.5, 0.3), Point(0.2, 0.7)})
      CHECK(ps.block(k).dot(b.values(xi)) == doctest::Approx(p(g.map(xi))).epsilon(1e-11));
  }
}

TEST_CASE("mean preservation and gradient orthogonality on random data") {
  std::mt19937 gen(23);
  for (int k = 1; k <= 3; ++k) {
    const Discretization d(build_structured(2), {k, Variant::standard, 1.0});
    const Postprocessor pp(d);
    for (int trial = 0; trial < 5; ++trial) {
      HdgState s = d.zero_state();
      s.u = random_vector(s.u.size(), gen);
      s.q = random_vector(s.q.size(), gen);
      const PostprocessedField f = pp.apply(s);
      for (std::size_t e = 0; e < d.num_elements(); ++e) {
        const double mean = d.mesh().geometry(e).area() * d.u_block(s.u, e)[0];
        CHECK(std::abs(pp.mean_defect(e, f.block(e), d.u_block(s.u, e))) <= 1e-12 * (1.0 + std::abs(mean)));
        CHECK(pp.gradient_residual(e, f.block(e), d.q_block(s.q, e)).cwiseAbs().maxCoeff() < 1e-11);
      }
    }
  }
}

}
