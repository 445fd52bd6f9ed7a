#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SparseLU>

#include "kghdg/cases.hpp"
#include "kghdg/error.hpp"
#include "kghdg/local.hpp"
#include "kghdg/timestepping.hpp"

using namespace kghdg;
using Eigen::Index;

namespace {

ProblemData zero_problem() {
  ProblemData d;
  d.u0 = [](const Point&) { return 0.0; };
  d.laplacian_u0 = d.u0;
  d.u1 = d.u0;
  d.grad_u0 = [](const Point&) -> Eigen::Vector2d { return Eigen::Vector2d::Zero(); };
  d.grad_u1 = d.grad_u0;
  return d;
}

TimeConfig time_config(double dt, double T, Scheme s = Scheme::conservative) {
  TimeConfig t;
  t.dt = dt;
  t.final_time = T;
  t.scheme = s;
  return t;
}

double u_distance(const Discretization& d, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < d.num_elements(); ++k)
    s += d.mesh().geometry(k).area() * (d.u_block(a, k) - d.u_block(b, k)).squaredNorm();
  return std::sqrt(s);
}

} // namespace

TEST_SUITE("timestepping") {

TEST_CASE("time configuration") {
  TimeConfig t = time_config(0.3, 1.0);
  std::ostringstream warn;
  t.validate(&warn);
  CHECK(t.steps() == 3);
  CHECK(t.dt == doctest::Approx(1.0 / 3.0));
  CHECK(warn.str().find("warning") != std::string::npos);

  TimeConfig exact = time_config(0.1, 1.0);
  std::ostringstream quiet;
  exact.validate(&quiet);
  CHECK(exact.steps() == 10);
  CHECK(quiet.str().empty());

  TimeConfig bad = time_config(2.0, 1.0);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = time_config(0.0, 1.0);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("zero data stays zero") {
  for (Scheme s : {Scheme::conservative, Scheme::nonconservative}) {
    const Discretization d(build_structured(1), {1, Variant::standard, 1.0});
    const RunResult r = run(d, zero_problem(), time_config(0.05, 1.0, s));
    CHECK(d.pack(r.final_state).cwiseAbs().maxCoeff() == 0.0);
    // U = 0 has energy 2 (F(0), 1) = 1/2 on the unit square
    CHECK(r.energy.back() == doctest::Approx(0.5).epsilon(1e-13));
  }
}

TEST_CASE("first step converges under joint refinement") {
  const ManufacturedCase c = builtin_case(1);
  double prev = 0.0;
  for (int m = 2; m <= 4; ++m) {
    const Discretization d(build_structured(m), {1, Variant::standard, 1.0});
    const double dt = 0.2 / std::ldexp(1.0, m - 2);
    TimeStepper st(d, c.problem(), time_config(dt, 1.0));
    StepWindow w = st.initialize();
    st.advance(w);
    const Eigen::VectorXd exact = project_u(d, [&](const Point& x) { return c.exact_u(x, dt); });
    const double err = u_distance(d, w.current.u, exact);
    if (m > 2) CHECK(prev / err > 3.0);
    prev = err;
  }
}

TEST_CASE("energy is conserved from the second step on") {
  const ManufacturedCase c = builtin_case(4);
  const Discretization d(build_structured(2), {1, Variant::standard, 1.0});
  TimeConfig t = time_config(0.1, 1.0);
  t.extra_steps = 1;
  const RunResult r = run(d, c.problem(), t);
  REQUIRE(r.energy.size() == 11);
  for (std::size_t n = 2; n <= 10; ++n) CHECK(std::abs(r.energy[n] - r.energy[1]) <= 1e-10);
  // the interior identity telescopes down to the pair (0, 1) as well
  CHECK(std::abs(r.energy[1] - r.energy[0]) <= 1e-10);
  for (const auto& rec : r.records) CHECK(rec.newton_iterations <= 6);
  CHECK(std::isfinite(r.semidiscrete_energy0));
}

TEST_CASE("interior step is time reversible") {
  const ManufacturedCase c = builtin_case(4);
  const Discretization d(build_structured(1), {2, Variant::standard, 1.0});
  TimeStepper st(d, c.problem(), time_config(0.05, 1.0));
  StepWindow w = st.initialize();
  for (int i = 0; i < 3; ++i) st.advance(w);
  const HdgState older = w.previous;
  st.advance(w);
  // (U^{n+1}, U^n) with -dt gives back U^{n-1}
  const HdgState back = st.step_conservative(w.current, w.previous, -0.05);
  CHECK((d.pack(back) - d.pack(older)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("second order in time") {
  const ManufacturedCase c = builtin_case(2);
  const Discretization d(build_structured(2), {1, Variant::standard, 1.0});
  std::vector<Eigen::VectorXd> u;
  for (double dt : {0.1, 0.05, 0.025}) u.push_back(run(d, c.problem(), time_config(dt, 0.5)).final_state.u);
  const double ratio = u_distance(d, u[0], u[1]) / u_distance(d, u[1], u[2]);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("non-conservative scheme factors once") {
  const ManufacturedCase c = builtin_case(1);
  const Discretization d(build_structured(2), {2, Variant::standard, 1.0});
  TimeConfig t = time_config(0.05, 1.0, Scheme::nonconservative);
  const RunResult once = run(d, c.problem(), t);
  t.refactor_every_step = true;
  const RunResult every = run(d, c.problem(), t);
  CHECK(once.factorizations == 2);
  CHECK(every.factorizations == 20);
  CHECK((d.pack(once.final_state) - d.pack(every.final_state)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("schemes agree to second order") {
  const ManufacturedCase c = builtin_case(1);
  const Discretization d(build_structured(2), {1, Variant::standard, 1.0});
  std::vector<double> gap;
  for (double dt : {0.1, 0.05}) {
    const RunResult a = run(d, c.problem(), time_config(dt, 1.0, Scheme::conservative));
    const RunResult b = run(d, c.problem(), time_config(dt, 1.0, Scheme::nonconservative));
    gap.push_back(u_distance(d, a.final_state.u, b.final_state.u));
  }
  CHECK(gap[0] / gap[1] > 3.0);
}

TEST_CASE("assembled Jacobian matches finite differences") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Discretization d(build_structured(1), {1, Variant::standard, 1.0});
  Eigen::VectorXd partner(static_cast<Index>(d.num_elements() * d.nu()));
  for (Index i = 0; i < partner.size(); ++i) partner[i] = u(gen);
  HdgLoads l = zero_loads(d);
  for (Index i = 0; i < l.element.size(); ++i) l.element[i] = u(gen);
  const StepSystem sys(d, 2.0 / (0.1 * 0.1), 2.0, partner, l);
  Eigen::VectorXd x(static_cast<Index>(d.full_size()));
  for (Index i = 0; i < x.size(); ++i) x[i] = u(gen);

  const Eigen::MatrixXd j = Eigen::MatrixXd(sys.jacobian(x));
  Eigen::MatrixXd fd(j.rows(), j.cols());
  const double h = 1e-6;
  for (Index c = 0; c < x.size(); ++c) {
    Eigen::VectorXd xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    fd.col(c) = (sys.residual(xp) - sys.residual(xm)) / (2 * h);
  }
  CHECK((j - fd).cwiseAbs().maxCoeff() <= 1e-5 * j.cwiseAbs().maxCoeff());

  // the condensed Newton increment solves the assembled Jacobian system
  const Eigen::VectorXd r = sys.residual(x);
  Eigen::SparseLU<SparseMatrix> lu(sys.jacobian(x));
  const Eigen::VectorXd direct = lu.solve(r);
  CHECK((sys.newton_increment(x, r) - direct).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + direct.cwiseAbs().maxCoeff()));
}

TEST_CASE("step records as CSV") {
  std::ostringstream os;
  write_step_csv(os, {{1, 0.1, 2, 1e-13, 0.5}});
  CHECK(os.str().rfind("n,t,newton_iterations,residual,energy\n1,", 0) == 0);
}

TEST_CASE("missing initial data is rejected") {
  const Discretization d(build_structured(1), {1, Variant::standard, 1.0});
  ProblemData p = zero_problem();
  p.grad_u1 = nullptr;
  CHECK_THROWS_AS(TimeStepper(d, p, time_config(0.1, 1.0)), ConfigError);
}

}
