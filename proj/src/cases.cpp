#include "kghdg/cases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kghdg/error.hpp"

namespace kghdg {
namespace {

constexpr double pi = std::numbers::pi;

double sxy(const Point& p) { return std::sin(pi * p.x()) * std::sin(pi * p.y()); }
Eigen::Vector2d grad_sxy(const Point& p) {
  return {pi * std::cos(pi * p.x()) * std::sin(pi * p.y()), pi * std::sin(pi * p.x()) * std::cos(pi * p.y())};
}

// u = t^2 s
ManufacturedCase example1() {
  ManufacturedCase c;
  c.id = 1;
  c.name = "t^2 sin(pi x) sin(pi y)";
  c.exact_u = [](const Point& p, double t) { return t * t * sxy(p); };
  c.exact_ut = [](const Point& p, double t) { return 2.0 * t * sxy(p); };
  c.exact_utt = [](const Point& p, double) { return 2.0 * sxy(p); };
  c.exact_grad = [](const Point& p, double t) -> Eigen::Vector2d { return t * t * grad_sxy(p); };
  c.exact_laplacian = [](const Point& p, double t) { return -2.0 * pi * pi * t * t * sxy(p); };
  c.source = [](const Point& p, double t) {
    const double s = sxy(p);
    const double t2 = t * t;
    return (2.0 + 2.0 * pi * pi * t2 - t2) * s + t2 * t2 * t2 * s * s * s;
  };
  c.u0 = [](const Point&) { return 0.0; };
  c.laplacian_u0 = [](const Point&) { return 0.0; };
  c.grad_u0 = [](const Point&) -> Eigen::Vector2d { return Eigen::Vector2d::Zero(); };
  c.u1 = [](const Point&) { return 0.0; };
  c.grad_u1 = [](const Point&) -> Eigen::Vector2d { return Eigen::Vector2d::Zero(); };
  return c;
}

// u = exp(2 t^2) s
ManufacturedCase example2() {
  ManufacturedCase c;
  c.id = 2;
  c.name = "exp(2t^2) sin(pi x) sin(pi y)";
  c.exact_u = [](const Point& p, double t) { return std::exp(2.0 * t * t) * sxy(p); };
  c.exact_ut = [](const Point& p, double t) { return 4.0 * t * std::exp(2.0 * t * t) * sxy(p); };
  c.exact_utt = [](const Point& p, double t) {
    return (4.0 + 16.0 * t * t) * std::exp(2.0 * t * t) * sxy(p);
  };
  c.exact_grad = [](const Point& p, double t) -> Eigen::Vector2d {
    return std::exp(2.0 * t * t) * grad_sxy(p);
  };
  c.exact_laplacian = [](const Point& p, double t) {
    return -2.0 * pi * pi * std::exp(2.0 * t * t) * sxy(p);
  };
  c.source = [](const Point& p, double t) {
    const double s = sxy(p);
    const double e = std::exp(2.0 * t * t);
    return (4.0 + 16.0 * t * t + 2.0 * pi * pi - 1.0) * e * s + e * e * e * s * s * s;
  };
  c.u0 = sxy;
  c.laplacian_u0 = [](const Point& p) { return -2.0 * pi * pi * sxy(p); };
  c.grad_u0 = grad_sxy;
  c.u1 = [](const Point&) { return 0.0; };
  c.grad_u1 = [](const Point&) -> Eigen::Vector2d { return Eigen::Vector2d::Zero(); };
  return c;
}

// u = tanh(x / sqrt(3) - t), a travelling kink
ManufacturedCase example3() {
  static const double r3 = 1.0 / std::sqrt(3.0);
  auto sech2 = [](double z) {
    const double c = std::cosh(z);
    return 1.0 / (c * c);
  };
  ManufacturedCase c;
  c.id = 3;
  c.name = "tanh(x/sqrt(3) - t)";
  c.boundary = BoundaryKind::exact_trace;
  c.exact_u = [](const Point& p, double t) { return std::tanh(r3 * p.x() - t); };
  c.exact_ut = [sech2](const Point& p, double t) { return -sech2(r3 * p.x() - t); };
  c.exact_utt = [sech2](const Point& p, double t) {
    const double z = r3 * p.x() - t;
    return -2.0 * sech2(z) * std::tanh(z);
  };
  c.exact_grad = [sech2](const Point& p, double t) -> Eigen::Vector2d {
    return {r3 * sech2(r3 * p.x() - t), 0.0};
  };
  c.exact_laplacian = [sech2](const Point& p, double t) {
    const double z = r3 * p.x() - t;
    return -(2.0 / 3.0) * sech2(z) * std::tanh(z);
  };
  c.source = [](const Point& p, double t) {
    const double u = std::tanh(r3 * p.x() - t);
    return (7.0 / 3.0) * (u * u * u - u);
  };
  c.u0 = [](const Point& p) { return std::tanh(r3 * p.x()); };
  c.laplacian_u0 = [](const Point& p) {
    const double u = std::tanh(r3 * p.x());
    return -(2.0 / 3.0) * u * (1.0 - u * u);
  };
  c.grad_u0 = [sech2](const Point& p) -> Eigen::Vector2d { return {r3 * sech2(r3 * p.x()), 0.0}; };
  c.u1 = [sech2](const Point& p) { return -sech2(r3 * p.x()); };
  c.grad_u1 = [sech2](const Point& p) -> Eigen::Vector2d {
    const double z = r3 * p.x();
    return {2.0 * r3 * sech2(z) * std::tanh(z), 0.0};
  };
  return c;
}

// source-free, u0 = 20 x^2 (1-x)^2 y^2 (1-y)^2, u1 = 2 sin(2 pi x) sin(2 pi y)
ManufacturedCase example4() {
  auto b = [](double x) { return x * x * (1.0 - x) * (1.0 - x); };
  auto db = [](double x) { return 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x); };
  auto ddb = [](double x) { return 2.0 - 12.0 * x + 12.0 * x * x; };
  ManufacturedCase c;
  c.id = 4;
  c.name = "source-free bump";
  c.u0 = [b](const Point& p) { return 20.0 * b(p.x()) * b(p.y()); };
  c.laplacian_u0 = [b, ddb](const Point& p) {
    return 20.0 * (ddb(p.x()) * b(p.y()) + b(p.x()) * ddb(p.y()));
  };
  c.grad_u0 = [b, db](const Point& p) -> Eigen::Vector2d {
    return {20.0 * db(p.x()) * b(p.y()), 20.0 * b(p.x()) * db(p.y())};
  };
  c.u1 = [](const Point& p) { return 2.0 * std::sin(2.0 * pi * p.x()) * std::sin(2.0 * pi * p.y()); };
  c.grad_u1 = [](const Point& p) -> Eigen::Vector2d {
    return {4.0 * pi * std::cos(2.0 * pi * p.x()) * std::sin(2.0 * pi * p.y()),
            4.0 * pi * std::sin(2.0 * pi * p.x()) * std::cos(2.0 * pi * p.y())};
  };
  return c;
}

} // namespace

ProblemData ManufacturedCase::problem() const {
  ProblemData d;
  d.u0 = u0;
  d.laplacian_u0 = laplacian_u0;
  d.grad_u0 = grad_u0;
  d.u1 = u1;
  d.grad_u1 = grad_u1;
  d.source = source;
  if (boundary == BoundaryKind::exact_trace) d.dirichlet = exact_u;
  return d;
}

double ManufacturedCase::pde_residual(const Point& x, double t) const {
  if (!has_exact()) throw ConfigError("case " + std::to_string(id) + " has no exact solution");
  const double u = exact_u(x, t);
  const double g = source ? source(x, t) : 0.0;
  return exact_utt(x, t) - exact_laplacian(x, t) + u * u * u - u - g;
}

ManufacturedCase builtin_case(int id) {
  switch (id) {
  case 1: return example1();
  case 2: return example2();
  case 3: return example3();
  case 4: return example4();
  default: throw ConfigError("unknown example " + std::to_string(id) + " (expected 1..4)");
  }
}

double max_pde_residual(const ManufacturedCase& c, int samples, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Point x(unit(gen), unit(gen));
    const double t = c.final_time * unit(gen);
    worst = std::max(worst, std::abs(c.pde_residual(x, t)));
  }
  return worst;
}

void validate_case(const ManufacturedCase& c, double tol) {
  if (!c.has_exact()) return;
  const double r = max_pde_residual(c);
  if (!(r <= tol))
    throw ConfigError("example " + std::to_string(c.id) + ": source does not match the solution (residual " +
                      std::to_string(r) + ")");
}

} // namespace kghdg
