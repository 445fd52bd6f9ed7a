#include "kghdg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kghdg/error.hpp"

namespace kghdg {
namespace {

void check_degree(int d) {
  if (d < 0 || d > kMaxQuadratureDegree)
    throw ConfigError("quadrature degree " + std::to_string(d) + " outside [0, " +
                      std::to_string(kMaxQuadratureDegree) + "]");
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = z;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

} // namespace

EdgeQuadrature edge_quadrature(int d) {
  check_degree(d);
  const int n = (d + 2) / 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);

  EdgeQuadrature rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = 0.5 * (x[i] + 1.0);
    rule.weights[i] = 0.5 * w[i];
  }
  return rule;
}

TriangleQuadrature triangle_quadrature(int d) {
  check_degree(d);
  // x = a (1 - b), y = b; the Jacobian (1 - b) raises the degree in b by one
  const int na = (d + 2) / 2;
  const int nb = (d + 3) / 2;
  std::vector<double> xa, wa, xb, wb;
  gauss_legendre(na, xa, wa);
  gauss_legendre(nb, xb, wb);

  TriangleQuadrature rule;
  rule.degree = std::min(2 * na - 1, 2 * nb - 2);
  rule.points.reserve(na * nb);
  rule.weights.reserve(na * nb);
  for (int j = 0; j < nb; ++j) {
    const double b = 0.5 * (xb[j] + 1.0);
    for (int i = 0; i < na; ++i) {
      const double a = 0.5 * (xa[i] + 1.0);
      rule.points.emplace_back(a * (1.0 - b), b);
      rule.weights.push_back(0.25 * wa[i] * wb[j] * (1.0 - b));
    }
  }
  return rule;
}

} // namespace kghdg
