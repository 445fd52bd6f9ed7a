#pragma once

#include <cstddef>
#include <vector>

#include "kghdg/mesh.hpp"

namespace kghdg {

/// Points and weights that integrate every polynomial of total degree <= `degree` exactly.
template <class PointT>
struct QuadratureRule {
  std::vector<PointT> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Rule on the reference edge [0, 1]; weights sum to 1.
using EdgeQuadrature = QuadratureRule<double>;
/// Rule on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
using TriangleQuadrature = QuadratureRule<Point>;

inline constexpr int kMaxQuadratureDegree = 60;

/// Gauss-Legendre rule with ceil((d + 1) / 2) points.
EdgeQuadrature edge_quadrature(int d);

/// Collapsed (Duffy) tensor Gauss-Legendre rule on the reference triangle.
TriangleQuadrature triangle_quadrature(int d);

} // namespace kghdg
