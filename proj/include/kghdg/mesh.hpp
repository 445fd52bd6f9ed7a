#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace kghdg {

using Point = Eigen::Vector2d;

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rectangle {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double area() const { return (x1 - x0) * (y1 - y0); }
};

/// An edge of the triangulation.
///
/// Vertices are stored with `vertices[0] < vertices[1]`; the face parameter
/// s in [0, 1] runs from the first to the second vertex. The normal points out
/// of `elements[0]`, which is the lower-indexed neighbour on interior faces.
struct Face {
  std::array<std::size_t, 2> vertices{};
  Point normal = Point::Zero();
  double length = 0.0;
  bool boundary = false;
  std::array<std::ptrdiff_t, 2> elements{-1, -1};
  std::array<int, 2> local_edge{-1, -1};
};

/// Affine data of one triangle. The map is x = origin + jacobian * xi with
/// xi in the reference triangle (0,0), (1,0), (0,1).
struct ElementGeometry {
  Point origin = Point::Zero();
  Eigen::Matrix2d jacobian = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d inverse_jacobian = Eigen::Matrix2d::Zero();
  double det_jacobian = 0.0;
  double diameter = 0.0;
  std::array<Point, 3> normals{};
  std::array<double, 3> edge_lengths{};

  Point map(const Point& xi) const { return origin + jacobian * xi; }
  Point pullback(const Point& x) const { return inverse_jacobian * (x - origin); }
  double area() const { return 0.5 * det_jacobian; }
};

/// Conforming triangulation of a rectangle together with its face skeleton.
///
/// Local edge e of a triangle joins its local vertices e and (e + 1) % 3,
/// which matches the reference edges (0,0)-(1,0), (1,0)-(0,1), (0,1)-(0,0).
class Mesh {
public:
  Mesh() = default;

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<std::size_t, 3>>& triangles() const { return triangles_; }
  const std::vector<Face>& faces() const { return faces_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_elements() const { return triangles_.size(); }
  std::size_t num_faces() const { return faces_.size(); }
  std::size_t num_boundary_faces() const;

  /// Global face index of local edge `e` of triangle `k`.
  std::size_t face_of(std::size_t k, int e) const { return triangle_faces_[k][e]; }
  /// +1 when the stored face normal is the outward normal of triangle `k`, -1 otherwise.
  int face_sign(std::size_t k, int e) const { return triangle_face_signs_[k][e]; }

  const ElementGeometry& geometry(std::size_t k) const { return geometry_[k]; }

  double h_max() const { return h_max_; }
  int refinement_level() const { return level_; }
  const Rectangle& domain() const { return domain_; }

  /// Plain-text dump: counts line, then one vertex, triangle or face per line.
  void write_text(std::ostream& os) const;

  friend Mesh build_structured(int m, const Rectangle& domain);
  friend Mesh build_from_triangles(std::vector<Point> vertices,
                                   std::vector<std::array<std::size_t, 3>> triangles);

private:
  void finalize();

  std::vector<Point> vertices_;
  std::vector<std::array<std::size_t, 3>> triangles_;
  std::vector<Face> faces_;
  std::vector<std::array<std::size_t, 3>> triangle_faces_;
  std::vector<std::array<int, 3>> triangle_face_signs_;
  std::vector<ElementGeometry> geometry_;
  double h_max_ = 0.0;
  int level_ = 0;
  Rectangle domain_{};
};

/// Uniform mesh with 2^m x 2^m cells, each cut along the diagonal from its
/// lower-left to its upper-right corner.
Mesh build_structured(int m, const Rectangle& domain = {});

/// Mesh from explicit counterclockwise triangles. Boundary faces are the ones
/// with a single neighbour.
Mesh build_from_triangles(std::vector<Point> vertices,
                          std::vector<std::array<std::size_t, 3>> triangles);

/// Affine map, Jacobian and outward normals of a triangle given by its vertices.
/// Throws GeometryError for a degenerate or clockwise triangle.
ElementGeometry element_geometry(const Point& a, const Point& b, const Point& c);

} // namespace kghdg
