#include "kghdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "kghdg/error.hpp"

namespace kghdg {

ElementGeometry element_geometry(const Point& a, const Point& b, const Point& c) {
  ElementGeometry g;
  g.origin = a;
  g.jacobian.col(0) = b - a;
  g.jacobian.col(1) = c - a;
  g.det_jacobian = g.jacobian.determinant();

  const double scale = std::max({(b - a).squaredNorm(), (c - a).squaredNorm(), 1e-300});
  if (!(g.det_jacobian > 1e-14 * scale))
    throw GeometryError("degenerate or clockwise triangle (det J = " +
                        std::to_string(g.det_jacobian) + ")");
  g.inverse_jacobian = g.jacobian.inverse();

  const std::array<Point, 3> v{a, b, c};
  for (int e = 0; e < 3; ++e) {
    const Point t = v[(e + 1) % 3] - v[e];
    g.edge_lengths[e] = t.norm();
    // counterclockwise vertices: the outward normal is the tangent turned clockwise
    g.normals[e] = Point(t.y(), -t.x()) / g.edge_lengths[e];
  }
  g.diameter = *std::max_element(g.edge_lengths.begin(), g.edge_lengths.end());
  return g;
}

std::size_t Mesh::num_boundary_faces() const {
  return static_cast<std::size_t>(
      std::count_if(faces_.begin(), faces_.end(), [](const Face& f) { return f.boundary; }));
}

void Mesh::finalize() {
  const std::size_t nt = triangles_.size();
  geometry_.resize(nt);
  triangle_faces_.assign(nt, {});
  triangle_face_signs_.assign(nt, {});
  faces_.clear();
  h_max_ = 0.0;

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup;
  for (std::size_t k = 0; k < nt; ++k) {
    const auto& t = triangles_[k];
    geometry_[k] = element_geometry(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    h_max_ = std::max(h_max_, geometry_[k].diameter);

    for (int e = 0; e < 3; ++e) {
      const std::size_t a = t[e];
      const std::size_t b = t[(e + 1) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = lookup.try_emplace({key.first, key.second}, faces_.size());
      if (inserted) {
        Face f;
        f.vertices = {key.first, key.second};
        f.length = geometry_[k].edge_lengths[e];
        f.normal = geometry_[k].normals[e];
        f.elements = {static_cast<std::ptrdiff_t>(k), -1};
        f.local_edge = {e, -1};
        faces_.push_back(f);
        triangle_face_signs_[k][e] = 1;
      } else {
        Face& f = faces_[it->second];
        if (f.elements[1] >= 0)
          throw GeometryError("non-manifold edge shared by more than two triangles");
        f.elements[1] = static_cast<std::ptrdiff_t>(k);
        f.local_edge[1] = e;
        triangle_face_signs_[k][e] = -1;
      }
      triangle_faces_[k][e] = it->second;
    }
  }
  for (auto& f : faces_) f.boundary = f.elements[1] < 0;
}

Mesh build_structured(int m, const Rectangle& domain) {
  if (m < 0) throw ConfigError("refinement level must be non-negative");
  if (!(domain.x1 > domain.x0 && domain.y1 > domain.y0))
    throw ConfigError("empty rectangle");

  const std::size_t n = std::size_t{1} << m;
  Mesh mesh;
  mesh.level_ = m;
  mesh.domain_ = domain;
  mesh.vertices_.reserve((n + 1) * (n + 1));
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t i = 0; i <= n; ++i)
      mesh.vertices_.emplace_back(domain.x0 + (domain.x1 - domain.x0) * double(i) / double(n),
                                  domain.y0 + (domain.y1 - domain.y0) * double(j) / double(n));

  auto vid = [n](std::size_t i, std::size_t j) { return j * (n + 1) + i; };
  mesh.triangles_.reserve(2 * n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh.triangles_.push_back({a, b, c});
      mesh.triangles_.push_back({a, c, d});
    }
  }
  mesh.finalize();
  return mesh;
}

Mesh build_from_triangles(std::vector<Point> vertices,
                          std::vector<std::array<std::size_t, 3>> triangles) {
  Mesh mesh;
  for (const auto& t : triangles)
    for (auto v : t)
      if (v >= vertices.size()) throw ConfigError("triangle references a missing vertex");
  mesh.vertices_ = std::move(vertices);
  mesh.triangles_ = std::move(triangles);
  mesh.level_ = -1;
  if (!mesh.vertices_.empty()) {
    Rectangle box{mesh.vertices_[0].x(), mesh.vertices_[0].y(), mesh.vertices_[0].x(),
                  mesh.vertices_[0].y()};
    for (const auto& p : mesh.vertices_) {
      box.x0 = std::min(box.x0, p.x());
      box.y0 = std::min(box.y0, p.y());
      box.x1 = std::max(box.x1, p.x());
      box.y1 = std::max(box.y1, p.y());
    }
    mesh.domain_ = box;
  }
  mesh.finalize();
  return mesh;
}

void Mesh::write_text(std::ostream& os) const {
  os << "# vertices " << vertices_.size() << " triangles " << triangles_.size() << " faces "
     << faces_.size() << '\n';
  os.precision(17);
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    os << "v " << i << ' ' << vertices_[i].x() << ' ' << vertices_[i].y() << '\n';
  for (std::size_t k = 0; k < triangles_.size(); ++k)
    os << "t " << k << ' ' << triangles_[k][0] << ' ' << triangles_[k][1] << ' '
       << triangles_[k][2] << '\n';
  for (std::size_t f = 0; f < faces_.size(); ++f)
    os << "f " << f << ' ' << faces_[f].vertices[0] << ' ' << faces_[f].vertices[1] << ' '
       << faces_[f].elements[0] << ' ' << faces_[f].elements[1] << ' '
       << (faces_[f].boundary ? 1 : 0) << '\n';
}

} // namespace kghdg
