#include "kghdg/projection.hpp"

#include "kghdg/error.hpp"
#include "kghdg/local.hpp"
#include "kghdg/quadrature.hpp"

namespace kghdg {
namespace {

using Index = Eigen::Index;

} // namespace

Eigen::VectorXd l2_project_element(const Mesh& mesh, const TriangleBasis& basis,
                                   const ScalarField& f, int quadrature_degree) {
  const int deg = quadrature_degree >= 0 ? quadrature_degree : 2 * basis.degree() + 8;
  const TriangleQuadrature rule = triangle_quadrature(deg);
  const auto n = static_cast<Index>(basis.dim());
  std::vector<Eigen::VectorXd> phi(rule.size());
  for (std::size_t p = 0; p < rule.size(); ++p) phi[p] = basis.values(rule.points[p]);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Index>(mesh.num_elements()) * n);
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const ElementGeometry& g = mesh.geometry(k);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (std::size_t p = 0; p < rule.size(); ++p)
      c += (rule.weights[p] * g.det_jacobian * f(g.map(rule.points[p]))) * phi[p];
    // the basis is orthonormal for the mean inner product, so the mass matrix is |K| I
    out.segment(static_cast<Index>(k) * n, n) = c / g.area();
  }
  return out;
}

Eigen::VectorXd l2_project_face(const Mesh& mesh, const EdgeBasis& basis, const ScalarField& f,
                                bool boundary_only, int quadrature_degree) {
  const int deg = quadrature_degree >= 0 ? quadrature_degree : 2 * basis.degree() + 8;
  const EdgeQuadrature rule = edge_quadrature(deg);
  const auto n = static_cast<Index>(basis.dim());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Index>(mesh.num_faces()) * n);
  for (std::size_t fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& face = mesh.faces()[fi];
    if (boundary_only && !face.boundary) continue;
    const Point a = mesh.vertices()[face.vertices[0]];
    const Point b = mesh.vertices()[face.vertices[1]];
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const double s = rule.points[p];
      c += (rule.weights[p] * f(a + s * (b - a))) * basis.values(s);
    }
    out.segment(static_cast<Index>(fi) * n, n) = c;
  }
  return out;
}

Eigen::VectorXd project_u(const Discretization& disc, const ScalarField& f) {
  return l2_project_element(disc.mesh(), disc.reference().u_basis, f);
}

Eigen::VectorXd project_q(const Discretization& disc, const VectorField& f) {
  const auto nq = static_cast<Index>(disc.nq());
  const Eigen::VectorXd fx =
      l2_project_element(disc.mesh(), disc.reference().q_basis, [&](const Point& x) { return f(x).x(); });
  const Eigen::VectorXd fy =
      l2_project_element(disc.mesh(), disc.reference().q_basis, [&](const Point& x) { return f(x).y(); });
  Eigen::VectorXd q(2 * fx.size());
  for (std::size_t k = 0; k < disc.num_elements(); ++k) {
    const auto i = static_cast<Index>(k);
    q.segment(2 * i * nq, nq) = fx.segment(i * nq, nq);
    q.segment(2 * i * nq + nq, nq) = fy.segment(i * nq, nq);
  }
  return q;
}

Eigen::VectorXd project_trace(const Discretization& disc, const ScalarField& f, bool boundary_only) {
  return l2_project_face(disc.mesh(), disc.reference().trace_basis, f, boundary_only);
}

HdgProjection hdg_project(const Discretization& disc, const ScalarField& u, const VectorField& q) {
  if (disc.config().variant == Variant::enriched) return {project_u(disc, u), project_q(disc, q)};

  const Mesh& mesh = disc.mesh();
  const ReferenceElement& ref = disc.reference();
  const double tau = disc.config().tau;
  const int k = disc.config().k;
  const auto n = static_cast<Index>(disc.nq()); // == nu for the standard spaces
  const auto nm = static_cast<Index>(disc.nm());
  const auto low = static_cast<Index>(k > 0 ? dim_triangle(k - 1) : 0);

  const TriangleQuadrature vol = triangle_quadrature(2 * k + 8);
  const EdgeQuadrature edge = edge_quadrature(2 * k + 8);
  std::vector<Eigen::VectorXd> phi_vol(vol.size());
  for (std::size_t p = 0; p < vol.size(); ++p) phi_vol[p] = ref.q_basis.values(vol.points[p]);

  HdgProjection out;
  out.u = Eigen::VectorXd::Zero(static_cast<Index>(disc.num_elements()) * n);
  out.q = Eigen::VectorXd::Zero(2 * out.u.size());

  for (std::size_t kk = 0; kk < disc.num_elements(); ++kk) {
    const ElementGeometry& g = mesh.geometry(kk);
    const LocalMatrices& lm = disc.local(kk);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(3 * n);

    // moments against P_{k-1}: the basis is hierarchical, so these are the first `low` functions
    Eigen::VectorXd mq_x = Eigen::VectorXd::Zero(n), mq_y = Eigen::VectorXd::Zero(n),
                    mu = Eigen::VectorXd::Zero(n);
    for (std::size_t p = 0; p < vol.size(); ++p) {
      const Point x = g.map(vol.points[p]);
      const double w = vol.weights[p] * g.det_jacobian;
      const Eigen::Vector2d qv = q(x);
      mq_x += (w * qv.x()) * phi_vol[p];
      mq_y += (w * qv.y()) * phi_vol[p];
      mu += (w * u(x)) * phi_vol[p];
    }
    Index row = 0;
    for (Index i = 0; i < low; ++i, ++row) {
      a(row, i) = g.area();
      b[row] = mq_x[i];
    }
    for (Index i = 0; i < low; ++i, ++row) {
      a(row, n + i) = g.area();
      b[row] = mq_y[i];
    }
    for (Index i = 0; i < low; ++i, ++row) {
      a(row, 2 * n + i) = g.area();
      b[row] = mu[i];
    }
    // <Pi_V q . n - tau Pi_W u, mu>_E = <q . n - tau u, mu>_E on each edge
    for (int e = 0; e < 3; ++e) {
      const Face& face = mesh.faces()[mesh.face_of(kk, e)];
      const Point pa = mesh.vertices()[face.vertices[0]];
      const Point pb = mesh.vertices()[face.vertices[1]];
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nm);
      for (std::size_t p = 0; p < edge.size(); ++p) {
        const Point x = pa + edge.points[p] * (pb - pa);
        const double val = q(x).dot(g.normals[e]) - tau * u(x);
        rhs += (edge.weights[p] * face.length * val) * ref.trace_basis.values(edge.points[p]);
      }
      a.block(row, 0, nm, 2 * n) = lm.trace_v.middleCols(e * nm, nm).transpose();
      a.block(row, 2 * n, nm, n) = -tau * face.length * lm.face_projection[e];
      b.segment(row, nm) = rhs;
      row += nm;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible())
      throw SingularMatrixError("HDG projection system is singular on element " + std::to_string(kk));
    const Eigen::VectorXd x = lu.solve(b);
    const auto off = static_cast<Index>(kk);
    out.q.segment(2 * off * n, 2 * n) = x.head(2 * n);
    out.u.segment(off * n, n) = x.tail(n);
  }
  return out;
}

} // namespace kghdg
