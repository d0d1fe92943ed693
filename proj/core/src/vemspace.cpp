#include "pixvem/vemspace.hpp"

#include "pixvem/error.hpp"
#include "pixvem/quadrature.hpp"

#include <cmath>

namespace pixvem {

DofMap build_dof_map(const PolyMesh& mesh, int k) {
  if (k < 1) throw Error(ErrorCode::ConfigError, "order k must be >= 1");
  DofMap m;
  m.k = k;
  m.n_vertices = static_cast<int>(mesh.vertices.size());
  m.n_edges = static_cast<int>(mesh.edges.size());
  m.n_elements = static_cast<int>(mesh.elements.size());
  m.per_edge = k - 1;
  m.per_element = MonomialBasis::dim(k - 2);
  m.N = m.n_vertices + m.n_edges * m.per_edge + m.n_elements * m.per_element;
  m.element_dofs.resize(m.n_elements);
  for (int e = 0; e < m.n_elements; ++e) {
    const auto& el = mesh.elements[e];
    auto& ids = m.element_dofs[e];
    for (int v : el.vertices) ids.push_back(m.vertex_dof(v));
    for (const EdgeRef& r : el.edges)
      for (int j = 0; j < m.per_edge; ++j)
        ids.push_back(m.edge_dof(r.edge, r.reversed ? m.per_edge - 1 - j : j));
    for (int a = 0; a < m.per_element; ++a) ids.push_back(m.moment_dof(e, a));
  }
  return m;
}

void pixel_quadrature(const PixelGrid& grid, const std::vector<int>& pixels, int n,
                      const std::function<void(const Vec2&, double)>& visit) {
  const Rule1D& r = gauss_legendre(n);
  const double area = grid.h * grid.h;
  for (int p : pixels) {
    const Vec2 lo = grid.point(p % grid.nx, p / grid.nx);
    for (int qy = 0; qy < n; ++qy)
      for (int qx = 0; qx < n; ++qx)
        visit(lo + grid.h * Vec2(r.nodes[qx], r.nodes[qy]), r.weights[qx] * r.weights[qy] * area);
  }
}

Eigen::VectorXd ElementOperators::gather(const Eigen::VectorXd& global) const {
  Eigen::VectorXd v(n_dofs);
  for (int i = 0; i < n_dofs; ++i) v(i) = global(dofs[i]);
  return v;
}

Eigen::MatrixXd stabilization(const ElementOperators& ops, double beta) {
  const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(ops.n_dofs, ops.n_dofs) - ops.PiNabla;
  return beta * R.transpose() * R;
}

ElementOperators build_projectors(const PolyMesh& mesh, const DofMap& dofs, int element,
                                  double beta) {
  const PolyElement& el = mesh.elements[element];
  const int k = dofs.k;
  const int nv = static_cast<int>(el.vertices.size());
  const int nm = MonomialBasis::dim(k - 2);
  const int nk = MonomialBasis::dim(k);
  const int nk1 = MonomialBasis::dim(k - 1);

  ElementOperators op;
  op.element = element;
  op.k = k;
  op.n_vertices = nv;
  op.n_dofs = nv * k + nm;
  op.area = el.area;
  op.beta = beta;
  op.basis = MonomialBasis(k, el.x_K, el.H_K);
  op.dofs = dofs.element_dofs[element];

  const Rule1D& gl = gauss_lobatto(k + 1);
  op.node_points.resize(nv * k);
  op.edge_nodes.resize(nv);
  for (int i = 0; i < nv; ++i) {
    const auto [a, b] = mesh.edge_points(element, i);
    op.node_points[i] = a;
    op.edge_nodes[i].push_back(i);
    for (int j = 0; j < k - 1; ++j) {
      const int id = nv + i * (k - 1) + j;
      op.node_points[id] = a + gl.nodes[j + 1] * (b - a);
      op.edge_nodes[i].push_back(id);
    }
    op.edge_nodes[i].push_back((i + 1) % nv);
  }

  const Eigen::MatrixXd mu =
      pixel_moments(mesh.grid, el.pixels, op.basis.center, op.basis.H, 2 * k);
  op.Mass.resize(nk, nk);
  for (int r = 0; r < nk; ++r) {
    const auto [ar, br] = MonomialBasis::exponent(r);
    for (int c = 0; c < nk; ++c) {
      const auto [ac, bc] = MonomialBasis::exponent(c);
      op.Mass(r, c) = mu(ar + ac, br + bc);
    }
  }

  const int n = op.n_dofs;
  op.D.resize(n, nk);
  for (int i = 0; i < nv * k; ++i) op.D.row(i) = op.basis.eval(op.node_points[i]).transpose();
  for (int a = 0; a < nm; ++a) op.D.row(op.local_moment(a)) = op.Mass.row(a) / el.area;

  // Boundary parts: Gauss-Lobatto on each edge is exact for degree 2k-1.
  op.B = Eigen::MatrixXd::Zero(nk, n);
  Eigen::MatrixXd Ex = Eigen::MatrixXd::Zero(nk1, n);
  Eigen::MatrixXd Ey = Eigen::MatrixXd::Zero(nk1, n);
  for (int i = 0; i < nv; ++i) {
    const auto [a, b] = mesh.edge_points(element, i);
    const double len = (b - a).norm();
    const Vec2 nu = mesh.outward_normal(element, i);
    for (int j = 0; j <= k; ++j) {
      const int id = op.edge_nodes[i][j];
      const Vec2 x = a + gl.nodes[j] * (b - a);
      const double w = gl.weights[j] * len;
      op.B(0, id) += w;
      const Eigen::VectorXd dn = op.basis.grad(x) * nu;
      for (int r = 1; r < nk; ++r) op.B(r, id) += w * dn(r);
      const Eigen::VectorXd m = op.basis.eval(x);
      for (int r = 0; r < nk1; ++r) {
        Ex(r, id) += w * m(r) * nu.x();
        Ey(r, id) += w * m(r) * nu.y();
      }
    }
  }
  // Volume parts through the moments: integral of v m_b = |K| * moment_b.
  const Eigen::MatrixXd lap = op.basis.laplacian();
  const Eigen::MatrixXd dx = op.basis.dx();
  const Eigen::MatrixXd dy = op.basis.dy();
  for (int b = 0; b < nm; ++b) {
    const int id = op.local_moment(b);
    for (int r = 1; r < nk; ++r) op.B(r, id) -= lap(b, r) * el.area;
    for (int r = 0; r < nk1; ++r) {
      Ex(r, id) -= dx(b, r) * el.area;
      Ey(r, id) -= dy(b, r) * el.area;
    }
  }

  op.G = op.B * op.D;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(op.G);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    throw Error(ErrorCode::SingularG, "projector matrix of element " + std::to_string(element) +
                                          " is singular");
  }
  op.PiNablaStar = lu.solve(op.B);
  op.PiNabla = op.D * op.PiNablaStar;

  Eigen::MatrixXd Gt = op.G;
  Gt.row(0).setZero();
  op.Consistency = op.PiNablaStar.transpose() * Gt * op.PiNablaStar;
  op.S = stabilization(op, beta);

  // Enhancement: moments of degree k-1 and k are those of the elliptic projection.
  Eigen::MatrixXd C(nk, n);
  const Eigen::MatrixXd high = op.Mass * op.PiNablaStar;
  for (int r = 0; r < nk; ++r) {
    if (r < nm) {
      C.row(r).setZero();
      C(r, op.local_moment(r)) = el.area;
    } else {
      C.row(r) = high.row(r);
    }
  }
  const Eigen::LDLT<Eigen::MatrixXd> mass(op.Mass);
  op.PiZeroStar = mass.solve(C);
  const Eigen::LDLT<Eigen::MatrixXd> mass1(op.Mass.topLeftCorner(nk1, nk1));
  op.PiZeroGradStar[0] = mass1.solve(Ex);
  op.PiZeroGradStar[1] = mass1.solve(Ey);
  return op;
}

std::vector<ElementOperators> build_all_projectors(const PolyMesh& mesh, const DofMap& dofs,
                                                   double beta) {
  std::vector<ElementOperators> ops;
  ops.reserve(mesh.elements.size());
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e)
    ops.push_back(build_projectors(mesh, dofs, e, beta));
  return ops;
}

Eigen::VectorXd interpolate_dofs(const std::function<double(const Vec2&)>& u,
                                 const PolyMesh& mesh, const DofMap& dofs) {
  const int k = dofs.k;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dofs.N);
  for (int i = 0; i < dofs.n_vertices; ++i) v(dofs.vertex_dof(i)) = u(mesh.vertices[i].x);
  const Rule1D& gl = gauss_lobatto(k + 1);
  for (int e = 0; e < dofs.n_edges; ++e) {
    const Vec2 a = mesh.vertices[mesh.edges[e].v0].x;
    const Vec2 b = mesh.vertices[mesh.edges[e].v1].x;
    for (int j = 0; j < k - 1; ++j) v(dofs.edge_dof(e, j)) = u(a + gl.nodes[j + 1] * (b - a));
  }
  if (dofs.per_element > 0) {
    for (int el = 0; el < dofs.n_elements; ++el) {
      const PolyElement& K = mesh.elements[el];
      const MonomialBasis basis(k - 2, K.x_K, K.H_K);
      std::vector<long double> acc(basis.size(), 0.0L);
      pixel_quadrature(mesh.grid, K.pixels, k + 3, [&](const Vec2& x, double w) {
        const double wu = w * u(x);
        const Eigen::VectorXd m = basis.eval(x);
        for (int a = 0; a < basis.size(); ++a) acc[a] += static_cast<long double>(wu) * m(a);
      });
      for (int a = 0; a < basis.size(); ++a)
        v(dofs.moment_dof(el, a)) = static_cast<double>(acc[a] / K.area);
    }
  }
  return v;
}

}  // namespace pixvem
