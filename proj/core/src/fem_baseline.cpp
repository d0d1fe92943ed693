#include "pixvem/fem_baseline.hpp"

#include "pixvem/error.hpp"
#include "pixvem/quadrature.hpp"

#include <Eigen/Sparse>

#include <cmath>

namespace pixvem {
namespace {

// Node lattice with k sub-intervals per pixel side.
struct Lattice {
  int k, nx, ny;
  int stride() const { return k * nx + 1; }
  int node(int i, int j, int a, int b) const { return (k * j + b) * stride() + (k * i + a); }
};

}  // namespace

FemResult fem_solve(const PixelGrid& grid, const ManufacturedCase& mcase, const FemConfig& config) {
  const int k = config.k;
  if (k < 1) throw Error(ErrorCode::ConfigError, "order k must be >= 1");
  const double gamma = config.gamma > 0.0 ? config.gamma : 10.0 * k * k;
  const int nq_edge = config.edge_quadrature_points > 0 ? config.edge_quadrature_points : k + 3;
  const double h = grid.h;
  const int nl = k + 1;
  const int nloc = nl * nl;
  const LagrangeBasis1D L(gauss_lobatto(nl).nodes);
  const Lattice lat{k, grid.nx, grid.ny};

  // Compact numbering of the lattice nodes touched by inside pixels.
  std::vector<int> id(static_cast<std::size_t>(lat.stride()) * (k * grid.ny + 1), -1);
  int n = 0;
  std::vector<std::vector<int>> pixel_dofs(grid.inside.size());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.is_inside(i, j))
        for (int b = 0; b <= k; ++b)
          for (int a = 0; a <= k; ++a) id[lat.node(i, j, a, b)] = 0;
  for (int& v : id)
    if (v == 0) v = n++;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      if (!grid.is_inside(i, j)) continue;
      auto& d = pixel_dofs[grid.pixel_index(i, j)];
      for (int b = 0; b <= k; ++b)
        for (int a = 0; a <= k; ++a) d.push_back(id[lat.node(i, j, a, b)]);
    }

  // Reference 1D matrices; the 2D stiffness on a square does not depend on h.
  const Rule1D& g = gauss_legendre(k + 1);
  Eigen::MatrixXd M1 = Eigen::MatrixXd::Zero(nl, nl), K1 = Eigen::MatrixXd::Zero(nl, nl);
  for (std::size_t q = 0; q < g.nodes.size(); ++q)
    for (int r = 0; r < nl; ++r)
      for (int c = 0; c < nl; ++c) {
        M1(r, c) += g.weights[q] * L.eval(r, g.nodes[q]) * L.eval(c, g.nodes[q]);
        K1(r, c) += g.weights[q] * L.eval(r, g.nodes[q], 1) * L.eval(c, g.nodes[q], 1);
      }
  Eigen::MatrixXd Kref(nloc, nloc);
  for (int r = 0; r < nloc; ++r)
    for (int c = 0; c < nloc; ++c) {
      const int ra = r % nl, rb = r / nl, ca = c % nl, cb = c / nl;
      Kref(r, c) = K1(ra, ca) * M1(rb, cb) + M1(ra, ca) * K1(rb, cb);
    }

  auto values = [&](const Vec2& s, Eigen::VectorXd& phi, Eigen::VectorXd& dx, Eigen::VectorXd& dy) {
    phi.resize(nloc);
    dx.resize(nloc);
    dy.resize(nloc);
    for (int b = 0; b < nl; ++b)
      for (int a = 0; a < nl; ++a) {
        const double la = L.eval(a, s.x()), lb = L.eval(b, s.y());
        phi(a + nl * b) = la * lb;
        dx(a + nl * b) = L.eval(a, s.x(), 1) * lb / h;
        dy(a + nl * b) = la * L.eval(b, s.y(), 1) / h;
      }
  };

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  const Rule1D& gv = gauss_legendre(k + 3);
  Eigen::VectorXd phi, dxv, dyv;
  for (int p = 0; p < static_cast<int>(grid.inside.size()); ++p) {
    if (!grid.inside[p]) continue;
    const auto& d = pixel_dofs[p];
    for (int r = 0; r < nloc; ++r)
      for (int c = 0; c < nloc; ++c) trip.emplace_back(d[r], d[c], Kref(r, c));
    const Vec2 lo = grid.point(p % grid.nx, p / grid.nx);
    for (std::size_t qy = 0; qy < gv.nodes.size(); ++qy)
      for (std::size_t qx = 0; qx < gv.nodes.size(); ++qx) {
        const Vec2 s(gv.nodes[qx], gv.nodes[qy]);
        values(s, phi, dxv, dyv);
        const double w = gv.weights[qx] * gv.weights[qy] * h * h;
        const double f = mcase.f(lo + h * s);
        for (int r = 0; r < nloc; ++r) rhs(d[r]) += w * f * phi(r);
      }
  }

  // Boundary terms. The normal is an axis direction, so d_nu^j acts on one
  // 1D factor only.
  const PixelBoundary boundary = extract_boundary(grid);
  const Rule1D& ge = gauss_legendre(nq_edge);
  for (const BoundaryEdge& be : boundary.edges) {
    const auto& d = pixel_dofs[be.owner_pixel];
    const Vec2 lo = grid.point(be.owner_pixel % grid.nx, be.owner_pixel / grid.nx);
    const int axis = std::abs(be.normal.x()) > 0.5 ? 0 : 1;
    const double sign = axis == 0 ? be.normal.x() : be.normal.y();
    for (std::size_t q = 0; q < ge.nodes.size(); ++q) {
      const Vec2 x = be.a + ge.nodes[q] * (be.b - be.a);
      const double w = ge.weights[q] * h;
      const Vec2 s = (x - lo) / h;
      const double delta = config.k_star > 0 || config.g_star_mode == GStarMode::Projected
                               ? delta_along(mcase.domain, x, be.normal, config.march_step)
                               : 0.0;
      Eigen::VectorXd val(nloc), dn(nloc), series(nloc);
      for (int b = 0; b < nl; ++b)
        for (int a = 0; a < nl; ++a) {
          const int i = a + nl * b;
          const int along = axis == 0 ? a : b, across = axis == 0 ? b : a;
          const double sa = axis == 0 ? s.x() : s.y(), sc = axis == 0 ? s.y() : s.x();
          const double other = L.eval(across, sc);
          val(i) = L.eval(along, sa) * other;
          dn(i) = sign * L.eval(along, sa, 1) / h * other;
          double acc = val(i), factor = 1.0;
          for (int jj = 1; jj <= config.k_star; ++jj) {
            factor *= delta / jj;
            acc += factor * std::pow(sign / h, jj) * L.eval(along, sa, jj) * other;
          }
          series(i) = acc;
        }
      const Eigen::VectorXd test = dn - (gamma / h) * val;
      const Eigen::MatrixXd local = -w * (val * dn.transpose() + test * series.transpose());
      for (int r = 0; r < nloc; ++r)
        for (int c = 0; c < nloc; ++c) trip.emplace_back(d[r], d[c], local(r, c));
      const double gs = config.g_star_mode == GStarMode::Projected
                            ? mcase.g(x + delta * be.normal)
                            : mcase.g(x);
      for (int r = 0; r < nloc; ++r) rhs(d[r]) -= w * gs * test(r);
    }
  }

  LinearSystem sys;
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  sys.b = rhs;
  sys.symmetric = config.k_star == 0;

  FemResult res;
  res.dofs = n;
  res.u = solve_sparse(sys, &res.report);

  double a0 = 0.0, a1 = 0.0, n0 = 0.0, n1 = 0.0;
  for (int p = 0; p < static_cast<int>(grid.inside.size()); ++p) {
    if (!grid.inside[p]) continue;
    const auto& d = pixel_dofs[p];
    Eigen::VectorXd local(nloc);
    for (int r = 0; r < nloc; ++r) local(r) = res.u(d[r]);
    const Vec2 lo = grid.point(p % grid.nx, p / grid.nx);
    for (std::size_t qy = 0; qy < gv.nodes.size(); ++qy)
      for (std::size_t qx = 0; qx < gv.nodes.size(); ++qx) {
        const Vec2 s(gv.nodes[qx], gv.nodes[qy]);
        values(s, phi, dxv, dyv);
        const double w = gv.weights[qx] * gv.weights[qy] * h * h;
        const Vec2 x = lo + h * s;
        const double u = mcase.u_exact(x);
        const Vec2 gu = mcase.grad_u_exact(x);
        const double e0 = u - phi.dot(local);
        const double ex = gu.x() - dxv.dot(local), ey = gu.y() - dyv.dot(local);
        a0 += w * e0 * e0;
        a1 += w * (ex * ex + ey * ey);
        n0 += w * u * u;
        n1 += w * gu.squaredNorm();
      }
  }
  res.errors.abs0 = std::sqrt(a0);
  res.errors.abs1 = std::sqrt(a1);
  res.errors.norm0 = std::sqrt(n0);
  res.errors.norm1 = std::sqrt(n1);
  res.errors.e0 = res.errors.norm0 > 0 ? res.errors.abs0 / res.errors.norm0 : res.errors.abs0;
  res.errors.e1 = res.errors.norm1 > 0 ? res.errors.abs1 / res.errors.norm1 : res.errors.abs1;
  return res;
}

}  // namespace pixvem
