#include "pixvem/condensation.hpp"

#include "pixvem/error.hpp"
#include "pixvem/quadrature.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pixvem {
namespace {

// Elements owning the pixels around a grid point.
std::set<int> elements_at_point(const PolyMesh& mesh, int point) {
  const PixelGrid& g = mesh.grid;
  const int i = point % (g.nx + 1), j = point / (g.nx + 1);
  std::set<int> out;
  for (int dj = -1; dj <= 0; ++dj)
    for (int di = -1; di <= 0; ++di)
      if (g.in_range(i + di, j + dj)) {
        const int e = mesh.pixel_element[g.pixel_index(i + di, j + dj)];
        if (e >= 0) out.insert(e);
      }
  return out;
}

}  // namespace

MacroEdgeLazy lazy_basis_for_macro_edge(const PolyMesh& mesh, const DofMap& dofs, int macro_edge) {
  const MacroEdge& E = mesh.macro_edges[macro_edge];
  const int k = dofs.k;
  const PolyElement& K = mesh.elements[E.element];
  const MonomialBasis basis(k - 1, K.x_K, K.H_K);
  const int nq = basis.size();
  const Rule1D& gl = gauss_lobatto(k + 1);

  MacroEdgeLazy out;
  out.macro_edge = macro_edge;
  out.elements.push_back(E.element);
  if (E.neighbor >= 0) out.elements.push_back(E.neighbor);
  std::map<int, int> column;  // global dof -> column
  auto add_column = [&](int dof) {
    if (column.emplace(dof, static_cast<int>(out.interior_dofs.size())).second)
      out.interior_dofs.push_back(dof);
  };
  const std::size_t n_chain = E.chain.size();
  std::vector<char> vertex_free(E.vertices.size(), 0);
  for (std::size_t i = 1; i + 1 < E.vertices.size(); ++i) {
    const std::set<int> owners = elements_at_point(mesh, mesh.vertices[E.vertices[i]].grid_point);
    std::size_t expected = E.neighbor < 0 ? 1 : 2;
    vertex_free[i] = owners.size() == expected;
  }
  for (std::size_t c = 0; c < n_chain; ++c) {
    if (c > 0 && vertex_free[c]) add_column(dofs.vertex_dof(E.vertices[c]));
    for (int j = 0; j < k - 1; ++j) {
      const EdgeRef& r = E.chain[c];
      add_column(dofs.edge_dof(r.edge, r.reversed ? k - 2 - j : j));
    }
  }
  const int n = static_cast<int>(out.interior_dofs.size());
  out.constraints = Eigen::MatrixXd::Zero(2 * nq + 1, n);
  for (std::size_t c = 0; c < n_chain; ++c) {
    const EdgeRef& r = E.chain[c];
    const MeshEdge& me = mesh.edges[r.edge];
    const Vec2 a = mesh.vertices[r.reversed ? me.v1 : me.v0].x;
    const Vec2 b = mesh.vertices[r.reversed ? me.v0 : me.v1].x;
    const double len = (b - a).norm();
    const Vec2 t = (b - a) / len;
    const Vec2 nu(t.y(), -t.x());
    for (int j = 0; j <= k; ++j) {
      int dof = -1;
      if (j == 0) {
        if (c > 0 && vertex_free[c]) dof = dofs.vertex_dof(E.vertices[c]);
      } else if (j == k) {
        if (c + 1 < n_chain && vertex_free[c + 1]) dof = dofs.vertex_dof(E.vertices[c + 1]);
      } else {
        dof = dofs.edge_dof(r.edge, r.reversed ? k - 1 - j : j - 1);
      }
      if (dof < 0) continue;
      const int col = column.at(dof);
      const double w = gl.weights[j] * len;
      const Eigen::VectorXd m = basis.eval(a + gl.nodes[j] * (b - a));
      out.constraints.block(0, col, nq, 1) += w * nu.x() * m;
      out.constraints.block(nq, col, nq, 1) += w * nu.y() * m;
      out.constraints(2 * nq, col) += w;
    }
  }
  if (n == 0) return out;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.constraints, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double threshold = 1e-10 * (sv.size() > 0 ? sv(0) : 0.0);
  out.rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++out.rank;
  const int n_lazy = n - out.rank;
  if (n_lazy == 0) {
    out.kept_dofs = out.interior_dofs;
    return out;
  }
  const Eigen::MatrixXd null = svd.matrixV().rightCols(n_lazy);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(out.constraints);
  const auto& perm = qr.colsPermutation().indices();
  std::vector<char> kept(n, 0);
  for (int i = 0; i < out.rank; ++i) kept[perm(i)] = 1;
  std::vector<int> lazy_cols;
  for (int c = 0; c < n; ++c) {
    if (kept[c]) out.kept_dofs.push_back(out.interior_dofs[c]);
    else {
      lazy_cols.push_back(c);
      out.lazy_dofs.push_back(out.interior_dofs[c]);
    }
  }
  Eigen::MatrixXd square(n_lazy, n_lazy);
  for (int i = 0; i < n_lazy; ++i) square.row(i) = null.row(lazy_cols[i]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(square);
  if (!lu.isInvertible())
    throw Error(ErrorCode::SingularReducedSystem, "lazy basis is not complementary to kept DOFs");
  out.basis = null * lu.inverse();
  return out;
}

CondensationMap build_condensation(const PolyMesh& mesh, const DofMap& dofs,
                                   const std::vector<ElementOperators>& ops) {
  CondensationMap cm;
  cm.N = dofs.N;
  cm.s_weights = Eigen::VectorXd::Zero(dofs.N);
  for (const ElementOperators& op : ops)
    for (int g : op.dofs) cm.s_weights(g) += op.beta;

  std::vector<char> lazy(dofs.N, 0);
  for (int e = 0; e < static_cast<int>(mesh.macro_edges.size()); ++e) {
    MacroEdgeLazy L = lazy_basis_for_macro_edge(mesh, dofs, e);
    if (L.basis.cols() == 0) continue;
    for (int g : L.lazy_dofs) lazy[g] = 1;
    cm.lazy_count += static_cast<int>(L.basis.cols());
    cm.edges.push_back(std::move(L));
  }
  cm.reduced_index.assign(dofs.N, -1);
  for (int g = 0; g < dofs.N; ++g) {
    if (lazy[g]) continue;
    cm.reduced_index[g] = static_cast<int>(cm.retained.size());
    cm.retained.push_back(g);
  }
  return cm;
}

Eigen::VectorXd CondensationMap::project(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(N);
  for (const MacroEdgeLazy& L : edges) {
    const int n = static_cast<int>(L.interior_dofs.size());
    Eigen::VectorXd xe(n), w(n);
    for (int i = 0; i < n; ++i) {
      xe(i) = x(L.interior_dofs[i]);
      w(i) = s_weights(L.interior_dofs[i]);
    }
    const Eigen::MatrixXd WB = w.asDiagonal() * L.basis;
    const Eigen::VectorXd c = (L.basis.transpose() * WB).ldlt().solve(WB.transpose() * xe);
    const Eigen::VectorXd ye = L.basis * c;
    for (int i = 0; i < n; ++i) y(L.interior_dofs[i]) = ye(i);
  }
  return y;
}

Eigen::VectorXd CondensationMap::expand(const Eigen::VectorXd& u_hat,
                                        const std::vector<Eigen::VectorXd>& lazy) const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(N);
  for (std::size_t i = 0; i < retained.size(); ++i) u(retained[i]) = u_hat(i);
  for (std::size_t e = 0; e < edges.size() && e < lazy.size(); ++e) {
    const Eigen::VectorXd add = edges[e].basis * lazy[e];
    for (std::size_t i = 0; i < edges[e].interior_dofs.size(); ++i)
      u(edges[e].interior_dofs[i]) += add(i);
  }
  return u;
}

ReducedSystem condense(const LinearSystem& full, const CondensationMap& cmap,
                       const std::vector<ElementOperators>& ops) {
  const int nr = cmap.active_dofs();
  ReducedSystem red;
  std::vector<Eigen::Triplet<double>> trip;
  red.system.b.resize(nr);
  for (int i = 0; i < nr; ++i) {
    const int g = cmap.retained[i];
    red.system.b(i) = full.b(g);
    for (SparseMatrix::InnerIterator it(full.A, g); it; ++it) {
      const int c = cmap.reduced_index[it.col()];
      if (c >= 0) trip.emplace_back(i, c, it.value());
    }
  }

  // Each lazy test function only sees the stabilization: its row is
  // Z u_hat + M c with Z = sum_K beta B_K^T (I - Pi_K) on retained columns.
  for (const MacroEdgeLazy& L : cmap.edges) {
    const int n = static_cast<int>(L.interior_dofs.size());
    const int nl = static_cast<int>(L.basis.cols());
    std::map<int, int> row_of;
    for (int i = 0; i < n; ++i) row_of[L.interior_dofs[i]] = i;

    std::map<int, int> col_of;
    std::vector<int> cols;
    Eigen::MatrixXd Z;
    std::vector<const ElementOperators*> adjacent;
    for (int elem : L.elements) adjacent.push_back(&ops[elem]);
    for (const ElementOperators* op : adjacent)
      for (int g : op->dofs) {
        const int r = cmap.reduced_index[g];
        if (r >= 0 && col_of.emplace(r, 0).second) cols.push_back(r);
      }
    std::sort(cols.begin(), cols.end());
    for (std::size_t i = 0; i < cols.size(); ++i) col_of[cols[i]] = static_cast<int>(i);
    Z = Eigen::MatrixXd::Zero(nl, cols.size());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nl, nl);
    for (const ElementOperators* op : adjacent) {
      const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(op->n_dofs, op->n_dofs) - op->PiNabla;
      for (int p = 0; p < op->n_dofs; ++p) {
        auto it = row_of.find(op->dofs[p]);
        if (it == row_of.end()) continue;
        const Eigen::RowVectorXd b = L.basis.row(it->second);
        M.noalias() += op->beta * b.transpose() * b;
        for (int c = 0; c < op->n_dofs; ++c) {
          const int r = cmap.reduced_index[op->dofs[c]];
          if (r < 0 || R(p, c) == 0.0) continue;
          Z.col(col_of[r]) += op->beta * R(p, c) * b.transpose();
        }
      }
    }
    Eigen::VectorXd bl(nl);
    {
      Eigen::VectorXd be(n);
      for (int i = 0; i < n; ++i) be(i) = full.b(L.interior_dofs[i]);
      bl = L.basis.transpose() * be;
    }
    const Eigen::LDLT<Eigen::MatrixXd> Mf(M);
    if (Mf.info() != Eigen::Success || !Mf.isPositive())
      throw Error(ErrorCode::SingularReducedSystem, "lazy block is not positive definite");
    const Eigen::MatrixXd MinvZ = Mf.solve(Z);
    const Eigen::MatrixXd corr = Z.transpose() * MinvZ;
    const Eigen::VectorXd rhs = Z.transpose() * Mf.solve(bl);
    for (std::size_t r = 0; r < cols.size(); ++r) {
      red.system.b(cols[r]) -= rhs(r);
      for (std::size_t c = 0; c < cols.size(); ++c)
        if (corr(r, c) != 0.0) trip.emplace_back(cols[r], cols[c], -corr(r, c));
    }
    red.coupling_columns.push_back(cols);
    red.Z.push_back(std::move(Z));
    red.M.push_back(std::move(M));
    red.lazy_load.push_back(std::move(bl));
  }
  red.system.A.resize(nr, nr);
  red.system.A.setFromTriplets(trip.begin(), trip.end());
  red.system.A.makeCompressed();
  return red;
}

CondensedSolution condense_and_solve(const LinearSystem& full, const CondensationMap& cmap,
                                     const std::vector<ElementOperators>& ops) {
  const ReducedSystem red = condense(full, cmap, ops);
  CondensedSolution sol;
  sol.active_dofs = cmap.active_dofs();
  try {
    sol.retained = solve_sparse(red.system, &sol.report);
  } catch (const Error& e) {
    throw Error(ErrorCode::SingularReducedSystem, e.what());
  }
  std::vector<Eigen::VectorXd> lazy;
  for (std::size_t e = 0; e < cmap.edges.size(); ++e) {
    Eigen::VectorXd zu(red.coupling_columns[e].size());
    for (std::size_t i = 0; i < red.coupling_columns[e].size(); ++i)
      zu(i) = sol.retained(red.coupling_columns[e][i]);
    lazy.push_back(red.M[e].ldlt().solve(red.lazy_load[e] - red.Z[e] * zu));
  }
  sol.full = cmap.expand(sol.retained, lazy);
  return sol;
}

}  // namespace pixvem
