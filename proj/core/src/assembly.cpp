#include "pixvem/assembly.hpp"

#include "pixvem/error.hpp"
#include "pixvem/quadrature.hpp"

#include <cmath>

namespace pixvem {

BdtConfig BdtConfig::resolved() const {
  BdtConfig c = *this;
  if (c.k < 1) throw Error(ErrorCode::ConfigError, "order k must be >= 1");
  if (c.k_star < 0) c.k_star = c.k;
  if (c.gamma <= 0.0) c.gamma = 10.0 * c.k * c.k;
  if (c.edge_quadrature_points <= 0) c.edge_quadrature_points = c.k + 3;
  if (c.beta < 0.0) throw Error(ErrorCode::ConfigError, "beta must be >= 0");
  return c;
}

std::vector<BoundaryQuadrature> boundary_quadrature(const PolyMesh& mesh,
                                                    const ImplicitDomain& domain,
                                                    const BdtConfig& config) {
  const BdtConfig cfg = config.resolved();
  const Rule1D& rule = gauss_legendre(cfg.edge_quadrature_points);
  std::vector<BoundaryQuadrature> out;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    const PolyElement& el = mesh.elements[e];
    if (!el.is_boundary) continue;
    for (int i = 0; i < static_cast<int>(el.edges.size()); ++i) {
      if (!mesh.edges[el.edges[i].edge].on_boundary()) continue;
      BoundaryQuadrature q;
      q.element = e;
      q.local_edge = i;
      std::tie(q.a, q.b) = mesh.edge_points(e, i);
      q.normal = mesh.outward_normal(e, i);
      q.sigma = sigma_direction(domain, 0.5 * (q.a + q.b));
      const double len = (q.b - q.a).norm();
      for (std::size_t p = 0; p < rule.nodes.size(); ++p) {
        const Vec2 x = q.a + rule.nodes[p] * (q.b - q.a);
        q.t.push_back(rule.nodes[p]);
        q.x.push_back(x);
        q.w.push_back(rule.weights[p] * len);
        q.delta.push_back(delta_along(domain, x, q.sigma, cfg.march_step));
      }
      out.push_back(std::move(q));
    }
  }
  return out;
}

Eigen::MatrixXd taylor_trace(const MonomialBasis& basis, const BoundaryQuadrature& q, int k_star) {
  const int n = basis.size();
  std::vector<Eigen::MatrixXd> powers;
  const Eigen::MatrixXd ds = directional_derivative_matrix(basis, q.sigma, 1);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  for (int j = 0; j <= std::min(k_star, basis.k); ++j) {
    powers.push_back(p);
    p = ds * p;
  }
  Eigen::MatrixXd out(q.x.size(), n);
  for (std::size_t r = 0; r < q.x.size(); ++r) {
    const Eigen::RowVectorXd m = basis.eval(q.x[r]).transpose();
    Eigen::MatrixXd series = Eigen::MatrixXd::Zero(n, n);
    double factor = 1.0;
    for (std::size_t j = 0; j < powers.size(); ++j) {
      if (j > 0) factor *= q.delta[r] / static_cast<double>(j);
      series += factor * powers[j];
    }
    out.row(r) = m * series;
  }
  return out;
}

Eigen::MatrixXd boundary_correction(const MonomialBasis& basis, const BoundaryQuadrature& q,
                                    int k_star) {
  Eigen::MatrixXd c = taylor_trace(basis, q, k_star);
  for (std::size_t r = 0; r < q.x.size(); ++r) c.row(r) -= basis.eval(q.x[r]).transpose();
  return c;
}

EdgeContribution boundary_edge_terms(const PolyMesh& mesh, const ElementOperators& ops,
                                     const BoundaryQuadrature& q, const ManufacturedCase& mcase,
                                     const BdtConfig& config) {
  const BdtConfig cfg = config.resolved();
  const int n = ops.n_dofs;
  const double pen = cfg.gamma / mesh.penalty_length(q.element);
  const Eigen::MatrixXd trial_series = taylor_trace(ops.basis, q, cfg.k_star) * ops.PiNablaStar;
  const LagrangeBasis1D lagrange(gauss_lobatto(ops.k + 1).nodes);
  const std::vector<int>& nodes = ops.edge_nodes[q.local_edge];

  EdgeContribution out{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
  for (std::size_t r = 0; r < q.x.size(); ++r) {
    const Eigen::RowVectorXd pi = ops.basis.eval(q.x[r]).transpose() * ops.PiNablaStar;
    const Eigen::RowVectorXd dn =
        (ops.basis.grad(q.x[r]) * q.normal).transpose() * ops.PiNablaStar;
    Eigen::RowVectorXd trace;
    if (cfg.project_consistency_test) {
      trace = pi;
    } else {
      trace = Eigen::RowVectorXd::Zero(n);
      for (int j = 0; j < lagrange.size(); ++j) trace(nodes[j]) = lagrange.eval(j, q.t[r]);
    }
    const Eigen::RowVectorXd test = dn - pen * pi;
    const double w = q.w[r];
    out.A.noalias() -= w * trace.transpose() * dn;
    out.A.noalias() -= w * test.transpose() * trial_series.row(r);
    const double g = mcase.g(q.x[r] + q.delta[r] * q.sigma);
    out.b.noalias() -= w * g * test.transpose();
  }
  return out;
}

namespace {

void scatter(std::vector<Eigen::Triplet<double>>& trip, const std::vector<int>& ids,
             const Eigen::MatrixXd& local) {
  for (int r = 0; r < local.rows(); ++r)
    for (int c = 0; c < local.cols(); ++c)
      if (local(r, c) != 0.0) trip.emplace_back(ids[r], ids[c], local(r, c));
}

SparseMatrix compress(int n, std::vector<Eigen::Triplet<double>>& trip) {
  SparseMatrix A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

}  // namespace

LinearSystem assemble_full(const PolyMesh& mesh, const DofMap& dofs,
                           const std::vector<ElementOperators>& ops,
                           const ManufacturedCase& mcase, const BdtConfig& config) {
  return assemble_full(mesh, dofs, ops, mcase, config,
                       boundary_quadrature(mesh, mcase.domain, config));
}

LinearSystem assemble_full(const PolyMesh& mesh, const DofMap& dofs,
                           const std::vector<ElementOperators>& ops,
                           const ManufacturedCase& mcase, const BdtConfig& config,
                           const std::vector<BoundaryQuadrature>& bq) {
  const BdtConfig cfg = config.resolved();
  LinearSystem sys;
  sys.b = Eigen::VectorXd::Zero(dofs.N);
  std::vector<Eigen::Triplet<double>> trip;

  for (const ElementOperators& op : ops) {
    Eigen::MatrixXd local = op.Consistency;
    if (cfg.beta != op.beta) local += stabilization(op, cfg.beta);
    else local += op.S;
    scatter(trip, op.dofs, local);

    Eigen::VectorXd fm = Eigen::VectorXd::Zero(op.basis.size());
    pixel_quadrature(mesh.grid, mesh.elements[op.element].pixels, op.k + 3,
                     [&](const Vec2& x, double w) { fm += w * mcase.f(x) * op.basis.eval(x); });
    const Eigen::VectorXd load = op.PiZeroStar.transpose() * fm;
    for (int i = 0; i < op.n_dofs; ++i) sys.b(op.dofs[i]) += load(i);
  }

  for (const BoundaryQuadrature& q : bq) {
    const ElementOperators& op = ops[q.element];
    const EdgeContribution c = boundary_edge_terms(mesh, op, q, mcase, cfg);
    scatter(trip, op.dofs, c.A);
    for (int i = 0; i < op.n_dofs; ++i) sys.b(op.dofs[i]) += c.b(i);
  }

  sys.A = compress(dofs.N, trip);
  for (int r = 0; r < sys.A.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(sys.A, r); it; ++it)
      if (!std::isfinite(it.value())) throw Error(ErrorCode::NonFiniteEntry, "assembled matrix");
  if (!sys.b.allFinite()) throw Error(ErrorCode::NonFiniteEntry, "assembled load vector");
  return sys;
}

SparseMatrix assemble_stabilization(const DofMap& dofs, const std::vector<ElementOperators>& ops) {
  std::vector<Eigen::Triplet<double>> trip;
  for (const ElementOperators& op : ops) scatter(trip, op.dofs, op.S);
  return compress(dofs.N, trip);
}

double TripleNorm::value() const { return std::sqrt(projected_energy + remainder + boundary); }

TripleNorm triple_norm(const std::vector<ElementOperators>& ops,
                       const std::vector<BoundaryQuadrature>& bq, const Eigen::VectorXd& u) {
  TripleNorm t;
  for (const ElementOperators& op : ops) {
    const Eigen::VectorXd local = op.gather(u);
    t.projected_energy += local.dot(op.Consistency * local);
    t.remainder += local.dot(op.S * local);
  }
  for (const BoundaryQuadrature& q : bq) {
    const ElementOperators& op = ops[q.element];
    const Eigen::VectorXd c = op.PiNablaStar * op.gather(u);
    for (std::size_t r = 0; r < q.x.size(); ++r) {
      const double v = op.basis.eval(q.x[r]).dot(c);
      t.boundary += q.w[r] * v * v;
    }
  }
  return t;
}

}  // namespace pixvem
