#include "helpers.hpp"
#include "pixvem/assembly.hpp"
#include "pixvem/error.hpp"
#include "pixvem/quadrature.hpp"
#include "pixvem/study.hpp"

#include <doctest.h>

#include <cmath>

using namespace pixvem;

namespace {

const ImplicitDomain kDisk = make_disk(Vec2(0.5, 0.5), 0.5);

PolyMesh square_mesh(double h, int m) {
  return agglomerate_uniform(classify_pixels(testing::unit_square(), h), m);
}

double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b) {
  return Eigen::MatrixXd(a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("directional derivative matrices") {
  const MonomialBasis b(3, Vec2(0.2, 0.1), 0.5);
  CHECK(directional_derivative_matrix(b, Vec2(0.6, 0.8), 0).isIdentity(0.0));
  const Eigen::MatrixXd d1 = directional_derivative_matrix(b, Vec2(1, 0), 1);
  const Eigen::VectorXd dxi = d1 * Eigen::VectorXd::Unit(b.size(), MonomialBasis::index(1, 0));
  CHECK(dxi(0) == doctest::Approx(1.0 / 0.5));
  CHECK(dxi.tail(b.size() - 1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(directional_derivative_matrix(b, Vec2(0.6, 0.8), 4).cwiseAbs().maxCoeff() == 0.0);
  // second derivative along a diagonal of xi*eta: 2 s_x s_y / H^2
  const Vec2 s = Vec2(1, 1).normalized();
  const Eigen::VectorXd d2 = directional_derivative_matrix(b, s, 2) *
                             Eigen::VectorXd::Unit(b.size(), MonomialBasis::index(1, 1));
  CHECK(d2(0) == doctest::Approx(2 * 0.5 / 0.25));
}

TEST_CASE("no correction on a pixel-exact domain or with k_star = 0") {
  const PolyMesh mesh = square_mesh(1.0 / 8, 2);
  BdtConfig cfg;
  cfg.k = 3;
  const auto bq = boundary_quadrature(mesh, testing::unit_square(), cfg);
  REQUIRE(!bq.empty());
  const DofMap dofs = build_dof_map(mesh, 3);
  const auto ops = build_all_projectors(mesh, dofs);
  for (const auto& q : bq) {
    for (double d : q.delta) CHECK(std::abs(d) < 1e-14);
    CHECK(boundary_correction(ops[q.element].basis, q, 3).cwiseAbs().maxCoeff() < 1e-14);
  }
  const auto dq = boundary_quadrature(agglomerate_uniform(classify_pixels(kDisk, 1.0 / 16), 2), kDisk, cfg);
  const MonomialBasis b(3, Vec2(0.5, 0.5), 0.25);
  for (const auto& q : dq) CHECK(boundary_correction(b, q, 0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("first-order correction of xi on a flat edge integrates delta / H") {
  const double H = 0.1;
  const MonomialBasis b(1, Vec2(0.85, 0.5), H);
  BoundaryQuadrature q;
  q.a = Vec2(0.9, 0.45);
  q.b = Vec2(0.9, 0.55);
  q.normal = Vec2(1, 0);
  q.sigma = Vec2(1, 0);
  const Rule1D& rule = gauss_legendre(6);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    q.t.push_back(rule.nodes[i]);
    q.x.push_back(q.a + rule.nodes[i] * (q.b - q.a));
    q.w.push_back(rule.weights[i] * 0.1);
    q.delta.push_back(delta_along(kDisk, q.x.back(), q.sigma));
  }
  const Eigen::VectorXd xi = Eigen::VectorXd::Unit(3, MonomialBasis::index(1, 0));
  const Eigen::VectorXd corr = boundary_correction(b, q, 1) * xi;
  double ours = 0;
  for (size_t i = 0; i < q.w.size(); ++i) ours += q.w[i] * corr(i);

  // composite Simpson with 60 points on the closed form of delta
  auto delta = [](double y) { return 0.5 + std::sqrt(0.25 - (y - 0.5) * (y - 0.5)) - 0.9; };
  const int n = 60;
  const double step = 0.1 / n;
  double oracle = 0;
  for (int i = 0; i <= n; ++i) {
    const double wt = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    oracle += wt * delta(0.45 + i * step) / H;
  }
  oracle *= step / 3;
  CHECK(ours == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("without gaps the correction order does not change the matrix") {
  const PolyMesh mesh = square_mesh(1.0 / 8, 2);
  const ManufacturedCase c = make_polynomial_case(testing::unit_square(), {{2, 1, 1.0}});
  for (int k = 1; k <= 3; ++k) {
    const DofMap dofs = build_dof_map(mesh, k);
    const auto ops = build_all_projectors(mesh, dofs);
    BdtConfig plain, bdt;
    plain.k = bdt.k = k;
    plain.k_star = 0;
    const LinearSystem a = assemble_full(mesh, dofs, ops, c, plain);
    const LinearSystem b = assemble_full(mesh, dofs, ops, c, bdt);
    CHECK(max_abs_diff(a.A, b.A) <= 1e-13);
    CHECK((a.b - b.b).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("patch test on the unit square") {
  const PolyMesh mesh = square_mesh(1.0 / 8, 2);
  for (int k = 1; k <= 3; ++k) {
    CAPTURE(k);
    std::vector<PolynomialTerm> terms;
    for (int a = 0; a <= k; ++a)
      for (int b = 0; a + b <= k; ++b) terms.push_back({a, b, 0.3 + 0.1 * a - 0.2 * b});
    const ManufacturedCase c = make_polynomial_case(testing::unit_square(), terms);
    BdtConfig cfg;
    cfg.k = k;
    const VemRun run = solve_vem(mesh, c, cfg, false);
    CHECK(run.errors.e0 <= 1e-9);
    CHECK(run.errors.e1 <= 1e-9);
    CHECK(run.report.relative_residual <= 1e-12);
  }
}

TEST_CASE("non-finite data is reported") {
  const PolyMesh mesh = square_mesh(1.0 / 4, 2);
  ManufacturedCase c = make_polynomial_case(testing::unit_square(), {{1, 0, 1.0}});
  c.f = [](const Vec2&) { return std::nan(""); };
  const DofMap dofs = build_dof_map(mesh, 1);
  const auto ops = build_all_projectors(mesh, dofs);
  BdtConfig cfg;
  try {
    assemble_full(mesh, dofs, ops, c, cfg);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteEntry);
  }
}

TEST_CASE("larger penalty pulls the corrected trace toward the data") {
  const ManufacturedCase c = case_by_name("test1b");
  const PolyMesh mesh = agglomerate_uniform(classify_pixels(c.domain, 1.0 / 32), 4);
  std::vector<double> misfit;
  for (double gamma : {10.0, 100.0, 1000.0}) {
    BdtConfig cfg;
    cfg.k = 1;
    cfg.gamma = gamma;
    const VemRun run = solve_vem(mesh, c, cfg, true);
    const auto bq = boundary_quadrature(mesh, c.domain, cfg);
    double m = 0;
    for (const auto& q : bq) {
      const auto& op = run.ops[q.element];
      const Eigen::VectorXd vals =
          taylor_trace(op.basis, q, 1) * (op.PiNablaStar * op.gather(run.u));
      for (size_t i = 0; i < q.x.size(); ++i)
        m += q.w[i] * std::pow(vals(i) - gstar(c, q.x[i], q.sigma), 2);
    }
    misfit.push_back(std::sqrt(m));
  }
  CHECK(misfit[1] < misfit[0]);
  CHECK(misfit[2] < misfit[1]);
}

TEST_CASE("disk, k = 2: the energy error drops with H") {
  const ManufacturedCase c = case_by_name("test1a");
  BdtConfig cfg;
  cfg.k = 2;
  std::vector<double> e1;
  for (double H : {0.125, 0.0625}) {
    const PolyMesh mesh = agglomerate_uniform(classify_pixels(c.domain, H / 4), 4);
    const VemRun run = solve_vem(mesh, c, cfg, true);
    CHECK(run.report.relative_residual <= 1e-10);
    e1.push_back(run.errors.e1);
  }
  CHECK(e1[0] / e1[1] >= std::pow(2.0, 1.5));
}

TEST_CASE("triple norm") {
  const ManufacturedCase c = case_by_name("test1a");
  const PolyMesh mesh = agglomerate_uniform(classify_pixels(c.domain, 1.0 / 16), 2);
  BdtConfig cfg;
  cfg.k = 2;
  const DofMap dofs = build_dof_map(mesh, 2);
  const auto ops = build_all_projectors(mesh, dofs);
  const auto bq = boundary_quadrature(mesh, c.domain, cfg);
  const TripleNorm zero = triple_norm(ops, bq, Eigen::VectorXd::Zero(dofs.N));
  CHECK(zero.value() == 0.0);
  const TripleNorm one =
      triple_norm(ops, bq, interpolate_dofs([](const Vec2&) { return 1.0; }, mesh, dofs));
  CHECK(one.projected_energy < 1e-12);
  CHECK(one.remainder < 1e-12);
  CHECK(one.boundary > 0.0);
  const TripleNorm x = triple_norm(ops, bq, interpolate_dofs([](const Vec2& p) { return p.x(); }, mesh, dofs));
  CHECK(x.projected_energy == doctest::Approx(testing::total_area(mesh)).epsilon(1e-10));
  CHECK(x.remainder < 1e-12);
  CHECK(x.value() > 0.0);
}
