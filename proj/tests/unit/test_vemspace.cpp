#include "helpers.hpp"
#include "pixvem/error_norms.hpp"
#include "pixvem/vemspace.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>
#include <random>

using namespace pixvem;

namespace {

const ImplicitDomain kDisk = make_disk(Vec2(0.5, 0.5), 0.5);

PolyMesh disk_mesh(double H, int m) { return agglomerate_uniform(classify_pixels(kDisk, H / m), m); }

std::function<double(const Vec2&)> monomial(const MonomialBasis& b, int alpha) {
  return [b, alpha](const Vec2& x) { return b.eval(x)(alpha); };
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("dof counts") {
  const PolyMesh one = agglomerate_uniform(testing::grid_from_rows({"#"}), 1);
  CHECK(build_dof_map(one, 1).N == 4);
  CHECK(build_dof_map(one, 2).N == 9);
  const PolyMesh two = agglomerate_uniform(testing::grid_from_rows({"##"}), 1);
  CHECK(build_dof_map(two, 2).N == 15);
  const DofMap d3 = build_dof_map(two, 3);
  CHECK(d3.N == 6 + 2 * 7 + 3 * 2);
  CHECK(d3.element_dofs[0].size() == 4 + 2 * 4 + 3);
}

TEST_CASE("shared entities share global dofs") {
  const PolyMesh two = agglomerate_uniform(testing::grid_from_rows({"##"}), 1);
  const DofMap d = build_dof_map(two, 3);
  std::vector<int> count(d.N, 0);
  for (const auto& el : d.element_dofs)
    for (int g : el) ++count[g];
  int shared = 0;
  for (int c : count) shared += c == 2;
  CHECK(shared == 2 + 2);  // two vertices, two internal edge nodes
}

TEST_CASE("scaled monomials") {
  CHECK(MonomialBasis::dim(1) == 3);
  CHECK(MonomialBasis::dim(2) == 6);
  const MonomialBasis b(3, Vec2(0.3, -0.2), 0.5);
  const Eigen::VectorXd v = b.eval(b.center);
  CHECK(v(0) == 1.0);
  CHECK(v.tail(v.size() - 1).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < b.size(); ++i) {
    const auto [a, c] = MonomialBasis::exponent(i);
    CHECK(MonomialBasis::index(a, c) == i);
  }
  const Vec2 x(0.7, 0.1);
  const Eigen::VectorXd e = b.eval(x);
  CHECK(e(MonomialBasis::index(2, 1)) ==
        doctest::Approx(std::pow((0.7 - 0.3) / 0.5, 2) * (0.1 + 0.2) / 0.5));
}

TEST_CASE("projectors reproduce polynomials on agglomerated elements") {
  for (int k = 1; k <= 4; ++k) {
    CAPTURE(k);
    const PolyMesh mesh = disk_mesh(0.25, 4);
    const DofMap dofs = build_dof_map(mesh, k);
    const auto ops = build_all_projectors(mesh, dofs);
    for (const auto& op : ops) {
      const int n = op.basis.size();
      CHECK(max_abs(op.G - op.B * op.D) < 1e-12 * std::max(1.0, max_abs(op.G)));
      CHECK(max_abs(op.PiNablaStar * op.D - Eigen::MatrixXd::Identity(n, n)) < 1e-11);
      CHECK(max_abs(op.PiZeroStar * op.D - Eigen::MatrixXd::Identity(n, n)) < 1e-10);
      CHECK(max_abs(op.S * op.D) < 1e-11);
      // independent route: interpolate each monomial as a function
      for (int a = 0; a < n; ++a) {
        const Eigen::VectorXd v = op.gather(interpolate_dofs(monomial(op.basis, a), mesh, dofs));
        Eigen::VectorXd ea = Eigen::VectorXd::Unit(n, a);
        CHECK((op.PiNablaStar * v - ea).cwiseAbs().maxCoeff() < 1e-11);
        CHECK((op.D.col(a) - v).cwiseAbs().maxCoeff() < 1e-11);
      }
    }
  }
}

TEST_CASE("gradient projection of polynomials is exact") {
  const int k = 3;
  const PolyMesh mesh = disk_mesh(0.25, 4);
  const DofMap dofs = build_dof_map(mesh, k);
  const auto ops = build_all_projectors(mesh, dofs);
  const int nk1 = MonomialBasis::dim(k - 1);
  for (const auto& op : ops) {
    const Eigen::MatrixXd dx = op.basis.dx(), dy = op.basis.dy();
    CHECK(max_abs(op.PiZeroGradStar[0] * op.D - dx.topRows(nk1)) < 1e-10);
    CHECK(max_abs(op.PiZeroGradStar[1] * op.D - dy.topRows(nk1)) < 1e-10);
  }
}

TEST_CASE("constants: projection 1, no stabilization") {
  const PolyMesh mesh = disk_mesh(0.25, 4);
  for (int k = 1; k <= 3; ++k) {
    const DofMap dofs = build_dof_map(mesh, k);
    const Eigen::VectorXd one = interpolate_dofs([](const Vec2&) { return 1.0; }, mesh, dofs);
    for (int i = 0; i < dofs.N; ++i) {
      if (!dofs.is_moment(i)) CHECK(one(i) == doctest::Approx(1.0));
    }
    for (int e = 0; e < dofs.n_elements; ++e)
      if (k >= 2) CHECK(one(dofs.moment_dof(e, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& op : build_all_projectors(mesh, dofs)) {
      const Eigen::VectorXd v = op.gather(one);
      const Eigen::VectorXd p = op.PiNablaStar * v;
      CHECK(p(0) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(p.tail(p.size() - 1).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((op.S * v).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("stabilization is positive semidefinite with kernel P_k") {
  const PolyMesh mesh = disk_mesh(0.25, 4);
  for (int k = 1; k <= 3; ++k) {
    const DofMap dofs = build_dof_map(mesh, k);
    for (const auto& op : build_all_projectors(mesh, dofs)) {
      CHECK(max_abs(op.S - op.S.transpose()) < 1e-13);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.S);
      const Eigen::VectorXd ev = es.eigenvalues();
      CHECK(ev.minCoeff() > -1e-12);
      int zero = 0;
      for (int i = 0; i < ev.size(); ++i) zero += ev(i) < 1e-10 * ev.maxCoeff();
      CHECK(zero == op.basis.size());
      // a vector killed by the projector has positive stabilization energy
      Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(op.n_dofs, -1.0, 2.0);
      v -= op.PiNabla * v;
      CHECK((op.PiNablaStar * v).norm() < 1e-10);
      CHECK(v.dot(op.S * v) > 0.0);
    }
    CHECK(max_abs(stabilization(build_projectors(mesh, dofs, 0), 0.0)) == 0.0);
  }
}

TEST_CASE("elliptic projector agrees with a dense solve of its defining equations") {
  // k = 1: Pi v = c0 + c1 x + c2 y with c1 |K| = int_dK v n_x, c2 |K| = int_dK v n_y
  // and int_dK Pi v = int_dK v; v is linear on each boundary edge.
  for (const auto& rows : {std::vector<std::string>{"#"}, std::vector<std::string>{"#.", "##"},
                           std::vector<std::string>{"###", "#.#", "#.."}}) {
    const PolyMesh mesh = agglomerate_uniform(testing::grid_from_rows(rows, 0.5), 3);
    REQUIRE(mesh.elements.size() == 1);
    const DofMap dofs = build_dof_map(mesh, 1);
    const ElementOperators op = build_projectors(mesh, dofs, 0);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    Eigen::VectorXd v(op.n_dofs);
    for (int i = 0; i < op.n_dofs; ++i) v(i) = U(rng);

    const int nv = op.n_vertices;
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (int i = 0; i < nv; ++i) {
      const Vec2 a = op.node_points[i], b = op.node_points[(i + 1) % nv];
      const double len = (b - a).norm();
      const Vec2 t = (b - a) / len;
      const Vec2 n(t.y(), -t.x());
      const double iv = len * 0.5 * (v(i) + v((i + 1) % nv));
      rhs(0) += iv;
      rhs(1) += iv * n.x();
      rhs(2) += iv * n.y();
      A(0, 0) += len;
      A(0, 1) += len * 0.5 * (a.x() + b.x());
      A(0, 2) += len * 0.5 * (a.y() + b.y());
    }
    A(1, 1) = op.area;
    A(2, 2) = op.area;
    const Eigen::Vector3d c = A.fullPivLu().solve(rhs);
    const Eigen::VectorXd coeffs = op.PiNablaStar * v;
    for (const Vec2& x : {Vec2(0.1, 0.2), Vec2(0.4, 0.9), Vec2(1.3, 0.3)}) {
      const double ours = op.basis.eval(x).dot(coeffs);
      CHECK(ours == doctest::Approx(c(0) + c(1) * x.x() + c(2) * x.y()).epsilon(1e-12));
    }
  }
}

TEST_CASE("discrete bilinear form is exact on polynomials") {
  const PolyMesh mesh = disk_mesh(0.25, 4);
  for (int k = 1; k <= 4; ++k) {
    CAPTURE(k);
    const DofMap dofs = build_dof_map(mesh, k);
    const auto ops = build_all_projectors(mesh, dofs);
    for (const auto& op : ops) {
      const int n = op.basis.size();
      Eigen::MatrixXd exact = Eigen::MatrixXd::Zero(n, n);
      pixel_quadrature(mesh.grid, mesh.elements[op.element].pixels, k + 1,
                       [&](const Vec2& x, double w) {
                         const Eigen::MatrixX2d g = op.basis.grad(x);
                         exact += w * g * g.transpose();
                       });
      const Eigen::MatrixXd ah = op.D.transpose() * op.stiffness() * op.D;
      CHECK(max_abs(ah - exact) < 1e-10 * std::max(1.0, max_abs(exact)));
    }
  }
}

TEST_CASE("interpolant of a polynomial on a pixel-exact domain is projected exactly") {
  const PolyMesh mesh = agglomerate_uniform(classify_pixels(testing::unit_square(), 1.0 / 8), 2);
  const int k = 3;
  const DofMap dofs = build_dof_map(mesh, k);
  auto p = [](const Vec2& x) { return 1 + x.x() - 2 * x.y() * x.x() + std::pow(x.y(), 3); };
  const Eigen::VectorXd uI = interpolate_dofs(p, mesh, dofs);
  for (const auto& op : build_all_projectors(mesh, dofs)) {
    const Eigen::VectorXd c = op.PiNablaStar * op.gather(uI);
    const Eigen::VectorXd c0 = op.PiZeroStar * op.gather(uI);
    for (const Vec2& x : op.node_points) {
      CHECK(op.basis.eval(x).dot(c) == doctest::Approx(p(x)).epsilon(1e-12));
      CHECK(op.basis.eval(x).dot(c0) == doctest::Approx(p(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("L2 projection of the Franke interpolant converges at rate k+1") {
  for (int k = 1; k <= 2; ++k) {
    std::vector<double> Hs, errs;
    for (double H : {0.125, 0.0625, 0.03125}) {
      const PolyMesh mesh = disk_mesh(H, 4);
      const DofMap dofs = build_dof_map(mesh, k);
      const Eigen::VectorXd uI = interpolate_dofs(solutions::franke, mesh, dofs);
      double err = 0;
      for (const auto& op : build_all_projectors(mesh, dofs)) {
        const Eigen::VectorXd c = op.PiZeroStar * op.gather(uI);
        pixel_quadrature(mesh.grid, mesh.elements[op.element].pixels, k + 3,
                         [&](const Vec2& x, double w) {
                           const double d = solutions::franke(x) - op.basis.eval(x).dot(c);
                           err += w * d * d;
                         });
      }
      Hs.push_back(H);
      errs.push_back(std::sqrt(err));
    }
    CAPTURE(k);
    MESSAGE("k = " << k << " errors " << errs[0] << " " << errs[1] << " " << errs[2]);
    CHECK(fit_slope(Hs, errs) >= k + 1 - 0.3);
  }
}

TEST_CASE("trace inequality constant stays bounded") {
  std::mt19937 rng(3);
  std::normal_distribution<double> N01;
  const int k = 2;
  std::vector<double> worst;
  for (double H : {0.25, 0.125, 0.0625}) {
    const PolyMesh mesh = disk_mesh(H, 4);
    const DofMap dofs = build_dof_map(mesh, k);
    double w = 0;
    for (const auto& op : build_all_projectors(mesh, dofs)) {
      Eigen::VectorXd c(op.basis.size());
      for (int i = 0; i < c.size(); ++i) c(i) = N01(rng);
      double vol = 0, bnd = 0;
      pixel_quadrature(mesh.grid, mesh.elements[op.element].pixels, k + 1,
                       [&](const Vec2& x, double wt) { vol += wt * std::pow(op.basis.eval(x).dot(c), 2); });
      const int nv = op.n_vertices;
      for (int i = 0; i < nv; ++i) {
        const Vec2 a = op.node_points[i], b = op.node_points[(i + 1) % nv];
        for (double s : {0.1127016653792583, 0.5, 0.8872983346207417}) {
          const double wt = (s == 0.5 ? 8.0 / 18 : 5.0 / 18) * (b - a).norm();
          bnd += wt * std::pow(op.basis.eval(a + s * (b - a)).dot(c), 2);
        }
      }
      w = std::max(w, std::sqrt(bnd) * std::sqrt(op.basis.H) / std::sqrt(vol));
    }
    worst.push_back(w);
  }
  for (double w : worst) CHECK(w < 10.0);
}
