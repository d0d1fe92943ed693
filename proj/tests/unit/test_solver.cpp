#include "pixvem/error.hpp"
#include "pixvem/solver.hpp"

#include <doctest.h>

using namespace pixvem;

namespace {

LinearSystem dense_system(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  LinearSystem s;
  s.A = A.sparseView();
  s.b = b;
  return s;
}

}  // namespace

TEST_CASE("identity") {
  SolveReport rep;
  const Eigen::VectorXd x =
      solve_sparse(dense_system(Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Unit(4, 0)), &rep);
  CHECK((x - Eigen::VectorXd::Unit(4, 0)).norm() == 0.0);
  CHECK(rep.relative_residual == 0.0);
  CHECK(rep.dof_count == 4);
  CHECK(rep.nnz == 4);
}

TEST_CASE("two by two") {
  Eigen::MatrixXd A(2, 2);
  A << 2, 1, 1, 2;
  const Eigen::VectorXd x = solve_sparse(dense_system(A, Eigen::Vector2d(3, 3)));
  CHECK(x(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("nonsymmetric system with pivoting") {
  Eigen::MatrixXd A(3, 3);
  A << 0, 1, 2, 3, 0, 1, 1, 4, 0;
  const Eigen::Vector3d xs(1, -2, 0.5);
  SolveReport rep;
  const Eigen::VectorXd x = solve_sparse(dense_system(A, A * xs), &rep);
  CHECK((x - xs).norm() < 1e-14);
  CHECK(rep.relative_residual <= 1e-15);
}

TEST_CASE("singular matrix") {
  Eigen::MatrixXd A(2, 2);
  A << 1, 2, 2, 4;
  try {
    solve_sparse(dense_system(A, Eigen::Vector2d(1, 0)));
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
}

TEST_CASE("repeated solves are bitwise identical") {
  const int n = 50;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 4.0 + 0.01 * i;
    if (i > 0) A(i, i - 1) = -1.3;
    if (i + 1 < n) A(i, i + 1) = -0.7;
  }
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, -1, 1);
  const Eigen::VectorXd x1 = solve_sparse(dense_system(A, b));
  const Eigen::VectorXd x2 = solve_sparse(dense_system(A, b));
  CHECK(x1 == x2);
}
