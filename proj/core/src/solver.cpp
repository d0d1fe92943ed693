#include "pixvem/solver.hpp"

#include "pixvem/error.hpp"

#include <Eigen/SparseLU>

#include <chrono>

namespace pixvem {

Eigen::VectorXd solve_sparse(const LinearSystem& system, SolveReport* report, double tolerance) {
  using Clock = std::chrono::steady_clock;
  const int n = system.size();
  if (system.A.rows() != n || system.A.cols() != n)
    throw Error(ErrorCode::SingularMatrix, "system is not square");
  SolveReport rep;
  rep.dof_count = n;
  rep.nnz = system.A.nonZeros();

  const Eigen::SparseMatrix<double> A = system.A;  // SparseLU wants column-major
  auto t0 = Clock::now();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  auto t1 = Clock::now();
  if (lu.info() != Eigen::Success)
    throw Error(ErrorCode::SingularMatrix, "sparse LU failed: " + lu.lastErrorMessage());

  Eigen::VectorXd x = lu.solve(system.b);
  const double bnorm = system.b.norm();
  auto residual = [&] {
    const double r = (system.b - A * x).norm();
    return bnorm > 0.0 ? r / bnorm : r;
  };
  rep.relative_residual = residual();
  for (int step = 0; step < 3 && rep.relative_residual > tolerance; ++step) {
    x += lu.solve(system.b - A * x);
    rep.relative_residual = residual();
  }
  auto t2 = Clock::now();
  rep.factor_time = std::chrono::duration<double>(t1 - t0).count();
  rep.solve_time = std::chrono::duration<double>(t2 - t1).count();
  if (report) *report = rep;
  if (!x.allFinite() || !(rep.relative_residual <= tolerance)) {
    throw Error(ErrorCode::SingularMatrix,
                "relative residual " + std::to_string(rep.relative_residual) + " above tolerance");
  }
  return x;
}

}  // namespace pixvem
