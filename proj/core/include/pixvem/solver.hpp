#pragma once

#include "pixvem/assembly.hpp"

namespace pixvem {

struct SolveReport {
  int dof_count = 0;
  long nnz = 0;
  double factor_time = 0.0;  // seconds
  double solve_time = 0.0;
  double relative_residual = 0.0;
};

/// Sparse LU (COLAMD ordering, partial pivoting) followed by iterative
/// refinement until the relative residual is below `tolerance` (at most 3
/// steps). Throws SingularMatrix when the factorization fails or the residual
/// stays above `tolerance`.
Eigen::VectorXd solve_sparse(const LinearSystem& system, SolveReport* report = nullptr,
                             double tolerance = 1e-10);

}  // namespace pixvem
