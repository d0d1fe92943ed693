#pragma once

#include "pixvem/error_norms.hpp"
#include "pixvem/pixelmesh.hpp"
#include "pixvem/solver.hpp"

namespace pixvem {

enum class GStarMode { Trace, Projected };

struct FemConfig {
  int k = 1;
  double gamma = -1.0;  // <= 0: 10 k^2
  int k_star = 0;       // 0: plain Nitsche
  GStarMode g_star_mode = GStarMode::Projected;
  int edge_quadrature_points = -1;  // <= 0: k + 3
  double march_step = 0.0;
};

struct FemResult {
  Eigen::VectorXd u;  // nodal values
  int dofs = 0;
  ErrorNorms errors;  // e0 = ||u - u_h|| / ||u||, e1 = |u - u_h|_1 / |u|_1 on Omega_h
  SolveReport report;
};

/// Tensor Q_k elements on the pixels (Gauss-Lobatto nodes), Nitsche terms on
/// every boundary fine edge, Taylor correction along nu_h when k_star >= 1.
FemResult fem_solve(const PixelGrid& grid, const ManufacturedCase& mcase, const FemConfig& config);

}  // namespace pixvem
