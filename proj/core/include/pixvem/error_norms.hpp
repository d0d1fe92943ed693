#pragma once

#include "pixvem/vemspace.hpp"

#include <vector>

namespace pixvem {

struct ErrorRecord {
  double H = 0.0;
  double h = 0.0;
  int k = 0;
  double tau_hat = 0.0;
  long active_dofs = 0;
  double e0 = 0.0;
  double e1 = 0.0;
};

/// Relative errors and the pieces they are made of.
struct ErrorNorms {
  double e0 = 0.0;      // ||u - Pi0_k u_h|| / ||u||
  double e1 = 0.0;      // ||grad u - Pi0_{k-1} grad u_h|| / |u|_1
  double abs0 = 0.0;
  double abs1 = 0.0;
  double norm0 = 0.0;   // ||u||_{0, Omega_h}
  double norm1 = 0.0;   // |u|_{1, Omega_h}
};

/// Pixelwise tensor Gauss quadrature with `points` per axis (<= 0: k + 3).
ErrorNorms compute_errors(const PolyMesh& mesh, const std::vector<ElementOperators>& ops,
                          const Eigen::VectorXd& u_h, const ManufacturedCase& mcase,
                          int points = 0);

/// Least-squares slope of log(e) against log(H).
double fit_slope(const std::vector<double>& H, const std::vector<double>& e);

/// Pearson correlation coefficient.
double correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pixvem
