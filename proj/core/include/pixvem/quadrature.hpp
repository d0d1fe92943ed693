#pragma once

#include <vector>

namespace pixvem {

/// One-dimensional rule on the unit interval [0, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule on [0, 1]; exact for degree 2n-1.
const Rule1D& gauss_legendre(int n);

/// n-point Gauss-Lobatto rule on [0, 1] (endpoints included, n >= 2);
/// exact for degree 2n-3.
const Rule1D& gauss_lobatto(int n);

/// Lagrange basis on arbitrary distinct nodes. Values and derivatives of any
/// order, evaluated through the monomial coefficients of each basis polynomial.
class LagrangeBasis1D {
 public:
  explicit LagrangeBasis1D(std::vector<double> nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }

  /// d-th derivative of basis function i at t.
  double eval(int i, double t, int d = 0) const;

 private:
  std::vector<double> nodes_;
  std::vector<std::vector<double>> coeffs_;  // coeffs_[i][p] multiplies t^p
};

}  // namespace pixvem
