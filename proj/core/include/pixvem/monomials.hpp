#pragma once

#include "pixvem/geometry.hpp"
#include "pixvem/pixelmesh.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace pixvem {

/// Scaled monomials m_(a,b)(x) = ((x - x_K)/H_K)^(a,b) of total degree <= k,
/// ordered by degree and then (d,0), (d-1,1), ..., (0,d).
struct MonomialBasis {
  int k = 0;
  Vec2 center{0.0, 0.0};
  double H = 1.0;

  MonomialBasis() = default;
  MonomialBasis(int degree, const Vec2& c, double scale) : k(degree), center(c), H(scale) {}

  static int dim(int degree) { return degree < 0 ? 0 : (degree + 1) * (degree + 2) / 2; }
  static int index(int a, int b) {
    const int d = a + b;
    return d * (d + 1) / 2 + b;
  }
  static std::pair<int, int> exponent(int idx);

  int size() const { return dim(k); }

  Eigen::VectorXd eval(const Vec2& x) const;
  /// Row i holds the gradient of m_i at x.
  Eigen::MatrixX2d grad(const Vec2& x) const;

  /// Matrices acting on coefficient vectors: coefficients of d/dx p, d/dy p.
  Eigen::MatrixXd dx() const;
  Eigen::MatrixXd dy() const;
  Eigen::MatrixXd laplacian() const;
};

/// Coefficients of the j-th derivative in direction sigma; zero for j > k.
Eigen::MatrixXd directional_derivative_matrix(const MonomialBasis& basis, const Vec2& sigma,
                                              int j);

/// Integrals over a union of pixels of xi^a eta^b, xi = (x - c_x)/H,
/// eta = (y - c_y)/H, for a + b <= max_degree. Entry (a, b).
Eigen::MatrixXd pixel_moments(const PixelGrid& grid, const std::vector<int>& pixels,
                              const Vec2& center, double H, int max_degree);

}  // namespace pixvem
