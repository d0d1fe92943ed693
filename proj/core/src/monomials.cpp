#include "pixvem/monomials.hpp"

#include "pixvem/quadrature.hpp"

#include <cmath>
#include <map>

namespace pixvem {

std::pair<int, int> MonomialBasis::exponent(int idx) {
  int d = 0;
  while (dim(d) <= idx) ++d;
  const int b = idx - dim(d - 1);
  return {d - b, b};
}

Eigen::VectorXd MonomialBasis::eval(const Vec2& x) const {
  const double xi = (x.x() - center.x()) / H;
  const double eta = (x.y() - center.y()) / H;
  Eigen::VectorXd v(size());
  for (int d = 0; d <= k; ++d) {
    for (int b = 0; b <= d; ++b) {
      v(index(d - b, b)) = std::pow(xi, d - b) * std::pow(eta, b);
    }
  }
  return v;
}

Eigen::MatrixX2d MonomialBasis::grad(const Vec2& x) const {
  const double xi = (x.x() - center.x()) / H;
  const double eta = (x.y() - center.y()) / H;
  Eigen::MatrixX2d g = Eigen::MatrixX2d::Zero(size(), 2);
  for (int d = 1; d <= k; ++d) {
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      const int i = index(a, b);
      if (a > 0) g(i, 0) = a * std::pow(xi, a - 1) * std::pow(eta, b) / H;
      if (b > 0) g(i, 1) = b * std::pow(xi, a) * std::pow(eta, b - 1) / H;
    }
  }
  return g;
}

Eigen::MatrixXd MonomialBasis::dx() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size(), size());
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = exponent(i);
    if (a > 0) m(index(a - 1, b), i) = a / H;
  }
  return m;
}

Eigen::MatrixXd MonomialBasis::dy() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size(), size());
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = exponent(i);
    if (b > 0) m(index(a, b - 1), i) = b / H;
  }
  return m;
}

Eigen::MatrixXd MonomialBasis::laplacian() const {
  const Eigen::MatrixXd x = dx(), y = dy();
  return x * x + y * y;
}

Eigen::MatrixXd directional_derivative_matrix(const MonomialBasis& basis, const Vec2& sigma,
                                              int j) {
  const int n = basis.size();
  Eigen::MatrixXd ds = sigma.x() * basis.dx() + sigma.y() * basis.dy();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
  for (int p = 0; p < j; ++p) out = ds * out;
  return out;
}

Eigen::MatrixXd pixel_moments(const PixelGrid& grid, const std::vector<int>& pixels,
                              const Vec2& center, double H, int max_degree) {
  // Separable: pixel integral = (x-integral of xi^a) * (y-integral of eta^b).
  const int n = max_degree + 1;
  std::map<int, Eigen::VectorXd> cols, rows;
  const Rule1D& rule = gauss_legendre(n / 2 + 1);
  auto integrals = [&](double lo, double c) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = (lo + rule.nodes[q] * grid.h - c) / H;
      double pw = rule.weights[q] * grid.h;
      for (int a = 0; a < n; ++a) {
        v(a) += pw;
        pw *= s;
      }
    }
    return v;
  };
  // Extended-precision accumulation keeps the moments within an ulp or two.
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> mu =
      Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (int p : pixels) {
    const int i = p % grid.nx, j = p / grid.nx;
    auto ci = cols.find(i);
    if (ci == cols.end()) ci = cols.emplace(i, integrals(grid.origin.x() + i * grid.h, center.x())).first;
    auto rj = rows.find(j);
    if (rj == rows.end()) rj = rows.emplace(j, integrals(grid.origin.y() + j * grid.h, center.y())).first;
    for (int a = 0; a < n; ++a)
      for (int b = 0; a + b < n; ++b)
        mu(a, b) += static_cast<long double>(ci->second(a)) * rj->second(b);
  }
  return mu.cast<double>();
}

}  // namespace pixvem
