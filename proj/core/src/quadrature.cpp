#include "pixvem/quadrature.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace pixvem {
namespace {

// Legendre P_n and P_{n-1} at x by the three-term recurrence.
void legendre(int n, double x, double& pn, double& pnm1) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    pn = 1.0;
    pnm1 = 0.0;
    return;
  }
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  pnm1 = p0;
}

Rule1D make_gauss(int n) {
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pn = 0, pnm1 = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, pn, pnm1);
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, pn, pnm1);
    dp = n * (x * pn - pnm1) / (x * x - 1.0);
    // map [-1,1] -> [0,1], ascending order
    r.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    r.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

Rule1D make_lobatto(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto needs n >= 2");
  const int N = n - 1;
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * i / N);
    if (i > 0 && i < N) {
      for (int it = 0; it < 100; ++it) {
        double pn = 0, pnm1 = 0;
        legendre(N, x, pn, pnm1);
        const double dx = (x * pn - pnm1) / (n * pn);
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
    }
    double pn = 0, pnm1 = 0;
    legendre(N, x, pn, pnm1);
    r.nodes[i] = 0.5 * (x + 1.0);
    r.weights[i] = 1.0 / (N * (N + 1.0) * pn * pn);
  }
  r.nodes.front() = 0.0;
  r.nodes.back() = 1.0;
  return r;
}

template <typename Make>
const Rule1D& cached(std::map<int, Rule1D>& cache, std::mutex& mu, int n, Make make) {
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make(n)).first;
  return it->second;
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  static std::map<int, Rule1D> cache;
  static std::mutex mu;
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  return cached(cache, mu, n, make_gauss);
}

const Rule1D& gauss_lobatto(int n) {
  static std::map<int, Rule1D> cache;
  static std::mutex mu;
  return cached(cache, mu, n, make_lobatto);
}

LagrangeBasis1D::LagrangeBasis1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  const int n = size();
  coeffs_.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    std::vector<double> poly{1.0};
    double denom = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      std::vector<double> next(poly.size() + 1, 0.0);
      for (std::size_t p = 0; p < poly.size(); ++p) {
        next[p + 1] += poly[p];
        next[p] -= nodes_[j] * poly[p];
      }
      poly = std::move(next);
      denom *= nodes_[i] - nodes_[j];
    }
    for (int p = 0; p < n; ++p) coeffs_[i][p] = poly[p] / denom;
  }
}

double LagrangeBasis1D::eval(int i, double t, int d) const {
  const auto& c = coeffs_[i];
  const int n = size();
  double value = 0.0;
  for (int p = n - 1; p >= d; --p) {
    double factor = 1.0;
    for (int q = 0; q < d; ++q) factor *= (p - q);
    value = value * t + factor * c[p];
  }
  return value;
}

}  // namespace pixvem
