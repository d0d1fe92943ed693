#include "pixvem/error_norms.hpp"

#include "pixvem/error.hpp"

#include <cmath>
#include <numeric>

namespace pixvem {

ErrorNorms compute_errors(const PolyMesh& mesh, const std::vector<ElementOperators>& ops,
                          const Eigen::VectorXd& u_h, const ManufacturedCase& mcase, int points) {
  double a0 = 0.0, a1 = 0.0, n0 = 0.0, n1 = 0.0;
  for (const ElementOperators& op : ops) {
    const Eigen::VectorXd local = op.gather(u_h);
    const Eigen::VectorXd c0 = op.PiZeroStar * local;
    const Eigen::VectorXd cx = op.PiZeroGradStar[0] * local;
    const Eigen::VectorXd cy = op.PiZeroGradStar[1] * local;
    const int nk1 = static_cast<int>(cx.size());
    const int q = points > 0 ? points : op.k + 3;
    pixel_quadrature(mesh.grid, mesh.elements[op.element].pixels, q,
                     [&](const Vec2& x, double w) {
                       const Eigen::VectorXd m = op.basis.eval(x);
                       const double u = mcase.u_exact(x);
                       const Vec2 g = mcase.grad_u_exact(x);
                       const double d0 = u - m.dot(c0);
                       const double dx = g.x() - m.head(nk1).dot(cx);
                       const double dy = g.y() - m.head(nk1).dot(cy);
                       a0 += w * d0 * d0;
                       a1 += w * (dx * dx + dy * dy);
                       n0 += w * u * u;
                       n1 += w * g.squaredNorm();
                     });
  }
  ErrorNorms e;
  e.abs0 = std::sqrt(a0);
  e.abs1 = std::sqrt(a1);
  e.norm0 = std::sqrt(n0);
  e.norm1 = std::sqrt(n1);
  e.e0 = e.norm0 > 0.0 ? e.abs0 / e.norm0 : e.abs0;
  e.e1 = e.norm1 > 0.0 ? e.abs1 / e.norm1 : e.abs1;
  return e;
}

double fit_slope(const std::vector<double>& H, const std::vector<double>& e) {
  if (H.size() != e.size() || H.size() < 2)
    throw Error(ErrorCode::ConfigError, "slope fit needs at least two (H, e) pairs");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < H.size(); ++i) {
    if (!(H[i] > 0.0) || !(e[i] > 0.0))
      throw Error(ErrorCode::ConfigError, "slope fit needs positive values");
    x.push_back(std::log(H[i]));
    y.push_back(std::log(e[i]));
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error(ErrorCode::ConfigError, "slope fit needs distinct H values");
  return sxy / sxx;
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::ConfigError, "correlation needs at least two pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace pixvem
