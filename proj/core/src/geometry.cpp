#include "pixvem/geometry.hpp"

#include "pixvem/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

namespace pixvem {
namespace {

constexpr double kPi = std::numbers::pi;

// Circular arc from angle `start` sweeping counterclockwise by `sweep`.
struct Arc {
  Vec2 center;
  double radius;
  double start;
  double sweep;

  Vec2 point_at(double angle) const {
    return center + radius * Vec2(std::cos(angle), std::sin(angle));
  }

  // Nearest point on the arc to p.
  Vec2 nearest(const Vec2& p) const {
    const Vec2 d = p - center;
    if (d.norm() > 0.0) {
      double rel = std::atan2(d.y(), d.x()) - start;
      rel = std::fmod(rel, 2.0 * kPi);
      if (rel < 0.0) rel += 2.0 * kPi;
      if (rel <= sweep) return center + radius * d / d.norm();
    }
    const Vec2 a = point_at(start);
    const Vec2 b = point_at(start + sweep);
    return (p - a).squaredNorm() <= (p - b).squaredNorm() ? a : b;
  }
};

struct BeanShape {
  std::array<Arc, 3> arcs{
      Arc{Vec2(0.0, 0.0), 1.0, kPi, 0.5 * kPi},         // quarter disk, third quadrant
      Arc{Vec2(-0.5, 0.0), 0.5, 0.0, kPi},              // half disk on the top side
      Arc{Vec2(0.0, -0.5), 0.5, -0.5 * kPi, kPi},       // half disk on the right side
  };

  static bool in_closure(const Vec2& p) {
    const double eps = 1e-14;
    const bool quarter = p.norm() <= 1.0 + eps && p.x() <= eps && p.y() <= eps;
    const bool top = (p - Vec2(-0.5, 0.0)).norm() <= 0.5 + eps && p.y() >= -eps;
    const bool right = (p - Vec2(0.0, -0.5)).norm() <= 0.5 + eps && p.x() >= -eps;
    return quarter || top || right;
  }

  // Returns signed distance and the nearest boundary point.
  std::pair<double, Vec2> eval(const Vec2& p) const {
    double best = std::numeric_limits<double>::infinity();
    Vec2 q = p;
    for (const Arc& arc : arcs) {
      const Vec2 c = arc.nearest(p);
      const double d = (p - c).norm();
      if (d < best) {
        best = d;
        q = c;
      }
    }
    return {in_closure(p) ? -best : best, q};
  }

  Vec2 outward_normal_at(const Vec2& q) const {
    for (const Arc& arc : arcs) {
      if (std::abs((q - arc.center).norm() - arc.radius) < 1e-12) {
        return (q - arc.center).normalized();
      }
    }
    return Vec2(1.0, 1.0).normalized();
  }
};

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b, Vec2& nearest) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  nearest = a + t * ab;
  return (p - nearest).norm();
}

int winding_number(const std::vector<Vec2>& poly, const Vec2& p) {
  int wn = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double cross = (b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y());
    if (a.y() <= p.y()) {
      if (b.y() > p.y() && cross > 0) ++wn;
    } else {
      if (b.y() <= p.y() && cross < 0) --wn;
    }
  }
  return wn;
}

}  // namespace

// ---------------------------------------------------------------- domains

ImplicitDomain make_disk(const Vec2& center, double radius) {
  ImplicitDomain d;
  d.name = "disk";
  d.level_set = [center, radius](const Vec2& p) { return (p - center).norm() - radius; };
  d.level_set_gradient = [center](const Vec2& p) -> Vec2 {
    const Vec2 v = p - center;
    const double n = v.norm();
    return n > 0.0 ? Vec2(v / n) : Vec2(0.0, 0.0);
  };
  d.bounding_box = Box{center - Vec2(radius, radius), center + Vec2(radius, radius)};
  return d;
}

ImplicitDomain make_bean() {
  auto shape = std::make_shared<BeanShape>();
  ImplicitDomain d;
  d.name = "bean";
  d.level_set = [shape](const Vec2& p) { return shape->eval(p).first; };
  d.level_set_gradient = [shape](const Vec2& p) -> Vec2 {
    const auto [sd, q] = shape->eval(p);
    const Vec2 diff = p - q;
    const double n = diff.norm();
    if (n < 1e-13) return shape->outward_normal_at(q);
    return sd > 0.0 ? Vec2(diff / n) : Vec2(-diff / n);
  };
  d.bounding_box = Box{Vec2(-1.0, -1.0), Vec2(0.5, 0.5)};
  return d;
}

ImplicitDomain make_rectangle(const Box& box) {
  ImplicitDomain d;
  d.name = "rectangle";
  const Vec2 c = 0.5 * (box.lo + box.hi);
  const Vec2 half = 0.5 * (box.hi - box.lo);
  d.level_set = [c, half](const Vec2& p) {
    const Vec2 q = (p - c).cwiseAbs() - half;
    const Vec2 qp = q.cwiseMax(0.0);
    return qp.norm() + std::min(std::max(q.x(), q.y()), 0.0);
  };
  d.level_set_gradient = [c, half](const Vec2& p) -> Vec2 {
    const Vec2 r = p - c;
    const Vec2 q = r.cwiseAbs() - half;
    const Vec2 s(r.x() >= 0 ? 1.0 : -1.0, r.y() >= 0 ? 1.0 : -1.0);
    if (q.x() > 0.0 || q.y() > 0.0) {
      const Vec2 qp = q.cwiseMax(0.0);
      return qp.cwiseProduct(s).normalized();
    }
    return q.x() > q.y() ? Vec2(s.x(), 0.0) : Vec2(0.0, s.y());
  };
  d.bounding_box = box;
  return d;
}

ImplicitDomain make_polyline_domain(std::vector<Vec2> points, std::string name) {
  if (points.size() < 3) throw Error(ErrorCode::ParseError, "polyline needs at least 3 points");
  if ((points.front() - points.back()).norm() == 0.0) points.pop_back();
  Box box{points.front(), points.front()};
  for (const Vec2& p : points) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  auto poly = std::make_shared<const std::vector<Vec2>>(std::move(points));
  auto nearest = [poly](const Vec2& p, Vec2& q) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly->size();
    for (std::size_t i = 0; i < n; ++i) {
      Vec2 c;
      const double d = point_segment_distance(p, (*poly)[i], (*poly)[(i + 1) % n], c);
      if (d < best) {
        best = d;
        q = c;
      }
    }
    return best;
  };
  ImplicitDomain d;
  d.name = std::move(name);
  d.level_set = [poly, nearest](const Vec2& p) {
    Vec2 q;
    const double dist = nearest(p, q);
    return winding_number(*poly, p) != 0 ? -dist : dist;
  };
  d.level_set_gradient = [poly, nearest](const Vec2& p) -> Vec2 {
    Vec2 q;
    const double dist = nearest(p, q);
    if (dist < 1e-13) return Vec2(0.0, 0.0);
    const Vec2 dir = (p - q) / dist;
    return winding_number(*poly, p) != 0 ? Vec2(-dir) : dir;
  };
  d.bounding_box = box;
  return d;
}

ImplicitDomain load_polyline_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open polyline file " + path);
  std::vector<Vec2> pts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x = 0, y = 0;
    if (!(ss >> x >> y)) {
      if (pts.empty() && line_no == 1) continue;  // header
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(line_no) + ": expected x,y");
    }
    pts.emplace_back(x, y);
  }
  return make_polyline_domain(std::move(pts), path);
}

ImplicitDomain domain_by_name(const std::string& name) {
  if (name == "disk") return make_disk(Vec2(0.5, 0.5), 0.5);
  if (name == "bean") return make_bean();
  throw Error(ErrorCode::ConfigError, "unknown domain '" + name + "'");
}

// ---------------------------------------------------------------- evaluation

double signed_distance_proxy(const ImplicitDomain& domain, const Vec2& p) {
  return domain.level_set(p);
}

Vec2 sigma_direction(const ImplicitDomain& domain, const Vec2& edge_midpoint) {
  const Vec2 g = domain.level_set_gradient(edge_midpoint);
  const double n = g.norm();
  if (!(n > 1e-12)) {
    throw Error(ErrorCode::ZeroGradient, "level-set gradient vanishes at (" +
                                             std::to_string(edge_midpoint.x()) + ", " +
                                             std::to_string(edge_midpoint.y()) + ")");
  }
  return g / n;
}

double delta_along(const ImplicitDomain& domain, const Vec2& x, const Vec2& sigma,
                   double march_step) {
  const double diam = domain.bounding_box.diameter();
  const double tol = 1e-12 * diam;
  const double phi0 = domain.level_set(x);
  if (std::abs(phi0) <= tol) return 0.0;
  // Inside: march forward until the level set turns nonnegative. Outside: march
  // backward until it turns nonpositive and report a negative gap.
  const double dir = phi0 < 0.0 ? 1.0 : -1.0;
  const double step = march_step > 0.0 ? march_step : diam / 256.0;
  const double limit = 2.0 * diam;
  auto crossed = [&](double phi) { return dir > 0.0 ? phi >= 0.0 : phi <= 0.0; };

  double t_lo = 0.0;
  double t_hi = step;
  while (true) {
    if (t_hi > limit) {
      throw Error(ErrorCode::NoIntersection,
                  "no boundary crossing within 2*diam from (" + std::to_string(x.x()) + ", " +
                      std::to_string(x.y()) + ")");
    }
    if (crossed(domain.level_set(x + dir * t_hi * sigma))) break;
    t_lo = t_hi;
    t_hi += step;
  }
  while (t_hi - t_lo > tol) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (crossed(domain.level_set(x + dir * mid * sigma))) {
      t_hi = mid;
    } else {
      t_lo = mid;
    }
  }
  return dir * 0.5 * (t_lo + t_hi);
}

BoundaryRay boundary_ray(const ImplicitDomain& domain, const Vec2& x, const Vec2& sigma,
                         double march_step) {
  return BoundaryRay{x, sigma, delta_along(domain, x, sigma, march_step)};
}

double gstar(const ManufacturedCase& mcase, const Vec2& x, const Vec2& sigma, double march_step) {
  const double delta = delta_along(mcase.domain, x, sigma, march_step);
  return mcase.g(x + delta * sigma);
}

// ---------------------------------------------------------------- solutions

namespace solutions {
namespace {

// Franke is a sum of a * exp(-E(x, y)); each term carries E, grad E, lap E.
struct FrankeTerm {
  double amplitude;
  double e, ex, ey, lap;
};

std::array<FrankeTerm, 4> franke_terms(const Vec2& p) {
  const double x = p.x(), y = p.y();
  std::array<FrankeTerm, 4> t{};
  const double a1 = 9 * x - 2, b1 = 9 * y - 2;
  t[0] = {0.75, (a1 * a1 + b1 * b1) / 4.0, 4.5 * a1, 4.5 * b1, 81.0};
  const double a2 = 9 * x + 1, b2 = 9 * y + 1;
  t[1] = {0.75, a2 * a2 / 49.0 + b2 / 10.0, 18.0 * a2 / 49.0, 0.9, 162.0 / 49.0};
  const double a3 = 9 * x - 7, b3 = 9 * y - 3;
  t[2] = {0.5, (a3 * a3 + b3 * b3) / 4.0, 4.5 * a3, 4.5 * b3, 81.0};
  const double a4 = 9 * x - 4, b4 = 9 * y - 7;
  t[3] = {0.2, a4 * a4 + b4 * b4, 18.0 * a4, 18.0 * b4, 324.0};
  return t;
}

const Vec2 kDiskCenter(0.5, 0.5);

}  // namespace

double franke(const Vec2& p) {
  double s = 0.0;
  for (const auto& t : franke_terms(p)) s += t.amplitude * std::exp(-t.e);
  return s;
}

Vec2 franke_gradient(const Vec2& p) {
  Vec2 g(0.0, 0.0);
  for (const auto& t : franke_terms(p)) {
    const double v = t.amplitude * std::exp(-t.e);
    g -= v * Vec2(t.ex, t.ey);
  }
  return g;
}

double franke_laplacian(const Vec2& p) {
  double s = 0.0;
  for (const auto& t : franke_terms(p)) {
    s += t.amplitude * std::exp(-t.e) * (t.ex * t.ex + t.ey * t.ey - t.lap);
  }
  return s;
}

double u1(const Vec2& p) {
  return (0.25 - (p - kDiskCenter).squaredNorm()) * franke(p);
}

Vec2 u1_gradient(const Vec2& p) {
  const double w = 0.25 - (p - kDiskCenter).squaredNorm();
  const Vec2 gw = -2.0 * (p - kDiskCenter);
  return w * franke_gradient(p) + franke(p) * gw;
}

double u1_laplacian(const Vec2& p) {
  const double w = 0.25 - (p - kDiskCenter).squaredNorm();
  const Vec2 gw = -2.0 * (p - kDiskCenter);
  return w * franke_laplacian(p) + 2.0 * gw.dot(franke_gradient(p)) - 4.0 * franke(p);
}

namespace {

// pi + atan(-x, -y) with atan(a, b) = atan2(a, b) and atan(0, b) = 0.
double bean_angle(const Vec2& p) {
  const double a = -p.x();
  const double b = -p.y();
  const double at = (a == 0.0) ? 0.0 : std::atan2(a, b);
  return kPi + at;
}

}  // namespace

double bean_exact(const Vec2& p) {
  const double r2 = p.squaredNorm();
  if (r2 == 0.0) return 0.0;
  return std::pow(r2, 1.0 / 3.0) * std::sin(2.0 * bean_angle(p) / 3.0);
}

Vec2 bean_exact_gradient(const Vec2& p) {
  const double r2 = p.squaredNorm();
  if (r2 == 0.0) return Vec2(0.0, 0.0);
  const double alpha = bean_angle(p);
  const double rho = std::pow(r2, 1.0 / 3.0);  // r^(2/3)
  const double s = std::sin(2.0 * alpha / 3.0);
  const double c = std::cos(2.0 * alpha / 3.0);
  // d r^(2/3) = (2/3) r^(-4/3) p ; d alpha = (y, -x) / r^2
  const Vec2 grad_rho = (2.0 / 3.0) * rho / r2 * p;
  const Vec2 grad_alpha = Vec2(p.y(), -p.x()) / r2;
  return s * grad_rho + rho * c * (2.0 / 3.0) * grad_alpha;
}

}  // namespace solutions

ManufacturedCase make_case(const ImplicitDomain& domain, const std::string& solution) {
  ManufacturedCase c;
  c.domain = domain;
  if (solution == "u1") {
    c.name = domain.name + "-u1";
    c.u_exact = solutions::u1;
    c.grad_u_exact = solutions::u1_gradient;
    c.f = [](const Vec2& p) { return -solutions::u1_laplacian(p); };
    c.g = solutions::u1;
  } else if (solution == "franke") {
    c.name = domain.name + "-franke";
    c.u_exact = solutions::franke;
    c.grad_u_exact = solutions::franke_gradient;
    c.f = [](const Vec2& p) { return -solutions::franke_laplacian(p); };
    c.g = solutions::franke;
  } else if (solution == "bean") {
    c.name = domain.name + "-corner";
    c.u_exact = solutions::bean_exact;
    c.grad_u_exact = solutions::bean_exact_gradient;
    c.f = [](const Vec2&) { return 0.0; };
    c.g = solutions::bean_exact;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown solution '" + solution + "'");
  }
  return c;
}

ManufacturedCase case_by_name(const std::string& name) {
  if (name == "test1a") {
    ManufacturedCase c = make_case(domain_by_name("disk"), "u1");
    c.name = "test1a";
    c.g = [](const Vec2&) { return 0.0; };
    return c;
  }
  if (name == "test1b") {
    ManufacturedCase c = make_case(domain_by_name("disk"), "franke");
    c.name = "test1b";
    return c;
  }
  if (name == "bean") {
    ManufacturedCase c = make_case(domain_by_name("bean"), "bean");
    c.name = "bean";
    return c;
  }
  throw Error(ErrorCode::ConfigError, "unknown case '" + name + "'");
}

ManufacturedCase make_polynomial_case(const ImplicitDomain& domain,
                                      std::vector<PolynomialTerm> terms) {
  auto t = std::make_shared<const std::vector<PolynomialTerm>>(std::move(terms));
  auto ipow = [](double v, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= v;
    return r;
  };
  ManufacturedCase c;
  c.name = domain.name + "-polynomial";
  c.domain = domain;
  c.u_exact = [t, ipow](const Vec2& p) {
    double s = 0.0;
    for (const auto& term : *t) s += term.coeff * ipow(p.x(), term.a) * ipow(p.y(), term.b);
    return s;
  };
  c.grad_u_exact = [t, ipow](const Vec2& p) {
    Vec2 g(0.0, 0.0);
    for (const auto& term : *t) {
      if (term.a > 0) g.x() += term.coeff * term.a * ipow(p.x(), term.a - 1) * ipow(p.y(), term.b);
      if (term.b > 0) g.y() += term.coeff * term.b * ipow(p.x(), term.a) * ipow(p.y(), term.b - 1);
    }
    return g;
  };
  c.f = [t, ipow](const Vec2& p) {
    double lap = 0.0;
    for (const auto& term : *t) {
      if (term.a > 1)
        lap += term.coeff * term.a * (term.a - 1) * ipow(p.x(), term.a - 2) * ipow(p.y(), term.b);
      if (term.b > 1)
        lap += term.coeff * term.b * (term.b - 1) * ipow(p.x(), term.a) * ipow(p.y(), term.b - 2);
    }
    return -lap;
  };
  c.g = c.u_exact;
  return c;
}

}  // namespace pixvem
