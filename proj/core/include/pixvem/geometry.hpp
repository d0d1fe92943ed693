#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace pixvem {

using Vec2 = Eigen::Vector2d;

struct Box {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};

  double diameter() const { return (hi - lo).norm(); }
  bool contains(const Vec2& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

/// Level-set description of a domain: negative inside, zero on the boundary.
struct ImplicitDomain {
  std::string name;
  std::function<double(const Vec2&)> level_set;
  std::function<Vec2(const Vec2&)> level_set_gradient;
  Box bounding_box;
};

/// Exact solution and data of a manufactured test; f = -Laplacian(u), g = u on
/// the boundary.
struct ManufacturedCase {
  std::string name;
  ImplicitDomain domain;
  std::function<double(const Vec2&)> u_exact;
  std::function<Vec2(const Vec2&)> grad_u_exact;
  std::function<double(const Vec2&)> f;
  std::function<double(const Vec2&)> g;
};

/// Point where a boundary ray from the computational boundary hits the true
/// boundary: base_point + delta * sigma.
struct BoundaryRay {
  Vec2 base_point;
  Vec2 sigma;
  double delta = 0.0;
};

// ---------------------------------------------------------------- domains

ImplicitDomain make_disk(const Vec2& center, double radius);

/// Unit-disk quarter in the third quadrant plus two half disks of radius 1/2
/// sitting on its straight sides; one reentrant corner of angle 3pi/2 at the
/// origin, curved elsewhere.
ImplicitDomain make_bean();

/// Axis-aligned rectangle. With pixel-aligned corners it is a pixel-exact
/// domain (delta == 0 on the pixel boundary).
ImplicitDomain make_rectangle(const Box& box);

/// Closed polyline (counterclockwise or clockwise, last point not repeated).
/// Inside by winding number, distance to the nearest segment.
ImplicitDomain make_polyline_domain(std::vector<Vec2> points, std::string name = "polyline");

/// Reads "x,y" rows (optional header line) into a polyline domain.
ImplicitDomain load_polyline_csv(const std::string& path);

/// Builds "disk" (center (0.5,0.5), radius 0.5) or "bean" by name.
ImplicitDomain domain_by_name(const std::string& name);

// ---------------------------------------------------------------- evaluation

double signed_distance_proxy(const ImplicitDomain& domain, const Vec2& p);

/// Normalized level-set gradient; throws ZeroGradient if it vanishes.
Vec2 sigma_direction(const ImplicitDomain& domain, const Vec2& edge_midpoint);

/// Smallest t >= 0 with level_set(x + t sigma) = 0. If x lies outside the
/// domain the search runs backwards and the (negative) signed gap is returned.
/// `march_step` <= 0 selects diameter/256.
double delta_along(const ImplicitDomain& domain, const Vec2& x, const Vec2& sigma,
                   double march_step = 0.0);

BoundaryRay boundary_ray(const ImplicitDomain& domain, const Vec2& x, const Vec2& sigma,
                         double march_step = 0.0);

/// g evaluated at the point of the true boundary reached from x along sigma.
double gstar(const ManufacturedCase& mcase, const Vec2& x, const Vec2& sigma,
             double march_step = 0.0);

// ---------------------------------------------------------------- solutions

namespace solutions {

double franke(const Vec2& p);
Vec2 franke_gradient(const Vec2& p);
double franke_laplacian(const Vec2& p);

/// Homogeneous disk solution (1/4 - |p - c|^2) * franke(p), c = (0.5, 0.5).
double u1(const Vec2& p);
Vec2 u1_gradient(const Vec2& p);
double u1_laplacian(const Vec2& p);

/// Corner singular function r^(2/3) sin(2 (pi + atan(-x, -y)) / 3); harmonic.
double bean_exact(const Vec2& p);
Vec2 bean_exact_gradient(const Vec2& p);

}  // namespace solutions

/// Named manufactured cases: "test1a" (disk, u1, g = 0), "test1b" (disk,
/// Franke), "bean" (bean domain, corner function, f = 0).
ManufacturedCase case_by_name(const std::string& name);

/// Case with solution `solution` ("u1", "franke", "bean") on an arbitrary domain.
ManufacturedCase make_case(const ImplicitDomain& domain, const std::string& solution);

/// Polynomial solution sum c_ab x^a y^b; used for patch tests.
struct PolynomialTerm {
  int a = 0;
  int b = 0;
  double coeff = 0.0;
};
ManufacturedCase make_polynomial_case(const ImplicitDomain& domain,
                                      std::vector<PolynomialTerm> terms);

}  // namespace pixvem
