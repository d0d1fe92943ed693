#include "helpers.hpp"
#include "pixvem/error.hpp"
#include "pixvem/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pixvem;

namespace {

const ImplicitDomain kDisk = make_disk(Vec2(0.5, 0.5), 0.5);

double fd_laplacian(const std::function<double(const Vec2&)>& u, const Vec2& p, double s) {
  return (u(p + Vec2(s, 0)) + u(p - Vec2(s, 0)) + u(p + Vec2(0, s)) + u(p - Vec2(0, s)) - 4 * u(p)) /
         (s * s);
}

Vec2 fd_gradient(const std::function<double(const Vec2&)>& u, const Vec2& p, double s) {
  return Vec2((u(p + Vec2(s, 0)) - u(p - Vec2(s, 0))) / (2 * s),
              (u(p + Vec2(0, s)) - u(p - Vec2(0, s))) / (2 * s));
}

}  // namespace

TEST_CASE("signed distance of the disk") {
  CHECK(signed_distance_proxy(kDisk, Vec2(0.5, 0.5)) == doctest::Approx(-0.5));
  CHECK(std::abs(signed_distance_proxy(kDisk, Vec2(1.0, 0.5))) < 1e-15);
  CHECK(signed_distance_proxy(kDisk, Vec2(1.0, 1.0)) ==
        doctest::Approx(std::sqrt(0.5) - 0.5).epsilon(1e-12));
}

TEST_CASE("sigma is the radial direction on the disk") {
  const Vec2 s1 = sigma_direction(kDisk, Vec2(0.9, 0.5));
  CHECK((s1 - Vec2(1, 0)).norm() < 1e-12);
  const Vec2 s2 = sigma_direction(kDisk, Vec2(0.5, 0.1));
  CHECK((s2 - Vec2(0, -1)).norm() < 1e-12);
  const Vec2 s3 = sigma_direction(kDisk, Vec2(0.8, 0.8));
  CHECK((s3 - Vec2(1, 1) / std::sqrt(2.0)).norm() < 1e-12);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  for (int i = 0; i < 100; ++i) {
    const Vec2 p(U(rng), U(rng));
    if ((p - Vec2(0.5, 0.5)).norm() < 1e-3) continue;
    CHECK(std::abs(sigma_direction(kDisk, p).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("sigma rejects a vanishing gradient") {
  CHECK_THROWS_AS(sigma_direction(kDisk, Vec2(0.5, 0.5)), Error);
}

TEST_CASE("delta along a ray to the circle") {
  CHECK(delta_along(kDisk, Vec2(0.9, 0.5), Vec2(1, 0)) == doctest::Approx(0.1).epsilon(1e-11));
  CHECK(std::abs(delta_along(kDisk, Vec2(1.0, 0.5), Vec2(1, 0))) < 1e-12);
  const Vec2 d = Vec2(1, 1) / std::sqrt(2.0);
  CHECK(delta_along(kDisk, Vec2(0.75, 0.75), d) ==
        doctest::Approx(0.5 - std::sqrt(0.125)).epsilon(1e-11));
}

TEST_CASE("delta decreases along its own ray") {
  const Vec2 x(0.6, 0.3);
  const Vec2 s = Vec2(0.3, -0.8).normalized();
  const double d0 = delta_along(kDisk, x, s);
  for (double f : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    const double t = f * d0;
    CHECK(std::abs(delta_along(kDisk, x + t * s, s) - (d0 - t)) < 1e-11);
  }
}

TEST_CASE("boundary ray lands on the zero set") {
  const BoundaryRay r = boundary_ray(kDisk, Vec2(0.3, 0.2), Vec2(-0.6, -0.8));
  CHECK(r.delta >= 0.0);
  CHECK(std::abs(kDisk.level_set(r.base_point + r.delta * r.sigma)) < 1e-11);
}

TEST_CASE("transferred boundary data") {
  const ManufacturedCase hom = case_by_name("test1a");
  CHECK(std::abs(gstar(hom, Vec2(0.9, 0.5), Vec2(1, 0))) < 1e-12);
  CHECK(std::abs(gstar(hom, Vec2(0.3, 0.2), Vec2(-0.6, -0.8))) < 1e-12);

  const ManufacturedCase fr = case_by_name("test1b");
  const double target = solutions::franke(Vec2(1.0, 0.5));
  CHECK(gstar(fr, Vec2(1.0, 0.5), Vec2(1, 0)) == doctest::Approx(target).epsilon(1e-12));
  CHECK(gstar(fr, Vec2(0.9, 0.5), Vec2(1, 0)) == doctest::Approx(target).epsilon(1e-10));
}

TEST_CASE("manufactured solutions at reference points") {
  CHECK(solutions::franke(Vec2(0, 0)) == doctest::Approx(0.76642).epsilon(1e-5));
  CHECK(solutions::bean_exact(Vec2(0, 0)) == 0.0);
  for (double a = 0; a < 6.3; a += 0.37) {
    const Vec2 p = Vec2(0.5, 0.5) + 0.5 * Vec2(std::cos(a), std::sin(a));
    CHECK(std::abs(solutions::u1(p)) < 1e-14);
  }
}

TEST_CASE("analytic derivatives agree with finite differences") {
  std::mt19937 rng(11);
  for (const char* name : {"test1a", "test1b", "bean"}) {
    CAPTURE(name);
    const ManufacturedCase c = case_by_name(name);
    const Box bb = c.domain.bounding_box;
    std::uniform_real_distribution<double> Ux(bb.lo.x(), bb.hi.x()), Uy(bb.lo.y(), bb.hi.y());
    int checked = 0;
    while (checked < 100) {
      const Vec2 p(Ux(rng), Uy(rng));
      if (c.domain.level_set(p) > -1e-2) continue;
      if (p.norm() < 1e-1) continue;  // keep away from the corner singularity
      ++checked;
      const Vec2 g = c.grad_u_exact(p);
      const Vec2 gfd = fd_gradient(c.u_exact, p, 1e-5);
      CHECK((g - gfd).norm() <= 1e-6 * std::max(1.0, g.norm()));
      const double f = c.f(p);
      const double lap = fd_laplacian(c.u_exact, p, 1e-4);
      CHECK(std::abs(f + lap) <= 1e-5 * std::max(1.0, std::abs(f)));
    }
  }
}

TEST_CASE("pixel-aligned rectangle has zero gap on its sides") {
  const ImplicitDomain sq = testing::unit_square();
  CHECK(std::abs(delta_along(sq, Vec2(1.0, 0.3), sigma_direction(sq, Vec2(1.0, 0.3)))) < 1e-14);
  CHECK(std::abs(delta_along(sq, Vec2(0.4, 0.0), sigma_direction(sq, Vec2(0.4, 0.0)))) < 1e-14);
}

TEST_CASE("bean has its reentrant corner at the origin") {
  const ImplicitDomain bean = make_bean();
  CHECK(std::abs(bean.level_set(Vec2(0, 0))) < 1e-14);
  CHECK(bean.level_set(Vec2(0.1, 0.1)) > 0.0);
  CHECK(bean.level_set(Vec2(-0.1, 0.1)) < 0.0);
  CHECK(bean.level_set(Vec2(0.1, -0.1)) < 0.0);
  CHECK(bean.level_set(Vec2(-0.5, -0.5)) < 0.0);
}

TEST_CASE("polyline domain") {
  const ImplicitDomain tri = make_polyline_domain({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)});
  CHECK(tri.level_set(Vec2(0.2, 0.2)) == doctest::Approx(-0.2));
  CHECK(tri.level_set(Vec2(1, 1)) > 0.0);
  CHECK_THROWS_AS(make_polyline_domain({Vec2(0, 0), Vec2(1, 0)}), Error);
}
