#pragma once

#include "pixvem/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pixvem {

/// Fine structured grid of square pixels with an inside flag per pixel.
/// Pixel (i, j) covers [origin + (i, j) h, origin + (i + 1, j + 1) h].
struct PixelGrid {
  Vec2 origin{0.0, 0.0};
  double h = 1.0;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> inside;  // row-major, index j * nx + i

  int pixel_index(int i, int j) const { return j * nx + i; }
  bool in_range(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }
  bool is_inside(int i, int j) const { return in_range(i, j) && inside[pixel_index(i, j)] != 0; }

  /// Grid points are indexed j * (nx + 1) + i.
  int point_index(int i, int j) const { return j * (nx + 1) + i; }
  Vec2 point(int i, int j) const { return origin + h * Vec2(i, j); }
  Vec2 point(int id) const { return point(id % (nx + 1), id / (nx + 1)); }

  std::size_t inside_count() const;
};

enum class ClassificationRule { Contained, Center, Intersecting };

ClassificationRule parse_rule(const std::string& name);
const char* to_string(ClassificationRule rule);

/// Classifies pixels of side h covering the domain's bounding box (grid
/// anchored at bounding_box.lo unless `origin` is given). Keeps the largest
/// 4-connected component; rejects holes. Throws EmptyDomain / HoleInDomain.
PixelGrid classify_pixels(const ImplicitDomain& domain, double h,
                          ClassificationRule rule = ClassificationRule::Contained,
                          std::optional<Vec2> origin = std::nullopt);

/// PGM (P2/P5, threshold at half of maxval) or CSV of 0/1 rows; the first row
/// is the top of the image. Origin (0,0), h = 1/max(nx, ny) unless `h` given.
PixelGrid load_mask(const std::string& path, std::optional<double> h = std::nullopt);

/// Parses a mask already in memory (same formats as load_mask).
PixelGrid parse_mask(const std::string& content, std::optional<double> h = std::nullopt);

/// Keeps only the largest 4-connected component of inside pixels; returns the
/// number of components found (before pruning).
int keep_largest_component(PixelGrid& grid);

/// Number of holes: 4-connected components of outside pixels that do not reach
/// the grid border.
int count_holes(const PixelGrid& grid);

/// Edge of the fine grid on the boundary of the pixel domain.
struct BoundaryEdge {
  int p0 = 0;  // grid point ids, counterclockwise around the pixel domain
  int p1 = 0;
  Vec2 a;
  Vec2 b;
  Vec2 normal;  // outward axis normal
  int owner_pixel = 0;

  Vec2 midpoint() const { return 0.5 * (a + b); }
};

struct PixelBoundary {
  std::vector<BoundaryEdge> edges;
  std::vector<std::vector<int>> loops;  // ordered edge indices, counterclockwise
};

PixelBoundary extract_boundary(const PixelGrid& grid);

struct SanityReport {
  int components = 0;
  int holes = 0;
  std::size_t boundary_edges = 0;
  double perimeter = 0.0;
  double max_delta = 0.0;       // over boundary-edge midpoints, along sigma
  double max_delta_over_h = 0.0;
  bool distance_within_h = false;  // max_delta <= 3 h
};

SanityReport sanity_check(const PixelGrid& grid, const ImplicitDomain* domain = nullptr);

}  // namespace pixvem
