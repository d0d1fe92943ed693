#pragma once

#include "pixvem/pixelmesh.hpp"

#include <functional>
#include <vector>

namespace pixvem::detail {

/// Directed fine edge with the pixel set on its left.
struct DirectedEdge {
  int p0;
  int p1;
  int pixel;    // owning pixel (inside the set)
  int side;     // 0 bottom, 1 right, 2 top, 3 left
  Vec2 normal;  // outward
};

/// Boundary edges of the pixel set selected by `member`, in pixel order and
/// side order (bottom, right, top, left) within a pixel.
std::vector<DirectedEdge> directed_boundary(const PixelGrid& grid,
                                            const std::vector<int>& pixels,
                                            const std::function<bool(int, int)>& member);

/// Chains directed edges into closed loops. At pinch points the left turn is
/// taken so loops never cross. Each loop starts at its lowest edge index.
std::vector<std::vector<int>> trace_loops(const PixelGrid& grid,
                                          const std::vector<DirectedEdge>& edges);

/// Point id to (i, j).
inline std::pair<int, int> point_ij(const PixelGrid& grid, int id) {
  return {id % (grid.nx + 1), id / (grid.nx + 1)};
}

}  // namespace pixvem::detail
