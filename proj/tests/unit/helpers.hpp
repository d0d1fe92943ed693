#pragma once

#include "pixvem/agglomeration.hpp"
#include "pixvem/geometry.hpp"
#include "pixvem/pixelmesh.hpp"

#include <string>
#include <vector>

namespace pixvem::testing {

/// Grid from rows of '#' (inside) and '.' (outside); the first row is the top.
inline PixelGrid grid_from_rows(const std::vector<std::string>& rows, double h = 1.0) {
  PixelGrid g;
  g.h = h;
  g.ny = static_cast<int>(rows.size());
  g.nx = static_cast<int>(rows.front().size());
  g.inside.assign(static_cast<std::size_t>(g.nx) * g.ny, 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      g.inside[g.pixel_index(i, j)] = rows[g.ny - 1 - j][i] == '#' ? 1 : 0;
  return g;
}

/// Labels from rows of digits (element ids) and '.' (outside); first row is the top.
inline std::vector<int> labels_from_rows(const std::vector<std::string>& rows) {
  const int ny = static_cast<int>(rows.size());
  const int nx = static_cast<int>(rows.front().size());
  std::vector<int> labels(static_cast<std::size_t>(nx) * ny, -1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const char c = rows[ny - 1 - j][i];
      if (c != '.') labels[j * nx + i] = c - '0';
    }
  return labels;
}

inline PixelGrid grid_for_labels(const std::vector<std::string>& rows, double h = 1.0) {
  std::vector<std::string> mask = rows;
  for (auto& r : mask)
    for (auto& c : r) c = c == '.' ? '.' : '#';
  return grid_from_rows(mask, h);
}

/// Unit square, pixel exact for dyadic h.
inline ImplicitDomain unit_square() { return make_rectangle(Box{Vec2(0.0, 0.0), Vec2(1.0, 1.0)}); }

inline double total_area(const PolyMesh& mesh) {
  double a = 0.0;
  for (const auto& e : mesh.elements) a += e.area;
  return a;
}

}  // namespace pixvem::testing
