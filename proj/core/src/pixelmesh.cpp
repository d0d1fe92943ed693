#include "pixvem/pixelmesh.hpp"

#include "detail/pixel_loops.hpp"
#include "pixvem/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace pixvem {

namespace detail {

std::vector<DirectedEdge> directed_boundary(const PixelGrid& grid,
                                            const std::vector<int>& pixels,
                                            const std::function<bool(int, int)>& member) {
  std::vector<DirectedEdge> out;
  for (int p : pixels) {
    const int i = p % grid.nx;
    const int j = p / grid.nx;
    if (!member(i, j - 1))
      out.push_back({grid.point_index(i, j), grid.point_index(i + 1, j), p, 0, Vec2(0, -1)});
    if (!member(i + 1, j))
      out.push_back({grid.point_index(i + 1, j), grid.point_index(i + 1, j + 1), p, 1, Vec2(1, 0)});
    if (!member(i, j + 1))
      out.push_back({grid.point_index(i + 1, j + 1), grid.point_index(i, j + 1), p, 2, Vec2(0, 1)});
    if (!member(i - 1, j))
      out.push_back({grid.point_index(i, j + 1), grid.point_index(i, j), p, 3, Vec2(-1, 0)});
  }
  return out;
}

std::vector<std::vector<int>> trace_loops(const PixelGrid& grid,
                                          const std::vector<DirectedEdge>& edges) {
  std::multimap<int, int> outgoing;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) outgoing.emplace(edges[e].p0, e);
  std::vector<char> used(edges.size(), 0);
  std::vector<std::vector<int>> loops;

  auto direction = [&](int e) {
    const Vec2 a = grid.point(edges[e].p0);
    const Vec2 b = grid.point(edges[e].p1);
    return Vec2(b - a);
  };

  for (int start = 0; start < static_cast<int>(edges.size()); ++start) {
    if (used[start]) continue;
    std::vector<int> loop;
    int cur = start;
    while (true) {
      used[cur] = 1;
      loop.push_back(cur);
      const int at = edges[cur].p1;
      const Vec2 din = direction(cur);
      // Candidates: unused outgoing edges, plus the start edge to close the
      // loop. Left turn first, then straight, then right.
      int next = -1;
      double best = -2.0;
      auto [lo, hi] = outgoing.equal_range(at);
      for (auto it = lo; it != hi; ++it) {
        const int cand = it->second;
        if (used[cand] && cand != start) continue;
        const Vec2 dout = direction(cand);
        const double cross = din.x() * dout.y() - din.y() * dout.x();
        const double score = cross > 0 ? 1.0 : (cross == 0 ? 0.0 : -1.0);
        if (score > best) {
          best = score;
          next = cand;
        }
      }
      if (next < 0 || next == start) break;
      cur = next;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace detail

std::size_t PixelGrid::inside_count() const {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

ClassificationRule parse_rule(const std::string& name) {
  if (name == "contained") return ClassificationRule::Contained;
  if (name == "center") return ClassificationRule::Center;
  if (name == "intersecting") return ClassificationRule::Intersecting;
  throw Error(ErrorCode::ConfigError, "unknown classification rule '" + name + "'");
}

const char* to_string(ClassificationRule rule) {
  switch (rule) {
    case ClassificationRule::Contained: return "contained";
    case ClassificationRule::Center: return "center";
    case ClassificationRule::Intersecting: return "intersecting";
  }
  return "?";
}

namespace {

// Flood fill over 4-neighbours; returns labels (-1 for non-members) and count.
template <typename Member>
std::vector<int> label_components(int nx, int ny, Member member, int& count) {
  std::vector<int> label(static_cast<std::size_t>(nx) * ny, -1);
  count = 0;
  std::vector<int> stack;
  for (int start = 0; start < nx * ny; ++start) {
    if (label[start] >= 0 || !member(start % nx, start / nx)) continue;
    label[start] = count;
    stack.push_back(start);
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      const int i = p % nx, j = p / nx;
      const int ni[4] = {i - 1, i + 1, i, i};
      const int nj[4] = {j, j, j - 1, j + 1};
      for (int d = 0; d < 4; ++d) {
        if (ni[d] < 0 || nj[d] < 0 || ni[d] >= nx || nj[d] >= ny) continue;
        const int q = nj[d] * nx + ni[d];
        if (label[q] < 0 && member(ni[d], nj[d])) {
          label[q] = count;
          stack.push_back(q);
        }
      }
    }
    ++count;
  }
  return label;
}

void finalize_grid(PixelGrid& grid) {
  if (grid.inside_count() == 0) throw Error(ErrorCode::EmptyDomain, "no pixel selected");
  const int components = keep_largest_component(grid);
  if (components > 1) {
    std::cerr << "warning: pixel domain has " << components
              << " connected components; keeping the largest\n";
  }
  const int holes = count_holes(grid);
  if (holes > 0) {
    throw Error(ErrorCode::HoleInDomain,
                "pixel domain has " + std::to_string(holes) + " hole(s); not supported");
  }
}

}  // namespace

int keep_largest_component(PixelGrid& grid) {
  int count = 0;
  const auto label = label_components(
      grid.nx, grid.ny, [&](int i, int j) { return grid.is_inside(i, j); }, count);
  if (count <= 1) return count;
  std::vector<std::size_t> sizes(count, 0);
  for (int l : label)
    if (l >= 0) ++sizes[l];
  const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  for (std::size_t p = 0; p < label.size(); ++p) grid.inside[p] = (label[p] == keep) ? 1 : 0;
  return count;
}

int count_holes(const PixelGrid& grid) {
  int count = 0;
  const auto label = label_components(
      grid.nx, grid.ny, [&](int i, int j) { return !grid.is_inside(i, j); }, count);
  std::vector<char> touches_border(count, 0);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int l = label[grid.pixel_index(i, j)];
      if (l >= 0 && (i == 0 || j == 0 || i == grid.nx - 1 || j == grid.ny - 1))
        touches_border[l] = 1;
    }
  }
  return static_cast<int>(std::count(touches_border.begin(), touches_border.end(), 0));
}

PixelGrid classify_pixels(const ImplicitDomain& domain, double h, ClassificationRule rule,
                          std::optional<Vec2> origin) {
  if (!(h > 0.0)) throw Error(ErrorCode::ConfigError, "pixel size h must be positive");
  PixelGrid grid;
  grid.origin = origin.value_or(domain.bounding_box.lo);
  grid.h = h;
  const Vec2 extent = domain.bounding_box.hi - grid.origin;
  grid.nx = std::max(1, static_cast<int>(std::ceil(extent.x() / h - 1e-9)));
  grid.ny = std::max(1, static_cast<int>(std::ceil(extent.y() / h - 1e-9)));
  grid.inside.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0);

  // Level set at grid points, evaluated once.
  std::vector<double> phi(static_cast<std::size_t>(grid.nx + 1) * (grid.ny + 1));
  if (rule != ClassificationRule::Center) {
    for (int j = 0; j <= grid.ny; ++j)
      for (int i = 0; i <= grid.nx; ++i)
        phi[grid.point_index(i, j)] = domain.level_set(grid.point(i, j));
  }
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      bool in = false;
      if (rule == ClassificationRule::Center) {
        in = domain.level_set(grid.point(i, j) + Vec2(0.5 * h, 0.5 * h)) < 0.0;
      } else {
        const double c[4] = {phi[grid.point_index(i, j)], phi[grid.point_index(i + 1, j)],
                             phi[grid.point_index(i, j + 1)], phi[grid.point_index(i + 1, j + 1)]};
        if (rule == ClassificationRule::Contained) {
          // Corners on the boundary count as inside so pixel-exact domains keep all pixels.
          const double tol = 1e-12 * h;
          in = c[0] <= tol && c[1] <= tol && c[2] <= tol && c[3] <= tol &&
               std::min({c[0], c[1], c[2], c[3]}) < 0.0;
        } else {
          in = c[0] < 0 || c[1] < 0 || c[2] < 0 || c[3] < 0;
        }
      }
      grid.inside[grid.pixel_index(i, j)] = in ? 1 : 0;
    }
  }
  finalize_grid(grid);
  return grid;
}

PixelGrid parse_mask(const std::string& content, std::optional<double> h) {
  std::vector<std::vector<std::uint8_t>> rows;
  const bool is_pgm = content.size() >= 2 && content[0] == 'P' &&
                      (content[1] == '2' || content[1] == '5');
  if (is_pgm) {
    std::size_t pos = 2;
    // Header tokens: width height maxval, with '#' comments.
    auto next_token = [&]() -> long {
      while (pos < content.size()) {
        const char c = content[pos];
        if (c == '#') {
          while (pos < content.size() && content[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
          ++pos;
        } else {
          break;
        }
      }
      std::size_t end = pos;
      while (end < content.size() && std::isdigit(static_cast<unsigned char>(content[end]))) ++end;
      if (end == pos) throw Error(ErrorCode::ParseError, "malformed PGM header");
      const long v = std::stol(content.substr(pos, end - pos));
      pos = end;
      return v;
    };
    const long w = next_token();
    const long hgt = next_token();
    const long maxval = next_token();
    if (w <= 0 || hgt <= 0 || maxval <= 0 || maxval > 65535)
      throw Error(ErrorCode::ParseError, "invalid PGM dimensions");
    rows.assign(hgt, std::vector<std::uint8_t>(w, 0));
    if (content[1] == '2') {
      for (long r = 0; r < hgt; ++r)
        for (long c = 0; c < w; ++c) rows[r][c] = next_token() * 2 >= maxval ? 1 : 0;
    } else {
      ++pos;  // single whitespace after maxval
      const int bytes = maxval > 255 ? 2 : 1;
      if (content.size() < pos + static_cast<std::size_t>(w * hgt * bytes))
        throw Error(ErrorCode::ParseError, "truncated P5 data");
      for (long r = 0; r < hgt; ++r) {
        for (long c = 0; c < w; ++c) {
          const std::size_t at = pos + static_cast<std::size_t>((r * w + c) * bytes);
          long v = static_cast<unsigned char>(content[at]);
          if (bytes == 2) v = v * 256 + static_cast<unsigned char>(content[at + 1]);
          rows[r][c] = v * 2 >= maxval ? 1 : 0;
        }
      }
    }
  } else {
    std::istringstream in(content);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::uint8_t> row;
      std::string cell;
      std::istringstream ls(line);
      while (std::getline(ls, cell, ',')) {
        cell.erase(0, cell.find_first_not_of(" \t"));
        cell.erase(cell.find_last_not_of(" \t") + 1);
        if (cell == "0") {
          row.push_back(0);
        } else if (cell == "1") {
          row.push_back(1);
        } else {
          throw Error(ErrorCode::ParseError,
                      "mask line " + std::to_string(line_no) + ": expected 0 or 1, got '" + cell + "'");
        }
      }
      if (!rows.empty() && row.size() != rows.front().size())
        throw Error(ErrorCode::ParseError, "mask line " + std::to_string(line_no) + ": ragged row");
      rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::ParseError, "empty mask");
  }
  PixelGrid grid;
  grid.ny = static_cast<int>(rows.size());
  grid.nx = static_cast<int>(rows.front().size());
  grid.h = h.value_or(1.0 / std::max(grid.nx, grid.ny));
  grid.origin = Vec2(0.0, 0.0);
  grid.inside.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0);
  for (int r = 0; r < grid.ny; ++r)
    for (int c = 0; c < grid.nx; ++c) grid.inside[grid.pixel_index(c, grid.ny - 1 - r)] = rows[r][c];
  finalize_grid(grid);
  return grid;
}

PixelGrid load_mask(const std::string& path, std::optional<double> h) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open mask " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_mask(ss.str(), h);
}

PixelBoundary extract_boundary(const PixelGrid& grid) {
  std::vector<int> pixels;
  for (int p = 0; p < grid.nx * grid.ny; ++p)
    if (grid.inside[p]) pixels.push_back(p);
  const auto directed = detail::directed_boundary(
      grid, pixels, [&](int i, int j) { return grid.is_inside(i, j); });
  PixelBoundary out;
  out.edges.reserve(directed.size());
  for (const auto& d : directed) {
    out.edges.push_back(BoundaryEdge{d.p0, d.p1, grid.point(d.p0), grid.point(d.p1), d.normal, d.pixel});
  }
  out.loops = detail::trace_loops(grid, directed);
  return out;
}

SanityReport sanity_check(const PixelGrid& grid, const ImplicitDomain* domain) {
  SanityReport r;
  int count = 0;
  label_components(grid.nx, grid.ny, [&](int i, int j) { return grid.is_inside(i, j); }, count);
  r.components = count;
  r.holes = count_holes(grid);
  const PixelBoundary b = extract_boundary(grid);
  r.boundary_edges = b.edges.size();
  r.perimeter = static_cast<double>(b.edges.size()) * grid.h;
  if (domain != nullptr) {
    for (const auto& e : b.edges) {
      const Vec2 m = e.midpoint();
      const Vec2 sigma = sigma_direction(*domain, m);
      const double d = std::abs(delta_along(*domain, m, sigma, grid.h / 4.0));
      r.max_delta = std::max(r.max_delta, d);
    }
    r.max_delta_over_h = r.max_delta / grid.h;
    r.distance_within_h = r.max_delta <= 3.0 * grid.h;
  }
  return r;
}

}  // namespace pixvem
