#include "pixvem/agglomeration.hpp"

#include "detail/pixel_loops.hpp"
#include "pixvem/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace pixvem {
namespace {

struct PixelBox {
  int i0, i1, j0, j1;  // inclusive
};

PixelBox pixel_box(const PixelGrid& grid, const std::vector<int>& pixels) {
  PixelBox b{grid.nx, -1, grid.ny, -1};
  for (int p : pixels) {
    const int i = p % grid.nx, j = p / grid.nx;
    b.i0 = std::min(b.i0, i);
    b.i1 = std::max(b.i1, i);
    b.j0 = std::min(b.j0, j);
    b.j1 = std::max(b.j1, j);
  }
  return b;
}

// 4-connected and without holes: the member set and its complement inside the
// bounding box padded by one pixel both form a single 4-connected component.
bool simply_connected(const PixelGrid& grid, const std::vector<int>& pixels) {
  if (pixels.empty()) return false;
  const PixelBox b = pixel_box(grid, pixels);
  const int w = b.i1 - b.i0 + 3;
  const int hgt = b.j1 - b.j0 + 3;
  std::vector<char> member(static_cast<std::size_t>(w) * hgt, 0);
  for (int p : pixels) {
    const int i = p % grid.nx - b.i0 + 1, j = p / grid.nx - b.j0 + 1;
    member[j * w + i] = 1;
  }
  auto components = [&](char want) {
    std::vector<char> seen(member.size(), 0);
    int count = 0;
    std::vector<int> stack;
    for (int s = 0; s < w * hgt; ++s) {
      if (seen[s] || member[s] != want) continue;
      ++count;
      seen[s] = 1;
      stack.push_back(s);
      while (!stack.empty()) {
        const int q = stack.back();
        stack.pop_back();
        const int i = q % w, j = q / w;
        const int ni[4] = {i - 1, i + 1, i, i};
        const int nj[4] = {j, j, j - 1, j + 1};
        for (int d = 0; d < 4; ++d) {
          if (ni[d] < 0 || nj[d] < 0 || ni[d] >= w || nj[d] >= hgt) continue;
          const int r = nj[d] * w + ni[d];
          if (!seen[r] && member[r] == want) {
            seen[r] = 1;
            stack.push_back(r);
          }
        }
      }
    }
    return count;
  };
  return components(1) == 1 && components(0) == 1;
}

// Candidate elements before topology: pixel lists and the block side each
// came from.
struct Candidates {
  std::vector<int> label;  // per pixel
  std::vector<std::vector<int>> pixels;
  std::vector<int> side;
  std::vector<char> alive;
};

// Connected components of each block become candidates.
Candidates split_blocks(const PixelGrid& grid, const std::vector<long long>& block_of,
                        const std::vector<int>& block_side) {
  Candidates c;
  c.label.assign(grid.inside.size(), -1);
  std::vector<int> stack;
  for (int start = 0; start < grid.nx * grid.ny; ++start) {
    if (!grid.inside[start] || c.label[start] >= 0) continue;
    const int id = static_cast<int>(c.pixels.size());
    c.pixels.emplace_back();
    c.side.push_back(block_side[start]);
    c.alive.push_back(1);
    c.label[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      c.pixels[id].push_back(p);
      const int i = p % grid.nx, j = p / grid.nx;
      const int ni[4] = {i - 1, i + 1, i, i};
      const int nj[4] = {j, j, j - 1, j + 1};
      for (int d = 0; d < 4; ++d) {
        if (!grid.is_inside(ni[d], nj[d])) continue;
        const int q = grid.pixel_index(ni[d], nj[d]);
        if (c.label[q] < 0 && block_of[q] == block_of[p]) {
          c.label[q] = id;
          stack.push_back(q);
        }
      }
    }
    std::sort(c.pixels[id].begin(), c.pixels[id].end());
  }
  return c;
}

bool fails_quality(const PixelGrid& grid, const std::vector<int>& pixels, int side) {
  const double s = side;
  if (static_cast<double>(pixels.size()) < s * s / 4.0) return true;
  return largest_inscribed_square(grid, pixels) < s / 4.0;
}

void merge_slivers(const PixelGrid& grid, Candidates& c) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int lab = 0; lab < static_cast<int>(c.pixels.size()); ++lab) {
      if (!c.alive[lab] || !fails_quality(grid, c.pixels[lab], c.side[lab])) continue;
      std::map<int, int> interface;
      for (int p : c.pixels[lab]) {
        const int i = p % grid.nx, j = p / grid.nx;
        const int ni[4] = {i - 1, i + 1, i, i};
        const int nj[4] = {j, j, j - 1, j + 1};
        for (int d = 0; d < 4; ++d) {
          if (!grid.is_inside(ni[d], nj[d])) continue;
          const int other = c.label[grid.pixel_index(ni[d], nj[d])];
          if (other != lab) ++interface[other];
        }
      }
      std::vector<std::pair<int, int>> order(interface.begin(), interface.end());
      std::stable_sort(order.begin(), order.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      for (const auto& [nb, len] : order) {
        std::vector<int> merged = c.pixels[nb];
        merged.insert(merged.end(), c.pixels[lab].begin(), c.pixels[lab].end());
        if (!simply_connected(grid, merged)) continue;
        std::sort(merged.begin(), merged.end());
        for (int p : c.pixels[lab]) c.label[p] = nb;
        c.pixels[nb] = std::move(merged);
        c.pixels[lab].clear();
        c.side[nb] = std::max(c.side[nb], c.side[lab]);
        c.alive[lab] = 0;
        changed = true;
        break;
      }
    }
  }
}

// Relabels surviving candidates 0..n-1 by their smallest pixel index.
std::pair<std::vector<int>, std::vector<int>> compact_labels(const PixelGrid& grid,
                                                             const Candidates& c) {
  std::vector<int> order;
  for (int lab = 0; lab < static_cast<int>(c.pixels.size()); ++lab)
    if (c.alive[lab]) order.push_back(lab);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return c.pixels[a].front() < c.pixels[b].front(); });
  std::vector<int> remap(c.pixels.size(), -1);
  std::vector<int> sides;
  for (std::size_t n = 0; n < order.size(); ++n) {
    remap[order[n]] = static_cast<int>(n);
    sides.push_back(c.side[order[n]]);
  }
  std::vector<int> labels(grid.inside.size(), -1);
  for (std::size_t p = 0; p < labels.size(); ++p)
    if (c.label[p] >= 0) labels[p] = remap[c.label[p]];
  return {labels, sides};
}

PolyMesh build_topology(const PixelGrid& grid, const std::vector<int>& labels,
                        const std::vector<int>& sides, AgglomerationOptions options) {
  PolyMesh mesh;
  mesh.grid = grid;
  mesh.h = grid.h;
  mesh.pixel_element = labels;

  int n_elem = 0;
  for (int l : labels) n_elem = std::max(n_elem, l + 1);
  if (n_elem == 0) throw Error(ErrorCode::EmptyDomain, "mesh has no elements");
  std::vector<std::vector<int>> pixels(n_elem);
  for (int p = 0; p < static_cast<int>(labels.size()); ++p) {
    if (labels[p] < 0) continue;
    if (!grid.inside[p]) throw Error(ErrorCode::DegenerateMesh, "label on an outside pixel");
    pixels[labels[p]].push_back(p);
  }
  for (int p = 0; p < static_cast<int>(labels.size()); ++p)
    if (grid.inside[p] && labels[p] < 0)
      throw Error(ErrorCode::DegenerateMesh, "inside pixel without element");

  // Counterclockwise fine-edge loop of every element, with the neighbor across
  // each fine edge.
  struct FineLoop {
    std::vector<detail::DirectedEdge> edges;
    std::vector<int> neighbor;
  };
  std::vector<FineLoop> loops(n_elem);
  for (int e = 0; e < n_elem; ++e) {
    if (pixels[e].empty()) throw Error(ErrorCode::DegenerateMesh, "empty element label");
    if (!simply_connected(grid, pixels[e])) {
      throw Error(ErrorCode::DegenerateMesh,
                  "element " + std::to_string(e) + " is not simply connected");
    }
    auto member = [&](int i, int j) {
      return grid.in_range(i, j) && labels[grid.pixel_index(i, j)] == e;
    };
    const auto directed = detail::directed_boundary(grid, pixels[e], member);
    const auto traced = detail::trace_loops(grid, directed);
    if (traced.size() != 1)
      throw Error(ErrorCode::DegenerateMesh, "element " + std::to_string(e) + " has several loops");
    for (int idx : traced.front()) {
      const auto& d = directed[idx];
      const int i = d.pixel % grid.nx, j = d.pixel / grid.nx;
      const int oi = i + static_cast<int>(d.normal.x()), oj = j + static_cast<int>(d.normal.y());
      const int nb = grid.is_inside(oi, oj) ? labels[grid.pixel_index(oi, oj)] : -1;
      loops[e].edges.push_back(d);
      loops[e].neighbor.push_back(nb);
    }
  }

  // Vertex flags: every boundary point, every direction or neighbor change.
  const std::size_t n_points = static_cast<std::size_t>(grid.nx + 1) * (grid.ny + 1);
  std::vector<char> flagged(n_points, 0);
  std::vector<char> on_bdry(n_points, 0);
  for (const FineLoop& fl : loops) {
    const std::size_t n = fl.edges.size();
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t b = (a + 1) % n;
      const int pt = fl.edges[a].p1;
      if (fl.neighbor[a] < 0) {
        on_bdry[fl.edges[a].p0] = on_bdry[fl.edges[a].p1] = 1;
        flagged[fl.edges[a].p0] = flagged[fl.edges[a].p1] = 1;
      }
      const bool turn = fl.edges[a].side != fl.edges[b].side;
      if (turn || fl.neighbor[a] != fl.neighbor[b] || !options.merge_interior_edges) flagged[pt] = 1;
    }
  }
  std::vector<int> vertex_of(n_points, -1);
  for (std::size_t pt = 0; pt < n_points; ++pt) {
    if (!flagged[pt]) continue;
    vertex_of[pt] = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(MeshVertex{static_cast<int>(pt), grid.point(static_cast<int>(pt)),
                                       on_bdry[pt] != 0});
  }

  // Edges: runs of fine edges between flagged points.
  std::map<std::pair<int, int>, int> edge_index;
  mesh.elements.resize(n_elem);
  for (int e = 0; e < n_elem; ++e) {
    const FineLoop& fl = loops[e];
    const std::size_t n = fl.edges.size();
    std::size_t start = 0;
    while (!flagged[fl.edges[start].p0]) ++start;
    PolyElement& el = mesh.elements[e];
    el.pixels = pixels[e];
    el.block_side = sides.empty() ? 1 : sides[e];
    std::size_t a = 0;
    while (a < n) {
      const std::size_t first = (start + a) % n;
      const int v_begin = vertex_of[fl.edges[first].p0];
      int count = 0;
      std::size_t cur = first;
      while (true) {
        ++count;
        ++a;
        if (flagged[fl.edges[cur].p1]) break;
        cur = (start + a) % n;
      }
      const int v_end = vertex_of[fl.edges[cur].p1];
      const int nb = fl.neighbor[first];
      const auto key = std::minmax(v_begin, v_end);
      auto it = edge_index.find(key);
      EdgeRef ref;
      if (it == edge_index.end()) {
        MeshEdge me;
        me.v0 = v_begin;
        me.v1 = v_end;
        me.left = e;
        me.right = nb;
        me.fine_edges = count;
        me.length = count * grid.h;
        ref.edge = static_cast<int>(mesh.edges.size());
        ref.reversed = false;
        edge_index.emplace(key, ref.edge);
        mesh.edges.push_back(me);
        if (nb < 0) mesh.boundary_edges.push_back(ref.edge);
      } else {
        ref.edge = it->second;
        ref.reversed = true;
        const MeshEdge& me = mesh.edges[ref.edge];
        if (me.v0 != v_end || me.v1 != v_begin || me.right != e || me.left != nb)
          throw Error(ErrorCode::DegenerateMesh, "non-conforming interface edge");
      }
      el.vertices.push_back(v_begin);
      el.edges.push_back(ref);
      if (nb < 0) el.is_boundary = true;
    }

    const PixelBox pb = pixel_box(grid, el.pixels);
    el.bbox.lo = grid.point(pb.i0, pb.j0);
    el.bbox.hi = grid.point(pb.i1 + 1, pb.j1 + 1);
    const Vec2 ext = el.bbox.hi - el.bbox.lo;
    el.H_K = std::max(ext.x(), ext.y());
    el.x_K = 0.5 * (el.bbox.lo + el.bbox.hi);
    el.area = static_cast<double>(el.pixels.size()) * grid.h * grid.h;
  }

  mesh.H = 0.0;
  for (const auto& el : mesh.elements) mesh.H = std::max(mesh.H, el.H_K);
  build_macro_edges(mesh);
  return mesh;
}

}  // namespace

Vec2 PolyMesh::outward_normal(int e, int local) const {
  const auto [a, b] = edge_points(e, local);
  const Vec2 t = (b - a).normalized();
  return Vec2(t.y(), -t.x());
}

std::pair<Vec2, Vec2> PolyMesh::edge_points(int e, int local) const {
  const EdgeRef& r = elements[e].edges[local];
  const MeshEdge& me = edges[r.edge];
  const Vec2 a = vertices[r.reversed ? me.v1 : me.v0].x;
  const Vec2 b = vertices[r.reversed ? me.v0 : me.v1].x;
  return {a, b};
}

int largest_inscribed_square(const PixelGrid& grid, const std::vector<int>& pixels) {
  if (pixels.empty()) return 0;
  const PixelBox b = pixel_box(grid, pixels);
  const int w = b.i1 - b.i0 + 1;
  const int hgt = b.j1 - b.j0 + 1;
  std::vector<char> member(static_cast<std::size_t>(w) * hgt, 0);
  for (int p : pixels) member[(p / grid.nx - b.j0) * w + (p % grid.nx - b.i0)] = 1;
  std::vector<int> dp(member.size(), 0);
  int best = 0;
  for (int j = 0; j < hgt; ++j) {
    for (int i = 0; i < w; ++i) {
      const int q = j * w + i;
      if (!member[q]) continue;
      dp[q] = (i == 0 || j == 0) ? 1
                                 : 1 + std::min({dp[q - 1], dp[q - w], dp[q - w - 1]});
      best = std::max(best, dp[q]);
    }
  }
  return best;
}

PolyMesh agglomerate_labels(const PixelGrid& grid, const std::vector<int>& labels,
                            AgglomerationOptions options, int block_side) {
  if (labels.size() != grid.inside.size())
    throw Error(ErrorCode::DegenerateMesh, "label array size does not match grid");
  int n = 0;
  for (int l : labels) n = std::max(n, l + 1);
  PolyMesh mesh = build_topology(grid, labels, std::vector<int>(n, block_side), options);
  mesh.H_nominal = block_side * grid.h;
  mesh.tau_hat = grid.h / mesh.H_nominal;
  return mesh;
}

PolyMesh agglomerate_uniform(const PixelGrid& grid, int m, AgglomerationOptions options) {
  if (m < 1) throw Error(ErrorCode::ConfigError, "agglomeration ratio m must be >= 1");
  std::vector<long long> block_of(grid.inside.size(), -1);
  std::vector<int> side(grid.inside.size(), m);
  // Blocks start at the lower-left corner of the bounding box of the inside pixels.
  int i0 = grid.nx, j0 = grid.ny;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.is_inside(i, j)) {
        i0 = std::min(i0, i);
        j0 = std::min(j0, j);
      }
  const long long nbx = (grid.nx + m - 1) / m + 1;
  for (int j = j0; j < grid.ny; ++j)
    for (int i = i0; i < grid.nx; ++i)
      block_of[grid.pixel_index(i, j)] = ((j - j0) / m) * nbx + ((i - i0) / m);
  Candidates c = split_blocks(grid, block_of, side);
  merge_slivers(grid, c);
  const auto [labels, sides] = compact_labels(grid, c);
  PolyMesh mesh = build_topology(grid, labels, sides, options);
  mesh.H_nominal = m * grid.h;
  mesh.tau_hat = 1.0 / m;
  return mesh;
}

PolyMesh agglomerate_graded(const PixelGrid& grid, const Vec2& corner, int m0, int levels,
                            AgglomerationOptions options) {
  if (m0 < 1 || levels < 1) throw Error(ErrorCode::ConfigError, "graded mesh needs m0, levels >= 1");
  if (levels > 1 && (m0 % (1 << (levels - 1))) != 0)
    throw Error(ErrorCode::ConfigError, "m0 must be divisible by 2^(levels-1)");
  const Vec2 rel = (corner - grid.origin) / grid.h;
  const long long ci = std::llround(rel.x());
  const long long cj = std::llround(rel.y());

  std::vector<long long> block_of(grid.inside.size(), -1);
  std::vector<int> side_of(grid.inside.size(), m0);
  long long next_id = 0;

  // Blocks are anchored at the corner pixel index; recursion splits blocks
  // whose infinity-norm distance to the corner is smaller than their side.
  struct Block {
    long long i0, j0;
    int side;
    int level;
  };
  auto floor_div = [](long long a, long long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  const long long bi_lo = floor_div(0 - ci, m0), bi_hi = floor_div(grid.nx - 1 - ci, m0);
  const long long bj_lo = floor_div(0 - cj, m0), bj_hi = floor_div(grid.ny - 1 - cj, m0);
  std::vector<Block> stack;
  for (long long bj = bj_hi; bj >= bj_lo; --bj)
    for (long long bi = bi_hi; bi >= bi_lo; --bi)
      stack.push_back(Block{ci + bi * m0, cj + bj * m0, m0, 0});
  while (!stack.empty()) {
    const Block b = stack.back();
    stack.pop_back();
    const double dx = std::max({0.0, static_cast<double>(b.i0 - ci),
                                static_cast<double>(ci - (b.i0 + b.side))});
    const double dy = std::max({0.0, static_cast<double>(b.j0 - cj),
                                static_cast<double>(cj - (b.j0 + b.side))});
    const double dist = std::max(dx, dy);
    if (b.level + 1 < levels && dist < b.side) {
      const int s = b.side / 2;
      for (int q = 3; q >= 0; --q)
        stack.push_back(Block{b.i0 + (q % 2) * s, b.j0 + (q / 2) * s, s, b.level + 1});
      continue;
    }
    const long long id = next_id++;
    for (long long j = std::max<long long>(b.j0, 0); j < std::min<long long>(b.j0 + b.side, grid.ny); ++j)
      for (long long i = std::max<long long>(b.i0, 0); i < std::min<long long>(b.i0 + b.side, grid.nx); ++i) {
        const int p = grid.pixel_index(static_cast<int>(i), static_cast<int>(j));
        block_of[p] = id;
        side_of[p] = b.side;
      }
  }
  Candidates c = split_blocks(grid, block_of, side_of);
  merge_slivers(grid, c);
  const auto [labels, sides] = compact_labels(grid, c);
  PolyMesh mesh = build_topology(grid, labels, sides, options);
  int smallest = m0;
  for (const auto& el : mesh.elements) smallest = std::min(smallest, el.block_side);
  mesh.graded = levels > 1;
  mesh.H_nominal = smallest * grid.h;
  mesh.tau_hat = grid.h / mesh.H_nominal;
  return mesh;
}

void build_macro_edges(PolyMesh& mesh) {
  mesh.macro_edges.clear();
  auto neighbor_of = [&](int e, const EdgeRef& r) {
    const MeshEdge& me = mesh.edges[r.edge];
    return me.left == e ? me.right : me.left;
  };
  auto start_vertex = [&](const EdgeRef& r) {
    const MeshEdge& me = mesh.edges[r.edge];
    return r.reversed ? me.v1 : me.v0;
  };
  auto end_vertex = [&](const EdgeRef& r) {
    const MeshEdge& me = mesh.edges[r.edge];
    return r.reversed ? me.v0 : me.v1;
  };
  auto push = [&](int e, int nb, std::vector<EdgeRef> chain) {
    MacroEdge E;
    E.element = e;
    E.neighbor = nb;
    E.vertices.push_back(start_vertex(chain.front()));
    for (const EdgeRef& r : chain) {
      E.vertices.push_back(end_vertex(r));
      E.fine_edges += mesh.edges[r.edge].fine_edges;
    }
    E.chain = std::move(chain);
    mesh.macro_edges.push_back(std::move(E));
  };

  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    const auto& refs = mesh.elements[e].edges;
    const std::size_t n = refs.size();
    std::size_t start = n;
    for (std::size_t a = 0; a < n; ++a) {
      if (neighbor_of(e, refs[a]) != neighbor_of(e, refs[(a + n - 1) % n])) {
        start = a;
        break;
      }
    }
    if (start == n) {
      // Closed chain with a single neighbor: split at the south-west and
      // north-east extreme vertices.
      const int nb = neighbor_of(e, refs.front());
      std::size_t sw = 0, ne = 0;
      auto key = [&](std::size_t a) {
        const Vec2 x = mesh.vertices[start_vertex(refs[a])].x;
        return x.x() + x.y();
      };
      for (std::size_t a = 1; a < n; ++a) {
        if (key(a) < key(sw)) sw = a;
        if (key(a) > key(ne)) ne = a;
      }
      std::vector<EdgeRef> first, second;
      for (std::size_t a = 0; a < n; ++a) {
        const std::size_t idx = (sw + a) % n;
        (((idx + n - sw) % n) < ((ne + n - sw) % n) ? first : second).push_back(refs[idx]);
      }
      if (nb < 0 || nb > e) {
        push(e, nb, first);
        push(e, nb, second);
      }
      continue;
    }
    std::size_t a = 0;
    while (a < n) {
      const std::size_t first = (start + a) % n;
      const int nb = neighbor_of(e, refs[first]);
      std::vector<EdgeRef> chain;
      while (a < n && neighbor_of(e, refs[(start + a) % n]) == nb) {
        chain.push_back(refs[(start + a) % n]);
        ++a;
      }
      if (nb < 0 || nb > e) push(e, nb, std::move(chain));
    }
  }
}

AssumptionAudit audit_assumption(const PolyMesh& mesh) {
  AssumptionAudit a;
  a.elements = static_cast<int>(mesh.elements.size());
  a.min_HK_over_H = 1e300;
  a.min_alpha = 1e300;
  std::vector<int> macro_count(mesh.elements.size(), 0);
  for (const auto& E : mesh.macro_edges) {
    ++macro_count[E.element];
    if (E.neighbor >= 0) ++macro_count[E.neighbor];
  }
  const PixelGrid& grid = mesh.grid;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& el = mesh.elements[e];
    a.min_HK_over_H = std::min(a.min_HK_over_H, el.H_K / mesh.H);
    a.max_HK_over_H = std::max(a.max_HK_over_H, el.H_K / mesh.H);
    const double alpha = largest_inscribed_square(grid, el.pixels) * grid.h / el.H_K;
    a.min_alpha = std::min(a.min_alpha, alpha);
    a.max_edges_per_element = std::max(a.max_edges_per_element, static_cast<int>(el.edges.size()));
    a.max_macro_edges_per_element = std::max(a.max_macro_edges_per_element, macro_count[e]);
    // Crossings of pixel-center lines with the element boundary: count
    // horizontal boundary pieces per column and vertical pieces per row.
    std::map<int, int> col, row;
    auto member = [&](int i, int j) {
      return grid.in_range(i, j) && mesh.pixel_element[grid.pixel_index(i, j)] == static_cast<int>(e);
    };
    for (int p : el.pixels) {
      const int i = p % grid.nx, j = p / grid.nx;
      if (!member(i, j - 1)) ++col[i];
      if (!member(i, j + 1)) ++col[i];
      if (!member(i - 1, j)) ++row[j];
      if (!member(i + 1, j)) ++row[j];
    }
    for (const auto& [k, v] : col) a.max_crossings = std::max(a.max_crossings, v);
    for (const auto& [k, v] : row) a.max_crossings = std::max(a.max_crossings, v);
  }
  return a;
}

void render_svg(const PolyMesh& mesh, const std::string& path) {
  const PixelGrid& g = mesh.grid;
  const double W = 800.0;
  const double scale = W / std::max(g.nx, g.ny) / g.h;
  auto X = [&](const Vec2& p) { return (p.x() - g.origin.x()) * scale + 10.0; };
  auto Y = [&](const Vec2& p) { return (g.origin.y() + g.ny * g.h - p.y()) * scale + 10.0; };
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << g.nx * g.h * scale + 20
      << "\" height=\"" << g.ny * g.h * scale + 20 << "\">\n";
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& el = mesh.elements[e];
    const int hue = static_cast<int>((e * 137) % 360);
    out << "<polygon fill=\"hsl(" << hue << ",45%,80%)\" stroke=\"#333\" stroke-width=\"0.6\" points=\"";
    for (int v : el.vertices) out << X(mesh.vertices[v].x) << ',' << Y(mesh.vertices[v].x) << ' ';
    out << "\"/>\n";
  }
  for (const auto& E : mesh.macro_edges) {
    for (int v : {E.vertices.front(), E.vertices.back()}) {
      out << "<circle cx=\"" << X(mesh.vertices[v].x) << "\" cy=\"" << Y(mesh.vertices[v].x)
          << "\" r=\"2.5\" fill=\"" << (E.on_boundary() ? "#c00" : "#00c") << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

std::string mesh_to_json(const PolyMesh& mesh) {
  nlohmann::ordered_json j;
  j["h"] = mesh.h;
  j["H"] = mesh.H;
  j["H_nominal"] = mesh.H_nominal;
  j["tau_hat"] = mesh.tau_hat;
  j["graded"] = mesh.graded;
  auto& verts = j["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : mesh.vertices) verts.push_back({v.x.x(), v.x.y()});
  auto& elems = j["elements"] = nlohmann::ordered_json::array();
  for (const auto& el : mesh.elements) {
    elems.push_back({{"vertices", el.vertices},
                     {"H_K", el.H_K},
                     {"pixels", el.pixels.size()},
                     {"boundary", el.is_boundary}});
  }
  auto& macro = j["macro_edges"] = nlohmann::ordered_json::array();
  for (const auto& E : mesh.macro_edges) {
    macro.push_back({{"element", E.element},
                     {"neighbor", E.neighbor},
                     {"vertices", E.vertices},
                     {"fine_edges", E.fine_edges}});
  }
  return j.dump(1);
}

}  // namespace pixvem
