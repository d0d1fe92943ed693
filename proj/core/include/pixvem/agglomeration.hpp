#pragma once

#include "pixvem/geometry.hpp"
#include "pixvem/pixelmesh.hpp"

#include <string>
#include <vector>

namespace pixvem {

struct MeshVertex {
  int grid_point = 0;
  Vec2 x;
  bool on_boundary = false;
};

/// Straight edge of the polygonal mesh. `left` traverses it from v0 to v1 in
/// its counterclockwise loop; `right` is the other element or -1 on the
/// boundary of the pixel domain.
struct MeshEdge {
  int v0 = 0;
  int v1 = 0;
  int left = -1;
  int right = -1;
  int fine_edges = 1;
  double length = 0.0;

  bool on_boundary() const { return right < 0; }
};

/// Edge as seen from one element; `reversed` means the element walks v1 -> v0.
struct EdgeRef {
  int edge = 0;
  bool reversed = false;
};

struct PolyElement {
  std::vector<int> pixels;
  std::vector<int> vertices;  // counterclockwise
  std::vector<EdgeRef> edges; // edges[i] joins vertices[i] -> vertices[i+1]
  Box bbox;
  double H_K = 0.0;           // max extent of the bounding box
  Vec2 x_K;                   // bounding-box center
  double area = 0.0;
  bool is_boundary = false;
  int block_side = 1;         // side, in pixels, of the block it came from
};

/// Maximal connected component of the interface between `element` and
/// `neighbor` (or the pixel-domain boundary when neighbor < 0). `chain` is
/// ordered along the counterclockwise loop of `element`, whose outward normal
/// is the chosen orientation of the macro edge.
struct MacroEdge {
  int element = -1;
  int neighbor = -1;
  std::vector<EdgeRef> chain;  // orientation relative to `element`
  std::vector<int> vertices;   // chain.size() + 1 vertices, endpoints first/last
  int fine_edges = 0;

  bool on_boundary() const { return neighbor < 0; }
  /// Mesh vertices strictly inside the macro edge.
  std::vector<int> interior_vertices() const {
    return std::vector<int>(vertices.begin() + 1, vertices.end() - 1);
  }
};

struct PolyMesh {
  PixelGrid grid;
  std::vector<int> pixel_element;  // element id per pixel, -1 outside
  std::vector<MeshVertex> vertices;
  std::vector<MeshEdge> edges;
  std::vector<PolyElement> elements;
  std::vector<MacroEdge> macro_edges;
  std::vector<int> boundary_edges;  // mesh edge ids on the pixel-domain boundary

  double h = 0.0;
  double H = 0.0;          // max H_K
  double H_nominal = 0.0;  // block side * h (smallest block for graded meshes)
  double tau_hat = 0.0;    // h / H_nominal
  bool graded = false;

  /// Length scale of the Nitsche penalty on boundary edges of element `e`.
  double penalty_length(int e) const { return graded ? elements[e].H_K : H_nominal; }
  /// Outward normal of element `e` along its local edge `local`.
  Vec2 outward_normal(int e, int local) const;
  /// Endpoints of local edge `local` of element `e` in counterclockwise order.
  std::pair<Vec2, Vec2> edge_points(int e, int local) const;
};

struct AgglomerationOptions {
  bool merge_interior_edges = true;
};

/// m x m pixel blocks anchored at the lower-left corner of the bounding box of
/// the inside pixels; each connected piece of a block is a candidate element,
/// slivers (fewer than m^2/4 pixels or no inscribed square of side m/4) are
/// merged into the neighbor with the longest shared interface.
PolyMesh agglomerate_uniform(const PixelGrid& grid, int m, AgglomerationOptions options = {});

/// Quadtree-style grading toward `corner`: blocks start with side m0 pixels and
/// are split in four while their infinity-norm distance to the corner is below
/// their own side, for `levels` levels.
PolyMesh agglomerate_graded(const PixelGrid& grid, const Vec2& corner, int m0, int levels,
                            AgglomerationOptions options = {});

/// Mesh from an explicit pixel -> element labelling (-1 for outside pixels).
/// Labels must describe simply connected elements.
PolyMesh agglomerate_labels(const PixelGrid& grid, const std::vector<int>& labels,
                            AgglomerationOptions options = {}, int block_side = 1);

/// Recomputes the macro edges of a mesh (called by the constructors above).
void build_macro_edges(PolyMesh& mesh);

struct AssumptionAudit {
  double min_HK_over_H = 0.0;
  double max_HK_over_H = 0.0;
  double min_alpha = 0.0;   // largest inscribed axis square side / H_K
  int max_crossings = 0;    // N0 estimate
  int elements = 0;
  int max_edges_per_element = 0;
  int max_macro_edges_per_element = 0;
};

AssumptionAudit audit_assumption(const PolyMesh& mesh);

/// Largest all-member square (in pixels) inside a pixel set.
int largest_inscribed_square(const PixelGrid& grid, const std::vector<int>& pixels);

void render_svg(const PolyMesh& mesh, const std::string& path);

/// JSON dump: vertices, element loops, macro edges.
std::string mesh_to_json(const PolyMesh& mesh);

}  // namespace pixvem
