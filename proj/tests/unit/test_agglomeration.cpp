#include "helpers.hpp"
#include "pixvem/agglomeration.hpp"
#include "pixvem/error.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

using namespace pixvem;

namespace {

const ImplicitDomain kDisk = make_disk(Vec2(0.5, 0.5), 0.5);

bool simply_connected(const PolyMesh& mesh, const PolyElement& el) {
  PixelGrid g = mesh.grid;
  std::fill(g.inside.begin(), g.inside.end(), 0);
  for (int p : el.pixels) g.inside[p] = 1;
  return extract_boundary(g).loops.size() == 1;
}

void check_topology(const PolyMesh& mesh) {
  // each edge seen once from its left element and once from its right one
  std::vector<int> left(mesh.edges.size(), 0), right(mesh.edges.size(), 0);
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    const PolyElement& el = mesh.elements[e];
    REQUIRE(el.vertices.size() == el.edges.size());
    for (size_t i = 0; i < el.edges.size(); ++i) {
      const EdgeRef r = el.edges[i];
      const MeshEdge& me = mesh.edges[r.edge];
      const int from = r.reversed ? me.v1 : me.v0;
      const int to = r.reversed ? me.v0 : me.v1;
      CHECK(from == el.vertices[i]);
      CHECK(to == el.vertices[(i + 1) % el.vertices.size()]);
      if (r.reversed) {
        CHECK(me.right == static_cast<int>(e));
        ++right[r.edge];
      } else {
        CHECK(me.left == static_cast<int>(e));
        ++left[r.edge];
      }
    }
  }
  for (size_t e = 0; e < mesh.edges.size(); ++e) {
    CHECK(left[e] == 1);
    CHECK(right[e] == (mesh.edges[e].on_boundary() ? 0 : 1));
  }
  // boundary fine edges: length h, each in exactly one macro edge
  std::map<int, int> seen;
  for (const auto& E : mesh.macro_edges)
    for (const auto& r : E.chain) ++seen[r.edge];
  for (size_t e = 0; e < mesh.edges.size(); ++e) {
    CHECK(seen[static_cast<int>(e)] == 1);
    if (mesh.edges[e].on_boundary()) CHECK(mesh.edges[e].length == doctest::Approx(mesh.h));
  }
  CHECK(testing::total_area(mesh) ==
        doctest::Approx(mesh.grid.inside_count() * mesh.h * mesh.h).epsilon(1e-12));
}

}  // namespace

TEST_CASE("four pixels, ratio 2: one element") {
  const PixelGrid g = classify_pixels(kDisk, 0.25);
  const PolyMesh m = agglomerate_uniform(g, 2);
  REQUIRE(m.elements.size() == 1);
  CHECK(m.elements[0].H_K == doctest::Approx(0.5));
  CHECK(m.elements[0].pixels.size() == 4);
  CHECK(m.tau_hat == doctest::Approx(0.5));
  check_topology(m);
}

TEST_CASE("four pixels, ratio 1: the pixel mesh") {
  const PolyMesh m = agglomerate_uniform(classify_pixels(kDisk, 0.25), 1);
  CHECK(m.elements.size() == 4);
  CHECK(m.tau_hat == doctest::Approx(1.0));
  for (const auto& el : m.elements) CHECK(el.H_K == doctest::Approx(0.25));
  check_topology(m);
}

TEST_CASE("8x8 disk mask with ratio 4") {
  const PixelGrid g = classify_pixels(kDisk, 1.0 / 8);
  const PolyMesh m = agglomerate_uniform(g, 4);
  CHECK(m.elements.size() <= 4);
  for (const auto& el : m.elements) CHECK(simply_connected(m, el));
  check_topology(m);
}

TEST_CASE("uniform agglomeration of the disk: area, size and sliver bounds") {
  for (int m : {2, 4, 8}) {
    CAPTURE(m);
    const PixelGrid g = classify_pixels(kDisk, 1.0 / (8 * m));
    const PolyMesh mesh = agglomerate_uniform(g, m);
    check_topology(mesh);
    int beyond_block_diagonal = 0;
    for (const auto& el : mesh.elements) {
      CHECK(simply_connected(mesh, el));
      // a sliver merged into a full block can stretch it by up to one block
      CHECK(el.H_K <= 2 * m * g.h + 1e-12);
      beyond_block_diagonal += el.H_K > std::sqrt(2.0) * m * g.h + 1e-12;
      CHECK(4 * el.pixels.size() >= static_cast<size_t>(m * m));
    }
    MESSAGE("m = " << m << ": " << beyond_block_diagonal << " of " << mesh.elements.size()
                   << " elements exceed sqrt(2) m h");
    const AssumptionAudit a = audit_assumption(mesh);
    CHECK(a.elements == static_cast<int>(mesh.elements.size()));
    CHECK(a.min_alpha >= 0.25 - 1e-12);
    CHECK(a.max_HK_over_H <= 1.0 + 1e-12);
  }
}

TEST_CASE("graded with one level equals uniform") {
  const PixelGrid g = classify_pixels(testing::unit_square(), 1.0 / 16);
  const PolyMesh u = agglomerate_uniform(g, 4);
  const PolyMesh gr = agglomerate_graded(g, Vec2(0, 0), 4, 1);
  CHECK(u.pixel_element == gr.pixel_element);
  CHECK(u.elements.size() == gr.elements.size());
}

TEST_CASE("graded with two levels halves the blocks at the corner") {
  const PixelGrid g = classify_pixels(testing::unit_square(), 1.0 / 16);
  const PolyMesh m = agglomerate_graded(g, Vec2(0, 0), 4, 2);
  check_topology(m);
  int small = 0;
  for (const auto& el : m.elements) {
    const bool near = el.bbox.hi.x() <= 0.25 + 1e-12 && el.bbox.hi.y() <= 0.25 + 1e-12;
    CHECK(el.H_K == doctest::Approx(near ? 0.125 : 0.25));
    small += near;
  }
  CHECK(small == 4);
  CHECK(m.elements.size() == 15 + 4);
  CHECK(m.H_nominal == doctest::Approx(0.125));
}

TEST_CASE("graded bean mesh has geometric element sizes") {
  const ImplicitDomain bean = make_bean();
  const double h = 1.0 / 128;
  const PixelGrid g = classify_pixels(bean, h);
  const PolyMesh m = agglomerate_graded(g, Vec2(0, 0), 32, 4);
  check_topology(m);
  std::set<int> sides;
  for (const auto& el : m.elements) sides.insert(el.block_side);
  CHECK(sides == std::set<int>{4, 8, 16, 32});
  CHECK(m.H_nominal == doctest::Approx(4 * h));
  // the smallest blocks sit at the corner
  for (const auto& el : m.elements)
    if (el.block_side == 4) CHECK((el.x_K).lpNorm<Eigen::Infinity>() < 32 * h);
}

TEST_CASE("two squares side by side share one macro edge") {
  const std::vector<std::string> rows = {"0011", "0011"};
  const PixelGrid g = testing::grid_for_labels(rows);
  const auto labels = testing::labels_from_rows(rows);
  for (bool merge : {false, true}) {
    CAPTURE(merge);
    AgglomerationOptions opt;
    opt.merge_interior_edges = merge;
    const PolyMesh m = agglomerate_labels(g, labels, opt);
    check_topology(m);
    int interior = 0;
    for (const auto& E : m.macro_edges) {
      if (E.on_boundary()) continue;
      ++interior;
      CHECK(E.fine_edges == 2);
      CHECK(E.chain.size() == (merge ? 1u : 2u));
      CHECK(E.element < E.neighbor);
    }
    CHECK(interior == 1);
  }
}

TEST_CASE("single element: boundary loop split into two open chains") {
  const PolyMesh m = agglomerate_uniform(testing::grid_from_rows({"###", "###"}), 3);
  REQUIRE(m.elements.size() == 1);
  CHECK(m.macro_edges.size() == 2);
  for (const auto& E : m.macro_edges) {
    CHECK(E.on_boundary());
    CHECK(E.vertices.front() != E.vertices.back());
  }
  check_topology(m);
}

TEST_CASE("element with many edges and few macro edges") {
  // element 0 wraps around element 1 on three sides
  const std::vector<std::string> rows = {"01110", "01110", "00000", "00000"};
  const PolyMesh m = agglomerate_labels(testing::grid_for_labels(rows), testing::labels_from_rows(rows));
  check_topology(m);
  const AssumptionAudit a = audit_assumption(m);
  CHECK(a.max_edges_per_element >= 14);
  CHECK(a.max_crossings >= 4);
}

TEST_CASE("non simply connected labels are rejected") {
  const std::vector<std::string> rows = {"000", "010", "000"};
  CHECK_THROWS_AS(agglomerate_labels(testing::grid_for_labels(rows), testing::labels_from_rows(rows)),
                  Error);
}

TEST_CASE("svg and json dumps") {
  const PolyMesh m = agglomerate_uniform(classify_pixels(kDisk, 1.0 / 16), 4);
  const std::string path = "agglomeration_test_mesh.svg";
  render_svg(m, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("<svg") != std::string::npos);
  std::remove(path.c_str());

  const auto j = nlohmann::json::parse(mesh_to_json(m));
  CHECK(j["elements"].size() == m.elements.size());
  CHECK(j["macro_edges"].size() == m.macro_edges.size());
  CHECK(j["vertices"].size() == m.vertices.size());
}
