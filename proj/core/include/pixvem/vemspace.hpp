#pragma once

#include "pixvem/agglomeration.hpp"
#include "pixvem/monomials.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

namespace pixvem {

/// Global numbering: vertex values, then k-1 Gauss-Lobatto values per edge
/// (ordered from v0 to v1), then dim(P_{k-2}) scaled moments per element.
struct DofMap {
  int k = 1;
  int n_vertices = 0;
  int n_edges = 0;
  int n_elements = 0;
  int per_edge = 0;
  int per_element = 0;
  int N = 0;
  /// Local -> global map per element: vertices, edge internals along the
  /// counterclockwise loop, moments.
  std::vector<std::vector<int>> element_dofs;

  int vertex_dof(int v) const { return v; }
  int edge_dof(int e, int j) const { return n_vertices + e * per_edge + j; }
  int moment_dof(int el, int a) const {
    return n_vertices + n_edges * per_edge + el * per_element + a;
  }
  bool is_moment(int dof) const { return dof >= n_vertices + n_edges * per_edge; }
};

DofMap build_dof_map(const PolyMesh& mesh, int k);

/// Local matrices of one element. "Star" matrices map local DOF vectors to
/// monomial coefficients.
struct ElementOperators {
  int element = 0;
  int k = 1;
  int n_dofs = 0;
  int n_vertices = 0;
  double area = 0.0;
  MonomialBasis basis;
  std::vector<int> dofs;                  // global ids
  std::vector<Vec2> node_points;          // vertex and edge nodes (first entries)
  std::vector<std::vector<int>> edge_nodes;  // per local edge: k+1 local ids, start to end

  Eigen::MatrixXd D;            // dofs x monomials
  Eigen::MatrixXd B;            // monomials x dofs
  Eigen::MatrixXd G;            // B * D
  Eigen::MatrixXd PiNablaStar;  // G^-1 B
  Eigen::MatrixXd PiNabla;      // D * PiNablaStar
  Eigen::MatrixXd Mass;         // L2 products of the monomials of degree <= k
  Eigen::MatrixXd PiZeroStar;   // L2 projection onto P_k
  std::array<Eigen::MatrixXd, 2> PiZeroGradStar;  // L2 projection of each gradient component onto P_{k-1}
  Eigen::MatrixXd Consistency;  // PiNablaStar^T G~ PiNablaStar
  Eigen::MatrixXd S;            // beta (I - PiNabla)^T (I - PiNabla)
  double beta = 1.0;

  int local_moment(int a) const { return n_dofs - MonomialBasis::dim(k - 2) + a; }
  Eigen::MatrixXd stiffness() const { return Consistency + S; }
  Eigen::VectorXd gather(const Eigen::VectorXd& global) const;
};

ElementOperators build_projectors(const PolyMesh& mesh, const DofMap& dofs, int element,
                                  double beta = 1.0);

std::vector<ElementOperators> build_all_projectors(const PolyMesh& mesh, const DofMap& dofs,
                                                   double beta = 1.0);

/// beta (I - Pi)^T (I - Pi) with Pi = D PiNablaStar.
Eigen::MatrixXd stabilization(const ElementOperators& ops, double beta);

/// Degrees of freedom of a smooth function: point values and pixel-quadrature
/// moments.
Eigen::VectorXd interpolate_dofs(const std::function<double(const Vec2&)>& u,
                                 const PolyMesh& mesh, const DofMap& dofs);

/// Tensor Gauss points on every pixel of an element (n per axis), with weights.
void pixel_quadrature(const PixelGrid& grid, const std::vector<int>& pixels, int n,
                      const std::function<void(const Vec2&, double)>& visit);

}  // namespace pixvem
