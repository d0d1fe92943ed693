#pragma once

#include "pixvem/vemspace.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace pixvem {

struct BdtConfig {
  int k = 1;
  int k_star = -1;                  // < 0: k
  double gamma = -1.0;              // <= 0: 10 k^2
  double beta = 1.0;
  int edge_quadrature_points = -1;  // <= 0: k + 3
  bool project_consistency_test = false;  // use Pi v instead of v in the first Nitsche term
  double march_step = 0.0;          // ray marching step for delta (0: diameter / 256)

  /// Copy with every default filled in.
  BdtConfig resolved() const;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct LinearSystem {
  SparseMatrix A;
  Eigen::VectorXd b;
  bool symmetric = false;

  int size() const { return static_cast<int>(b.size()); }
};

/// Quadrature on one boundary fine edge of element `element`.
struct BoundaryQuadrature {
  int element = 0;
  int local_edge = 0;
  Vec2 a, b;        // counterclockwise endpoints
  Vec2 normal;      // outward normal of the pixel domain
  Vec2 sigma;       // transfer direction, constant on the edge
  std::vector<double> t;       // parameters in [0, 1]
  std::vector<Vec2> x;
  std::vector<double> w;       // weights including the edge length
  std::vector<double> delta;   // gap along sigma at each point
};

std::vector<BoundaryQuadrature> boundary_quadrature(const PolyMesh& mesh,
                                                    const ImplicitDomain& domain,
                                                    const BdtConfig& config);

/// Row q: values at x_q of sum_{j=0..k_star} delta_q^j / j! d_sigma^j applied to
/// monomial coefficients (j = 0 gives the plain trace).
Eigen::MatrixXd taylor_trace(const MonomialBasis& basis, const BoundaryQuadrature& q, int k_star);

/// Same as taylor_trace without the j = 0 term: the correction series alone.
Eigen::MatrixXd boundary_correction(const MonomialBasis& basis, const BoundaryQuadrature& q,
                                    int k_star);

/// Local (element DOF) matrix and load of the boundary terms on one edge.
struct EdgeContribution {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};
EdgeContribution boundary_edge_terms(const PolyMesh& mesh, const ElementOperators& ops,
                                     const BoundaryQuadrature& q, const ManufacturedCase& mcase,
                                     const BdtConfig& config);

/// Full system: VEM stiffness (consistency + stabilization), Nitsche terms with
/// the Taylor correction, penalty, load.
LinearSystem assemble_full(const PolyMesh& mesh, const DofMap& dofs,
                           const std::vector<ElementOperators>& ops,
                           const ManufacturedCase& mcase, const BdtConfig& config);

/// Same, reusing precomputed boundary quadrature.
LinearSystem assemble_full(const PolyMesh& mesh, const DofMap& dofs,
                           const std::vector<ElementOperators>& ops,
                           const ManufacturedCase& mcase, const BdtConfig& config,
                           const std::vector<BoundaryQuadrature>& bq);

/// Global stabilization matrix alone.
SparseMatrix assemble_stabilization(const DofMap& dofs, const std::vector<ElementOperators>& ops);

struct TripleNorm {
  double projected_energy = 0.0;  // |Pi u|^2_{1,T_H}
  double remainder = 0.0;         // stabilization surrogate of |u - Pi u|^2_{1,T_H}
  double boundary = 0.0;          // ||Pi u||^2_{0, boundary}
  double value() const;
};
TripleNorm triple_norm(const std::vector<ElementOperators>& ops,
                       const std::vector<BoundaryQuadrature>& bq, const Eigen::VectorXd& u);

}  // namespace pixvem
