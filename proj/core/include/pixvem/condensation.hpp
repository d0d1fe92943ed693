#pragma once

#include "pixvem/assembly.hpp"
#include "pixvem/solver.hpp"

#include <vector>

namespace pixvem {

/// Lazy functions of one macro edge. `basis` columns are coefficient vectors
/// over `interior_dofs`; rows listed in `lazy_dofs` form the identity, so each
/// column is the lazy function with unit value at that DOF.
struct MacroEdgeLazy {
  int macro_edge = 0;
  std::vector<int> elements;       // the one or two elements adjacent to the macro edge
  std::vector<int> interior_dofs;  // global ids of DOFs strictly inside the macro edge
  std::vector<int> kept_dofs;      // subset spanning the complement (pivot columns)
  std::vector<int> lazy_dofs;      // the others
  Eigen::MatrixXd constraints;     // moment rows x interior DOFs
  Eigen::MatrixXd basis;           // interior DOFs x lazy count
  int rank = 0;
};

/// Moment constraints of a macro edge: integrals of v q.nu_E for q in
/// (P_{k-1})^2, and the integral of v itself, over the interior DOFs.
MacroEdgeLazy lazy_basis_for_macro_edge(const PolyMesh& mesh, const DofMap& dofs, int macro_edge);

struct CondensationMap {
  int N = 0;
  std::vector<int> retained;        // sorted global ids
  std::vector<int> reduced_index;   // global id -> position in `retained`, -1 if lazy
  std::vector<MacroEdgeLazy> edges; // only macro edges with lazy functions
  Eigen::VectorXd s_weights;        // diagonal scalar product, per global DOF
  int lazy_count = 0;

  int active_dofs() const { return static_cast<int>(retained.size()); }
  /// Projection onto the lazy space, orthogonal for the weights s.
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;
  /// Global DOF vector of the retained coefficients `u_hat` plus lazy
  /// coefficients `lazy` (one block per entry of `edges`).
  Eigen::VectorXd expand(const Eigen::VectorXd& u_hat, const std::vector<Eigen::VectorXd>& lazy) const;
};

CondensationMap build_condensation(const PolyMesh& mesh, const DofMap& dofs,
                                   const std::vector<ElementOperators>& ops);

/// Reduced operator: retained block of the full matrix with the stabilization
/// coupling to the lazy space eliminated.
struct ReducedSystem {
  LinearSystem system;
  std::vector<std::vector<int>> coupling_columns;  // per lazy edge: reduced indices
  std::vector<Eigen::MatrixXd> Z;                  // per lazy edge: lazy x coupling
  std::vector<Eigen::MatrixXd> M;                  // per lazy edge: B^T W B
  std::vector<Eigen::VectorXd> lazy_load;          // per lazy edge: B^T b
};

ReducedSystem condense(const LinearSystem& full, const CondensationMap& cmap,
                       const std::vector<ElementOperators>& ops);

struct CondensedSolution {
  Eigen::VectorXd retained;  // coefficients of the retained DOFs
  Eigen::VectorXd full;      // reconstructed global DOF vector
  SolveReport report;
  int active_dofs = 0;
};

CondensedSolution condense_and_solve(const LinearSystem& full, const CondensationMap& cmap,
                                     const std::vector<ElementOperators>& ops);

}  // namespace pixvem
