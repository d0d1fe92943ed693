#pragma once

#include "pixvem/condensation.hpp"
#include "pixvem/config.hpp"
#include "pixvem/error_norms.hpp"
#include "pixvem/fem_baseline.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pixvem {

/// Everything produced by one VEM solve.
struct VemRun {
  DofMap dofs;
  std::vector<ElementOperators> ops;
  Eigen::VectorXd u;
  ErrorNorms errors;
  int active_dofs = 0;
  int lazy_dofs = 0;
  SolveReport report;
};

VemRun solve_vem(const PolyMesh& mesh, const ManufacturedCase& mcase, const BdtConfig& config,
                 bool condense = true);

/// Pixel grid of size h for a named case, anchored at the bounding-box corner.
PixelGrid make_grid(const ManufacturedCase& mcase, double h, const std::string& rule);

struct SeriesFit {
  int k = 0;
  double tau_hat = 0.0;
  int points = 0;
  double slope_e0 = 0.0;  // NaN with fewer than two points
  double slope_e1 = 0.0;
};

struct StudyResult {
  std::vector<ErrorRecord> records;
  std::vector<SeriesFit> fits;
  /// Graded study only: correlation of log(e1) with the cube root of the
  /// active DOF count.
  double cbrt_correlation = 0.0;
};

/// Uniform study (VEM or FEM, per config.method); one record per
/// (k, tau_hat, H) or (k, h). Progress lines go to `log` when given.
StudyResult run_study(const StudyConfig& config, std::ostream* log = nullptr);

/// Graded bean-type study: level l uses order k = l and l grading levels.
StudyResult run_graded_study(const StudyConfig& config, std::ostream* log = nullptr);

/// Per-(k, tau_hat) slopes of e0 and e1 against H.
std::vector<SeriesFit> fit_series(const std::vector<ErrorRecord>& records);

/// CSV with header H,h,k,tau_hat,active_dofs,e0,e1.
void write_csv(const std::vector<ErrorRecord>& records, std::ostream& out);
void write_csv(const std::vector<ErrorRecord>& records, const std::string& path);
std::vector<ErrorRecord> read_csv(const std::string& path);

}  // namespace pixvem
