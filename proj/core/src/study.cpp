#include "pixvem/study.hpp"

#include "pixvem/agglomeration.hpp"
#include "pixvem/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace pixvem {

VemRun solve_vem(const PolyMesh& mesh, const ManufacturedCase& mcase, const BdtConfig& config,
                 bool condense) {
  const BdtConfig cfg = config.resolved();
  VemRun run;
  run.dofs = build_dof_map(mesh, cfg.k);
  run.ops = build_all_projectors(mesh, run.dofs, cfg.beta);
  const LinearSystem sys = assemble_full(mesh, run.dofs, run.ops, mcase, cfg);
  if (condense) {
    const CondensationMap cmap = build_condensation(mesh, run.dofs, run.ops);
    const CondensedSolution sol = condense_and_solve(sys, cmap, run.ops);
    run.u = sol.full;
    run.active_dofs = sol.active_dofs;
    run.lazy_dofs = cmap.lazy_count;
    run.report = sol.report;
  } else {
    run.u = solve_sparse(sys, &run.report);
    run.active_dofs = run.dofs.N;
  }
  run.errors = compute_errors(mesh, run.ops, run.u, mcase);
  return run;
}

PixelGrid make_grid(const ManufacturedCase& mcase, double h, const std::string& rule) {
  return classify_pixels(mcase.domain, h, parse_rule(rule));
}

namespace {

int ratio(double tau_hat) {
  const double m = 1.0 / tau_hat;
  const int r = static_cast<int>(std::lround(m));
  if (r < 1 || std::abs(m - r) > 1e-9)
    throw Error(ErrorCode::ConfigError, "1/tau_hat must be an integer");
  return r;
}

BdtConfig bdt_from(const StudyConfig& c, int k) {
  BdtConfig b;
  b.k = k;
  b.k_star = c.k_star;
  b.gamma = c.gamma;
  b.beta = c.beta;
  b.project_consistency_test = c.project_consistency_test;
  return b;
}

void log_record(std::ostream* log, const char* method, const ErrorRecord& r) {
  if (!log) return;
  char line[256];
  std::snprintf(line, sizeof line,
                "%s k=%d H=%.6g h=%.6g tau_hat=%.6g dofs=%ld e0=%.4e e1=%.4e\n", method, r.k,
                r.H, r.h, r.tau_hat, r.active_dofs, r.e0, r.e1);
  *log << line << std::flush;
}

}  // namespace

StudyResult run_study(const StudyConfig& config, std::ostream* log) {
  validate(config);
  if (config.graded) return run_graded_study(config, log);
  const ManufacturedCase mcase = case_by_name(config.case_name);
  StudyResult res;
  if (config.method == Method::VemBdt) {
    AgglomerationOptions opts;
    opts.merge_interior_edges = config.merge_interior_edges;
    for (int k : config.k)
      for (double tau : config.tau_hat)
        for (double H : config.H) {
          const int m = ratio(tau);
          const double h = H / m;
          const PixelGrid grid = make_grid(mcase, h, config.rule);
          const PolyMesh mesh = agglomerate_uniform(grid, m, opts);
          const VemRun run = solve_vem(mesh, mcase, bdt_from(config, k), config.condense);
          ErrorRecord r{H, h, k, tau, run.active_dofs, run.errors.e0, run.errors.e1};
          log_record(log, "vem_bdt", r);
          res.records.push_back(r);
        }
  } else {
    for (int k : config.k)
      for (double h : config.h) {
        FemConfig fc;
        fc.k = k;
        fc.gamma = config.gamma;
        fc.k_star = config.method == Method::FemNitsche ? 0 : (config.k_star < 0 ? k : config.k_star);
        fc.g_star_mode = config.g_star_mode == "trace" ? GStarMode::Trace : GStarMode::Projected;
        const PixelGrid grid = make_grid(mcase, h, config.rule);
        const FemResult fr = fem_solve(grid, mcase, fc);
        ErrorRecord r{h, h, k, 1.0, fr.dofs, fr.errors.e0, fr.errors.e1};
        log_record(log, to_string(config.method), r);
        res.records.push_back(r);
      }
  }
  res.fits = fit_series(res.records);
  return res;
}

StudyResult run_graded_study(const StudyConfig& config, std::ostream* log) {
  if (!config.graded) throw Error(ErrorCode::ConfigError, "graded study needs a 'graded' block");
  if (config.method != Method::VemBdt)
    throw Error(ErrorCode::ConfigError, "graded study runs the VEM method only");
  const ManufacturedCase mcase = case_by_name(config.case_name);
  const GradedSpec& g = *config.graded;
  AgglomerationOptions opts;
  opts.merge_interior_edges = config.merge_interior_edges;
  StudyResult res;
  std::vector<double> x, y;
  for (double tau : config.tau_hat) {
    for (int level : g.levels) {
      const double H_min = g.H0 / std::ldexp(1.0, level - 1);
      const double h = tau * H_min;
      const int m0 = static_cast<int>(std::lround(g.H0 / h));
      const PixelGrid grid = make_grid(mcase, h, config.rule);
      const PolyMesh mesh = agglomerate_graded(grid, g.corner, m0, level, opts);
      const VemRun run = solve_vem(mesh, mcase, bdt_from(config, level), config.condense);
      ErrorRecord r{mesh.H_nominal, h, level, tau, run.active_dofs, run.errors.e0, run.errors.e1};
      log_record(log, "vem_bdt/graded", r);
      res.records.push_back(r);
      if (tau == config.tau_hat.front()) {
        x.push_back(std::cbrt(static_cast<double>(run.active_dofs)));
        y.push_back(std::log(run.errors.e1));
      }
    }
  }
  res.cbrt_correlation = x.size() >= 2 ? correlation(x, y) : 0.0;
  return res;
}

std::vector<SeriesFit> fit_series(const std::vector<ErrorRecord>& records) {
  std::map<std::pair<int, double>, std::vector<const ErrorRecord*>> groups;
  for (const auto& r : records) groups[{r.k, r.tau_hat}].push_back(&r);
  std::vector<SeriesFit> fits;
  for (const auto& [key, rs] : groups) {
    SeriesFit f;
    f.k = key.first;
    f.tau_hat = key.second;
    f.points = static_cast<int>(rs.size());
    f.slope_e0 = f.slope_e1 = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> H, e0, e1;
    for (const auto* r : rs) {
      H.push_back(r->H);
      e0.push_back(r->e0);
      e1.push_back(r->e1);
    }
    if (rs.size() >= 2) {
      f.slope_e0 = fit_slope(H, e0);
      f.slope_e1 = fit_slope(H, e1);
    }
    fits.push_back(f);
  }
  return fits;
}

void write_csv(const std::vector<ErrorRecord>& records, std::ostream& out) {
  out << "H,h,k,tau_hat,active_dofs,e0,e1\n";
  char line[256];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%d,%.17g,%ld,%.10e,%.10e\n", r.H, r.h, r.k,
                  r.tau_hat, r.active_dofs, r.e0, r.e1);
    out << line;
  }
}

void write_csv(const std::vector<ErrorRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path);
  write_csv(records, out);
}

std::vector<ErrorRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("H,h,k,tau_hat,active_dofs,e0,e1", 0) != 0)
    throw Error(ErrorCode::ParseError, path + ": unexpected CSV header");
  std::vector<ErrorRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ErrorRecord r;
    if (std::sscanf(line.c_str(), "%lf,%lf,%d,%lf,%ld,%lf,%lf", &r.H, &r.h, &r.k, &r.tau_hat,
                    &r.active_dofs, &r.e0, &r.e1) != 7)
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": bad row");
    out.push_back(r);
  }
  return out;
}

}  // namespace pixvem
