// Command line driver: mesh, solve, fem, study, plot.

#include "pixvem/agglomeration.hpp"
#include "pixvem/config.hpp"
#include "pixvem/error.hpp"
#include "pixvem/study.hpp"
#include "pixvem/svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace pixvem;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct DomainArgs {
  std::string case_name = "test1a";
  std::string mask;
  double h = 1.0 / 64;
  std::string rule = "contained";
};

void add_domain_options(CLI::App* app, DomainArgs& d) {
  app->add_option("--case", d.case_name, "test1a, test1b or bean")->capture_default_str();
  app->add_option("--mask", d.mask, "PGM or CSV pixel mask instead of a classified domain");
  app->add_option("--h", d.h, "pixel size")->capture_default_str();
  app->add_option("--rule", d.rule, "contained, center or intersecting")->capture_default_str();
}

PixelGrid grid_from(const DomainArgs& d) {
  if (!d.mask.empty()) return load_mask(d.mask, d.h);
  return make_grid(case_by_name(d.case_name), d.h, d.rule);
}

std::vector<double> split_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "expected comma-separated numbers, got '" + text + "'");
    }
  }
  return out;
}

PolyMesh mesh_from(const PixelGrid& grid, int ratio, const std::string& graded, bool merge) {
  AgglomerationOptions opts;
  opts.merge_interior_edges = merge;
  if (graded.empty()) return agglomerate_uniform(grid, ratio, opts);
  const auto v = split_numbers(graded);
  if (v.size() != 3) throw Error(ErrorCode::ConfigError, "--graded needs cx,cy,levels");
  return agglomerate_graded(grid, Vec2(v[0], v[1]), ratio, static_cast<int>(v[2]), opts);
}

void print_errors(const char* method, int k, double H, double h, long dofs, const ErrorNorms& e) {
  std::printf("%s k=%d H=%.6g h=%.6g active_dofs=%ld e0=%.6e e1=%.6e abs0=%.6e abs1=%.6e\n",
              method, k, H, h, dofs, e.e0, e.e1, e.abs0, e.abs1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pixel-domain virtual element solver with boundary correction"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  // mesh
  DomainArgs mesh_dom;
  int mesh_ratio = 4;
  std::string mesh_graded, mesh_svg, mesh_json;
  bool mesh_no_merge = false;
  auto* mesh_cmd = app.add_subcommand("mesh", "classify pixels, agglomerate, audit");
  add_domain_options(mesh_cmd, mesh_dom);
  mesh_cmd->add_option("--ratio", mesh_ratio, "block side m in pixels (m0 when graded)")
      ->capture_default_str();
  mesh_cmd->add_option("--graded", mesh_graded, "corner_x,corner_y,levels");
  mesh_cmd->add_option("--svg", mesh_svg, "write an SVG picture of the mesh");
  mesh_cmd->add_option("--json", mesh_json, "write the mesh as JSON");
  mesh_cmd->add_flag("--no-merge", mesh_no_merge, "keep interior fine edges unmerged");

  // solve
  DomainArgs solve_dom;
  int solve_k = 1, solve_ratio = 4, solve_kstar = -1;
  double solve_gamma = -1.0, solve_beta = 1.0;
  std::string solve_condense = "on", solve_graded, solve_json;
  bool solve_projected_test = false;
  auto* solve_cmd = app.add_subcommand("solve", "VEM solve with boundary correction");
  add_domain_options(solve_cmd, solve_dom);
  solve_cmd->add_option("--order,-k", solve_k, "polynomial order")->capture_default_str();
  solve_cmd->add_option("--ratio", solve_ratio, "block side m = H/h in pixels")->capture_default_str();
  solve_cmd->add_option("--graded", solve_graded, "corner_x,corner_y,levels");
  solve_cmd->add_option("--k-star", solve_kstar, "correction order (default k)");
  solve_cmd->add_option("--gamma", solve_gamma, "penalty (default 10 k^2)");
  solve_cmd->add_option("--beta", solve_beta, "stabilization weight")->capture_default_str();
  solve_cmd->add_option("--condense", solve_condense, "on or off")->capture_default_str();
  solve_cmd->add_flag("--projected-test", solve_projected_test,
                      "use the projected test trace in the first Nitsche term");
  solve_cmd->add_option("--json", solve_json, "write DOFs and element polynomials as JSON");

  // fem
  DomainArgs fem_dom;
  int fem_k = 1, fem_kstar = 0;
  double fem_gamma = -1.0;
  std::string fem_gstar = "projected";
  auto* fem_cmd = app.add_subcommand("fem", "Q_k finite elements with Nitsche terms");
  add_domain_options(fem_cmd, fem_dom);
  fem_cmd->add_option("--order,-k", fem_k, "polynomial order (1..3)")->capture_default_str();
  fem_cmd->add_option("--k-star", fem_kstar, "correction order (0: plain Nitsche)")
      ->capture_default_str();
  fem_cmd->add_option("--gamma", fem_gamma, "penalty (default 10 k^2)");
  fem_cmd->add_option("--g-star", fem_gstar, "trace or projected")->capture_default_str();

  // study
  std::string study_config, study_out;
  std::vector<std::string> study_set;
  auto* study_cmd = app.add_subcommand("study", "convergence study from a JSON preset");
  study_cmd->add_option("--config,-c", study_config, "preset JSON")->required();
  study_cmd->add_option("--set", study_set, "override key=value (repeatable)");
  study_cmd->add_option("--out,-o", study_out, "CSV output (overrides the preset)");

  // plot
  std::string plot_csv, plot_kind = "error_vs_H", plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "log-log SVG of a study CSV");
  plot_cmd->add_option("--csv", plot_csv, "study CSV")->required();
  plot_cmd->add_option("--kind", plot_kind, "error_vs_H or error_vs_dofs")->capture_default_str();
  plot_cmd->add_option("--out,-o", plot_out, "SVG output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*mesh_cmd) {
      const PixelGrid grid = grid_from(mesh_dom);
      const ManufacturedCase mcase = case_by_name(mesh_dom.case_name);
      const SanityReport sr = sanity_check(grid, mesh_dom.mask.empty() ? &mcase.domain : nullptr);
      const PolyMesh mesh = mesh_from(grid, mesh_ratio, mesh_graded, !mesh_no_merge);
      const AssumptionAudit a = audit_assumption(mesh);
      std::printf("pixels=%zu boundary_edges=%zu perimeter=%.6g max_delta/h=%.4g\n",
                  grid.inside_count(), sr.boundary_edges, sr.perimeter, sr.max_delta_over_h);
      std::printf("elements=%d vertices=%zu edges=%zu macro_edges=%zu H=%.6g tau_hat=%.6g\n",
                  a.elements, mesh.vertices.size(), mesh.edges.size(), mesh.macro_edges.size(),
                  mesh.H, mesh.tau_hat);
      std::printf("HK/H in [%.4g, %.4g] min_alpha=%.4g N0=%d max_edges=%d max_macro_edges=%d\n",
                  a.min_HK_over_H, a.max_HK_over_H, a.min_alpha, a.max_crossings,
                  a.max_edges_per_element, a.max_macro_edges_per_element);
      if (!mesh_svg.empty()) render_svg(mesh, mesh_svg);
      if (!mesh_json.empty()) {
        std::ofstream out(mesh_json);
        if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + mesh_json);
        out << mesh_to_json(mesh) << '\n';
      }
    } else if (*solve_cmd) {
      if (solve_condense != "on" && solve_condense != "off")
        throw Error(ErrorCode::ConfigError, "--condense must be on or off");
      const ManufacturedCase mcase = case_by_name(solve_dom.case_name);
      const PixelGrid grid = grid_from(solve_dom);
      const PolyMesh mesh = mesh_from(grid, solve_ratio, solve_graded, true);
      BdtConfig cfg;
      cfg.k = solve_k;
      cfg.k_star = solve_kstar;
      cfg.gamma = solve_gamma;
      cfg.beta = solve_beta;
      cfg.project_consistency_test = solve_projected_test;
      const VemRun run = solve_vem(mesh, mcase, cfg, solve_condense == "on");
      print_errors("vem_bdt", solve_k, mesh.H_nominal, mesh.h, run.active_dofs, run.errors);
      std::printf("total_dofs=%d lazy_dofs=%d residual=%.3e factor=%.3fs\n", run.dofs.N,
                  run.lazy_dofs, run.report.relative_residual, run.report.factor_time);
      if (!solve_json.empty()) {
        nlohmann::ordered_json j;
        j["k"] = solve_k;
        j["dofs"] = std::vector<double>(run.u.data(), run.u.data() + run.u.size());
        auto& el = j["elements"] = nlohmann::ordered_json::array();
        for (const auto& op : run.ops) {
          const Eigen::VectorXd c = op.PiNablaStar * op.gather(run.u);
          el.push_back({{"center", {op.basis.center.x(), op.basis.center.y()}},
                        {"H", op.basis.H},
                        {"pi_nabla", std::vector<double>(c.data(), c.data() + c.size())}});
        }
        std::ofstream out(solve_json);
        if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + solve_json);
        out << j.dump() << '\n';
      }
    } else if (*fem_cmd) {
      if (fem_gstar != "trace" && fem_gstar != "projected")
        throw Error(ErrorCode::ConfigError, "--g-star must be trace or projected");
      const ManufacturedCase mcase = case_by_name(fem_dom.case_name);
      const PixelGrid grid = grid_from(fem_dom);
      FemConfig fc;
      fc.k = fem_k;
      fc.k_star = fem_kstar;
      fc.gamma = fem_gamma;
      fc.g_star_mode = fem_gstar == "trace" ? GStarMode::Trace : GStarMode::Projected;
      const FemResult r = fem_solve(grid, mcase, fc);
      print_errors(fem_kstar > 0 ? "fem_bdt" : "fem_nitsche", fem_k, grid.h, grid.h, r.dofs,
                   r.errors);
    } else if (*study_cmd) {
      StudyConfig cfg = load_study_config(study_config, study_set);
      if (!study_out.empty()) cfg.output_csv = study_out;
      const StudyResult res = run_study(cfg, &std::cerr);
      if (cfg.output_csv.empty()) write_csv(res.records, std::cout);
      else write_csv(res.records, cfg.output_csv);
      for (const auto& f : res.fits)
        std::fprintf(stderr, "fit k=%d tau_hat=%g points=%d slope_e0=%.3f slope_e1=%.3f\n", f.k,
                     f.tau_hat, f.points, f.slope_e0, f.slope_e1);
      if (cfg.graded)
        std::fprintf(stderr, "corr(log e1, cbrt N) = %.4f\n", res.cbrt_correlation);
    } else if (*plot_cmd) {
      plot_svg(plot_csv, parse_plot_kind(plot_kind), plot_out);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.is_input_error() ? kConfigError : kNumericalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericalError;
  }
  return kOk;
}
