#pragma once

#include "pixvem/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pixvem {

enum class Method { VemBdt, FemNitsche, FemBdt };

Method parse_method(const std::string& name);
const char* to_string(Method m);

/// Graded (bean-type) study: level l uses order k = l, l grading levels,
/// smallest element size H0 / 2^(l-1).
struct GradedSpec {
  std::vector<int> levels;
  double H0 = 0.25;
  Vec2 corner{0.0, 0.0};
};

struct StudyConfig {
  std::string case_name = "test1a";
  Method method = Method::VemBdt;
  std::vector<int> k{1};
  int k_star = -1;                  // < 0: k (VEM), 0 (plain FEM), k (FEM-BDT)
  std::vector<double> tau_hat{0.25};
  std::vector<double> H;            // VEM element sizes
  std::vector<double> h;            // FEM pixel sizes
  std::optional<GradedSpec> graded;
  double gamma = -1.0;              // <= 0: 10 k^2
  double beta = 1.0;
  std::string rule = "contained";
  bool condense = true;
  bool merge_interior_edges = true;
  bool project_consistency_test = false;
  std::string g_star_mode = "projected";
  unsigned seed = 0;
  std::string output_csv;
};

/// Parses a JSON study description; `overrides` are "key=value" pairs whose
/// value is JSON (bare words are taken as strings). Throws ConfigError.
StudyConfig parse_study_config(const std::string& json_text,
                               const std::vector<std::string>& overrides = {});
StudyConfig load_study_config(const std::string& path,
                              const std::vector<std::string>& overrides = {});

/// Checks ranges and the dyadic alignment of H, tau_hat and h.
void validate(const StudyConfig& config);

}  // namespace pixvem
