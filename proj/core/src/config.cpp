#include "pixvem/config.hpp"

#include "pixvem/error.hpp"
#include "pixvem/pixelmesh.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace pixvem {

using nlohmann::json;

Method parse_method(const std::string& name) {
  if (name == "vem_bdt") return Method::VemBdt;
  if (name == "fem_nitsche") return Method::FemNitsche;
  if (name == "fem_bdt") return Method::FemBdt;
  throw Error(ErrorCode::ConfigError, "unknown method '" + name + "'");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::VemBdt: return "vem_bdt";
    case Method::FemNitsche: return "fem_nitsche";
    case Method::FemBdt: return "fem_bdt";
  }
  return "unknown";
}

namespace {

template <class T>
std::vector<T> as_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

void apply_override(json& j, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorCode::ConfigError, "override '" + item + "' is not key=value");
  const std::string key = item.substr(0, eq);
  const std::string text = item.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* target = &j;
  std::stringstream path(key);
  std::string part, last;
  std::vector<std::string> parts;
  while (std::getline(path, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) target = &(*target)[parts[i]];
  (*target)[parts.back()] = value;
}

}  // namespace

StudyConfig parse_study_config(const std::string& json_text,
                               const std::vector<std::string>& overrides) {
  json j = json::parse(json_text, nullptr, false, true);
  if (j.is_discarded() || !j.is_object())
    throw Error(ErrorCode::ConfigError, "configuration is not a JSON object");
  StudyConfig c;
  try {
    for (const auto& o : overrides) apply_override(j, o);
    static const char* known[] = {"case", "method", "k", "k_star", "tau_hat", "H", "h",
                                  "graded", "gamma", "beta", "rule", "condense",
                                  "merge_interior_edges", "project_consistency_test",
                                  "g_star_mode", "seed", "output", "description"};
    for (const auto& [key, value] : j.items()) {
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) throw Error(ErrorCode::ConfigError, "unknown configuration key '" + key + "'");
    }
    if (j.contains("case")) c.case_name = j["case"].get<std::string>();
    if (j.contains("method")) c.method = parse_method(j["method"].get<std::string>());
    if (j.contains("k")) c.k = as_list<int>(j["k"]);
    if (j.contains("k_star")) c.k_star = j["k_star"].get<int>();
    if (j.contains("tau_hat")) c.tau_hat = as_list<double>(j["tau_hat"]);
    if (j.contains("H")) c.H = as_list<double>(j["H"]);
    if (j.contains("h")) c.h = as_list<double>(j["h"]);
    if (j.contains("graded")) {
      GradedSpec g;
      const json& gj = j["graded"];
      g.levels = as_list<int>(gj.at("levels"));
      if (gj.contains("H0")) g.H0 = gj["H0"].get<double>();
      if (gj.contains("corner")) {
        const auto p = gj["corner"].get<std::vector<double>>();
        if (p.size() != 2) throw Error(ErrorCode::ConfigError, "graded.corner needs two numbers");
        g.corner = Vec2(p[0], p[1]);
      }
      c.graded = g;
    }
    if (j.contains("gamma")) c.gamma = j["gamma"].get<double>();
    if (j.contains("beta")) c.beta = j["beta"].get<double>();
    if (j.contains("rule")) c.rule = j["rule"].get<std::string>();
    if (j.contains("condense")) c.condense = j["condense"].get<bool>();
    if (j.contains("merge_interior_edges"))
      c.merge_interior_edges = j["merge_interior_edges"].get<bool>();
    if (j.contains("project_consistency_test"))
      c.project_consistency_test = j["project_consistency_test"].get<bool>();
    if (j.contains("g_star_mode")) c.g_star_mode = j["g_star_mode"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned>();
    if (j.contains("output")) c.output_csv = j["output"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  validate(c);
  return c;
}

StudyConfig load_study_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_study_config(ss.str(), overrides);
}

namespace {

bool dyadic(double x) {
  if (!(x > 0.0)) return false;
  int e = 0;
  return std::frexp(x, &e) == 0.5;
}

}  // namespace

void validate(const StudyConfig& c) {
  if (c.k.empty()) throw Error(ErrorCode::ConfigError, "k list is empty");
  for (int k : c.k)
    if (k < 1 || k > 6) throw Error(ErrorCode::ConfigError, "k must lie in 1..6");
  if (c.method == Method::VemBdt) {
    if (c.tau_hat.empty()) throw Error(ErrorCode::ConfigError, "tau_hat list is empty");
    for (double t : c.tau_hat)
      if (!dyadic(t) || t > 1.0) throw Error(ErrorCode::ConfigError, "tau_hat must be 1/2^n");
    if (c.graded) {
      if (c.graded->levels.empty()) throw Error(ErrorCode::ConfigError, "graded levels empty");
      for (int l : c.graded->levels)
        if (l < 1) throw Error(ErrorCode::ConfigError, "graded levels must be >= 1");
      if (!dyadic(c.graded->H0)) throw Error(ErrorCode::ConfigError, "graded H0 must be dyadic");
    } else {
      if (c.H.empty()) throw Error(ErrorCode::ConfigError, "H list is empty");
      for (double H : c.H)
        if (!dyadic(H)) throw Error(ErrorCode::ConfigError, "H values must be 1/2^n");
    }
  } else {
    if (c.h.empty()) throw Error(ErrorCode::ConfigError, "h list is empty");
    for (double h : c.h)
      if (!(h > 0.0)) throw Error(ErrorCode::ConfigError, "h values must be positive");
    for (int k : c.k)
      if (k > 3) throw Error(ErrorCode::ConfigError, "FEM baseline supports k = 1..3");
  }
  parse_rule(c.rule);
  if (c.beta < 0.0) throw Error(ErrorCode::ConfigError, "beta must be >= 0");
  if (c.g_star_mode != "projected" && c.g_star_mode != "trace")
    throw Error(ErrorCode::ConfigError, "g_star_mode must be projected or trace");
}

}  // namespace pixvem
