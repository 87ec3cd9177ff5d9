#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "podns/augment.hpp"
#include "podns/types.hpp"

namespace podns {

// Flat ASCII run configuration: `key = value` lines, '#' comments, lists
// comma-separated, point components whitespace-separated inside a list
// entry.  Grids are given as per-dimension counts over the parameter box.
struct RunConfig {
  std::string problem;  // cylinder_jets | lid_cavity
  int mesh_level = 0;
  std::vector<Vector> train_params;
  std::vector<Index> train_grid;  // alternative to explicit points
  std::vector<Vector> test_params;
  Real eps_u = 1e-3;
  Real eps_p = 0.25;
  AugmentStrategy strategy = AugmentStrategy::none;
  std::vector<Real> alphas = default_alphas();
  Real positivity_shift_floor = 1.0;
  Index local_k = 0;  // 0 disables local basis selection
  std::string output_dir = "out";
  long seed = 0;

  AugmentConfig augment_config() const {
    return {strategy, alphas, positivity_shift_floor};
  }
};

inline std::string strategy_name(AugmentStrategy s) {
  switch (s) {
    case AugmentStrategy::none: return "none";
    case AugmentStrategy::solenoidal: return "solenoidal";
    case AugmentStrategy::solenoidal_oseen: return "solenoidal_oseen";
    case AugmentStrategy::linear_oseen: return "linear_oseen";
  }
  return "none";
}

inline AugmentStrategy strategy_from_name(const std::string& name) {
  if (name == "none") return AugmentStrategy::none;
  if (name == "solenoidal") return AugmentStrategy::solenoidal;
  if (name == "solenoidal_oseen") return AugmentStrategy::solenoidal_oseen;
  if (name == "linear_oseen") return AugmentStrategy::linear_oseen;
  throw ConfigError("unknown strategy: " + name);
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

inline Real parse_real(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const Real v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "' for key " + key);
  }
}

inline std::vector<Vector> parse_points(const std::string& s,
                                        const std::string& key) {
  std::vector<Vector> out;
  for (const auto& entry : split(s, ',')) {
    if (entry.empty()) continue;
    std::stringstream ss(entry);
    std::vector<Real> comps;
    std::string tok;
    while (ss >> tok) comps.push_back(parse_real(tok, key));
    if (comps.empty()) throw ConfigError("empty point in " + key);
    Vector p(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) p[i] = comps[i];
    out.push_back(p);
  }
  return out;
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
  }

  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::pair{false, std::string()};
    auto value = std::pair{true, it->second};
    kv.erase(it);
    return value;
  };

  if (auto [ok, v] = take("problem"); ok) cfg.problem = v;
  if (auto [ok, v] = take("mesh_level"); ok)
    cfg.mesh_level = static_cast<int>(detail::parse_real(v, "mesh_level"));
  if (auto [ok, v] = take("train_params"); ok)
    cfg.train_params = detail::parse_points(v, "train_params");
  if (auto [ok, v] = take("train_grid"); ok)
    for (const Real g : [&] {
           std::vector<Real> out;
           for (const auto& t : detail::split(v, ','))
             out.push_back(detail::parse_real(t, "train_grid"));
           return out;
         }())
      cfg.train_grid.push_back(static_cast<Index>(g));
  if (auto [ok, v] = take("test_params"); ok)
    cfg.test_params = detail::parse_points(v, "test_params");
  if (auto [ok, v] = take("eps_u"); ok) cfg.eps_u = detail::parse_real(v, "eps_u");
  if (auto [ok, v] = take("eps_p"); ok) cfg.eps_p = detail::parse_real(v, "eps_p");
  if (auto [ok, v] = take("strategy"); ok) cfg.strategy = strategy_from_name(v);
  if (auto [ok, v] = take("alphas"); ok) {
    cfg.alphas.clear();
    for (const auto& t : detail::split(v, ','))
      if (!t.empty()) cfg.alphas.push_back(detail::parse_real(t, "alphas"));
  }
  if (auto [ok, v] = take("positivity_shift_floor"); ok)
    cfg.positivity_shift_floor = detail::parse_real(v, "positivity_shift_floor");
  if (auto [ok, v] = take("local_k"); ok)
    cfg.local_k = static_cast<Index>(detail::parse_real(v, "local_k"));
  if (auto [ok, v] = take("output_dir"); ok) cfg.output_dir = v;
  if (auto [ok, v] = take("seed"); ok)
    cfg.seed = static_cast<long>(detail::parse_real(v, "seed"));

  if (!kv.empty()) throw ConfigError("unknown config key: " + kv.begin()->first);
  if (cfg.problem.empty()) throw ConfigError("missing config key: problem");
  if (!(cfg.eps_u > 0 && cfg.eps_u < 1) || !(cfg.eps_p > 0 && cfg.eps_p < 1))
    throw ConfigError("truncation tolerances must lie in (0,1)");
  if (cfg.eps_u >= cfg.eps_p)
    std::cerr << "warning: eps_u >= eps_p; the velocity basis should be "
                 "richer than the pressure basis\n";
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

// Uniform tensor grid over the parameter box.
inline std::vector<Vector> grid_points(
    const std::vector<Index>& counts,
    const std::vector<std::array<Real, 2>>& box) {
  if (counts.size() != box.size())
    throw ConfigError("train_grid dimension does not match the problem");
  std::vector<Vector> out;
  std::vector<Index> cursor(counts.size(), 0);
  while (true) {
    Vector p(counts.size());
    for (std::size_t d = 0; d < counts.size(); ++d) {
      if (counts[d] < 2)
        p[d] = 0.5 * (box[d][0] + box[d][1]);
      else
        p[d] = box[d][0] + (box[d][1] - box[d][0]) *
                               static_cast<Real>(cursor[d]) / (counts[d] - 1);
    }
    out.push_back(p);
    std::size_t d = 0;
    for (; d < counts.size(); ++d) {
      if (++cursor[d] < counts[d]) break;
      cursor[d] = 0;
    }
    if (d == counts.size()) break;
  }
  return out;
}

}  // namespace podns
