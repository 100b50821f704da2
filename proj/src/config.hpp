#pragma once

// Experiment configuration files (JSON) and presentation (de)serialization.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridalg.hpp"
#include "json.hpp"

namespace gg {

inline constexpr int kSchemaVersion = 1;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct XiGrid {
  double lo = 0.25, hi = 64;
  int n = 0;  // 0: 16 points per decade (log) or 33 (lin)
  bool log = true;
  std::vector<double> points() const;
};
// "lo:hi:log", "lo:hi:lin", "lo:hi:n:log"
XiGrid parse_xi_grid(const std::string& s);

struct RunSettings {
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  std::optional<double> samples;
  std::vector<double> rho;
  std::optional<XiGrid> xi;
  std::optional<double> xi_max;
  std::optional<std::string> mode;  // generic | mark | mark_averaged
  std::optional<Mark> psi;
  std::optional<double> shift;
  std::optional<double> events, trajectories;
  std::optional<std::vector<std::pair<double, double>>> region;
  std::optional<std::string> start;  // cell | fixed | mark
  std::optional<std::vector<double>> start_point;
  std::vector<double> directions;  // piecewise-constant density table on [0, 2 pi)
  std::optional<size_t> orbit_cap;
  std::optional<int> scope;  // limit-tail: restrict to one class
  std::optional<bool> merged;  // flight: per-class merged transitions
  std::vector<double> compare_xi;
};

struct ExperimentConfig {
  Presentation presentation;  // canonical
  RunSettings run;
};

// Parses the text of a configuration file. Errors carry "line N: ..." prefixes.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig parse_config(const std::string& path);
// A bare "run" object, as used for per-call option overrides.
RunSettings parse_run_text(const std::string& text, const std::string& origin = "<options>");
// Fields set in `over` replace those in `base`.
RunSettings merge_run(const RunSettings& base, const RunSettings& over);

nlohmann::ordered_json num_to_json(const Num& x);
nlohmann::ordered_json field_to_json(const FieldPtr& f);
nlohmann::ordered_json presentation_to_json(const Presentation& p);
std::string format_double(double x);

}  // namespace gg
