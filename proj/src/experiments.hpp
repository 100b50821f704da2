#pragma once

// Experiment drivers behind the gridgas subcommands. Each returns a JSON report and,
// for sample streams, CSV text. Both carry the schema version.

#include <string>

#include "config.hpp"

namespace gg {

struct Artifact {
  nlohmann::ordered_json report;
  std::string csv;  // empty when the experiment has no sample stream
  bool pass = true;  // false: a statistical check in the report failed
};

// Defaults applied when neither the config nor the caller sets a value.
struct Defaults {
  static constexpr uint64_t seed = 7;
  static constexpr double samples = 1e5;
  static constexpr double rho = 0.02;
  static constexpr double scene_xi_max = 1e4;
  static constexpr double flight_xi_max = 1e6;
  static constexpr double events = 1000;
  static constexpr double trajectories = 100;
};

int resolve_workers(const RunSettings& r);

Artifact run_analyze(const Presentation& p, const RunSettings& r);
Artifact run_simulate(const Presentation& p, const RunSettings& r);
Artifact run_limit_tail(const Presentation& p, const RunSettings& r);
Artifact run_flight(const Presentation& p, const RunSettings& r);
Artifact run_siegel_check(const Presentation& p, const RunSettings& r);
Artifact run_compare(const Presentation& p, const RunSettings& r);

// Column documentation used by --help.
extern const char* const kSimulateColumns;
extern const char* const kTailColumns;
extern const char* const kFlightColumns;

std::string csv_header(const char* columns);

}  // namespace gg
