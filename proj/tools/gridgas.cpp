// gridgas command line front end. Talks to the library only through the C API.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridgas/gridgas.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

enum Exit { kPass = 0, kCheckFailed = 2, kConfigError = 3, kNumericError = 4 };

struct Globals {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  std::string out;
  bool json_logs = false;
};

class Log {
 public:
  explicit Log(bool as_json) : json_(as_json) {}
  void write(const char* level, const std::string& msg, const json& extra = json::object()) const {
    if (json_) {
      json line = extra;
      line["level"] = level;
      line["msg"] = msg;
      std::cerr << line.dump() << "\n";
    } else {
      std::cerr << "gridgas: " << level << ": " << msg << "\n";
    }
  }

 private:
  bool json_;
};

// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::string& path, const std::string& data) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

int exit_code(gg_status s) {
  switch (s) {
    case GG_OK:
      return kPass;
    case GG_CHECK_FAILED:
      return kCheckFailed;
    case GG_CONFIG_ERROR:
    case GG_INVALID_ARGUMENT:
      return kConfigError;
    default:
      return kNumericError;
  }
}

struct Owned {
  char* p = nullptr;
  ~Owned() { gg_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

const char* kSimulateHelp =
    "CSV columns (after the '# gridgas-schema N' line):\n"
    "  xi        rescaled free path length rho*(length)\n"
    "  mark_j    class index of the scatterer hit (-1 if censored)\n"
    "  mark_i    member index within the class (-1 if censored)\n"
    "  impact_w  signed impact parameter in (-1, 1)\n"
    "  censored  1 if no scatterer was met within xi_max\n"
    "The JSON report goes to stdout when --out is given, otherwise to stderr.";

const char* kTailHelp =
    "CSV columns (after the '# gridgas-schema N' line):\n"
    "  xi      grid point\n"
    "  F_raw   fraction of sampled configurations with an empty cylinder (0, xi) x (-1, 1)\n"
    "  F_iso   nonincreasing (isotonic) fit of F_raw\n"
    "  stderr  binomial standard error of F_raw\n"
    "  n       number of sampled configurations\n"
    "Marks refer to the admissible presentation printed by 'gridgas analyze'.";

const char* kFlightHelp =
    "CSV columns (after the '# gridgas-schema N' line):\n"
    "  traj_id   trajectory index\n"
    "  step      collision index, starting at 1\n"
    "  xi        free path length before this collision\n"
    "  mark_j    class of the scatterer hit (-1 if censored)\n"
    "  mark_i    member within the class (-1 if censored)\n"
    "  w         impact parameter in (-1, 1)\n"
    "  vx, vy    velocity after the collision\n"
    "  qx, qy    collision position Q_step (Q_0 = origin, initial velocity (1, 0))\n"
    "  censored  1 if the path exceeded xi_max; the trajectory stops there\n"
    "Marks refer to the admissible presentation printed by 'gridgas analyze'.";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridgas: Lorentz gas experiments for finite unions of Euclidean grids"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(gg_version()));
  app.footer(
      "Exit codes: 0 pass, 2 a statistical check failed, 3 configuration or usage error,\n"
      "4 numerical failure (including the component orbit cap).\n"
      "Every JSON output carries \"schema\"; every CSV starts with '# gridgas-schema N'.");

  Globals g;
  app.add_option("--config", g.config, "Configuration file (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Random seed (outputs are identical for equal seeds)");
  app.add_option("--workers", g.workers, "Worker threads (default: hardware concurrency)")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file, written atomically");
  app.add_flag("--json-logs", g.json_logs, "Log to stderr as one JSON object per line");

  json opts = json::object();
  std::optional<double> rho, samples, xi_max, shift, events, trajectories;
  std::optional<std::string> start, mode, xi;
  std::vector<int> psi;
  std::vector<double> start_point, region, xi_points;
  std::optional<int> scope;
  bool merged = false;

  auto* analyze = app.add_subcommand("analyze", "Classes, admissibility, subspaces, component counts, densities");
  analyze->footer("Writes a JSON report.");

  auto* simulate = app.add_subcommand("simulate", "Free path lengths of the finite-radius Lorentz gas");
  simulate->add_option("--rho", rho, "Scatterer radius")->check(CLI::PositiveNumber);
  simulate->add_option("--samples", samples, "Number of samples");
  simulate->add_option("--xi-max", xi_max, "Censoring bound on the rescaled path length");
  simulate->add_option("--start", start, "Start: cell, fixed or mark")->check(CLI::IsMember({"cell", "fixed", "mark"}));
  simulate->add_option("--start-point", start_point, "Fixed start x,y")->delimiter(',')->expected(2);
  simulate->add_option("--psi", psi, "Mark j,i for --start mark")->delimiter(',')->expected(2);
  simulate->footer(kSimulateHelp);

  auto* tail = app.add_subcommand("limit-tail", "Limiting free path tail on the homogeneous space");
  tail->add_option("--mode", mode, "generic, mark or mark_averaged")
      ->check(CLI::IsMember({"generic", "mark", "mark_averaged"}));
  tail->add_option("--xi", xi, "Grid lo:hi:log, lo:hi:lin or lo:hi:n:log");
  tail->add_option("--samples", samples, "Number of sampled configurations");
  tail->add_option("--psi", psi, "Mark j,i (mark mode)")->delimiter(',')->expected(2);
  tail->add_option("--shift", shift, "Cylinder shift w' in (-1, 1) (mark mode)");
  tail->add_option("--scope", scope, "Restrict to one class");
  tail->footer(kTailHelp);

  auto* flight = app.add_subcommand("flight", "Trajectories of the limiting random flight");
  flight->add_option("--events", events, "Collisions per trajectory");
  flight->add_option("--trajectories", trajectories, "Number of trajectories");
  flight->add_option("--xi-max", xi_max, "Censoring bound per free path");
  flight->add_flag("--merged", merged, "Use per-class merged transitions");
  flight->footer(kFlightHelp);

  auto* siegel = app.add_subcommand("siegel-check", "Mean point count in a box against the Siegel formula");
  siegel->add_option("--psi", psi, "Mark j,i whose points are counted")->delimiter(',')->expected(2);
  siegel->add_option("--mode", mode, "generic or mark")->check(CLI::IsMember({"generic", "mark"}));
  siegel->add_option("--region", region, "Box x0,x1,y0,y1")->delimiter(',')->expected(4);
  siegel->add_option("--samples", samples, "Number of sampled configurations");
  siegel->footer("Writes a JSON report; exit code 2 if the mean misses the prediction by more than 3 stderr.");

  auto* compare = app.add_subcommand("compare", "Scene ECDF against the homogeneous-space tail and product formula");
  compare->add_option("--rho", rho, "Scatterer radius")->check(CLI::PositiveNumber);
  compare->add_option("--samples", samples, "Samples per estimate");
  compare->add_option("--xi-points", xi_points, "Comparison points (default 0.5,1,2,4)")->delimiter(',');
  compare->footer("Writes a JSON report; exit code 2 if any row fails.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  Log log(g.json_logs);
  if (g.seed) opts["seed"] = *g.seed;
  if (g.workers) opts["workers"] = *g.workers;
  if (rho) opts["rho"] = *rho;
  if (samples) opts["samples"] = *samples;
  if (xi_max) opts["xi_max"] = *xi_max;
  if (shift) opts["shift"] = *shift;
  if (events) opts["events"] = *events;
  if (trajectories) opts["trajectories"] = *trajectories;
  if (start) opts["start"] = *start;
  if (mode) opts["mode"] = *mode;
  if (xi) opts["xi"] = *xi;
  if (scope) opts["scope"] = *scope;
  if (merged) opts["merged"] = true;
  if (!psi.empty()) opts["psi"] = psi;
  if (!start_point.empty()) opts["start_point"] = start_point;
  if (!region.empty()) opts["region"] = json::array({{region[0], region[1]}, {region[2], region[3]}});
  if (!xi_points.empty()) opts["compare_xi"] = xi_points;

  gg_model* model = nullptr;
  gg_status st = gg_model_load_file(g.config.c_str(), &model);
  if (st != GG_OK) {
    log.write("error", gg_last_error(), {{"stage", "config"}});
    return exit_code(st);
  }

  std::string command = app.get_subcommands().front()->get_name();
  std::string options = opts.dump();
  Owned report, csv;
  auto t0 = std::chrono::steady_clock::now();
  log.write("info", "running " + command, {{"command", command}, {"options", opts}});
  if (command == "analyze") st = gg_analyze(model, options.c_str(), &report.p);
  else if (command == "simulate") st = gg_simulate(model, options.c_str(), &report.p, &csv.p);
  else if (command == "limit-tail") st = gg_limit_tail(model, options.c_str(), &report.p, &csv.p);
  else if (command == "flight") st = gg_flight(model, options.c_str(), &report.p, &csv.p);
  else if (command == "siegel-check") st = gg_siegel_check(model, options.c_str(), &report.p);
  else st = gg_compare(model, options.c_str(), &report.p);
  gg_model_free(model);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (st != GG_OK && st != GG_CHECK_FAILED) {
    log.write("error", gg_last_error(), {{"command", command}});
    return exit_code(st);
  }
  try {
    bool has_csv = csv.p != nullptr;
    if (has_csv) {
      if (!g.out.empty()) {
        write_atomic(g.out, csv.str());
        std::cout << report.str();
      } else {
        std::cout << csv.str();
        std::cerr << report.str();
      }
    } else if (!g.out.empty()) {
      write_atomic(g.out, report.str());
    } else {
      std::cout << report.str();
    }
  } catch (const std::exception& e) {
    log.write("error", e.what(), {{"command", command}});
    return kNumericError;
  }
  log.write(st == GG_OK ? "info" : "warning", st == GG_OK ? "done" : "check failed",
            {{"command", command}, {"seconds", secs}, {"exit", exit_code(st)}});
  return exit_code(st);
}
