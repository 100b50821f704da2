#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "flight.hpp"
#include "homspace.hpp"
#include "parallel.hpp"
#include "scene.hpp"
#include "stats.hpp"

namespace gg {

using ojson = nlohmann::ordered_json;

const char* const kSimulateColumns = "xi,mark_j,mark_i,impact_w,censored";
const char* const kTailColumns = "xi,F_raw,F_iso,stderr,n";
const char* const kFlightColumns = "traj_id,step,xi,mark_j,mark_i,w,vx,vy,qx,qy,censored";

std::string csv_header(const char* columns) {
  return "# gridgas-schema " + std::to_string(kSchemaVersion) + "\n" + columns + "\n";
}

int resolve_workers(const RunSettings& r) {
  if (r.workers) return std::max(1, *r.workers);
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

namespace {

ojson stamp(const char* kind) { return {{"schema", kSchemaVersion}, {"kind", kind}}; }

uint64_t seed_of(const RunSettings& r) { return r.seed.value_or(Defaults::seed); }
size_t samples_of(const RunSettings& r) { return static_cast<size_t>(r.samples.value_or(Defaults::samples)); }
size_t cap_of(const RunSettings& r) { return r.orbit_cap.value_or(10000); }

Presentation admissible_of(const Presentation& p) {
  return is_admissible(p).admissible ? p : make_admissible(p);
}

void require_mark(const Presentation& p, const Mark& m, const char* what) {
  if (m.j < 0 || m.j >= p.N() || m.i < 0 || m.i >= p.r(m.j))
    throw ConfigError(std::string(what) + ": no mark [" + std::to_string(m.j) + ", " + std::to_string(m.i) +
                      "] in the presentation");
}

void require_planar(const Presentation& p, const char* what) {
  if (p.dim != 2) throw ConfigError(std::string(what) + " supports dim 2 only");
}

ojson basis_json(const RationalSubspace& L) {
  ojson rows = ojson::array();
  for (const auto& row : L.basis()) {
    ojson r = ojson::array();
    for (const auto& z : row) r.push_back(z.get_str());
    rows.push_back(r);
  }
  return rows;
}

ojson mark_json(const Mark& m) { return ojson::array({m.j, m.i}); }

std::vector<double> xi_points(const RunSettings& r) { return r.xi.value_or(XiGrid{}).points(); }

double tail_at(const std::vector<double>& sorted, double xi) {
  auto below = std::lower_bound(sorted.begin(), sorted.end(), xi) - sorted.begin();
  return static_cast<double>(sorted.size() - static_cast<size_t>(below)) / static_cast<double>(sorted.size());
}

}  // namespace

Artifact run_analyze(const Presentation& p, const RunSettings& r) {
  Artifact a;
  auto verdict = is_admissible(p);
  Presentation pa = verdict.admissible ? p : make_admissible(p);
  ojson& o = a.report;
  o = stamp("analyze");
  o["N"] = p.N();
  ojson rs = ojson::array();
  for (int j = 0; j < p.N(); ++j) rs.push_back(p.r(j));
  o["r"] = rs;
  o["admissible"] = verdict.admissible;
  ojson failing = ojson::array();
  for (const auto& m : verdict.failing) failing.push_back(mark_json(m));
  o["failing_marks"] = failing;
  o["presentation"] = presentation_to_json(p);
  o["admissible_presentation"] = verdict.admissible ? ojson(nullptr) : presentation_to_json(pa);
  o["overlap_marking"] = "lowest mark index";
  o["total_density"] = pa.total_density();

  ojson classes = ojson::array();
  for (int j = 0; j < pa.N(); ++j) {
    ojson c;
    c["class"] = j;
    c["r"] = pa.r(j);
    c["L"] = basis_json(subspace_Lj(pa, j));
    if (pa.dim <= 3) c["generic_components"] = torus_data(pa, j, std::nullopt, std::nullopt, cap_of(r)).reps.size();
    ojson members = ojson::array();
    for (int i = 0; i < pa.r(j); ++i) {
      Mark m{j, i};
      ojson e;
      e["mark"] = mark_json(m);
      e["density"] = num_to_json(pa.density_exact(m));
      e["density_value"] = pa.density(m);
      e["weight"] = pa.weight(m);
      if (pa.dim <= 3) e["components"] = torus_data(pa, j, m, std::nullopt, cap_of(r)).reps.size();
      ojson Ls = ojson::array();
      for (int k = 0; k < pa.N(); ++k) Ls.push_back({{"class", k}, {"basis", basis_json(subspace_Lpsi(pa, m, k))}});
      e["L_psi"] = Ls;
      members.push_back(e);
    }
    c["members"] = members;
    classes.push_back(c);
  }
  o["classes"] = classes;
  return a;
}

Artifact run_simulate(const Presentation& p, const RunSettings& r) {
  require_planar(p, "simulate");
  if (r.rho.size() > 1) throw ConfigError("simulate takes a single rho");
  double rho = r.rho.empty() ? Defaults::rho : r.rho[0];
  Scene scene(p);
  PathOptions opt;
  opt.xi_max = r.xi_max.value_or(Defaults::scene_xi_max);
  opt.law.weights = r.directions;
  std::string start = r.start.value_or("cell");
  if (start == "fixed") {
    if (!r.start_point) throw ConfigError("start \"fixed\" needs start_point");
    opt.start = PathOptions::fixed;
    opt.q = *r.start_point;
  } else if (start == "mark") {
    opt.start = PathOptions::at_mark;
    opt.psi = r.psi.value_or(Mark{0, 0});
    require_mark(p, opt.psi, "psi");
  }
  size_t n = samples_of(r);
  auto run = sample_path_lengths(scene, rho, n, opt, seed_of(r), resolve_workers(r));

  std::string out = csv_header(kSimulateColumns);
  size_t censored = 0;
  std::vector<double> xs;
  for (const auto& s : run.samples) {
    censored += s.censored;
    xs.push_back(s.xi);
    out += format_double(s.xi) + "," + std::to_string(s.censored ? -1 : s.mark.j) + "," +
           std::to_string(s.censored ? -1 : s.mark.i) + "," + format_double(s.w) + "," + (s.censored ? "1" : "0") +
           "\n";
  }
  Artifact a;
  a.csv = std::move(out);
  ojson& o = a.report;
  o = stamp("simulate");
  o["rho"] = rho;
  o["samples"] = n;
  o["seed"] = seed_of(r);
  o["start"] = start;
  o["xi_max"] = opt.xi_max;
  o["censored"] = censored;
  o["overlaps_resampled"] = run.overlaps_resampled;
  o["mean_xi"] = mean(xs);
  return a;
}

Artifact run_limit_tail(const Presentation& p, const RunSettings& r) {
  require_planar(p, "limit-tail");
  Presentation pa = admissible_of(p);
  int scope = r.scope.value_or(-1);
  if (scope >= pa.N()) throw ConfigError("scope: no such class");
  Presentation ps = scope >= 0 ? pa.restrict_to_class(scope) : pa;
  TailMode mode;
  std::string m = r.mode.value_or("generic");
  if (m == "mark") {
    mode.kind = TailMode::mark;
    Mark psi = r.psi.value_or(Mark{0, 0});
    require_mark(pa, psi, "psi");
    if (scope >= 0) {
      if (psi.j != scope) throw ConfigError("psi must belong to the scoped class");
      psi.j = 0;
    }
    mode.psi = psi;
    mode.shift = r.shift.value_or(0);
  } else if (m == "mark_averaged") {
    mode.kind = TailMode::mark_averaged;
  }
  ConfigSampler s(ps, cap_of(r));
  auto grid = xi_points(r);
  size_t n = samples_of(r);
  auto t = tail_estimate(s, mode, grid, n, seed_of(r), resolve_workers(r), scope);

  Artifact a;
  a.csv = csv_header(kTailColumns);
  for (size_t k = 0; k < t.xi.size(); ++k)
    a.csv += format_double(t.xi[k]) + "," + format_double(t.F_raw[k]) + "," + format_double(t.F_iso[k]) + "," +
             format_double(t.stderr_[k]) + "," + std::to_string(t.n) + "\n";
  ojson& o = a.report;
  o = stamp("limit-tail");
  o["mode"] = m;
  o["scope"] = scope;
  o["samples"] = n;
  o["seed"] = seed_of(r);
  o["censored"] = t.censored;
  try {
    auto fit = loglog_slope(t.xi, t.F_iso, t.stderr_, grid.front(), grid.back());
    o["slope"] = {{"value", fit.slope}, {"stderr", fit.stderr_slope}, {"points", fit.points}};
  } catch (const StatError& e) {
    o["slope"] = nullptr;
  }
  return a;
}

Artifact run_flight(const Presentation& p, const RunSettings& r) {
  require_planar(p, "flight");
  Presentation pa = admissible_of(p);
  ConfigSampler s(pa, cap_of(r));
  bool merged = r.merged.value_or(false);
  std::optional<MergedSampler> ms;
  if (merged) ms.emplace(pa, cap_of(r));
  size_t n_traj = static_cast<size_t>(r.trajectories.value_or(Defaults::trajectories));
  size_t n_ev = static_cast<size_t>(r.events.value_or(Defaults::events));
  double xi_max = r.xi_max.value_or(Defaults::flight_xi_max);
  uint64_t seed = seed_of(r);

  std::vector<std::string> rows(n_traj);
  std::vector<size_t> events(n_traj);
  std::vector<char> censored(n_traj);
  std::vector<double> sum_xi(n_traj);
  parallel_for(n_traj, resolve_workers(r), [&](size_t t) {
    Philox rng(seed, t, 4);
    FlightRun run;
    if (!merged) {
      run = gg::run_flight(s, n_ev, rng, xi_max);
    } else {
      run.Q.push_back({0, 0});
      Vec2 V{1, 0};
      for (size_t k = 0; k < n_ev; ++k) {
        FlightEvent e = k == 0 ? sample_initial(s, rng, xi_max, V)
                               : ms->transition(run.events.back().psi, exit_parameter(V, run.events.back().w), rng,
                                                xi_max, V);
        const Vec2& Qp = run.Q.back();
        run.Q.push_back({Qp[0] + e.xi * V[0], Qp[1] + e.xi * V[1]});
        run.events.push_back(e);
        if (e.censored) {
          run.censored = true;
          break;
        }
        V = e.V;
      }
    }
    std::string& out = rows[t];
    for (size_t k = 0; k < run.events.size(); ++k) {
      const auto& e = run.events[k];
      out += std::to_string(t) + "," + std::to_string(k + 1) + "," + format_double(e.xi) + "," +
             std::to_string(e.censored ? -1 : e.psi.j) + "," + std::to_string(e.censored ? -1 : e.psi.i) + "," +
             format_double(e.w) + "," + format_double(e.V[0]) + "," + format_double(e.V[1]) + "," +
             format_double(run.Q[k + 1][0]) + "," + format_double(run.Q[k + 1][1]) + "," +
             (e.censored ? "1" : "0") + "\n";
      if (!e.censored) sum_xi[t] += e.xi;
    }
    events[t] = run.events.size();
    censored[t] = run.censored;
  });

  Artifact a;
  a.csv = csv_header(kFlightColumns);
  size_t total = 0, n_cens = 0;
  double sx = 0;
  for (size_t t = 0; t < n_traj; ++t) {
    a.csv += rows[t];
    total += events[t];
    n_cens += censored[t];
    sx += sum_xi[t];
  }
  ojson& o = a.report;
  o = stamp("flight");
  o["trajectories"] = n_traj;
  o["events_per_trajectory"] = n_ev;
  o["events"] = total;
  o["censored_trajectories"] = n_cens;
  o["merged"] = merged;
  o["xi_max"] = xi_max;
  o["seed"] = seed;
  o["mean_xi"] = total > n_cens ? sx / static_cast<double>(total - n_cens) : 0.0;
  return a;
}

Artifact run_siegel_check(const Presentation& p, const RunSettings& r) {
  require_planar(p, "siegel-check");
  Presentation pa = admissible_of(p);
  ConfigSampler s(pa, cap_of(r));
  Mark psi = r.psi.value_or(Mark{0, 0});
  require_mark(pa, psi, "psi");
  std::string m = r.mode.value_or("generic");
  if (m == "mark_averaged") throw ConfigError("siegel-check takes mode generic or mark");
  std::optional<Mark> mode_mark;
  if (m == "mark") mode_mark = psi;
  auto box = r.region.value_or(std::vector<std::pair<double, double>>{{2, 5}, {1, 3}});
  Rect R{box[0].first, box[0].second, box[1].first, box[1].second};
  size_t n = samples_of(r);
  auto res = siegel_check(s, psi, mode_mark, R, n, seed_of(r), resolve_workers(r));
  double tol = 3 * res.stderr_ + 1e-12;

  Artifact a;
  a.pass = std::abs(res.mean - res.predicted) <= tol;
  ojson& o = a.report;
  o = stamp("siegel-check");
  o["mark"] = mark_json(psi);
  o["mode"] = m;
  o["region"] = {{R.x0, R.x1}, {R.y0, R.y1}};
  o["samples"] = n;
  o["seed"] = seed_of(r);
  o["mean"] = res.mean;
  o["stderr"] = res.stderr_;
  o["predicted"] = res.predicted;
  o["atom_exact"] = res.atom_exact;
  o["atom_mc"] = res.atom_mc;
  o["pass"] = a.pass;
  return a;
}

Artifact run_compare(const Presentation& p, const RunSettings& r) {
  require_planar(p, "compare");
  if (r.rho.size() > 1) throw ConfigError("compare takes a single rho");
  double rho = r.rho.empty() ? Defaults::rho : r.rho[0];
  size_t n = samples_of(r);
  uint64_t seed = seed_of(r);
  int workers = resolve_workers(r);
  std::vector<double> pts = r.compare_xi.empty() ? std::vector<double>{0.5, 1, 2, 4} : r.compare_xi;

  Scene scene(p);
  PathOptions opt;
  opt.xi_max = r.xi_max.value_or(Defaults::scene_xi_max);
  opt.law.weights = r.directions;
  auto run = sample_path_lengths(scene, rho, n, opt, seed, workers);
  std::vector<double> xs;
  for (const auto& s : run.samples) xs.push_back(s.xi);
  std::sort(xs.begin(), xs.end());

  Presentation pa = admissible_of(p);
  ConfigSampler hs(pa, cap_of(r));
  auto whole = tail_estimate(hs, {}, pts, n, seed, workers);
  std::optional<TailEstimate> prod;
  if (pa.N() > 1) {
    std::vector<TailEstimate> per;
    for (int j = 0; j < pa.N(); ++j) {
      ConfigSampler cs(pa.restrict_to_class(j), cap_of(r));
      per.push_back(tail_estimate(cs, {}, pts, n, seed + 1000003ULL * static_cast<uint64_t>(j + 1), workers, j));
    }
    prod = product_tail(per);
  }

  Artifact a;
  ojson rows = ojson::array();
  for (size_t k = 0; k < pts.size(); ++k) {
    double Fs = tail_at(xs, pts[k]);
    double ses = std::sqrt(Fs * (1 - Fs) / static_cast<double>(n));
    double Fh = whole.F_raw[k], seh = whole.stderr_[k];
    double tol = 3 * std::hypot(ses, seh) + 0.01;
    bool ok = std::abs(Fs - Fh) <= tol;
    ojson row{{"xi", pts[k]}, {"F_scene", Fs}, {"stderr_scene", ses}, {"F_homspace", Fh}, {"stderr_homspace", seh},
              {"threshold", tol}, {"pass", ok}};
    if (prod) {
      double Fp = prod->F_raw[k], sep = prod->stderr_[k];
      double tp = 3 * std::hypot(sep, seh);
      bool okp = std::abs(Fp - Fh) <= tp;
      row["F_product"] = Fp;
      row["stderr_product"] = sep;
      row["product_threshold"] = tp;
      row["product_pass"] = okp;
      ok = ok && okp;
    }
    a.pass = a.pass && ok;
    rows.push_back(row);
  }
  ojson& o = a.report;
  o = stamp("compare");
  o["rho"] = rho;
  o["samples"] = n;
  o["seed"] = seed;
  o["overlaps_resampled"] = run.overlaps_resampled;
  o["rows"] = rows;
  o["pass"] = a.pass;
  return a;
}

}  // namespace gg
