#include "homspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "stats.hpp"

namespace gg {

Mat2 haar_sl2(Philox& rng) {
  double x, y;
  do {
    x = rng.uniform() - 0.5;
    y = (std::sqrt(3.0) / 2) / (1 - rng.uniform());
  } while (x * x + y * y < 1);
  double th = 2 * M_PI * rng.uniform();
  double s = 1 / std::sqrt(y), ct = std::cos(th), st = std::sin(th);
  Mat2 b{{{s, 0}, {s * x, s * y}}};
  Mat2 rot{{{ct, st}, {-st, ct}}};
  return mul2(b, rot);
}

TorusSampler::TorusSampler(const TorusComponentSet& t) : r(t.r) {
  if (t.d != 2) throw SamplingError("torus sampling is implemented for d = 2 only");
  for (const auto& R : t.reps) {
    std::vector<Vec2> rows;
    for (const auto& row : R) rows.push_back({row[0].get_d(), row[1].get_d()});
    reps.push_back(rows);
  }
  for (const auto& b : t.L.basis()) {
    std::vector<double> v;
    for (const auto& z : b) v.push_back(z.get_d());
    basis.push_back(v);
  }
  if (t.mark) zero_row = t.mark->i;
}

std::vector<Vec2> TorusSampler::sample(Philox& rng, int* component) const {
  size_t k = reps.size() == 1 ? 0 : rng.below(reps.size());
  if (component) *component = static_cast<int>(k);
  std::vector<Vec2> U = reps[k];
  for (int col = 0; col < 2; ++col) {
    for (const auto& b : basis) {
      double t = rng.uniform();
      for (int i = 0; i < r; ++i) U[i][col] += t * b[i];
    }
    for (int i = 0; i < r; ++i) U[i][col] -= std::floor(U[i][col]);
  }
  if (zero_row) U[*zero_row] = {0, 0};
  return U;
}

double TorusSampler::atom(int i) const {
  for (const auto& b : basis)
    if (b[i] != 0) return 0;
  size_t hits = 0;
  for (const auto& R : reps)
    if (R[i][0] == 0 && R[i][1] == 0) ++hits;
  return static_cast<double>(hits) / static_cast<double>(reps.size());
}

std::vector<Vec2> sample_torus(const TorusSampler& t, Philox& rng) { return t.sample(rng); }

ConfigSampler::ConfigSampler(const Presentation& p, size_t orbit_cap) : p_(p), marks_(p.marks()) {
  if (p.dim != 2) throw SamplingError("homogeneous-space sampling is implemented for d = 2 only");
  auto v = is_admissible(p);
  if (!v.admissible) throw GridError("sampling requires an admissible presentation");
  for (const auto& m : marks_) {
    dens_.push_back(p.density(m));
    c_.push_back(p.member(m).c.to_double());
  }
  total_ = p.total_density();
  for (int j = 0; j < p.N(); ++j) {
    generic_.emplace_back(torus_data(p, j, std::nullopt, std::nullopt, orbit_cap));
    std::vector<TorusSampler> per;
    for (int i = 0; i < p.r(j); ++i) per.emplace_back(torus_data(p, j, Mark{j, i}, std::nullopt, orbit_cap));
    marked_.push_back(std::move(per));
  }
}

int ConfigSampler::mark_index(const Mark& m) const {
  for (size_t k = 0; k < marks_.size(); ++k)
    if (marks_[k] == m) return static_cast<int>(k);
  throw GridError("mark index out of range");
}

const TorusSampler& ConfigSampler::torus(int j, const std::optional<Mark>& mark) const {
  if (mark && mark->j == j) return marked_.at(j).at(mark->i);
  return generic_.at(j);
}

Mark ConfigSampler::draw_mark(Philox& rng) const {
  double u = rng.uniform() * total_;
  for (size_t k = 0; k < marks_.size(); ++k) {
    u -= dens_[k];
    if (u < 0) return marks_[k];
  }
  return marks_.back();
}

RandomConfiguration ConfigSampler::sample(Philox& rng, const std::optional<Mark>& mark, bool remove_origin) const {
  RandomConfiguration conf;
  conf.marks = marks_;
  conf.grids.resize(marks_.size());
  if (mark && remove_origin) conf.removed = mark;
  size_t g = 0;
  for (int j = 0; j < p_.N(); ++j) {
    int comp = 0;
    auto U = torus(j, mark).sample(rng, &comp);
    Mat2 A = haar_sl2(rng);
    Mat2 Ar = lagrange_reduce(A);
    for (int i = 0; i < p_.r(j); ++i, ++g) {
      double c = c_[g];
      Mat2 B{{{c * Ar[0][0], c * Ar[0][1]}, {c * Ar[1][0], c * Ar[1][1]}}};
      bool origin = mark && mark->j == j && mark->i == i;
      Vec2 o{0, 0};
      if (!origin) {
        Vec2 ua = vm2(U[i], A);
        o = {c * ua[0], c * ua[1]};
      }
      conf.grids[g] = Lat2(B, o, origin && remove_origin, false);
    }
    conf.A.push_back(A);
    conf.U.push_back(std::move(U));
    conf.component.push_back(comp);
  }
  return conf;
}

RandomConfiguration random_configuration(const ConfigSampler& s, const std::optional<Mark>& mark, Philox& rng) {
  return s.sample(rng, mark);
}

int64_t count_in_cylinder(const RandomConfiguration& conf, double xi, double shift) {
  if (!(xi > 0)) return 0;
  Rect R{0, xi, shift - 1, shift + 1};
  auto in = [&](double x, double y) { return x > 0 && x < xi && y > shift - 1 && y < shift + 1; };
  int64_t n = 0;
  for (const auto& g : conf.grids) n += g.count(R, in);
  return n;
}

std::optional<StripPoint> first_in_strip(const RandomConfiguration& conf, double shift, double xmax) {
  double lo = 0;
  while (lo < xmax) {
    double hi = lo == 0 ? std::min(1.0, xmax) : std::min(2 * lo, xmax);
    bool last = hi >= xmax;
    Rect R{lo, hi, shift - 1, shift + 1};
    auto in = [&](double x, double y) {
      return x > lo && (last ? x < hi : x <= hi) && y > shift - 1 && y < shift + 1;
    };
    std::optional<StripPoint> best;
    for (size_t g = 0; g < conf.grids.size(); ++g) {
      auto p = conf.grids[g].min_x(R, in);
      if (p && (!best || (*p)[0] < best->x)) best = StripPoint{(*p)[0], (*p)[1], static_cast<int>(g)};
    }
    if (best) return best;
    lo = hi;
  }
  return std::nullopt;
}

TailEstimate tail_estimate(const ConfigSampler& s, const TailMode& mode, const std::vector<double>& xi_grid,
                           size_t n, uint64_t seed, int workers, int scope) {
  if (xi_grid.empty()) throw StatError("empty xi grid");
  for (size_t k = 1; k < xi_grid.size(); ++k)
    if (!(xi_grid[k] > xi_grid[k - 1])) throw StatError("xi grid must be increasing");
  double xmax = xi_grid.back();
  std::vector<double> first(n);
  parallel_for(n, workers, [&](size_t i) {
    Philox rng(seed, i, 1);
    RandomConfiguration conf;
    double shift = 0;
    switch (mode.kind) {
      case TailMode::generic: conf = s.sample(rng); break;
      case TailMode::mark:
        conf = s.sample(rng, mode.psi);
        shift = mode.shift;
        break;
      case TailMode::mark_averaged: {
        Mark m = s.draw_mark(rng);
        shift = rng.uniform(-1, 1);
        conf = s.sample(rng, m);
        break;
      }
    }
    auto p = first_in_strip(conf, shift, xmax);
    first[i] = p ? p->x : std::numeric_limits<double>::infinity();
  });
  TailEstimate t;
  t.xi = xi_grid;
  t.n = n;
  t.mode = mode;
  t.scope = scope;
  std::sort(first.begin(), first.end());
  for (double x : first)
    if (std::isinf(x)) ++t.censored;
  for (double xi : xi_grid) {
    size_t below = std::lower_bound(first.begin(), first.end(), xi) - first.begin();
    double F = static_cast<double>(n - below) / static_cast<double>(n);
    t.F_raw.push_back(F);
    t.stderr_.push_back(std::sqrt(std::max(F * (1 - F), 0.0) / static_cast<double>(n)));
  }
  t.F_iso = isotonic_decreasing(t.F_raw);
  return t;
}

TailEstimate product_tail(const std::vector<TailEstimate>& per_class) {
  if (per_class.empty()) throw StatError("product_tail: no estimates");
  TailEstimate out = per_class[0];
  out.scope = -1;
  for (size_t c = 1; c < per_class.size(); ++c) {
    if (per_class[c].xi != out.xi) throw StatError("product_tail: xi grids differ");
    out.n = std::min(out.n, per_class[c].n);
    out.censored = std::max(out.censored, per_class[c].censored);
  }
  for (size_t k = 0; k < out.xi.size(); ++k) {
    double F = 1, Fi = 1, var = 0;
    for (const auto& t : per_class) {
      F *= t.F_raw[k];
      Fi *= t.F_iso[k];
    }
    for (size_t c = 0; c < per_class.size(); ++c) {
      double others = 1;
      for (size_t e = 0; e < per_class.size(); ++e)
        if (e != c) others *= per_class[e].F_raw[k];
      var += others * others * per_class[c].stderr_[k] * per_class[c].stderr_[k];
    }
    out.F_raw[k] = F;
    out.F_iso[k] = Fi;
    out.stderr_[k] = std::sqrt(var);
  }
  return out;
}

PhiEstimate phi_from_tail(const TailEstimate& t, double upper_bound) {
  if (t.xi.size() < 2) throw StatError("phi_from_tail needs at least two grid points");
  PhiEstimate e;
  for (size_t k = 0; k + 1 < t.xi.size(); ++k) {
    e.mid.push_back((t.xi[k] + t.xi[k + 1]) / 2);
    double d = -(t.F_iso[k + 1] - t.F_iso[k]) / (t.xi[k + 1] - t.xi[k]);
    e.phi.push_back(std::clamp(d, 0.0, upper_bound));
  }
  return e;
}

SiegelResult siegel_check(const ConfigSampler& s, const Mark& psi, const std::optional<Mark>& mode_mark,
                          const Rect& region, size_t n, uint64_t seed, int workers) {
  int g = s.mark_index(psi);
  std::vector<double> counts(n), atoms(n);
  auto in = [&](double x, double y) { return x > region.x0 && x < region.x1 && y > region.y0 && y < region.y1; };
  parallel_for(n, workers, [&](size_t i) {
    Philox rng(seed, i, 2);
    auto conf = s.sample(rng, mode_mark, false);
    const auto& L = conf.grids[g];
    counts[i] = static_cast<double>(L.count(region, in));
    atoms[i] = (std::abs(L.offset()[0]) < 1e-9 && std::abs(L.offset()[1]) < 1e-9) ? 1.0 : 0.0;
  });
  SiegelResult r;
  r.n = n;
  r.mean = mean(counts);
  r.stderr_ = stderr_of_mean(counts);
  r.atom_mc = mean(atoms);
  r.atom_exact = s.torus(psi.j, mode_mark).atom(psi.i);
  double vol = (region.x1 - region.x0) * (region.y1 - region.y0);
  bool zero_inside = region.x0 < 0 && 0 < region.x1 && region.y0 < 0 && 0 < region.y1;
  r.predicted = s.density(g) * vol + (zero_inside ? r.atom_exact : 0.0);
  return r;
}

}  // namespace gg
