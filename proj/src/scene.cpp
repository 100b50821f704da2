#include "scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace gg {

namespace {

double dot(const VecN& a, const VecN& b) {
  double s = 0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(const VecN& a) { return std::sqrt(dot(a, a)); }

std::vector<VecN> invert(std::vector<VecN> a) {
  size_t n = a.size();
  std::vector<VecN> inv(n, VecN(n, 0));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    for (size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    double piv = a[c][c];
    if (piv == 0) throw SceneError("singular grid matrix");
    for (size_t k = 0; k < n; ++k) {
      a[c][k] /= piv;
      inv[c][k] /= piv;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      double f = a[r][c];
      if (f == 0) continue;
      for (size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

double det(std::vector<VecN> a) {
  size_t n = a.size();
  double d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    for (size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (a[p][c] == 0) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      double f = a[r][c] / a[c][c];
      for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

// Centres of grid g inside the closed box [lo, hi] (any d).
template <class F>
void centers_in_box(const SceneGrid& g, const VecN& lo, const VecN& hi, F&& f) {
  size_t d = lo.size();
  VecN nlo(d, std::numeric_limits<double>::infinity()), nhi(d, -std::numeric_limits<double>::infinity());
  for (size_t corner = 0; corner < (size_t(1) << d); ++corner) {
    VecN p(d);
    for (size_t k = 0; k < d; ++k) p[k] = ((corner >> k) & 1 ? hi[k] : lo[k]) - g.o[k];
    for (size_t k = 0; k < d; ++k) {
      double v = 0;
      for (size_t l = 0; l < d; ++l) v += p[l] * g.Bi[l][k];
      nlo[k] = std::min(nlo[k], v);
      nhi[k] = std::max(nhi[k], v);
    }
  }
  std::vector<double> n(d);
  for (size_t k = 0; k < d; ++k) {
    nlo[k] = std::ceil(nlo[k] - 1e-9);
    nhi[k] = std::floor(nhi[k] + 1e-9);
    if (nlo[k] > nhi[k]) return;
    n[k] = nlo[k];
  }
  VecN c(d);
  for (;;) {
    for (size_t k = 0; k < d; ++k) {
      double v = g.o[k];
      for (size_t l = 0; l < d; ++l) v += n[l] * g.B[l][k];
      c[k] = v;
    }
    bool in = true;
    for (size_t k = 0; k < d && in; ++k) in = c[k] >= lo[k] && c[k] <= hi[k];
    if (in) f(c);
    size_t a = 0;
    while (a < d && ++n[a] > nhi[a]) {
      n[a] = nlo[a];
      ++a;
    }
    if (a == d) break;
  }
}

bool same_point(const VecN& a, const VecN& b) {
  double s = 0;
  for (size_t k = 0; k < a.size(); ++k) s = std::max(s, std::abs(a[k] - b[k]));
  return s <= 1e-9 * (1 + norm(a));
}

}  // namespace

VecN reflect(const VecN& v, const VecN& n) {
  double s = 2 * dot(v, n);
  VecN r(v.size());
  for (size_t k = 0; k < v.size(); ++k) r[k] = v[k] - s * n[k];
  double l = norm(r);
  for (auto& x : r) x /= l;
  return r;
}

Vec2 reflect_frame(double w) { return {2 * w * w - 1, 2 * w * std::sqrt(std::max(0.0, 1 - w * w))}; }

Vec2 from_frame(const Vec2& V, const Vec2& f) { return {f[0] * V[0] - f[1] * V[1], f[0] * V[1] + f[1] * V[0]}; }

Scene::Scene(const Presentation& p) : d_(p.dim) {
  if (d_ != 2 && d_ != 3) throw SceneError("scenes support d = 2 and d = 3");
  for (const auto& m : p.marks()) {
    const auto& mem = p.member(m);
    const NMat& M = p.classes[m.j].M;
    SceneGrid g;
    g.mark = m;
    g.c = mem.c.to_double();
    std::vector<VecN> Mf(d_, VecN(d_));
    for (int a = 0; a < d_; ++a)
      for (int b = 0; b < d_; ++b) Mf[a][b] = M[a][b].to_double();
    if (std::abs(std::abs(det(Mf)) - 1) > 1e-12) throw SceneError("grid matrix is not unimodular to 1e-12");
    g.B = Mf;
    for (auto& row : g.B)
      for (auto& x : row) x *= g.c;
    g.o.assign(d_, 0);
    for (int b = 0; b < d_; ++b)
      for (int a = 0; a < d_; ++a) g.o[b] += g.c * mem.w[a].to_double() * Mf[a][b];
    if (d_ == 2) {
      g.lat = Lat2({{{g.B[0][0], g.B[0][1]}, {g.B[1][0], g.B[1][1]}}}, {g.o[0], g.o[1]});
      const Mat2& R = g.lat.basis();
      g.B = {{R[0][0], R[0][1]}, {R[1][0], R[1][1]}};
      g.o = {g.lat.offset()[0], g.lat.offset()[1]};
    }
    g.Bi = invert(g.B);
    density_ += p.density(m);
    grids_.push_back(std::move(g));
  }
}

std::optional<Hit> Scene::first_hit(const VecN& q, const VecN& v, double rho, double horizon,
                                    const std::optional<std::pair<int, VecN>>& exclude) const {
  if (!(rho > 0)) throw SceneError("rho must be positive");
  if (!(horizon > 0)) throw SceneError("horizon must be positive");
  if (static_cast<int>(q.size()) != d_ || static_cast<int>(v.size()) != d_) throw SceneError("dimension mismatch");
  if (std::abs(norm(v) - 1) > 1e-9) throw SceneError("velocity must be a unit vector");
  return d_ == 2 ? first_hit2(q, v, rho, horizon, exclude) : first_hit_box(q, v, rho, horizon, exclude);
}

bool Scene::overlaps(const VecN& h, const VecN& center, double rho) const {
  double r = rho + 1e-9;
  VecN lo(d_), hi(d_);
  for (int k = 0; k < d_; ++k) {
    lo[k] = h[k] - r;
    hi[k] = h[k] + r;
  }
  bool hit = false;
  for (const auto& g : grids_)
    centers_in_box(g, lo, hi, [&](const VecN& c) {
      if (same_point(c, center)) return;
      VecN dlt(d_);
      for (int k = 0; k < d_; ++k) dlt[k] = h[k] - c[k];
      if (norm(dlt) <= r) hit = true;
    });
  return hit;
}

double Scene::clearance(const VecN& q, double rho) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : grids_) {
    double R = 0;
    for (const auto& row : g.B) R += norm(row);
    VecN lo(d_), hi(d_);
    for (int k = 0; k < d_; ++k) {
      lo[k] = q[k] - R;
      hi[k] = q[k] + R;
    }
    centers_in_box(g, lo, hi, [&](const VecN& c) {
      VecN dlt(d_);
      for (int k = 0; k < d_; ++k) dlt[k] = q[k] - c[k];
      best = std::min(best, norm(dlt));
    });
  }
  return best - rho;
}

std::optional<Hit> Scene::first_hit2(const VecN& q, const VecN& v, double rho, double horizon,
                                     const std::optional<std::pair<int, VecN>>& exclude) const {
  Vec2 V{v[0], v[1]}, P{-v[1], v[0]};
  std::vector<Lat2> rot;
  rot.reserve(grids_.size());
  for (const auto& g : grids_) {
    const Mat2& B = g.lat.basis();
    Mat2 Br{{{B[0][0] * V[0] + B[0][1] * V[1], B[0][0] * P[0] + B[0][1] * P[1]},
             {B[1][0] * V[0] + B[1][1] * V[1], B[1][0] * P[0] + B[1][1] * P[1]}}};
    Vec2 d{g.lat.offset()[0] - q[0], g.lat.offset()[1] - q[1]};
    rot.emplace_back(Br, Vec2{d[0] * V[0] + d[1] * V[1], d[0] * P[0] + d[1] * P[1]}, false, false);
  }
  double ell = 1 / (2 * rho * density_);
  double end = horizon + rho;
  double lo = -rho, hi = std::min(std::max(ell, 4 * rho), end);
  double bt = std::numeric_limits<double>::infinity(), bx = 0, by = 0;
  int bg = -1;
  for (;;) {
    Rect R{lo, hi, -rho, rho};
    auto in = [&](double x, double y) { return x > lo && x <= hi && std::abs(y) < rho; };
    for (size_t g = 0; g < rot.size(); ++g) {
      rot[g].for_each(R, in, [&](const Vec2& p) {
        double x = p[0], y = p[1];
        if (exclude && exclude->first == static_cast<int>(g)) {
          VecN c{q[0] + x * V[0] + y * P[0], q[1] + x * V[1] + y * P[1]};
          if (same_point(c, exclude->second)) return;
        }
        if (x * x + y * y < rho * rho * (1 - 1e-9)) throw SceneError("start point is inside a scatterer");
        double disc = 1 - (y / rho) * (y / rho);
        if (disc <= 1e-14) return;
        double t = x - rho * std::sqrt(disc);
        if (t <= 0 || t > horizon) return;
        if (t < bt || (t == bt && static_cast<int>(g) < bg)) {
          bt = t;
          bx = x;
          by = y;
          bg = static_cast<int>(g);
        }
      });
    }
    if (bg >= 0 && bt <= hi - rho) break;
    if (hi >= end) break;
    lo = hi;
    hi = std::min(2 * hi, end);
  }
  if (bg < 0) return std::nullopt;
  Hit h;
  h.t = bt;
  h.grid = bg;
  h.mark = grids_[bg].mark;
  h.center = {q[0] + bx * V[0] + by * P[0], q[1] + bx * V[1] + by * P[1]};
  h.position = {q[0] + bt * V[0], q[1] + bt * V[1]};
  h.w = -by / rho;
  Vec2 out = from_frame(V, reflect_frame(h.w));
  h.velocity = {out[0], out[1]};
  h.wvec = {h.w};
  h.overlap = overlaps(h.position, h.center, rho);
  return h;
}

std::optional<Hit> Scene::first_hit_box(const VecN& q, const VecN& v, double rho, double horizon,
                                        const std::optional<std::pair<int, VecN>>& exclude) const {
  double step = 1;
  for (const auto& g : grids_) step = std::max(step, g.c);
  for (double s0 = 0; s0 < horizon; s0 += step) {
    double s1 = std::min(s0 + step, horizon);
    VecN lo(d_), hi(d_);
    for (int k = 0; k < d_; ++k) {
      double a = q[k] + s0 * v[k], b = q[k] + s1 * v[k];
      lo[k] = std::min(a, b) - rho;
      hi[k] = std::max(a, b) + rho;
    }
    double bt = std::numeric_limits<double>::infinity();
    int bg = -1;
    VecN bc;
    for (size_t g = 0; g < grids_.size(); ++g) {
      centers_in_box(grids_[g], lo, hi, [&](const VecN& c) {
        if (exclude && exclude->first == static_cast<int>(g) && same_point(c, exclude->second)) return;
        VecN dl(d_);
        for (int k = 0; k < d_; ++k) dl[k] = q[k] - c[k];
        double b = dot(dl, v), cc = dot(dl, dl) - rho * rho;
        if (cc < -1e-9 * rho * rho) throw SceneError("start point is inside a scatterer");
        double disc = b * b - cc;
        if (disc <= 1e-14 * rho * rho) return;
        double t = -b - std::sqrt(disc);
        if (t <= 0 || t <= s0 || t > s1) return;
        if (t < bt || (t == bt && static_cast<int>(g) < bg)) {
          bt = t;
          bg = static_cast<int>(g);
          bc = c;
        }
      });
    }
    if (bg < 0) continue;
    Hit h;
    h.t = bt;
    h.grid = bg;
    h.mark = grids_[bg].mark;
    h.center = bc;
    h.position.resize(d_);
    VecN n(d_), off(d_);
    for (int k = 0; k < d_; ++k) {
      h.position[k] = q[k] + bt * v[k];
      n[k] = (h.position[k] - bc[k]) / rho;
      off[k] = q[k] - bc[k];
    }
    double along = dot(off, v);
    h.wvec.resize(d_);
    for (int k = 0; k < d_; ++k) h.wvec[k] = (off[k] - along * v[k]) / rho;
    h.w = norm(h.wvec);
    h.velocity = reflect(v, n);
    h.overlap = overlaps(h.position, h.center, rho);
    return h;
  }
  return std::nullopt;
}

Trajectory trajectory(const Scene& s, const VecN& q0, const VecN& v0, double rho, size_t n_collisions,
                      double horizon_per_leg) {
  Trajectory tr;
  VecN q = q0, v = v0;
  std::optional<std::pair<int, VecN>> ex;
  for (size_t k = 0; k < n_collisions; ++k) {
    auto h = s.first_hit(q, v, rho, horizon_per_leg, ex);
    if (!h) {
      tr.escaped = true;
      break;
    }
    tr.hits.push_back(*h);
    if (h->overlap) {
      tr.overlap = true;
      break;
    }
    q = h->position;
    v = h->velocity;
    ex = std::make_pair(h->grid, h->center);
  }
  return tr;
}

Vec2 DirectionLaw::draw(Philox& rng) const {
  double th;
  if (weights.empty()) {
    th = 2 * M_PI * rng.uniform();
  } else {
    double tot = 0;
    for (double w : weights) tot += w;
    double u = rng.uniform() * tot;
    size_t k = 0;
    while (k + 1 < weights.size() && u >= weights[k]) u -= weights[k++];
    th = 2 * M_PI * (k + rng.uniform()) / static_cast<double>(weights.size());
  }
  return {std::cos(th), std::sin(th)};
}

namespace {

VecN random_direction(int d, const DirectionLaw& law, Philox& rng) {
  if (d == 2) {
    Vec2 v = law.draw(rng);
    return {v[0], v[1]};
  }
  if (!law.weights.empty()) throw SceneError("direction tables are supported for d = 2 only");
  // Uniform on the sphere via rejection from the cube.
  for (;;) {
    VecN v(d);
    double s = 0;
    for (auto& x : v) {
      x = rng.uniform(-1, 1);
      s += x * x;
    }
    if (s > 1e-6 && s <= 1) {
      for (auto& x : v) x /= std::sqrt(s);
      return v;
    }
  }
}

}  // namespace

PathRun sample_path_lengths(const Scene& s, double rho, size_t n, const PathOptions& opt, uint64_t seed,
                            int workers) {
  int d = s.dim();
  if (!(rho > 0)) throw SceneError("rho must be positive");
  double scale = std::pow(rho, d - 1);
  double horizon = opt.xi_max / scale;
  if (opt.start == PathOptions::fixed && static_cast<int>(opt.q.size()) != d)
    throw SceneError("fixed start has the wrong dimension");
  int psi_grid = -1;
  if (opt.start == PathOptions::at_mark) {
    for (size_t g = 0; g < s.grids().size(); ++g)
      if (s.grids()[g].mark == opt.psi) psi_grid = static_cast<int>(g);
    if (psi_grid < 0) throw SceneError("unknown start mark");
  }
  PathRun run;
  run.samples.resize(n);
  std::vector<uint32_t> resampled(n, 0);
  parallel_for(n, workers, [&](size_t i) {
    Philox rng(seed, i, 3);
    for (;;) {
      VecN q(d), v;
      std::optional<std::pair<int, VecN>> ex;
      if (opt.start == PathOptions::fixed) {
        q = opt.q;
        v = random_direction(d, opt.law, rng);
      } else if (opt.start == PathOptions::cell) {
        const auto& g0 = s.grids()[0];
        for (;;) {
          VecN u(d);
          for (auto& x : u) x = rng.uniform();
          for (int k = 0; k < d; ++k) {
            q[k] = g0.o[k];
            for (int l = 0; l < d; ++l) q[k] += u[l] * g0.B[l][k];
          }
          if (s.clearance(q, rho) > 0) break;
        }
        v = random_direction(d, opt.law, rng);
      } else {
        const auto& g = s.grids()[psi_grid];
        VecN m(d), c(d, 0);
        for (auto& x : m) x = std::floor(rng.uniform(-1e4, 1e4));
        for (int k = 0; k < d; ++k) {
          c[k] = g.o[k];
          for (int l = 0; l < d; ++l) c[k] += m[l] * g.B[l][k];
        }
        v = random_direction(d, opt.law, rng);
        if (d != 2) throw SceneError("at-scatterer starts are supported for d = 2 only");
        double wp = rng.uniform(-1, 1), a = std::sqrt(1 - wp * wp);
        q = {c[0] + rho * (a * v[0] - wp * v[1]), c[1] + rho * (a * v[1] + wp * v[0])};
        ex = std::make_pair(psi_grid, c);
      }
      auto h = s.first_hit(q, v, rho, horizon, ex);
      PathSample ps;
      if (!h) {
        ps.censored = true;
        ps.xi = opt.xi_max;
      } else {
        if (h->overlap) {
          ++resampled[i];
          continue;
        }
        ps.xi = scale * h->t;
        ps.grid = h->grid;
        ps.mark = h->mark;
        ps.w = h->w;
      }
      run.samples[i] = ps;
      break;
    }
  });
  for (auto r : resampled) run.overlaps_resampled += r;
  return run;
}

}  // namespace gg
