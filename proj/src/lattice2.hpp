#pragma once

// Planar grids {m B + o : m in Z^2} with a Lagrange-reduced basis, and line-by-line
// enumeration of grid points inside axis-aligned rectangles.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

namespace gg {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<Vec2, 2>;  // rows are basis vectors

inline double det2(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

inline Mat2 inv2(const Mat2& m) {
  double d = det2(m);
  return {{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
}

inline Mat2 mul2(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

// row vector times matrix
inline Vec2 vm2(const Vec2& v, const Mat2& m) {
  return {v[0] * m[0][0] + v[1] * m[1][0], v[0] * m[0][1] + v[1] * m[1][1]};
}

// Gauss-Lagrange reduction of the rows; G (integer, unimodular) with G * B_in = B_out.
inline Mat2 lagrange_reduce(Mat2 b, std::array<std::array<int64_t, 2>, 2>* G = nullptr) {
  std::array<std::array<int64_t, 2>, 2> g{{{1, 0}, {0, 1}}};
  auto n2 = [](const Vec2& v) { return v[0] * v[0] + v[1] * v[1]; };
  for (int it = 0; it < 200; ++it) {
    if (n2(b[0]) > n2(b[1])) {
      std::swap(b[0], b[1]);
      std::swap(g[0], g[1]);
    }
    double mu = std::nearbyint((b[0][0] * b[1][0] + b[0][1] * b[1][1]) / n2(b[0]));
    if (mu == 0) break;
    b[1][0] -= mu * b[0][0];
    b[1][1] -= mu * b[0][1];
    auto m = static_cast<int64_t>(mu);
    g[1][0] -= m * g[0][0];
    g[1][1] -= m * g[0][1];
  }
  if (G) *G = g;
  return b;
}

struct Rect {
  double x0, x1, y0, y1;
};

class Lat2 {
 public:
  Lat2() = default;
  // Points m B + o. With skip_origin the point m = 0 is excluded; o must then be 0.
  Lat2(const Mat2& B, const Vec2& o, bool skip_origin = false, bool reduce = true)
      : B_(reduce ? lagrange_reduce(B) : B), skip_(skip_origin) {
    Bi_ = inv2(B_);
    if (skip_) {
      o_ = o;
    } else {
      Vec2 k = vm2(o, Bi_);
      o_ = {o[0] - std::nearbyint(k[0]) * B_[0][0] - std::nearbyint(k[1]) * B_[1][0],
            o[1] - std::nearbyint(k[0]) * B_[0][1] - std::nearbyint(k[1]) * B_[1][1]};
    }
  }

  const Mat2& basis() const { return B_; }
  const Mat2& inverse() const { return Bi_; }
  const Vec2& offset() const { return o_; }
  bool skip_origin() const { return skip_; }

  Vec2 point(double ma, double mb, int a) const {
    int b = 1 - a;
    return {ma * B_[a][0] + mb * B_[b][0] + o_[0], ma * B_[a][1] + mb * B_[b][1] + o_[1]};
  }

  // Calls f(a, ma, lo, hi) for every lattice line m_a = ma meeting the closed rectangle,
  // where [lo, hi] is the exact range of m_b with point inside `inside` (an open or
  // half-open subset of the rectangle). Ranges may be empty (lo > hi).
  template <class In, class F>
  void lines(const Rect& R, In&& inside, F&& f) const {
    int a = choose_axis(R);
    int b = 1 - a;
    double lo_a = std::numeric_limits<double>::infinity(), hi_a = -lo_a;
    for (double x : {R.x0, R.x1})
      for (double y : {R.y0, R.y1}) {
        double v = (x - o_[0]) * Bi_[0][a] + (y - o_[1]) * Bi_[1][a];
        lo_a = std::min(lo_a, v);
        hi_a = std::max(hi_a, v);
      }
    const double eps = 1e-9;
    double ma0 = std::ceil(lo_a - eps), ma1 = std::floor(hi_a + eps);
    for (double ma = ma0; ma <= ma1; ma += 1) {
      double lo = -std::numeric_limits<double>::infinity(), hi = -lo;
      bool empty = false;
      for (int k = 0; k < 2 && !empty; ++k) {
        double rest = ma * B_[a][k] + o_[k];
        double c0 = k == 0 ? R.x0 : R.y0, c1 = k == 0 ? R.x1 : R.y1;
        double s = B_[b][k];
        double tol = eps * (std::abs(c0) + std::abs(c1) + std::abs(rest) + 1);
        if (std::abs(s) < 1e-300) {
          if (rest < c0 - tol || rest > c1 + tol) empty = true;
          continue;
        }
        double u = (c0 - rest - tol) / s, v = (c1 - rest + tol) / s;
        if (u > v) std::swap(u, v);
        lo = std::max(lo, u);
        hi = std::min(hi, v);
      }
      if (empty) continue;
      double mlo = std::ceil(lo), mhi = std::floor(hi);
      while (mlo <= mhi && !ok(ma, mlo, a, inside)) mlo += 1;
      while (mhi >= mlo && !ok(ma, mhi, a, inside)) mhi -= 1;
      if (mlo <= mhi) f(a, ma, mlo, mhi);
    }
  }

  template <class In>
  int64_t count(const Rect& R, In&& inside) const {
    int64_t n = 0;
    lines(R, inside, [&](int, double ma, double lo, double hi) {
      n += static_cast<int64_t>(hi - lo) + 1;
      if (skip_ && ma == 0 && lo <= 0 && 0 <= hi) --n;
    });
    return n;
  }

  // Point of minimal x-coordinate.
  template <class In>
  std::optional<Vec2> min_x(const Rect& R, In&& inside) const {
    std::optional<Vec2> best;
    lines(R, inside, [&](int a, double ma, double lo, double hi) {
      int b = 1 - a;
      bool up = B_[b][0] >= 0;  // x increases with m_b
      double m = up ? lo : hi, step = up ? 1 : -1;
      if (skip_ && ma == 0 && m == 0) {
        if (lo == hi) return;
        m += step;
      }
      Vec2 p = point(ma, m, a);
      if (!best || p[0] < (*best)[0]) best = p;
    });
    return best;
  }

  template <class In, class F>
  void for_each(const Rect& R, In&& inside, F&& f) const {
    lines(R, inside, [&](int a, double ma, double lo, double hi) {
      for (double m = lo; m <= hi; m += 1) {
        if (skip_ && ma == 0 && m == 0) continue;
        f(point(ma, m, a));
      }
    });
  }

 private:
  int choose_axis(const Rect& R) const {
    double w = R.x1 - R.x0, h = R.y1 - R.y0;
    double c0 = w * std::abs(Bi_[0][0]) + h * std::abs(Bi_[1][0]);
    double c1 = w * std::abs(Bi_[0][1]) + h * std::abs(Bi_[1][1]);
    return c0 <= c1 ? 0 : 1;
  }

  template <class In>
  bool ok(double ma, double mb, int a, In& inside) const {
    Vec2 p = point(ma, mb, a);
    return inside(p[0], p[1]);
  }

  Mat2 B_{}, Bi_{};
  Vec2 o_{};
  bool skip_ = false;
};

}  // namespace gg
