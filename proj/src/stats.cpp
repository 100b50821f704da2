#include "stats.hpp"

#include <algorithm>
#include <cmath>

namespace gg {

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha) {
  if (a.empty() || b.empty()) throw StatError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double m = static_cast<double>(a.size()), n = static_cast<double>(b.size());
  size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / m - j / n));
  }
  KsResult r;
  r.statistic = d;
  r.threshold = std::sqrt(-std::log(alpha / 2) / 2) * std::sqrt((m + n) / (m * n));
  r.pass = d <= r.threshold;
  return r;
}

double kolmogorov_pvalue(double t) {
  if (t < 0.2) return 1.0;
  double s = 0;
  for (int k = 1; k <= 100; ++k) s += 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * t * t);
  return std::clamp(s, 0.0, 1.0);
}

std::pair<double, double> ks_uniform(std::vector<double> a, double lo, double hi) {
  if (a.empty()) throw StatError("ks_uniform: empty sample");
  std::sort(a.begin(), a.end());
  double n = static_cast<double>(a.size()), d = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double F = std::clamp((a[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  double sn = std::sqrt(n);
  return {d, kolmogorov_pvalue((sn + 0.12 + 0.11 / sn) * d)};
}

KsResult ks_categorical(const std::vector<int>& a, const std::vector<int>& b, double alpha) {
  return ks_two_sample(std::vector<double>(a.begin(), a.end()), std::vector<double>(b.begin(), b.end()), alpha);
}

std::vector<double> isotonic_decreasing(const std::vector<double>& y, const std::vector<double>& w) {
  struct Block {
    double sum, weight;
    size_t len;
  };
  std::vector<Block> st;
  for (size_t i = 0; i < y.size(); ++i) {
    double wi = w.empty() ? 1.0 : w[i];
    st.push_back({y[i] * wi, wi, 1});
    while (st.size() > 1) {
      auto& p = st[st.size() - 2];
      auto& q = st.back();
      if (p.sum / p.weight >= q.sum / q.weight) break;
      p.sum += q.sum;
      p.weight += q.weight;
      p.len += q.len;
      st.pop_back();
    }
  }
  std::vector<double> out;
  for (const auto& b : st) out.insert(out.end(), b.len, b.sum / b.weight);
  return out;
}

SlopeFit loglog_slope(const std::vector<double>& xi, const std::vector<double>& F, const std::vector<double>& sigma,
                      double lo, double hi) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (size_t i = 0; i < xi.size(); ++i) {
    if (xi[i] < lo || xi[i] > hi) continue;
    if (!(F[i] > 0) || F[i] <= 10 * sigma[i]) continue;
    double x = std::log(xi[i]), y = std::log(F[i]);
    double rel = sigma[i] > 0 ? sigma[i] / F[i] : 1e-12;
    double w = 1 / (rel * rel);
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
    ++k;
  }
  if (k < 4) throw StatError("loglog_slope: fewer than 4 usable grid points in range");
  double den = sw * sxx - sx * sx;
  SlopeFit f;
  f.slope = (sw * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / sw;
  f.stderr_slope = std::sqrt(sw / den);
  f.points = k;
  return f;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) g.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
  g.back() = hi;
  return g;
}

std::vector<double> lin_grid(double lo, double hi, int n) {
  std::vector<double> g;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

double mean(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v;
  return x.empty() ? 0 : s / static_cast<double>(x.size());
}

double stderr_of_mean(const std::vector<double>& x) {
  if (x.size() < 2) return 0;
  double m = mean(x), s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

}  // namespace gg
