#pragma once

#include <stdexcept>
#include <vector>

namespace gg {

struct StatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KsResult {
  double statistic = 0;
  double threshold = 0;
  bool pass = true;
};

// Two-sample Kolmogorov-Smirnov at level alpha (asymptotic critical value).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha = 1e-3);
// One-sample KS against Uniform[lo, hi]; returns (statistic, asymptotic p-value).
std::pair<double, double> ks_uniform(std::vector<double> a, double lo, double hi);
double kolmogorov_pvalue(double sqrt_n_d);

// Chi-square style comparison of two categorical samples, expressed through the
// two-sample KS test on category indices (same threshold convention).
KsResult ks_categorical(const std::vector<int>& a, const std::vector<int>& b, double alpha = 1e-3);

// Pool-adjacent-violators fit of a nonincreasing sequence (weights optional).
std::vector<double> isotonic_decreasing(const std::vector<double>& y, const std::vector<double>& w = {});

struct SlopeFit {
  double slope = 0, intercept = 0, stderr_slope = 0;
  int points = 0;
};
// Weighted least squares of log F on log xi; sigma are standard errors of F.
SlopeFit loglog_slope(const std::vector<double>& xi, const std::vector<double>& F, const std::vector<double>& sigma,
                      double lo, double hi);

std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> lin_grid(double lo, double hi, int n);

double mean(const std::vector<double>& x);
double stderr_of_mean(const std::vector<double>& x);

}  // namespace gg
