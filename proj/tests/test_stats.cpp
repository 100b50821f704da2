#include <cmath>
#include <random>

#include "doctest.h"
#include "philox.hpp"
#include "stats.hpp"

using namespace gg;

TEST_CASE("two-sample KS") {
  std::mt19937_64 g(1);
  std::normal_distribution<double> N(0, 1);
  std::vector<double> a, b, c;
  for (int i = 0; i < 5000; ++i) {
    a.push_back(N(g));
    b.push_back(N(g));
    c.push_back(N(g) + 0.2);
  }
  auto same = ks_two_sample(a, b);
  CHECK(same.pass);
  CHECK(same.threshold == doctest::Approx(std::sqrt(-std::log(5e-4) / 2) * std::sqrt(2.0 / 5000)));
  CHECK(!ks_two_sample(a, c).pass);
  // statistic of fully separated samples
  auto sep = ks_two_sample({1, 2, 3}, {4, 5, 6});
  CHECK(sep.statistic == doctest::Approx(1.0));
}

TEST_CASE("one-sample KS and the Kolmogorov distribution") {
  CHECK(kolmogorov_pvalue(1.3581) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(kolmogorov_pvalue(1.6276) == doctest::Approx(0.01).epsilon(2e-3));
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> U(2, 5);
  std::vector<double> x;
  for (int i = 0; i < 4000; ++i) x.push_back(U(g));
  CHECK(ks_uniform(x, 2, 5).second > 1e-3);
  CHECK(ks_uniform(x, 2, 6).second < 1e-6);
}

TEST_CASE("categorical comparison") {
  std::vector<int> a, b, c;
  std::mt19937_64 g(3);
  std::discrete_distribution<int> d1({1, 2, 3}), d2({3, 2, 1});
  for (int i = 0; i < 3000; ++i) {
    a.push_back(d1(g));
    b.push_back(d1(g));
    c.push_back(d2(g));
  }
  CHECK(ks_categorical(a, b).pass);
  CHECK(!ks_categorical(a, c).pass);
}

TEST_CASE("isotonic regression") {
  auto y = isotonic_decreasing({3, 1, 2, 0});
  REQUIRE(y.size() == 4);
  CHECK(y[0] == doctest::Approx(3));
  CHECK(y[1] == doctest::Approx(1.5));
  CHECK(y[2] == doctest::Approx(1.5));
  CHECK(y[3] == doctest::Approx(0));
  auto z = isotonic_decreasing({1, 2, 3});
  for (double v : z) CHECK(v == doctest::Approx(2));
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> U(0, 1);
  for (int it = 0; it < 50; ++it) {
    std::vector<double> v(30);
    for (auto& e : v) e = U(g);
    auto f = isotonic_decreasing(v);
    double s0 = 0, s1 = 0;
    for (size_t k = 0; k < v.size(); ++k) {
      s0 += v[k];
      s1 += f[k];
      if (k) CHECK(f[k] <= f[k - 1] + 1e-15);
    }
    CHECK(s0 == doctest::Approx(s1));
  }
}

TEST_CASE("log-log slope") {
  auto xi = log_grid(1, 100, 30);
  CHECK(xi.front() == doctest::Approx(1));
  CHECK(xi.back() == doctest::Approx(100));
  std::vector<double> F, s;
  for (double x : xi) {
    F.push_back(0.3 * std::pow(x, -2.0));
    s.push_back(1e-6);
  }
  auto fit = loglog_slope(xi, F, s, 1, 100);
  CHECK(fit.slope == doctest::Approx(-2).epsilon(1e-9));
  CHECK(std::exp(fit.intercept) == doctest::Approx(0.3).epsilon(1e-9));
  // points with F below 10 sigma are dropped; too few remaining is an error
  std::vector<double> big(xi.size(), 0.1);
  CHECK_THROWS_AS(loglog_slope(xi, F, big, 1, 100), StatError);
  CHECK(mean({1, 2, 3}) == doctest::Approx(2));
  CHECK(stderr_of_mean({1, 2, 3}) == doctest::Approx(1 / std::sqrt(3.0)));
}

TEST_CASE("philox known-answer vectors") {
  using B = std::array<uint32_t, 4>;
  CHECK(Philox::block({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}
