#include <cmath>

#include "doctest.h"
#include "flight.hpp"
#include "helpers.hpp"
#include "scene.hpp"
#include "stats.hpp"

using namespace gt;

namespace {

Presentation z2_adm() { return make_admissible(canonical_presentation(sqrt2_field(), 2, {z2()})); }

Presentation two_adm() {
  return make_admissible(canonical_presentation(sqrt2_field(), 2, {z2(), grid(nq("1"), {nq("0"), nq("0")}, M2())}));
}

}  // namespace

TEST_CASE("exit parameter and scattering map") {
  Philox rng(11, 0);
  for (int k = 0; k < 200; ++k) {
    double w = rng.uniform(-0.999, 0.999);
    double a = rng.uniform(0, 2 * M_PI);
    Vec2 V{std::cos(a), std::sin(a)};
    CHECK(exit_parameter(V, w) == doctest::Approx(w).epsilon(1e-12));
    Vec2 out = scatter(V, w);
    CHECK(std::hypot(out[0], out[1]) == doctest::Approx(1).epsilon(1e-14));
    // cosine of the deflection angle
    double c = V[0] * out[0] + V[1] * out[1];
    CHECK(c == doctest::Approx(2 * w * w - 1).epsilon(1e-12));
  }
  Vec2 back = scatter({1, 0}, 0);
  CHECK(back[0] == doctest::Approx(-1));
}

TEST_CASE("single-class merged sampler reproduces the direct transition") {
  Presentation p = z2_adm();
  ConfigSampler s(p);
  MergedSampler m(p);
  for (uint64_t id = 0; id < 300; ++id) {
    Philox r1(5, id), r2(5, id);
    double w = Philox(6, id).uniform(-0.99, 0.99);
    auto a = sample_transition(s, {0, 0}, w, r1, 1e3);
    auto b = m.transition({0, 0}, w, r2, 1e3);
    CHECK(a.censored == b.censored);
    CHECK(a.xi == b.xi);
    CHECK(a.w == b.w);
  }
}

TEST_CASE("merged transition is the minimum over classes and reaches every mark") {
  Presentation p = two_adm();
  REQUIRE(p.N() == 2);
  MergedSampler m(p);
  std::vector<int> seen(m.marks().size(), 0);
  for (uint64_t id = 0; id < 2000; ++id) {
    Philox rng(8, id);
    Mark prev = m.marks()[id % m.marks().size()];
    double w = rng.uniform(-0.99, 0.99);
    std::vector<double> cx;
    auto e = m.transition(prev, w, rng, 1e3, {1, 0}, &cx);
    REQUIRE(cx.size() == 2);
    REQUIRE(!e.censored);
    CHECK(e.xi == std::min(cx[0], cx[1]));
    CHECK(e.xi > 0);
    CHECK(std::abs(e.w) < 1);
    seen[e.grid]++;
  }
  for (int c : seen) CHECK(c > 100);
}

TEST_CASE("random flight path geometry and rotation covariance") {
  Presentation p = two_adm();
  ConfigSampler s(p);
  Philox r1(3, 1), r2(3, 1);
  double th = 0.7;
  auto a = run_flight(s, 40, r1, 1e4, {1, 0});
  auto b = run_flight(s, 40, r2, 1e4, {std::cos(th), std::sin(th)});
  REQUIRE(a.events.size() == 40);
  REQUIRE(b.events.size() == 40);
  for (size_t k = 1; k < a.Q.size(); ++k) {
    double step = std::hypot(a.Q[k][0] - a.Q[k - 1][0], a.Q[k][1] - a.Q[k - 1][1]);
    CHECK(step == doctest::Approx(a.events[k - 1].xi).epsilon(1e-12));
    double rx = std::cos(th) * a.Q[k][0] - std::sin(th) * a.Q[k][1];
    double ry = std::sin(th) * a.Q[k][0] + std::cos(th) * a.Q[k][1];
    double sc = 1 + std::hypot(rx, ry);
    CHECK(std::abs(rx - b.Q[k][0]) < 1e-9 * sc);
    CHECK(std::abs(ry - b.Q[k][1]) < 1e-9 * sc);
  }
  for (const auto& e : a.events) CHECK(std::hypot(e.V[0], e.V[1]) == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("initial event law matches the generic tail") {
  Presentation p = z2_adm();
  ConfigSampler s(p);
  size_t n = 20000;
  std::vector<double> xs, ws_small;
  for (uint64_t id = 0; id < n; ++id) {
    Philox rng(21, id);
    auto e = sample_initial(s, rng, 1e4);
    xs.push_back(e.xi);
    if (!e.censored && e.xi < 0.05) ws_small.push_back(e.w);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<double> grid{0.1, 0.3, 1.0, 3.0};
  auto t = tail_estimate(s, {}, grid, 20000, 22, 2);
  for (size_t k = 0; k < grid.size(); ++k) {
    double F = static_cast<double>(xs.end() - std::upper_bound(xs.begin(), xs.end(), grid[k])) / n;
    double sig = std::sqrt(F * (1 - F) / n + t.stderr_[k] * t.stderr_[k]) + 1e-4;
    CHECK(std::abs(F - t.F_raw[k]) < 5 * sig);
  }
  REQUIRE(ws_small.size() > 500);
  auto [D, pv] = ks_uniform(ws_small, -1, 1);
  (void)D;
  CHECK(pv > 1e-3);
}
