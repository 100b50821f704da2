#include "flight.hpp"

#include <cmath>

#include "scene.hpp"

namespace gg {

double exit_parameter(const Vec2& V_in, double w) {
  (void)V_in;
  Vec2 out = reflect_frame(w);
  // impact point (-sqrt(1-w^2), w) in the incoming frame, read against rot90 of the outgoing direction
  double px = -std::sqrt(std::max(0.0, 1 - w * w)), py = w;
  return px * -out[1] + py * out[0];
}

Vec2 scatter(const Vec2& V_in, double w) {
  Vec2 v = from_frame(V_in, reflect_frame(w));
  double l = std::hypot(v[0], v[1]);
  return {v[0] / l, v[1] / l};
}

namespace {

FlightEvent event_from(const std::optional<StripPoint>& p, double shift, const std::vector<Mark>& marks,
                       double xi_max, const Vec2& V_in) {
  FlightEvent e;
  if (!p) {
    e.censored = true;
    e.xi = xi_max;
    e.V = V_in;
    return e;
  }
  e.xi = p->x;
  e.grid = p->grid;
  e.psi = marks[p->grid];
  e.w = -(p->y - shift);
  e.V = scatter(V_in, e.w);
  return e;
}

}  // namespace

FlightEvent sample_initial(const ConfigSampler& s, Philox& rng, double xi_max, const Vec2& V_in) {
  auto conf = s.sample(rng);
  return event_from(first_in_strip(conf, 0, xi_max), 0, s.marks(), xi_max, V_in);
}

FlightEvent sample_transition(const ConfigSampler& s, const Mark& prev, double w_prev, Philox& rng, double xi_max,
                              const Vec2& V_in) {
  if (!(std::abs(w_prev) < 1)) throw SamplingError("exit parameter must lie in (-1, 1)");
  auto conf = s.sample(rng, prev);
  return event_from(first_in_strip(conf, w_prev, xi_max), w_prev, s.marks(), xi_max, V_in);
}

MergedSampler::MergedSampler(const Presentation& p, size_t orbit_cap) : marks_(p.marks()) {
  int g = 0;
  for (int j = 0; j < p.N(); ++j) {
    classes_.emplace_back(p.restrict_to_class(j), orbit_cap);
    std::vector<int> idx;
    for (int i = 0; i < p.r(j); ++i) idx.push_back(g++);
    grid_of_.push_back(idx);
  }
}

FlightEvent MergedSampler::transition(const Mark& prev, double w_prev, Philox& rng, double xi_max, const Vec2& V_in,
                                      std::vector<double>* class_xi) const {
  if (!(std::abs(w_prev) < 1)) throw SamplingError("exit parameter must lie in (-1, 1)");
  FlightEvent best;
  best.censored = true;
  best.xi = xi_max;
  best.V = V_in;
  if (class_xi) class_xi->clear();
  for (size_t c = 0; c < classes_.size(); ++c) {
    const auto& cs = classes_[c];
    std::optional<StripPoint> p;
    double shift = 0;
    if (static_cast<int>(c) == prev.j) {
      // class of the previous scatterer: mark mode, cylinder shifted by the exit parameter
      auto conf = cs.sample(rng, Mark{0, prev.i});
      shift = w_prev;
      p = first_in_strip(conf, shift, xi_max);
    } else {
      // other classes are translation invariant, so the shift is immaterial
      auto conf = cs.sample(rng);
      p = first_in_strip(conf, 0, xi_max);
    }
    if (class_xi) class_xi->push_back(p ? p->x : xi_max);
    if (p && (best.censored || p->x < best.xi)) {
      best.censored = false;
      best.xi = p->x;
      best.grid = grid_of_[c][p->grid];
      best.psi = marks_[best.grid];
      best.w = -(p->y - shift);
    }
  }
  if (!best.censored) best.V = scatter(V_in, best.w);
  return best;
}

FlightEvent merged_transition(const MergedSampler& m, const Mark& prev, double w_prev, Philox& rng, double xi_max) {
  return m.transition(prev, w_prev, rng, xi_max);
}

FlightRun run_flight(const ConfigSampler& s, size_t n_events, Philox& rng, double xi_max, const Vec2& V0) {
  FlightRun run;
  run.Q.push_back({0, 0});
  Vec2 V = V0;
  for (size_t k = 0; k < n_events; ++k) {
    FlightEvent e = k == 0 ? sample_initial(s, rng, xi_max, V)
                           : sample_transition(s, run.events.back().psi,
                                               exit_parameter(V, run.events.back().w), rng, xi_max, V);
    const Vec2& Qp = run.Q.back();
    run.Q.push_back({Qp[0] + e.xi * V[0], Qp[1] + e.xi * V[1]});
    run.events.push_back(e);
    if (e.censored) {
      run.censored = true;
      break;
    }
    V = e.V;
  }
  return run;
}

}  // namespace gg
