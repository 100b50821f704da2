#pragma once

// Sampler for the limiting random flight process (d = 2).

#include <optional>
#include <vector>

#include "homspace.hpp"

namespace gg {

struct FlightEvent {
  double xi = 0;
  int grid = -1;  // index into the sampler's marks; -1 when censored
  Mark psi;
  double w = 0;
  Vec2 V{1, 0};  // outgoing velocity
  bool censored = false;
};

// Transverse coordinate of the impact point in the outgoing frame; equals w for hard disks.
double exit_parameter(const Vec2& V_in, double w);
Vec2 scatter(const Vec2& V_in, double w);

FlightEvent sample_initial(const ConfigSampler& s, Philox& rng, double xi_max, const Vec2& V_in = {1, 0});
FlightEvent sample_transition(const ConfigSampler& s, const Mark& prev, double w_prev, Philox& rng, double xi_max,
                              const Vec2& V_in = {1, 0});

// Per-class samplers built from the class-restricted presentations.
class MergedSampler {
 public:
  explicit MergedSampler(const Presentation& p, size_t orbit_cap = 10000);
  // class_xi (optional) receives the class-local path lengths of this trial.
  FlightEvent transition(const Mark& prev, double w_prev, Philox& rng, double xi_max, const Vec2& V_in = {1, 0},
                         std::vector<double>* class_xi = nullptr) const;
  const std::vector<Mark>& marks() const { return marks_; }

 private:
  std::vector<ConfigSampler> classes_;
  std::vector<Mark> marks_;
  std::vector<std::vector<int>> grid_of_;  // [class][member] -> global grid index
};

FlightEvent merged_transition(const MergedSampler& m, const Mark& prev, double w_prev, Philox& rng, double xi_max);

struct FlightRun {
  std::vector<FlightEvent> events;
  std::vector<Vec2> Q;  // Q_0 = 0, Q_j = Q_{j-1} + xi_j V_{j-1}
  bool censored = false;
};
FlightRun run_flight(const ConfigSampler& s, size_t n_events, Philox& rng, double xi_max, const Vec2& V0 = {1, 0});

}  // namespace gg
