#pragma once

// Finite-radius Lorentz gas: disks of radius rho centred at the points of a presentation.

#include <optional>
#include <vector>

#include "gridalg.hpp"
#include "lattice2.hpp"
#include "philox.hpp"

namespace gg {

struct SceneError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using VecN = std::vector<double>;

struct Hit {
  double t = 0;
  VecN center, position, velocity;  // velocity after reflection
  int grid = -1;
  Mark mark;
  double w = 0;  // d = 2: signed transverse offset of the ray from the centre, over rho
  VecN wvec;     // general d: transverse offset vector over rho (incoming frame, d >= 3)
  bool overlap = false;  // another boundary passes within 1e-9 of the hit point
};

struct SceneGrid {
  Mark mark;
  double c = 1;
  std::vector<VecN> B;   // rows of c M
  std::vector<VecN> Bi;  // inverse
  VecN o;                // c w M
  Lat2 lat;              // d = 2 only
};

class Scene {
 public:
  explicit Scene(const Presentation& p);

  int dim() const { return d_; }
  const std::vector<SceneGrid>& grids() const { return grids_; }
  double total_density() const { return density_; }

  // First boundary crossing along q + t v, 0 < t <= horizon. `exclude` skips one centre
  // (the scatterer the particle is leaving).
  std::optional<Hit> first_hit(const VecN& q, const VecN& v, double rho, double horizon,
                               const std::optional<std::pair<int, VecN>>& exclude = std::nullopt) const;
  // Smallest distance from q to a centre, minus rho (negative inside a scatterer). d = 2.
  double clearance(const VecN& q, double rho) const;

 private:
  std::optional<Hit> first_hit2(const VecN& q, const VecN& v, double rho, double horizon,
                                const std::optional<std::pair<int, VecN>>& exclude) const;
  std::optional<Hit> first_hit_box(const VecN& q, const VecN& v, double rho, double horizon,
                                   const std::optional<std::pair<int, VecN>>& exclude) const;
  bool overlaps(const VecN& h, const VecN& center, double rho) const;

  int d_ = 2;
  std::vector<SceneGrid> grids_;
  double density_ = 0;
};

VecN reflect(const VecN& v, const VecN& n);
// Outgoing direction in the incoming frame (V = e1) for impact parameter w, d = 2.
Vec2 reflect_frame(double w);
// Maps frame coordinates (along V, along rot90 V) back to the plane.
Vec2 from_frame(const Vec2& V, const Vec2& f);

struct Trajectory {
  std::vector<Hit> hits;
  bool escaped = false;
  bool overlap = false;
};
Trajectory trajectory(const Scene& s, const VecN& q0, const VecN& v0, double rho, size_t n_collisions,
                      double horizon_per_leg);

struct DirectionLaw {
  std::vector<double> weights;  // empty: uniform; else piecewise-constant density on [0, 2 pi)
  Vec2 draw(Philox& rng) const;
};

struct PathOptions {
  enum Start { fixed, cell, at_mark } start = cell;
  VecN q;       // fixed start
  Mark psi;     // at_mark start
  DirectionLaw law;
  double xi_max = 1e4;
};

struct PathSample {
  double xi = 0;
  int grid = -1;
  Mark mark;
  double w = 0;
  bool censored = false;
};

struct PathRun {
  std::vector<PathSample> samples;
  size_t overlaps_resampled = 0;
};

// Rescaled free path lengths xi = rho^{d-1} * (length); d = 2.
PathRun sample_path_lengths(const Scene& s, double rho, size_t n, const PathOptions& opt, uint64_t seed,
                            int workers);

}  // namespace gg
