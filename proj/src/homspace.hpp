#pragma once

// Monte Carlo on the space of random grid configurations (d = 2).

#include <optional>
#include <vector>

#include "gridalg.hpp"
#include "lattice2.hpp"
#include "philox.hpp"

namespace gg {

struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Haar-random unimodular matrix; the rows span the lattice.
Mat2 haar_sl2(Philox& rng);

// Floating form of a TorusComponentSet.
struct TorusSampler {
  int r = 0;
  std::vector<std::vector<Vec2>> reps;
  std::vector<std::vector<double>> basis;  // Z-basis of L, k x r
  std::optional<int> zero_row;              // mark mode: row kept exactly 0

  TorusSampler() = default;
  explicit TorusSampler(const TorusComponentSet& t);
  std::vector<Vec2> sample(Philox& rng, int* component = nullptr) const;
  // Probability that row i is integral (the Siegel atom of the grid in this mode).
  double atom(int i) const;
};

std::vector<Vec2> sample_torus(const TorusSampler& t, Philox& rng);

struct RandomConfiguration {
  std::vector<Lat2> grids;  // one per mark, in Presentation::marks() order
  std::vector<Mark> marks;
  std::vector<Mat2> A;                        // per class
  std::vector<std::vector<Vec2>> U;           // per class
  std::vector<int> component;                 // per class
  std::optional<Mark> removed;
};

struct StripPoint {
  double x = 0, y = 0;
  int grid = -1;
};

class ConfigSampler {
 public:
  // The presentation must be admissible.
  explicit ConfigSampler(const Presentation& p, size_t orbit_cap = 10000);

  const Presentation& presentation() const { return p_; }
  const std::vector<Mark>& marks() const { return marks_; }
  int mark_index(const Mark& m) const;
  double density(int grid) const { return dens_[grid]; }
  double total_density() const { return total_; }
  double weight(int grid) const { return dens_[grid] / total_; }
  const TorusSampler& torus(int j, const std::optional<Mark>& mark) const;

  // Mark mode puts the origin on grid `mark`; remove_origin drops it from the configuration.
  RandomConfiguration sample(Philox& rng, const std::optional<Mark>& mark = std::nullopt,
                             bool remove_origin = true) const;
  // Draws a mark from the weights m(psi).
  Mark draw_mark(Philox& rng) const;

 private:
  Presentation p_;
  std::vector<Mark> marks_;
  std::vector<double> dens_;
  double total_ = 0;
  std::vector<double> c_;  // per mark
  std::vector<TorusSampler> generic_;
  std::vector<std::vector<TorusSampler>> marked_;
};

RandomConfiguration random_configuration(const ConfigSampler& s, const std::optional<Mark>& mark, Philox& rng);

// Points in (0, xi) x (shift - 1, shift + 1).
int64_t count_in_cylinder(const RandomConfiguration& conf, double xi, double shift = 0);
// Point of minimal first coordinate in (0, xmax) x (shift - 1, shift + 1), by doubling windows.
std::optional<StripPoint> first_in_strip(const RandomConfiguration& conf, double shift, double xmax);

struct TailMode {
  enum Kind { generic, mark, mark_averaged } kind = generic;
  Mark psi;
  double shift = 0;  // w' in mark mode
};

struct TailEstimate {
  std::vector<double> xi, F_raw, F_iso, stderr_;
  size_t n = 0;
  size_t censored = 0;  // samples with no point below max(xi)
  TailMode mode;
  int scope = -1;  // -1 whole presentation, else class index
};

TailEstimate tail_estimate(const ConfigSampler& s, const TailMode& mode, const std::vector<double>& xi_grid,
                           size_t n, uint64_t seed, int workers, int scope = -1);
TailEstimate product_tail(const std::vector<TailEstimate>& per_class);

struct PhiEstimate {
  std::vector<double> mid, phi;
};
PhiEstimate phi_from_tail(const TailEstimate& t, double upper_bound);

struct SiegelResult {
  double mean = 0, stderr_ = 0, predicted = 0;
  double atom_exact = 0, atom_mc = 0;
  size_t n = 0;
};
// Counts grid psi points in the open box; mode_mark selects mark mode (origin kept).
SiegelResult siegel_check(const ConfigSampler& s, const Mark& psi, const std::optional<Mark>& mode_mark,
                          const Rect& region, size_t n, uint64_t seed, int workers);

}  // namespace gg
