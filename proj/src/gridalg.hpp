#pragma once

#include <optional>
#include <set>

#include "exactfield.hpp"
#include "zlinalg.hpp"

namespace gg {

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OrbitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// c (Z^d + w) M with det M = 1.
struct Grid {
  Num c;
  NVec w;
  NMat M;
};

struct Member {
  Num c;
  NVec w;
};

struct ClassData {
  NMat M;
  std::vector<Member> members;
};

// Zero-based (class, member) index.
struct Mark {
  int j = 0, i = 0;
  bool operator==(const Mark& o) const { return j == o.j && i == o.i; }
  bool operator<(const Mark& o) const { return j != o.j ? j < o.j : i < o.i; }
};

struct Presentation {
  FieldPtr field;
  int dim = 2;
  std::vector<ClassData> classes;

  int N() const { return static_cast<int>(classes.size()); }
  int r(int j) const { return static_cast<int>(classes.at(j).members.size()); }
  std::vector<Mark> marks() const;
  const Member& member(const Mark& m) const { return classes.at(m.j).members.at(m.i); }
  Num density_exact(const Mark& m) const;  // c^{-d}
  double density(const Mark& m) const;
  double total_density() const;
  double weight(const Mark& m) const;
  std::vector<Grid> grids() const;
  Presentation restrict_to_class(int j) const;
};

// Canonical residue: rational parts of w reduced into [0,1).
NVec canonical_residue(const NVec& w);
Grid normalize(const Grid& g);
bool same_point_set(const Grid& a, const Grid& b);
void validate_grid(const Grid& g);

RationalSubspace frakL(const std::vector<NVec>& vectors, const std::optional<NVec>& line, int r);
bool in_subspace_mod_lattice(const NVec& v, const RationalSubspace& L);

struct CommWitness {
  QMat T;
  Num lambda;
};
// M2 M1^{-1} = lambda T with T rational, if it exists.
std::optional<CommWitness> commensurable_matrices(const NMat& M1, const NMat& M2);
std::optional<CommWitness> commensurable(const Grid& g1, const Grid& g2);
std::vector<std::vector<int>> partition_classes(const std::vector<Grid>& grids);
ClassData merge_class(const std::vector<Grid>& grids);
Presentation canonical_presentation(const FieldPtr& f, int dim, const std::vector<Grid>& grids);

// Members with rational scale ratios rewritten to one common scale, duplicates removed, sorted.
std::vector<Member> disjointness_rewrite(const std::vector<Member>& members);
// Rewrites only the rational-ratio groups that contain overlapping grids.
std::vector<Member> disjoint_form(const std::vector<Member>& members);
void sort_members(std::vector<Member>& members);
bool members_disjoint(const std::vector<Member>& members);
bool classes_incommensurable(const Presentation& p);

NVec c_tilde(const Presentation& p, int j);
NVec c_psi(const Presentation& p, const Mark& psi, int j);
NMat W_of(const Presentation& p, int j);
NMat W_psi(const Presentation& p, const Mark& psi, int j);
RationalSubspace subspace_Lpsi(const Presentation& p, const Mark& psi, int j);
RationalSubspace subspace_Lj(const Presentation& p, int j);

struct AdmissibleVerdict {
  bool admissible = true;
  std::vector<Mark> failing;
};
AdmissibleVerdict is_admissible(const Presentation& p);
Presentation make_admissible(const Presentation& p);

NMat U_of_q(const Presentation& p, int j, const NVec& q);
bool in_grid(const Presentation& p, const Mark& psi, const NVec& q);

struct TorusComponentSet {
  int j = 0;
  int r = 0, d = 2;
  std::optional<Mark> mark;
  RationalSubspace L;
  NMat U0;
  std::vector<QMat> reps;  // r x d rational representatives, entries in [0,1)
};
TorusComponentSet torus_data(const Presentation& p, int j, const std::optional<Mark>& mark,
                             const std::optional<NVec>& q = std::nullopt, size_t cap = 10000);

// Exact points of the presentation inside [lo, hi]^d (set semantics).
using PointKey = std::vector<Q>;
std::set<PointKey> window_points(const std::vector<Grid>& grids, const Q& lo, const Q& hi);
std::set<PointKey> window_points(const Presentation& p, const Q& lo, const Q& hi);

}  // namespace gg
