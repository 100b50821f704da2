#pragma once

#include "exactfield.hpp"

namespace gg {

using ZVec = std::vector<Z>;
using ZMat = std::vector<ZVec>;
using QMat = std::vector<QVec>;

// Reduced row echelon form; returns pivot columns.
std::vector<int> rref(QMat& a, int ncols);
int rank(const QMat& a, int ncols);
// Rows form a basis of {x in Q^n : a x = 0}.
QMat nullspace(const QMat& a, int ncols);
// Row scaled to a primitive integer vector (zero stays zero).
ZVec primitive_row(const QVec& v);
// Rows form a Z-basis of {x in Z^n : a x = 0}.
ZMat intker(const ZMat& a, int ncols);
// Row Hermite normal form (upper triangular, positive pivots, reduced above); zero rows dropped.
ZMat hnf_rows(ZMat a, int ncols);

QVec to_q(const ZVec& v);
QMat to_q(const ZMat& m);

// Rational subspace of Q^r stored as the HNF of the saturated lattice L cap Z^r,
// together with a saturated basis of L^perp cap Z^r.
class RationalSubspace {
 public:
  RationalSubspace() = default;
  static RationalSubspace span(const QMat& rows, int r);
  static RationalSubspace zero(int r) { return span({}, r); }
  static RationalSubspace full(int r);

  int ambient() const { return r_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const ZMat& basis() const { return basis_; }
  const ZMat& perp() const { return perp_; }

  bool contains(const QVec& v) const;
  bool contains_mod_lattice(const QVec& v) const;  // v in L + Z^r
  bool subset_of(const RationalSubspace& o) const;
  RationalSubspace intersect(const RationalSubspace& o) const;
  RationalSubspace plus(const RationalSubspace& o) const;
  // Canonical key of v in Q^r / (L + Z^r): perp * v reduced mod 1.
  QVec coset_key(const QVec& v) const;

  bool operator==(const RationalSubspace& o) const { return r_ == o.r_ && basis_ == o.basis_; }
  bool operator!=(const RationalSubspace& o) const { return !(*this == o); }

 private:
  int r_ = 0;
  ZMat basis_;
  ZMat perp_;
};

Q frac(const Q& x);  // x - floor(x), in [0,1)
Z floor_q(const Q& x);

}  // namespace gg
