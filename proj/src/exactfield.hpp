#pragma once

#include <gmpxx.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace gg {

using Q = mpq_class;
using Z = mpz_class;
using QVec = std::vector<Q>;

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "p/q" or "p" (also "-p/q"). Throws FieldError on malformed input or q == 0.
Q parse_rational(const std::string& s);
std::string format_rational(const Q& q);

namespace poly {
// Polynomials over Q, constant term first, no trailing zeros (zero poly is empty).
void trim(QVec& p);
QVec mul(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
void divmod(const QVec& a, const QVec& b, QVec& quo, QVec& rem);
QVec gcd(QVec a, QVec b);  // monic
QVec derivative(const QVec& a);
Q eval(const QVec& a, const Q& x);
int sturm_count(const QVec& f, const Q& lo, const Q& hi);  // roots in (lo, hi]
bool has_rational_root(const QVec& f);
bool irreducible_small(const QVec& f);  // deg <= 4 only
}  // namespace poly

// A real number field Q(alpha): minimal polynomial plus an isolating interval.
class Field {
 public:
  static std::shared_ptr<const Field> make(QVec minpoly, Q lo, Q hi);
  static std::shared_ptr<const Field> rationals();

  int degree() const { return static_cast<int>(f_.size()) - 1; }
  const QVec& minpoly() const { return f_; }
  const Q& lo() const { return lo_; }
  const Q& hi() const { return hi_; }
  double alpha() const { return alpha_; }
  bool irreducibility_checked() const { return irr_checked_; }
  bool same(const Field& o) const;

  // Reduction of x^k for k in [deg, 2 deg - 2], as coefficient vectors.
  const std::vector<QVec>& powers() const { return pow_; }
  // A tighter isolating interval computed once at construction.
  const Q& tight_lo() const { return tlo_; }
  const Q& tight_hi() const { return thi_; }
  int sign_at(const Q& x) const;

 private:
  Field() = default;
  QVec f_;
  Q lo_, hi_, tlo_, thi_;
  double alpha_ = 0;
  bool irr_checked_ = false;
  std::vector<QVec> pow_;
};

using FieldPtr = std::shared_ptr<const Field>;

// Element sum_t c[t] alpha^t of a Field.
class Num {
 public:
  Num() = default;
  explicit Num(FieldPtr f);
  Num(FieldPtr f, const Q& q);
  Num(FieldPtr f, QVec coeffs);

  const FieldPtr& field() const { return f_; }
  const QVec& coeffs() const { return c_; }
  const Q& coeff(int t) const { return c_[t]; }
  int degree() const { return static_cast<int>(c_.size()); }

  bool is_zero() const;
  bool is_rational() const;
  const Q& rational_part() const { return c_[0]; }
  double to_double() const;
  int sign() const;

  Num operator-() const;
  Num& operator+=(const Num& b);
  Num& operator-=(const Num& b);
  Num& operator*=(const Num& b);
  Num& operator/=(const Num& b);
  Num& operator*=(const Q& b);
  Num inverse() const;

  friend Num operator+(Num a, const Num& b) { return a += b; }
  friend Num operator-(Num a, const Num& b) { return a -= b; }
  friend Num operator*(Num a, const Num& b) { return a *= b; }
  friend Num operator/(Num a, const Num& b) { return a /= b; }
  friend Num operator*(Num a, const Q& b) { return a *= b; }
  friend Num operator*(const Q& b, Num a) { return a *= b; }
  bool operator==(const Num& o) const;
  bool operator!=(const Num& o) const { return !(*this == o); }

 private:
  void check_same(const Num& b) const;
  FieldPtr f_;
  QVec c_;
};

enum class ArithOp { add, sub, mul, div };
Num nf_arith(ArithOp op, const Num& a, const Num& b);
int nf_sign(const Num& a);
int nf_compare(const Num& a, const Num& b);

using NVec = std::vector<Num>;
using NMat = std::vector<NVec>;

// v = sum_t alpha^t v_t; returns v_0 .. v_{deg-1}, each of length v.size().
std::vector<QVec> nf_coefficient_vectors(const NVec& v);
NVec nf_assemble(const FieldPtr& f, const std::vector<QVec>& parts);

NVec nvec_zero(const FieldPtr& f, int n);
NMat nmat_identity(const FieldPtr& f, int n);
NMat nmat_mul(const NMat& a, const NMat& b);
NVec nvec_mat(const NVec& v, const NMat& m);  // row vector times matrix
Num nmat_det(const NMat& a);
NMat nmat_inverse(const NMat& a);

}  // namespace gg
