#include "exactfield.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace gg {

Q parse_rational(const std::string& s) {
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  auto slash = t.find('/');
  auto valid_int = [](const std::string& x) {
    size_t i = (!x.empty() && (x[0] == '-' || x[0] == '+')) ? 1 : 0;
    if (i >= x.size()) return false;
    for (; i < x.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(x[i]))) return false;
    return true;
  };
  std::string num = slash == std::string::npos ? t : t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-')
    throw FieldError("malformed rational \"" + s + "\"");
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  Z n(num, 10), d(den, 10);
  if (d == 0) throw FieldError("zero denominator in \"" + s + "\"");
  Q q(n, d);
  q.canonicalize();
  return q;
}

std::string format_rational(const Q& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace poly {

void trim(QVec& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QVec mul(const QVec& a, const QVec& b) {
  if (a.empty() || b.empty()) return {};
  QVec r(a.size() + b.size() - 1, Q(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

QVec sub(const QVec& a, const QVec& b) {
  QVec r(std::max(a.size(), b.size()), Q(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

void divmod(const QVec& a, const QVec& b, QVec& quo, QVec& rem) {
  if (b.empty()) throw FieldError("polynomial division by zero");
  rem = a;
  trim(rem);
  quo.assign(rem.size() >= b.size() ? rem.size() - b.size() + 1 : 0, Q(0));
  while (!rem.empty() && rem.size() >= b.size()) {
    size_t shift = rem.size() - b.size();
    Q f = rem.back() / b.back();
    quo[shift] = f;
    for (size_t i = 0; i < b.size(); ++i) rem[shift + i] -= f * b[i];
    rem.pop_back();
    trim(rem);
  }
  trim(quo);
}

QVec gcd(QVec a, QVec b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    QVec q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Q lead = a.back();
    for (auto& x : a) x /= lead;
  }
  return a;
}

QVec derivative(const QVec& a) {
  QVec r;
  for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * Q(static_cast<long>(i)));
  trim(r);
  return r;
}

Q eval(const QVec& a, const Q& x) {
  Q r = 0;
  for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
  return r;
}

static int sgnq(const Q& q) { return mpq_sgn(q.get_mpq_t()); }

static int sign_changes(const std::vector<QVec>& seq, const Q& x) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    int s = sgnq(eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int sturm_count(const QVec& f, const Q& lo, const Q& hi) {
  std::vector<QVec> seq{f, derivative(f)};
  while (!seq.back().empty()) {
    QVec q, r;
    divmod(seq[seq.size() - 2], seq.back(), q, r);
    for (auto& x : r) x = -x;
    if (r.empty()) break;
    seq.push_back(r);
  }
  return sign_changes(seq, lo) - sign_changes(seq, hi);
}

static std::vector<Z> divisors(Z n) {
  n = abs(n);
  std::vector<Z> out;
  if (n == 0) return out;
  for (Z d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  }
  return out;
}

static std::vector<Z> integer_coeffs(const QVec& f) {
  Z l = 1;
  for (const auto& c : f) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Z> r;
  for (const auto& c : f) r.push_back(Z(c * l));
  return r;
}

bool has_rational_root(const QVec& f) {
  if (f.size() <= 1) return false;
  if (f[0] == 0) return true;
  auto a = integer_coeffs(f);
  for (const Z& p : divisors(a.front()))
    for (const Z& q : divisors(a.back()))
      for (int s : {1, -1})
        if (eval(f, Q(s * p, q)) == 0) return true;
  return false;
}

// Solves for an integer quadratic factor (p x^2 + a x + b)(r x^2 + c x + d) of a quartic.
static bool has_quadratic_factor(const QVec& f) {
  auto A = integer_coeffs(f);  // A[0..4]
  for (const Z& p : divisors(A[4])) {
    Z r = A[4] / p;
    for (const Z& b0 : divisors(A[0])) {
      for (int sb : {1, -1}) {
        Z b = sb * b0;
        Z d = A[0] / b;
        // x^3: p c + a r = A3 ; x^1: a d + b c = A1
        Z det = p * d - r * b;
        std::vector<std::pair<Q, Q>> cand;
        if (det != 0) {
          Q c = Q(A[3] * d - A[1] * r, det);
          Q a = Q(A[1] * p - A[3] * b, det);
          cand.push_back({a, c});
        } else {
          // a = (A3 - p c)/r; x^2: p d + a c + b r = A2 -> -p c^2 + A3 c + r(p d + b r - A2) = 0
          Q qa = Q(-p), qb = Q(A[3]), qc = Q(r * (p * d + b * r - A[2]));
          Q disc = qb * qb - 4 * qa * qc;
          if (disc < 0) continue;
          Z num = disc.get_num(), den = disc.get_den();
          Z sn = sqrt(num), sd = sqrt(den);
          if (sn * sn != num || sd * sd != den) continue;
          Q s(sn, sd);
          for (Q c : std::vector<Q>{Q((-qb + s) / (2 * qa)), Q((-qb - s) / (2 * qa))}) cand.push_back({(Q(A[3]) - Q(p) * c) / Q(r), c});
        }
        for (auto& [a, c] : cand) {
          if (a.get_den() != 1 || c.get_den() != 1) continue;
          QVec g{Q(b), a, Q(p)}, h{Q(d), c, Q(r)};
          QVec prod = mul(g, h);
          QVec fi;
          for (const Z& z : A) fi.push_back(Q(z));
          trim(fi);
          if (prod == fi) return true;
        }
      }
    }
  }
  return false;
}

bool irreducible_small(const QVec& f) {
  int deg = static_cast<int>(f.size()) - 1;
  if (deg <= 1) return deg == 1;
  if (has_rational_root(f)) return false;
  if (deg <= 3) return true;
  if (deg == 4) return !has_quadratic_factor(f);
  return true;
}

}  // namespace poly

namespace {
int qsign(const Q& q) { return mpq_sgn(q.get_mpq_t()); }
}  // namespace

int Field::sign_at(const Q& x) const { return qsign(poly::eval(f_, x)); }

std::shared_ptr<const Field> Field::make(QVec f, Q lo, Q hi) {
  poly::trim(f);
  if (f.size() < 2) throw FieldError("minpoly must have degree >= 1");
  Q lead = f.back();
  for (auto& c : f) c /= lead;
  if (!(lo < hi)) throw FieldError("root_interval requires lo < hi");
  std::shared_ptr<Field> F(new Field());
  F->f_ = f;
  F->lo_ = lo;
  F->hi_ = hi;
  int deg = F->degree();
  if (poly::gcd(f, poly::derivative(f)).size() != 1)
    throw FieldError("minpoly is not squarefree");
  if (F->sign_at(lo) == 0 || F->sign_at(hi) == 0)
    throw FieldError("root_interval endpoint is a root of minpoly");
  if (poly::sturm_count(f, lo, hi) != 1)
    throw FieldError("root_interval must contain exactly one real root of minpoly");
  if (deg <= 4) {
    if (!poly::irreducible_small(f)) throw FieldError("minpoly is reducible over Q");
    F->irr_checked_ = true;
  }
  // Powers alpha^k, k = deg .. 2deg-2, reduced modulo f.
  QVec cur(deg, Q(0));
  for (int t = 0; t < deg; ++t) cur[t] = -f[t];
  for (int k = deg; k <= 2 * deg - 2; ++k) {
    F->pow_.push_back(cur);
    QVec nxt(deg, Q(0));
    for (int t = 0; t + 1 < deg; ++t) nxt[t + 1] = cur[t];
    Q top = cur[deg - 1];
    for (int t = 0; t < deg; ++t) nxt[t] -= top * f[t];
    cur = nxt;
  }
  Q a = lo, b = hi;
  int sa = F->sign_at(a);
  Q width_goal("1/1000000000000000000000000000000");
  while (b - a > width_goal) {
    Q m = (a + b) / 2;
    int sm = F->sign_at(m);
    if (sm == 0) {
      a = b = m;
      break;
    }
    if (sm == sa) a = m; else b = m;
  }
  F->tlo_ = a;
  F->thi_ = b;
  F->alpha_ = Q((a + b) / 2).get_d();
  return F;
}

std::shared_ptr<const Field> Field::rationals() {
  static const FieldPtr q = Field::make({Q(0), Q(1)}, Q(-1), Q(1));
  return q;
}

bool Field::same(const Field& o) const {
  if (this == &o) return true;
  if (f_ != o.f_) return false;
  // Same polynomial: compare the selected roots via interval overlap.
  Q l = std::max(tlo_, o.tlo_), h = std::min(thi_, o.thi_);
  return l <= h;
}

Num::Num(FieldPtr f) : f_(std::move(f)), c_(f_->degree(), Q(0)) {}

Num::Num(FieldPtr f, const Q& q) : Num(std::move(f)) {
  c_[0] = q;
  c_[0].canonicalize();
}

Num::Num(FieldPtr f, QVec coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
  for (auto& x : c_) x.canonicalize();
  if (static_cast<int>(c_.size()) > f_->degree()) {
    // Reduce a longer polynomial modulo minpoly.
    QVec q, r;
    poly::divmod(c_, f_->minpoly(), q, r);
    c_ = r;
  }
  c_.resize(f_->degree(), Q(0));
}

void Num::check_same(const Num& b) const {
  if (!f_ || !b.f_) throw FieldError("uninitialized field element");
  if (f_ != b.f_ && !f_->same(*b.f_)) throw FieldError("mismatched field specs");
}

bool Num::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool Num::is_rational() const {
  for (size_t t = 1; t < c_.size(); ++t)
    if (c_[t] != 0) return false;
  return true;
}

double Num::to_double() const {
  double a = f_->alpha(), r = 0;
  for (size_t t = c_.size(); t-- > 0;) r = r * a + c_[t].get_d();
  return r;
}

Num Num::operator-() const {
  Num r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Num& Num::operator+=(const Num& b) {
  check_same(b);
  for (size_t t = 0; t < c_.size(); ++t) c_[t] += b.c_[t];
  return *this;
}

Num& Num::operator-=(const Num& b) {
  check_same(b);
  for (size_t t = 0; t < c_.size(); ++t) c_[t] -= b.c_[t];
  return *this;
}

Num& Num::operator*=(const Q& b) {
  for (auto& x : c_) x *= b;
  return *this;
}

Num& Num::operator*=(const Num& b) {
  check_same(b);
  int n = f_->degree();
  if (n == 1) {
    c_[0] *= b.c_[0];
    return *this;
  }
  if (b.is_rational()) return *this *= b.c_[0];
  if (is_rational()) {
    Q s = c_[0];
    c_ = b.c_;
    return *this *= s;
  }
  QVec prod(2 * n - 1, Q(0));
  for (int i = 0; i < n; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      if (b.c_[j] != 0) prod[i + j] += c_[i] * b.c_[j];
  }
  QVec r(prod.begin(), prod.begin() + n);
  const auto& pw = f_->powers();
  for (int k = n; k < 2 * n - 1; ++k) {
    if (prod[k] == 0) continue;
    for (int t = 0; t < n; ++t) r[t] += prod[k] * pw[k - n][t];
  }
  c_ = std::move(r);
  return *this;
}

Num Num::inverse() const {
  if (is_zero()) throw FieldError("division by zero");
  if (is_rational()) return Num(f_, Q(1) / c_[0]);
  // Extended Euclid: s*a + t*f = 1.
  QVec a = c_;
  poly::trim(a);
  QVec r0 = f_->minpoly(), r1 = a;
  QVec s0{}, s1{Q(1)};
  while (!r1.empty()) {
    QVec q, r;
    poly::divmod(r0, r1, q, r);
    QVec s = poly::sub(s0, poly::mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.size() != 1) throw FieldError("element not invertible (minpoly reducible?)");
  Q g = r0[0];
  for (auto& x : s0) x /= g;
  return Num(f_, s0);
}

Num& Num::operator/=(const Num& b) {
  check_same(b);
  return *this *= b.inverse();
}

bool Num::operator==(const Num& o) const {
  check_same(o);
  return c_ == o.c_;
}

int Num::sign() const { return nf_sign(*this); }

Num nf_arith(ArithOp op, const Num& a, const Num& b) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
  }
  throw FieldError("unknown op");
}

namespace {
struct Interval {
  Q lo, hi;
};

Interval imul(const Interval& a, const Interval& b) {
  Q p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval eval_interval(const QVec& c, const Q& lo, const Q& hi) {
  Interval x{lo, hi}, r{Q(0), Q(0)};
  for (size_t t = c.size(); t-- > 0;) {
    r = imul(r, x);
    r.lo += c[t];
    r.hi += c[t];
  }
  return r;
}
}  // namespace

int nf_sign(const Num& a) {
  if (a.is_zero()) return 0;
  if (a.is_rational()) return qsign(a.coeff(0));
  const Field& F = *a.field();
  Q lo = F.tight_lo(), hi = F.tight_hi();
  int slo = F.sign_at(lo);
  for (;;) {
    Interval v = eval_interval(a.coeffs(), lo, hi);
    if (v.lo > 0) return 1;
    if (v.hi < 0) return -1;
    Q m = (lo + hi) / 2;
    int sm = F.sign_at(m);
    if (sm == 0) {
      // alpha is rational (only possible if minpoly was not irreducible).
      return qsign(poly::eval(a.coeffs(), m));
    }
    if (sm == slo) lo = m; else hi = m;
  }
}

int nf_compare(const Num& a, const Num& b) { return nf_sign(a - b); }

std::vector<QVec> nf_coefficient_vectors(const NVec& v) {
  if (v.empty()) return {};
  const FieldPtr& f = v[0].field();
  int n = f->degree();
  std::vector<QVec> out(n, QVec(v.size(), Q(0)));
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k].field() != f && !v[k].field()->same(*f)) throw FieldError("mismatched field specs");
    for (int t = 0; t < n; ++t) out[t][k] = v[k].coeff(t);
  }
  return out;
}

NVec nf_assemble(const FieldPtr& f, const std::vector<QVec>& parts) {
  if (parts.empty()) return {};
  size_t r = parts[0].size();
  NVec out;
  for (size_t k = 0; k < r; ++k) {
    QVec c(f->degree(), Q(0));
    for (size_t t = 0; t < parts.size(); ++t) c[t] = parts[t][k];
    out.emplace_back(f, c);
  }
  return out;
}

NVec nvec_zero(const FieldPtr& f, int n) { return NVec(n, Num(f)); }

NMat nmat_identity(const FieldPtr& f, int n) {
  NMat m(n, nvec_zero(f, n));
  for (int i = 0; i < n; ++i) m[i][i] = Num(f, Q(1));
  return m;
}

NMat nmat_mul(const NMat& a, const NMat& b) {
  const FieldPtr& f = a[0][0].field();
  NMat r(a.size(), nvec_zero(f, static_cast<int>(b[0].size())));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k) {
      if (a[i][k].is_zero()) continue;
      for (size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

NVec nvec_mat(const NVec& v, const NMat& m) {
  const FieldPtr& f = m[0][0].field();
  NVec r = nvec_zero(f, static_cast<int>(m[0].size()));
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    for (size_t j = 0; j < m[0].size(); ++j) r[j] += v[k] * m[k][j];
  }
  return r;
}

Num nmat_det(const NMat& a0) {
  NMat a = a0;
  int n = static_cast<int>(a.size());
  const FieldPtr& f = a[0][0].field();
  Num det(f, Q(1));
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r)
      if (!a[r][c].is_zero()) { p = r; break; }
    if (p < 0) return Num(f);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    Num inv = a[c][c].inverse();
    for (int r = c + 1; r < n; ++r) {
      if (a[r][c].is_zero()) continue;
      Num m = a[r][c] * inv;
      for (int k = c; k < n; ++k) a[r][k] -= m * a[c][k];
    }
  }
  return det;
}

NMat nmat_inverse(const NMat& a0) {
  NMat a = a0;
  int n = static_cast<int>(a.size());
  const FieldPtr& f = a[0][0].field();
  NMat inv = nmat_identity(f, n);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r)
      if (!a[r][c].is_zero()) { p = r; break; }
    if (p < 0) throw FieldError("singular matrix");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Num piv = a[c][c].inverse();
    for (int k = 0; k < n; ++k) {
      a[c][k] *= piv;
      inv[c][k] *= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      Num m = a[r][c];
      for (int k = 0; k < n; ++k) {
        a[r][k] -= m * a[c][k];
        inv[r][k] -= m * inv[c][k];
      }
    }
  }
  return inv;
}

}  // namespace gg
