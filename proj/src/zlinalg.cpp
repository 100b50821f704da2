#include "zlinalg.hpp"

namespace gg {

Z floor_q(const Q& x) {
  Z r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Q frac(const Q& x) { return x - Q(floor_q(x)); }

std::vector<int> rref(QMat& a, int ncols) {
  std::vector<int> piv;
  int row = 0;
  int m = static_cast<int>(a.size());
  for (int c = 0; c < ncols && row < m; ++c) {
    int p = -1;
    for (int r = row; r < m; ++r)
      if (a[r][c] != 0) { p = r; break; }
    if (p < 0) continue;
    std::swap(a[p], a[row]);
    Q inv = 1 / a[row][c];
    for (int k = 0; k < ncols; ++k) a[row][k] *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == row || a[r][c] == 0) continue;
      Q f = a[r][c];
      for (int k = 0; k < ncols; ++k) a[r][k] -= f * a[row][k];
    }
    piv.push_back(c);
    ++row;
  }
  a.resize(row);
  return piv;
}

int rank(const QMat& a, int ncols) {
  QMat b = a;
  return static_cast<int>(rref(b, ncols).size());
}

QMat nullspace(const QMat& a, int ncols) {
  QMat b = a;
  auto piv = rref(b, ncols);
  std::vector<bool> is_piv(ncols, false);
  for (int p : piv) is_piv[p] = true;
  QMat out;
  for (int f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    QVec v(ncols, Q(0));
    v[f] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -b[r][f];
    out.push_back(v);
  }
  return out;
}

ZVec primitive_row(const QVec& v) {
  Z l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  ZVec z;
  Z g = 0;
  for (const auto& x : v) {
    z.push_back(Z(x * l));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.back().get_mpz_t());
  }
  if (g > 1)
    for (auto& x : z) x /= g;
  return z;
}

ZMat intker(const ZMat& a0, int n) {
  ZMat a = a0;
  ZMat u(n, ZVec(n, Z(0)));  // columns of u track column operations
  for (int i = 0; i < n; ++i) u[i][i] = 1;
  int m = static_cast<int>(a.size());
  auto colop = [&](int p, int j, const Z& s, const Z& t, const Z& x, const Z& y) {
    // new col p = s col_p + t col_j; new col j = x col_p + y col_j
    for (int r = 0; r < m; ++r) {
      Z cp = a[r][p], cj = a[r][j];
      a[r][p] = s * cp + t * cj;
      a[r][j] = x * cp + y * cj;
    }
    for (int r = 0; r < n; ++r) {
      Z cp = u[r][p], cj = u[r][j];
      u[r][p] = s * cp + t * cj;
      u[r][j] = x * cp + y * cj;
    }
  };
  int p = 0;
  for (int i = 0; i < m && p < n; ++i) {
    for (int j = p + 1; j < n; ++j) {
      if (a[i][j] == 0) continue;
      if (a[i][p] == 0) {
        colop(p, j, Z(0), Z(1), Z(1), Z(0));
        continue;
      }
      Z g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[i][p].get_mpz_t(), a[i][j].get_mpz_t());
      Z ap = a[i][p] / g, aj = a[i][j] / g;
      colop(p, j, s, t, -aj, ap);
    }
    if (a[i][p] != 0) ++p;
  }
  ZMat out;
  for (int j = p; j < n; ++j) {
    ZVec v(n);
    for (int r = 0; r < n; ++r) v[r] = u[r][j];
    out.push_back(v);
  }
  return hnf_rows(out, n);
}

ZMat hnf_rows(ZMat a, int ncols) {
  int m = static_cast<int>(a.size());
  int row = 0;
  for (int c = 0; c < ncols && row < m; ++c) {
    // gcd-combine rows row..m-1 on column c
    for (int r = row + 1; r < m; ++r) {
      if (a[r][c] == 0) continue;
      if (a[row][c] == 0) {
        std::swap(a[row], a[r]);
        continue;
      }
      Z g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[row][c].get_mpz_t(), a[r][c].get_mpz_t());
      Z x = a[row][c] / g, y = a[r][c] / g;
      for (int k = 0; k < ncols; ++k) {
        Z p = a[row][k], q = a[r][k];
        a[row][k] = s * p + t * q;
        a[r][k] = -y * p + x * q;
      }
    }
    if (a[row][c] == 0) continue;
    if (a[row][c] < 0)
      for (auto& x : a[row]) x = -x;
    for (int r = 0; r < row; ++r) {
      Z q;
      mpz_fdiv_q(q.get_mpz_t(), a[r][c].get_mpz_t(), a[row][c].get_mpz_t());
      if (q != 0)
        for (int k = 0; k < ncols; ++k) a[r][k] -= q * a[row][k];
    }
    ++row;
  }
  a.resize(row);
  return a;
}

QVec to_q(const ZVec& v) {
  QVec r;
  for (const auto& x : v) r.push_back(Q(x));
  return r;
}

QMat to_q(const ZMat& m) {
  QMat r;
  for (const auto& v : m) r.push_back(to_q(v));
  return r;
}

static ZMat integer_rows(const QMat& rows) {
  ZMat out;
  for (const auto& v : rows) out.push_back(primitive_row(v));
  return out;
}

RationalSubspace RationalSubspace::span(const QMat& rows, int r) {
  RationalSubspace L;
  L.r_ = r;
  for (const auto& v : rows)
    if (static_cast<int>(v.size()) != r) throw FieldError("dimension mismatch in subspace span");
  QMat orth = nullspace(rows, r);          // basis of L^perp
  L.basis_ = intker(integer_rows(orth), r);  // saturated L cap Z^r, HNF
  L.perp_ = intker(L.basis_, r);             // saturated L^perp cap Z^r
  return L;
}

RationalSubspace RationalSubspace::full(int r) {
  QMat id(r, QVec(r, Q(0)));
  for (int i = 0; i < r; ++i) id[i][i] = 1;
  return span(id, r);
}

bool RationalSubspace::contains(const QVec& v) const {
  for (const auto& p : perp_) {
    Q s = 0;
    for (int k = 0; k < r_; ++k) s += Q(p[k]) * v[k];
    if (s != 0) return false;
  }
  return true;
}

bool RationalSubspace::contains_mod_lattice(const QVec& v) const {
  for (const auto& p : perp_) {
    Q s = 0;
    for (int k = 0; k < r_; ++k) s += Q(p[k]) * v[k];
    if (s.get_den() != 1) return false;
  }
  return true;
}

QVec RationalSubspace::coset_key(const QVec& v) const {
  QVec key;
  for (const auto& p : perp_) {
    Q s = 0;
    for (int k = 0; k < r_; ++k) s += Q(p[k]) * v[k];
    key.push_back(frac(s));
  }
  return key;
}

bool RationalSubspace::subset_of(const RationalSubspace& o) const {
  for (const auto& b : basis_)
    if (!o.contains(to_q(b))) return false;
  return true;
}

RationalSubspace RationalSubspace::intersect(const RationalSubspace& o) const {
  QMat perps = to_q(perp_);
  for (const auto& p : o.perp_) perps.push_back(to_q(p));
  return span(nullspace(perps, r_), r_);
}

RationalSubspace RationalSubspace::plus(const RationalSubspace& o) const {
  QMat rows = to_q(basis_);
  for (const auto& b : o.basis_) rows.push_back(to_q(b));
  return span(rows, r_);
}

}  // namespace gg
