#include "gridalg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

namespace gg {

std::vector<Mark> Presentation::marks() const {
  std::vector<Mark> out;
  for (int j = 0; j < N(); ++j)
    for (int i = 0; i < r(j); ++i) out.push_back({j, i});
  return out;
}

Num Presentation::density_exact(const Mark& m) const {
  const Num& c = member(m).c;
  Num cd(field, Q(1));
  for (int k = 0; k < dim; ++k) cd *= c;
  return cd.inverse();
}

double Presentation::density(const Mark& m) const {
  return std::pow(member(m).c.to_double(), -dim);
}

double Presentation::total_density() const {
  double s = 0;
  for (const auto& m : marks()) s += density(m);
  return s;
}

double Presentation::weight(const Mark& m) const { return density(m) / total_density(); }

std::vector<Grid> Presentation::grids() const {
  std::vector<Grid> out;
  for (const auto& cls : classes)
    for (const auto& mem : cls.members) out.push_back({mem.c, mem.w, cls.M});
  return out;
}

Presentation Presentation::restrict_to_class(int j) const {
  Presentation p;
  p.field = field;
  p.dim = dim;
  p.classes.push_back(classes.at(j));
  return p;
}

NVec canonical_residue(const NVec& w) {
  NVec out = w;
  for (auto& x : out) {
    QVec c = x.coeffs();
    c[0] = frac(c[0]);
    x = Num(x.field(), c);
  }
  return out;
}

Grid normalize(const Grid& g) { return {g.c, canonical_residue(g.w), g.M}; }

bool same_point_set(const Grid& a, const Grid& b) {
  return a.c == b.c && a.M == b.M && canonical_residue(a.w) == canonical_residue(b.w);
}

void validate_grid(const Grid& g) {
  int d = static_cast<int>(g.w.size());
  if (d < 2) throw GridError("grid dimension must be >= 2");
  if (static_cast<int>(g.M.size()) != d) throw GridError("matrix size does not match translation length");
  for (const auto& row : g.M)
    if (static_cast<int>(row.size()) != d) throw GridError("matrix must be square");
  if (nf_sign(g.c) <= 0) throw GridError("grid scale c must be positive");
  if (nmat_det(g.M) != Num(g.c.field(), Q(1))) throw GridError("grid matrix must have det 1");
}

RationalSubspace frakL(const std::vector<NVec>& vectors, const std::optional<NVec>& line, int r) {
  QMat rows;
  for (const auto& v : vectors) {
    if (static_cast<int>(v.size()) != r) throw GridError("dimension mismatch in frakL");
    auto parts = nf_coefficient_vectors(v);
    for (size_t t = 1; t < parts.size(); ++t) rows.push_back(parts[t]);
  }
  if (line) {
    if (static_cast<int>(line->size()) != r) throw GridError("dimension mismatch in frakL line");
    for (auto& part : nf_coefficient_vectors(*line)) rows.push_back(part);
  }
  return RationalSubspace::span(rows, r);
}

bool in_subspace_mod_lattice(const NVec& v, const RationalSubspace& L) {
  auto parts = nf_coefficient_vectors(v);
  for (size_t t = 1; t < parts.size(); ++t)
    if (!L.contains(parts[t])) return false;
  return L.contains_mod_lattice(parts[0]);
}

std::optional<CommWitness> commensurable_matrices(const NMat& M1, const NMat& M2) {
  if (M1.size() != M2.size()) return std::nullopt;
  NMat R = nmat_mul(M2, nmat_inverse(M1));
  const Num* lead = nullptr;
  for (const auto& row : R)
    for (const auto& x : row)
      if (!lead && !x.is_zero()) lead = &x;
  Num lambda = *lead;
  Num inv = lambda.inverse();
  QMat T;
  for (const auto& row : R) {
    QVec tr;
    for (const auto& x : row) {
      Num t = x * inv;
      if (!t.is_rational()) return std::nullopt;
      tr.push_back(t.rational_part());
    }
    T.push_back(tr);
  }
  return CommWitness{T, lambda};
}

std::optional<CommWitness> commensurable(const Grid& g1, const Grid& g2) {
  if (g1.w.size() != g2.w.size()) return std::nullopt;
  return commensurable_matrices(g1.M, g2.M);
}

std::vector<std::vector<int>> partition_classes(const std::vector<Grid>& grids) {
  if (grids.empty()) throw GridError("empty grid list");
  int n = static_cast<int>(grids.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (find(a) != find(b) && commensurable(grids[a], grids[b])) parent[find(b)] = find(a);
  std::vector<std::vector<int>> out;
  std::map<int, int> slot;
  for (int a = 0; a < n; ++a) {
    int root = find(a);
    auto it = slot.find(root);
    if (it == slot.end()) {
      slot[root] = static_cast<int>(out.size());
      out.push_back({a});
    } else {
      out[it->second].push_back(a);
    }
  }
  return out;
}

namespace {

Q qdet(QMat a) {
  int n = static_cast<int>(a.size());
  Q det = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c] != 0) { p = r; break; }
    if (p < 0) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      Q m = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= m * a[c][k];
    }
  }
  return det;
}

QMat qinverse(QMat a) {
  int n = static_cast<int>(a.size());
  QMat aug(n, QVec(2 * n, Q(0)));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) aug[i][k] = a[i][k];
    aug[i][n + i] = 1;
  }
  rref(aug, 2 * n);
  QMat inv(n, QVec(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) inv[i][k] = aug[i][n + k];
  return inv;
}

NVec nvec_times_q(const NVec& v, const QMat& T) {
  NVec r = nvec_zero(v[0].field(), static_cast<int>(T[0].size()));
  for (size_t k = 0; k < v.size(); ++k)
    for (size_t j = 0; j < T[0].size(); ++j)
      if (T[k][j] != 0) r[j] += v[k] * T[k][j];
  return r;
}

// Calls f on every integer vector in prod [0, n_k).
template <class F>
void odometer(const std::vector<Z>& n, F&& f) {
  int d = static_cast<int>(n.size());
  for (const auto& x : n)
    if (x <= 0) return;
  std::vector<Z> k(d, Z(0));
  for (;;) {
    f(k);
    int a = 0;
    while (a < d) {
      if (++k[a] < n[a]) break;
      k[a] = 0;
      ++a;
    }
    if (a == d) return;
  }
}

bool member_less(const Member& a, const Member& b) {
  int s = nf_compare(a.c, b.c);
  if (s != 0) return s < 0;
  for (size_t k = 0; k < a.w.size(); ++k) {
    s = nf_compare(a.w[k], b.w[k]);
    if (s != 0) return s < 0;
  }
  return false;
}

bool member_equal(const Member& a, const Member& b) { return a.c == b.c && a.w == b.w; }

// Groups of member indices whose scales have rational ratios.
std::vector<std::vector<int>> rational_groups(const std::vector<Member>& members) {
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < static_cast<int>(members.size()); ++i) {
    bool placed = false;
    for (auto& g : groups) {
      if ((members[i].c / members[g[0]].c).is_rational()) {
        g.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({i});
  }
  return groups;
}

// Expands every rational group to a single scale; no deduplication.
std::vector<Member> expand_groups(const std::vector<Member>& members) {
  std::vector<Member> out;
  for (const auto& g : rational_groups(members)) {
    const Num& b = members[g[0]].c;
    Z lnum = 1, gden = 0;
    std::vector<Q> rho;
    for (int i : g) {
      Q q = (members[i].c / b).rational_part();
      rho.push_back(q);
      mpz_lcm(lnum.get_mpz_t(), lnum.get_mpz_t(), q.get_num_mpz_t());
      mpz_gcd(gden.get_mpz_t(), gden.get_mpz_t(), q.get_den_mpz_t());
    }
    Q L(lnum, gden);
    L.canonicalize();
    Num cJ = b * L;
    for (size_t k = 0; k < g.size(); ++k) {
      const Member& m = members[g[k]];
      Q nq = L / rho[k];
      if (nq.get_den() != 1) throw GridError("internal: non-integral lcm ratio");
      Z n = nq.get_num();
      if (n == 1) {
        out.push_back({cJ, m.w});
        continue;
      }
      std::vector<Z> box(m.w.size(), n);
      Q inv_n(Z(1), n);
      odometer(box, [&](const std::vector<Z>& kk) {
        NVec w = m.w;
        for (size_t a = 0; a < w.size(); ++a) w[a] = (w[a] + Num(w[a].field(), Q(kk[a]))) * inv_n;
        out.push_back({cJ, w});
      });
    }
  }
  return out;
}

}  // namespace

void sort_members(std::vector<Member>& members) {
  std::sort(members.begin(), members.end(), member_less);
}

std::vector<Member> disjointness_rewrite(const std::vector<Member>& members) {
  std::vector<Member> out = expand_groups(members);
  for (auto& m : out) m.w = canonical_residue(m.w);
  sort_members(out);
  out.erase(std::unique(out.begin(), out.end(), member_equal), out.end());
  return out;
}

std::vector<Member> disjoint_form(const std::vector<Member>& members) {
  std::vector<Member> out;
  for (const auto& g : rational_groups(members)) {
    std::vector<Member> grp;
    for (int i : g) grp.push_back(members[i]);
    std::vector<Member> rew = disjointness_rewrite(grp);
    if (rew.size() == expand_groups(grp).size()) {
      for (auto& m : grp) m.w = canonical_residue(m.w);
      out.insert(out.end(), grp.begin(), grp.end());
    } else {
      out.insert(out.end(), rew.begin(), rew.end());
    }
  }
  sort_members(out);
  return out;
}

bool members_disjoint(const std::vector<Member>& members) {
  std::vector<Member> all = expand_groups(members);
  size_t n = all.size();
  return disjointness_rewrite(members).size() == n;
}

bool classes_incommensurable(const Presentation& p) {
  for (int a = 0; a < p.N(); ++a)
    for (int b = a + 1; b < p.N(); ++b)
      if (commensurable_matrices(p.classes[a].M, p.classes[b].M)) return false;
  return true;
}

ClassData merge_class(const std::vector<Grid>& grids) {
  if (grids.empty()) throw GridError("empty class");
  const NMat& M1 = grids[0].M;
  int d = static_cast<int>(M1.size());
  std::vector<Member> members;
  for (const auto& g : grids) {
    auto wit = commensurable_matrices(M1, g.M);
    if (!wit) throw GridError("merge_class input is not pairwise commensurable");
    Num lambda = wit->lambda;
    QMat T = wit->T;
    if (nf_sign(lambda) < 0) {
      lambda = -lambda;
      for (auto& row : T)
        for (auto& x : row) x = -x;
    }
    Z D = 1;
    for (const auto& row : T)
      for (const auto& x : row) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), x.get_den_mpz_t());
    Q detT = qdet(T);
    Q detTint = detT;
    for (int k = 0; k < d; ++k) detTint *= Q(D);
    Q s = abs(detTint) / Q(D);
    QMat Tinv = qinverse(T);
    ZMat G;
    for (const auto& row : Tinv) {
      ZVec zr;
      for (const auto& x : row) {
        Q v = s * x;
        if (v.get_den() != 1) throw GridError("internal: non-integral cofactor matrix");
        zr.push_back(v.get_num());
      }
      G.push_back(zr);
    }
    ZMat H = hnf_rows(G, d);
    std::vector<Z> diag;
    for (int k = 0; k < d; ++k) diag.push_back(H[k][k]);
    Num cnew = g.c * lambda * s;
    Q inv_s = 1 / s;
    odometer(diag, [&](const std::vector<Z>& x) {
      NVec xw = g.w;
      for (int a = 0; a < d; ++a) xw[a] += Num(g.c.field(), Q(x[a]));
      NVec w = nvec_times_q(xw, T);
      for (auto& e : w) e *= inv_s;
      members.push_back({cnew, w});
    });
  }
  return {M1, disjoint_form(members)};
}

Presentation canonical_presentation(const FieldPtr& f, int dim, const std::vector<Grid>& grids) {
  for (const auto& g : grids) validate_grid(g);
  Presentation p;
  p.field = f;
  p.dim = dim;
  for (const auto& cls : partition_classes(grids)) {
    std::vector<Grid> gs;
    for (int k : cls) gs.push_back(grids[k]);
    p.classes.push_back(merge_class(gs));
  }
  return p;
}

NVec c_tilde(const Presentation& p, int j) {
  NVec out;
  for (const auto& m : p.classes.at(j).members) out.push_back(m.c.inverse());
  return out;
}

NVec c_psi(const Presentation& p, const Mark& psi, int j) {
  NVec out = c_tilde(p, j);
  for (auto& x : out) x *= p.member(psi).c;
  return out;
}

NMat W_of(const Presentation& p, int j) {
  NMat W;
  for (const auto& m : p.classes.at(j).members) W.push_back(m.w);
  return W;
}

NMat W_psi(const Presentation& p, const Mark& psi, int j) {
  NMat T = nmat_mul(p.classes.at(psi.j).M, nmat_inverse(p.classes.at(j).M));
  NVec wT = nvec_mat(p.member(psi).w, T);
  NVec cp = c_psi(p, psi, j);
  NMat W = W_of(p, j);
  for (size_t i = 0; i < W.size(); ++i)
    for (size_t k = 0; k < wT.size(); ++k) W[i][k] -= cp[i] * wT[k];
  return W;
}

static std::vector<NVec> columns(const NMat& W, int d) {
  std::vector<NVec> cols(d);
  for (const auto& row : W)
    for (int k = 0; k < d; ++k) cols[k].push_back(row[k]);
  return cols;
}

static void check_mark(const Presentation& p, const Mark& psi, int j) {
  if (psi.j < 0 || psi.j >= p.N() || psi.i < 0 || psi.i >= p.r(psi.j) || j < 0 || j >= p.N())
    throw GridError("mark or class index out of range");
}

RationalSubspace subspace_Lpsi(const Presentation& p, const Mark& psi, int j) {
  check_mark(p, psi, j);
  auto cols = columns(W_psi(p, psi, j), p.dim);
  NVec cp = c_psi(p, psi, j);
  if (j == psi.j) {
    cols.push_back(cp);
    return frakL(cols, std::nullopt, p.r(j));
  }
  return frakL(cols, cp, p.r(j));
}

RationalSubspace subspace_Lj(const Presentation& p, int j) {
  if (j < 0 || j >= p.N()) throw GridError("class index out of range");
  return frakL(columns(W_of(p, j), p.dim), c_tilde(p, j), p.r(j));
}

AdmissibleVerdict is_admissible(const Presentation& p) {
  AdmissibleVerdict v;
  for (const auto& psi : p.marks()) {
    if (!in_subspace_mod_lattice(c_psi(p, psi, psi.j), subspace_Lpsi(p, psi, psi.j))) {
      v.admissible = false;
      v.failing.push_back(psi);
    }
  }
  return v;
}

Presentation make_admissible(const Presentation& p) {
  if (is_admissible(p).admissible) return p;
  Presentation cur = p;
  for (auto& cls : cur.classes) cls.members = disjoint_form(cls.members);
  if (is_admissible(cur).admissible) return cur;
  for (int iter = 0; iter < 6; ++iter) {
    bool changed = false;
    for (auto& cls : cur.classes) {
      std::vector<Num> scales;
      for (const auto& m : cls.members) scales.push_back(m.c);
      std::sort(scales.begin(), scales.end(), [](const Num& a, const Num& b) { return nf_compare(a, b) < 0; });
      scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
      int s = static_cast<int>(scales.size());
      NVec ut;
      for (const auto& u : scales) ut.push_back(u.inverse());
      RationalSubspace L = frakL({}, ut, s);
      std::vector<Z> q(s, Z(0));
      for (const auto& row : L.basis())
        for (int k = 0; k < s; ++k) mpz_gcd(q[k].get_mpz_t(), q[k].get_mpz_t(), row[k].get_mpz_t());
      std::vector<Member> next;
      for (const auto& m : cls.members) {
        int k = 0;
        while (!(scales[k] == m.c)) ++k;
        Z qk = q[k];
        if (qk <= 1) {
          next.push_back(m);
          continue;
        }
        changed = true;
        std::vector<Z> box(m.w.size(), qk);
        Q inv_q(Z(1), qk);
        odometer(box, [&](const std::vector<Z>& a) {
          NVec w = m.w;
          for (size_t t = 0; t < w.size(); ++t) w[t] = (w[t] + Num(w[t].field(), Q(a[t] + 1))) * inv_q;
          next.push_back({m.c * Q(qk), w});
        });
      }
      cls.members = disjoint_form(next);
    }
    if (is_admissible(cur).admissible) return cur;
    if (!changed) break;
  }
  throw GridError("make_admissible did not reach an admissible presentation");
}

NMat U_of_q(const Presentation& p, int j, const NVec& q) {
  NVec qM = nvec_mat(q, nmat_inverse(p.classes.at(j).M));
  NMat U;
  for (const auto& m : p.classes.at(j).members) {
    NVec row = m.w;
    Num ci = m.c.inverse();
    for (size_t k = 0; k < row.size(); ++k) row[k] -= ci * qM[k];
    U.push_back(row);
  }
  return U;
}

bool in_grid(const Presentation& p, const Mark& psi, const NVec& q) {
  const Member& m = p.member(psi);
  NVec x = nvec_mat(q, nmat_inverse(p.classes.at(psi.j).M));
  Num ci = m.c.inverse();
  for (size_t k = 0; k < x.size(); ++k) {
    Num v = x[k] * ci - m.w[k];
    if (!v.is_rational() || v.rational_part().get_den() != 1) return false;
  }
  return true;
}

namespace {

std::vector<ZMat> generators(int d) {
  if (d == 2) return {{{0, -1}, {1, 0}}, {{1, 1}, {0, 1}}};
  if (d == 3) return {{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}};
  throw GridError("torus_data supports d = 2 and d = 3 only");
}

QMat right_mul(const QMat& X, const ZMat& g) {
  size_t r = X.size(), d = g.size();
  QMat out(r, QVec(d, Q(0)));
  for (size_t i = 0; i < r; ++i)
    for (size_t k = 0; k < d; ++k)
      if (X[i][k] != 0)
        for (size_t l = 0; l < d; ++l)
          if (g[k][l] != 0) out[i][l] += X[i][k] * Q(g[k][l]);
  return out;
}

std::vector<Q> matrix_key(const RationalSubspace& L, const QMat& X) {
  std::vector<Q> key;
  size_t d = X.empty() ? 0 : X[0].size();
  for (size_t k = 0; k < d; ++k) {
    QVec col;
    for (const auto& row : X) col.push_back(row[k]);
    auto ck = L.coset_key(col);
    key.insert(key.end(), ck.begin(), ck.end());
  }
  return key;
}

}  // namespace

TorusComponentSet torus_data(const Presentation& p, int j, const std::optional<Mark>& mark,
                             const std::optional<NVec>& q_in, size_t cap) {
  if (j < 0 || j >= p.N()) throw GridError("class index out of range");
  auto gens = generators(p.dim);
  TorusComponentSet tcs;
  tcs.j = j;
  tcs.r = p.r(j);
  tcs.d = p.dim;
  tcs.mark = mark;
  NVec q;
  if (mark) {
    check_mark(p, *mark, j);
    if (q_in) {
      q = *q_in;
    } else {
      const Member& m = p.member(*mark);
      q = nvec_mat(m.w, p.classes[mark->j].M);
      for (auto& x : q) x *= m.c;
    }
    if (!in_grid(p, *mark, q)) throw GridError("base point q is not in the marked grid");
    tcs.L = subspace_Lpsi(p, *mark, j);
  } else {
    q = q_in ? *q_in : nvec_zero(p.field, p.dim);
    tcs.L = subspace_Lj(p, j);
  }
  tcs.U0 = U_of_q(p, j, q);
  QMat X0(tcs.r, QVec(p.dim));
  for (int k = 0; k < p.dim; ++k) {
    NVec col;
    for (int i = 0; i < tcs.r; ++i) col.push_back(tcs.U0[i][k]);
    auto parts = nf_coefficient_vectors(col);
    for (size_t t = 1; t < parts.size(); ++t)
      if (!tcs.L.contains(parts[t])) throw GridError("base point columns leave the subspace L");
    for (int i = 0; i < tcs.r; ++i) X0[i][k] = frac(parts[0][i]);
  }
  std::set<std::vector<Q>> seen;
  std::deque<QMat> queue{X0};
  seen.insert(matrix_key(tcs.L, X0));
  while (!queue.empty()) {
    QMat X = queue.front();
    queue.pop_front();
    tcs.reps.push_back(X);
    for (const auto& g : gens) {
      QMat Y = right_mul(X, g);
      for (auto& row : Y)
        for (auto& x : row) x = frac(x);
      if (seen.insert(matrix_key(tcs.L, Y)).second) {
        if (seen.size() > cap) throw OrbitError("component orbit too large");
        queue.push_back(Y);
      }
    }
  }
  return tcs;
}

std::set<PointKey> window_points(const std::vector<Grid>& grids, const Q& lo, const Q& hi) {
  std::set<PointKey> out;
  for (const auto& g : grids) {
    int d = static_cast<int>(g.w.size());
    double c = g.c.to_double();
    std::vector<std::vector<double>> B(d, std::vector<double>(d));
    std::vector<double> off(d, 0.0);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        B[a][b] = c * g.M[a][b].to_double();
        off[b] += c * g.w[a].to_double() * g.M[a][b].to_double();
      }
    NMat Minv = nmat_inverse(g.M);
    std::vector<std::vector<double>> Binv(d, std::vector<double>(d));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) Binv[a][b] = Minv[a][b].to_double() / c;
    double l = lo.get_d() - 1, h = hi.get_d() + 1;
    std::vector<double> kmin(d, 1e300), kmax(d, -1e300);
    for (int corner = 0; corner < (1 << d); ++corner) {
      std::vector<double> x(d);
      for (int a = 0; a < d; ++a) x[a] = ((corner >> a) & 1 ? h : l) - off[a];
      for (int b = 0; b < d; ++b) {
        double k = 0;
        for (int a = 0; a < d; ++a) k += x[a] * Binv[a][b];
        kmin[b] = std::min(kmin[b], k);
        kmax[b] = std::max(kmax[b], k);
      }
    }
    std::vector<Z> span(d);
    std::vector<long> base(d);
    for (int b = 0; b < d; ++b) {
      base[b] = static_cast<long>(std::floor(kmin[b])) - 1;
      span[b] = static_cast<long>(std::ceil(kmax[b])) + 1 - base[b] + 1;
    }
    Num zero(g.c.field());
    odometer(span, [&](const std::vector<Z>& kk) {
      std::vector<double> x(off);
      for (int a = 0; a < d; ++a) {
        double k = static_cast<double>(base[a] + kk[a].get_si());
        for (int b = 0; b < d; ++b) x[b] += k * B[a][b];
      }
      for (int b = 0; b < d; ++b)
        if (x[b] < lo.get_d() - 1e-6 || x[b] > hi.get_d() + 1e-6) return;
      NVec kw = g.w;
      for (int a = 0; a < d; ++a) kw[a] += Num(g.c.field(), Q(base[a] + kk[a].get_si()));
      NVec pt = nvec_mat(kw, g.M);
      PointKey key;
      for (auto& e : pt) {
        e *= g.c;
        if (nf_compare(e, Num(g.c.field(), lo)) < 0 || nf_compare(e, Num(g.c.field(), hi)) > 0) return;
        key.insert(key.end(), e.coeffs().begin(), e.coeffs().end());
      }
      out.insert(key);
    });
  }
  return out;
}

std::set<PointKey> window_points(const Presentation& p, const Q& lo, const Q& hi) {
  return window_points(p.grids(), lo, hi);
}

}  // namespace gg
