#include "kp/schwartz.hpp"

#include <algorithm>

#include "kp/util.hpp"

namespace kp {

namespace {

Int cdiv(Int x, Int y) {  // ceil(x/y), y > 0
  Int t = x / y;
  if (t * y < x) ++t;
  return t;
}

Int imax(Int x, Int y) { return x > y ? x : y; }

// cartesian powers of a one-coordinate list, first coordinate most significant
std::vector<LocalVec> vector_grid(const std::vector<LocalElement>& one, Int m) {
  std::vector<LocalVec> out{LocalVec{}};
  for (Int j = 0; j < m; ++j) {
    std::vector<LocalVec> next;
    next.reserve(out.size() * one.size());
    for (const LocalVec& head : out)
      for (const LocalElement& x : one) {
        LocalVec v = head;
        v.push_back(x);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

LocalElement dot(const LocalVec& x, const LocalVec& y) {
  LOGIC_CHECK(x.size() == y.size(), "pairing needs equal lengths");
  LocalElement s = LocalElement::zero(x.at(0).K);
  for (size_t j = 0; j < x.size(); ++j) s = s + x[j] * y[j];
  return s;
}

LocalElement quad_form(const LocalMatData& B, const LocalVec& x) {
  LocalElement s = LocalElement::zero(x.at(0).K);
  for (size_t j = 0; j < x.size(); ++j)
    for (size_t k = 0; k < x.size(); ++k) s = s + x[j] * B[j][k] * x[k];
  return s;
}

LocalVec lmat_apply(const LocalMatData& M, const LocalVec& x) {
  LocalVec out;
  out.reserve(M.size());
  for (const auto& row : M) {
    LocalElement s = LocalElement::zero(x.at(0).K);
    for (size_t j = 0; j < x.size(); ++j) s = s + row[j] * x[j];
    out.push_back(s);
  }
  return out;
}

Int min_entry_val(const LocalMatData& B) {
  Int v = LocalElement::kValInf;
  for (const auto& row : B)
    for (const LocalElement& x : row) v = std::min(v, x.val_or_inf());
  return v;
}

void check_symmetric(const LocalMatData& P) {
  DOMAIN_CHECK(!P.empty(), "empty token parameter");
  for (const auto& row : P) DOMAIN_CHECK(row.size() == P.size(), "parameter must be square");
  for (size_t j = 0; j < P.size(); ++j)
    for (size_t k = 0; k < j; ++k)
      DOMAIN_CHECK(P[j][k] == P[k][j], "parameter must be symmetric");
}

}  // namespace

bool LocalVecLess::operator()(const LocalVec& x, const LocalVec& y) const {
  LOGIC_CHECK(x.size() == y.size(), "keys of one window have equal lengths");
  for (size_t j = 0; j < x.size(); ++j) {
    int c = x[j].cmp(y[j]);
    if (c != 0) return c < 0;
  }
  return false;
}

Window::Window(const LocalFieldSpec& K_, Int m_, Int b_) : K(K_), m(m_), b(b_) {
  DOMAIN_CHECK(m >= 1, "window needs at least one coordinate");
  DOMAIN_CHECK(b >= 0, "window resolution exponent must be >= 0");
  a = b + K.e + K.c_psi;
  DOMAIN_CHECK(dim() <= (Int(1) << 24), "window dimension out of range");
}

Int Window::dim() const {
  Int d = 1;
  for (Int j = 0; j < m * (a + b); ++j) {
    d *= K.q;
    if (d > (Int(1) << 24)) return d;  // cap; caller rejects
  }
  return d;
}

std::vector<LocalVec> window_basis(const Window& w) {
  LocalElement sc = LocalElement::uniformizer_pow(w.K, -w.a);
  std::vector<LocalElement> one;
  for (const LocalElement& r : residue_transversal(w.K, w.a + w.b)) one.push_back(sc * r);
  // pi^{-a} * (canonical residues mod p^{a+b}) are already reduce_mod_pk-canonical
  return vector_grid(one, w.m);
}

LocalVec reduce_vec(const LocalVec& x, Int k) {
  LocalVec out;
  out.reserve(x.size());
  for (const LocalElement& c : x) out.push_back(reduce_mod_pk(c, k));
  return out;
}

SchwartzVec SchwartzVec::delta(const Window& w, const LocalVec& x) {
  SchwartzVec f(w);
  f.add_delta(x, CycScalar::one());
  return f;
}

void SchwartzVec::add_delta(const LocalVec& x, const CycScalar& c) {
  DOMAIN_CHECK(Int(x.size()) == win.m, "delta key has the window's coordinate count");
  if (c.is_zero()) return;
  LocalVec key = reduce_vec(x, win.b);
  for (const LocalElement& e : key)
    DOMAIN_CHECK(e.val_or_inf() >= -win.a, "delta outside the window support");
  auto it = coef.find(key);
  if (it == coef.end()) {
    coef.emplace(std::move(key), c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) coef.erase(it);
}

SchwartzVec SchwartzVec::embedded(Int b2) const {
  DOMAIN_CHECK(b2 >= win.b, "can only refine a window");
  if (b2 == win.b) return *this;
  Window w2(win.K, win.m, b2);
  SchwartzVec out(w2);
  // each coset of p^b splits into the q^{m(b2-b)} cosets x0 + pi^b t + p^{b2}
  LocalElement sc = LocalElement::uniformizer_pow(win.K, win.b);
  std::vector<LocalElement> one;
  for (const LocalElement& r : residue_transversal(win.K, b2 - win.b)) one.push_back(sc * r);
  std::vector<LocalVec> shifts = vector_grid(one, win.m);
  for (const auto& kv : coef)
    for (const LocalVec& s : shifts) {
      LocalVec x = kv.first;
      for (size_t j = 0; j < x.size(); ++j) x[j] = x[j] + s[j];
      out.add_delta(x, kv.second);
    }
  return out;
}

SchwartzVec SchwartzVec::compressed() const {
  SchwartzVec cur = *this;
  while (cur.win.b > 0) {
    Window wp(cur.win.K, cur.win.m, cur.win.b - 1);
    if (cur.coef.empty()) {
      cur = SchwartzVec(wp);
      continue;
    }
    Int children = 1;
    for (Int j = 0; j < cur.win.m; ++j) children *= cur.win.K.q;
    bool ok = true;
    std::map<LocalVec, std::pair<CycScalar, Int>, LocalVecLess> groups;
    for (const auto& kv : cur.coef) {
      for (const LocalElement& x : kv.first)
        if (x.val_or_inf() < -wp.a) ok = false;
      if (!ok) break;
      LocalVec p = reduce_vec(kv.first, wp.b);
      auto it = groups.find(p);
      if (it == groups.end()) {
        groups.emplace(std::move(p), std::make_pair(kv.second, Int(1)));
      } else {
        if (!(it->second.first == kv.second)) {
          ok = false;
          break;
        }
        ++it->second.second;
      }
    }
    if (ok)
      for (const auto& g : groups)
        if (g.second.second != children) ok = false;
    if (!ok) break;
    SchwartzVec next(wp);
    for (const auto& g : groups) next.coef.emplace(g.first, g.second.first);
    cur = std::move(next);
  }
  return cur;
}

SchwartzVec SchwartzVec::scaled(const CycScalar& c) const {
  SchwartzVec out(win);
  if (c.is_zero()) return out;
  for (const auto& kv : coef) out.coef.emplace(kv.first, kv.second * c);
  return out;
}

SchwartzVec sv_add(const SchwartzVec& f, const SchwartzVec& g) {
  DOMAIN_CHECK(f.win.K == g.win.K && f.win.m == g.win.m, "sum needs one window family");
  Int b = imax(f.win.b, g.win.b);
  SchwartzVec out = f.embedded(b);
  for (const auto& kv : g.embedded(b).coef) out.add_delta(kv.first, kv.second);
  return out;
}

CycScalar sv_inner(const SchwartzVec& f, const SchwartzVec& g) {
  DOMAIN_CHECK(f.win.K == g.win.K && f.win.m == g.win.m, "pairing needs one window family");
  Int b = imax(f.win.b, g.win.b);
  SchwartzVec fb = f.embedded(b), gb = g.embedded(b);
  CycScalar acc = CycScalar::zero();
  for (const auto& kv : fb.coef) {
    auto it = gb.coef.find(kv.first);
    if (it != gb.coef.end()) acc = acc + kv.second * it->second.conj();
  }
  return acc.scaled(pow_rat(Rat(f.win.K.q), -f.win.m * b));
}

bool sv_equal(const SchwartzVec& f, const SchwartzVec& g) {
  if (f.win.K != g.win.K || f.win.m != g.win.m) return false;
  Int b = imax(f.win.b, g.win.b);
  return f.embedded(b).coef == g.embedded(b).coef;
}

Int level_dim(const LocalFieldSpec& K, Int m, Int i) {
  DOMAIN_CHECK(0 <= i && i <= K.e, "level out of range");
  Int d = 1;
  for (Int j = 0; j < m * (K.e - i); ++j) d *= K.q;
  return d;
}

std::vector<LocalVec> level_indices(const LocalFieldSpec& K, Int m, Int i) {
  DOMAIN_CHECK(0 <= i && i <= K.e, "level out of range");
  return vector_grid(residue_transversal(K, K.e - i), m);
}

SchwartzVec embed_level(const LocalFieldSpec& K, Int m, Int i, const LocalVec& lambda, Int b) {
  DOMAIN_CHECK(0 <= i && i <= K.e, "level out of range");
  DOMAIN_CHECK(Int(lambda.size()) == m, "index length mismatch");
  Window w(K, m, b);
  SchwartzVec out(w);
  LocalElement sc = LocalElement::uniformizer_pow(K, -i);
  std::vector<LocalElement> one;
  for (const LocalElement& r : residue_transversal(K, i + b)) one.push_back(sc * r);
  Rat half = rat_of(1, 2);
  for (const LocalVec& t : vector_grid(one, m)) {
    LocalVec x;
    x.reserve(size_t(m));
    for (Int j = 0; j < m; ++j) x.push_back(lambda[size_t(j)].scaled(half) + t[size_t(j)]);
    out.add_delta(x, CycScalar::one());
  }
  return out;
}

std::vector<CycScalar> project_level(const SchwartzVec& f, Int i) {
  const LocalFieldSpec& K = f.win.K;
  SchwartzVec rest = f;
  std::vector<CycScalar> out;
  Rat half = rat_of(1, 2);
  for (const LocalVec& lambda : level_indices(K, f.win.m, i)) {
    LocalVec key0;
    for (const LocalElement& l : lambda) key0.push_back(l.scaled(half));
    key0 = reduce_vec(key0, f.win.b);
    auto it = rest.coef.find(key0);
    CycScalar c = it == rest.coef.end() ? CycScalar::zero() : it->second;
    out.push_back(c);
    if (!c.is_zero())
      for (const auto& kv : embed_level(K, f.win.m, i, lambda, f.win.b).coef)
        rest.add_delta(kv.first, kv.second * (-c));
  }
  if (!rest.is_zero())
    throw CheckError("InvarianceViolation",
                     "vector is not a combination of the level-" + std::to_string(i) + " basis");
  return out;
}

Token Token::usharp(const LocalMatData& B) {
  check_symmetric(B);
  return Token{USharp, B, LocalElement::zero(B[0][0].K)};
}

Token Token::uflat(const LocalMatData& S) {
  check_symmetric(S);
  return Token{UFlat, S, LocalElement::zero(S[0][0].K)};
}

Token Token::ma(const LocalMatData& A) {
  DOMAIN_CHECK(!A.empty(), "empty token parameter");
  for (const auto& row : A) DOMAIN_CHECK(row.size() == A.size(), "parameter must be square");
  return Token{MA, A, LocalElement::zero(A[0][0].K)};
}

Token Token::w(const LocalFieldSpec& K) { return Token{W, {}, LocalElement::zero(K)}; }

Token Token::wscaled(const LocalElement& c) {
  DOMAIN_CHECK(!c.is_zero(), "scale must be invertible");
  return Token{WScaled, {}, c};
}

LocalMatData lmat_id(const LocalFieldSpec& K, Int n) {
  LocalMatData M(size_t(n), std::vector<LocalElement>(size_t(n), LocalElement::zero(K)));
  for (Int j = 0; j < n; ++j) M[size_t(j)][size_t(j)] = LocalElement::one(K);
  return M;
}

LocalMatData lmat_mul(const LocalMatData& x, const LocalMatData& y) {
  size_t n = x.size(), p = y[0].size();
  LOGIC_CHECK(x[0].size() == y.size(), "matrix product shape");
  const LocalFieldSpec& K = x[0][0].K;
  LocalMatData out(n, std::vector<LocalElement>(p, LocalElement::zero(K)));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < y.size(); ++k) {
      if (x[i][k].is_zero()) continue;
      for (size_t j = 0; j < p; ++j) out[i][j] = out[i][j] + x[i][k] * y[k][j];
    }
  return out;
}

LocalMatData lmat_transpose(const LocalMatData& x) {
  LocalMatData out(x[0].size(), std::vector<LocalElement>(x.size(), x[0][0]));
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < x[0].size(); ++j) out[j][i] = x[i][j];
  return out;
}

LocalMatData lmat_neg(const LocalMatData& x) {
  LocalMatData out = x;
  for (auto& row : out)
    for (auto& e : row) e = -e;
  return out;
}

LocalElement lmat_det(const LocalMatData& x) {
  LocalMatData a = x;
  size_t n = a.size();
  const LocalFieldSpec& K = a[0][0].K;
  LocalElement det = LocalElement::one(K);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) return LocalElement::zero(K);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det = det * a[col][col];
    LocalElement inv = a[col][col].inv();
    for (size_t r = col + 1; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      LocalElement f = a[r][col] * inv;
      for (size_t j = col; j < n; ++j) a[r][j] = a[r][j] - f * a[col][j];
    }
  }
  return det;
}

LocalMatData lmat_inv(const LocalMatData& x) {
  size_t n = x.size();
  const LocalFieldSpec& K = x[0][0].K;
  LocalMatData a = x, inv = lmat_id(K, Int(n));
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    DOMAIN_CHECK(piv < n, "matrix is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    LocalElement d = a[col][col].inv();
    for (size_t j = 0; j < n; ++j) {
      a[col][j] = a[col][j] * d;
      inv[col][j] = inv[col][j] * d;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      LocalElement f = a[r][col];
      for (size_t j = 0; j < n; ++j) {
        a[r][j] = a[r][j] - f * a[col][j];
        inv[r][j] = inv[r][j] - f * inv[col][j];
      }
    }
  }
  return inv;
}

bool lmat_eq(const LocalMatData& x, const LocalMatData& y) {
  if (x.size() != y.size()) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != y[i].size()) return false;
    for (size_t j = 0; j < x[i].size(); ++j)
      if (x[i][j] != y[i][j]) return false;
  }
  return true;
}

LocalMatData token_matrix(const LocalFieldSpec& K, Int m, const Token& t) {
  size_t n = size_t(m);
  LocalMatData g = lmat_id(K, 2 * m);
  switch (t.kind) {
    case Token::USharp:
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) g[i][n + j] = t.P[i][j];
      return g;
    case Token::UFlat:
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) g[n + i][j] = t.P[i][j];
      return g;
    case Token::MA: {
      LocalMatData ti = lmat_inv(lmat_transpose(t.P));
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
          g[i][j] = t.P[i][j];
          g[n + i][n + j] = ti[i][j];
        }
      return g;
    }
    case Token::W:
    case Token::WScaled: {
      // w_A = [[0, -tA^{-1}], [A, 0]] with A = c I (c = 1 for the plain token)
      LocalElement c = t.kind == Token::W ? LocalElement::one(K) : t.c;
      LocalElement ci = c.inv();
      for (size_t i = 0; i < n; ++i) {
        g[i][i] = LocalElement::zero(K);
        g[n + i][n + i] = LocalElement::zero(K);
        g[i][n + i] = -ci;
        g[n + i][i] = c;
      }
      return g;
    }
  }
  LOGIC_CHECK(false, "unhandled token kind");
  return g;
}

LocalMatData word_matrix(const LocalFieldSpec& K, Int m, const GeneratorWord& w) {
  LocalMatData g = lmat_id(K, 2 * m);
  for (const Token& t : w) g = lmat_mul(g, token_matrix(K, m, t));
  return g;
}

bool is_symplectic(const LocalFieldSpec& K, Int m, const LocalMatData& g) {
  if (Int(g.size()) != 2 * m) return false;
  for (const auto& row : g)
    if (Int(row.size()) != 2 * m) return false;
  LocalMatData J = lmat_id(K, 2 * m);
  size_t n = size_t(m);
  for (size_t i = 0; i < n; ++i) {
    J[i][i] = LocalElement::zero(K);
    J[n + i][n + i] = LocalElement::zero(K);
    J[i][n + i] = LocalElement::one(K);
    J[n + i][i] = -LocalElement::one(K);
  }
  return lmat_eq(lmat_mul(lmat_mul(lmat_transpose(g), J), g), J);
}

bool in_group_ideal(const LocalFieldSpec& K, Int m, const LocalMatData& g, Int vb, Int vc) {
  if (!is_symplectic(K, m, g)) return false;
  size_t n = size_t(m);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (!g[i][j].integral() || !g[n + i][n + j].integral()) return false;
      if (g[i][n + j].val_or_inf() < vb) return false;
      if (g[n + i][j].val_or_inf() < vc) return false;
    }
  return true;
}

bool in_gamma0(const LocalFieldSpec& K, Int m, const LocalMatData& g, Int level4) {
  DOMAIN_CHECK(level4 == 1 || level4 == 4, "supported congruence levels are 1 and 4");
  Int extra = level4 == 4 ? 2 * K.e : 0;
  return in_group_ideal(K, m, g, -K.c_psi, extra + K.c_psi);
}

bool in_gamma_level(const LocalFieldSpec& K, Int m, const LocalMatData& g, Int i) {
  DOMAIN_CHECK(0 <= i && i <= K.e, "level out of range");
  return in_group_ideal(K, m, g, 2 * i - K.c_psi, K.c_psi);
}

bool in_conjugated_gamma(const LocalFieldSpec& K, Int m, const LocalMatData& g) {
  return in_group_ideal(K, m, g, -2 * K.e - K.c_psi, 2 * K.e + K.c_psi);
}

namespace {

SchwartzVec apply_usharp(const SchwartzVec& f, const LocalMatData& B) {
  const LocalFieldSpec& K = f.win.K;
  Int vmin = min_entry_val(B);
  if (vmin == LocalElement::kValInf) return f;
  Int c = K.c_psi, e = K.e;
  // multiplier psi(txBx) must be constant on each coset: the square term needs
  // 2b + vmin >= -c, the cross term needs e + v(x_j) + vmin + b >= -c
  Int b2 = imax(f.win.b, cdiv(-c - vmin, 2));
  for (const auto& kv : f.coef) {
    Int vfloor = f.win.b;
    for (const LocalElement& x : kv.first) vfloor = std::min(vfloor, x.val_or_inf());
    b2 = imax(b2, -c - e - vmin - vfloor);
  }
  SchwartzVec g = f.embedded(b2);
  SchwartzVec out(g.win);
  for (const auto& kv : g.coef) {
    for (const LocalElement& x : kv.first)
      LOGIC_CHECK(x.is_zero() || e + x.valuation() + vmin + b2 >= -c,
                  "refined window still too coarse for the multiplier");
    out.add_delta(kv.first, kv.second * psi_local(quad_form(B, kv.first)));
  }
  return out;
}

SchwartzVec apply_ma(const SchwartzVec& f, const LocalMatData& A) {
  const LocalFieldSpec& K = f.win.K;
  Int m = f.win.m;
  DOMAIN_CHECK(Int(A.size()) == m, "parameter size must match the window");
  LocalElement det = lmat_det(A);
  DOMAIN_CHECK(!det.is_zero(), "parameter must be invertible");
  Int vdet = det.valuation();
  DOMAIN_CHECK(vdet % m == 0, "supported parameters are unit multiples of uniformizer powers");
  Int t = vdet / m;
  LocalElement sc = LocalElement::uniformizer_pow(K, -t);
  for (const auto& row : A)
    for (const LocalElement& x : row)
      DOMAIN_CHECK((sc * x).integral(),
                   "supported parameters are unit multiples of uniformizer powers");
  CycScalar scalar = weil_index(LocalElement::one(K)) * weil_index(det).conj();
  scalar = scalar * CycScalar::q_pow_half(K.q, -vdet);
  LocalMatData tAinv = lmat_inv(lmat_transpose(A));
  Int b2 = f.win.b + (t >= 0 ? t : -t);
  SchwartzVec out(Window(K, m, b2));
  // image of x0 + p^b is tA^{-1}x0 + p^{b-t}, split into resolution-b2 cosets
  LocalElement shift_sc = LocalElement::uniformizer_pow(K, f.win.b - t);
  std::vector<LocalElement> one;
  for (const LocalElement& r : residue_transversal(K, b2 - f.win.b + t)) one.push_back(shift_sc * r);
  std::vector<LocalVec> shifts = vector_grid(one, m);
  for (const auto& kv : f.coef) {
    LocalVec y0 = lmat_apply(tAinv, kv.first);
    CycScalar cf = kv.second * scalar;
    for (const LocalVec& s : shifts) {
      LocalVec y = y0;
      for (size_t j = 0; j < y.size(); ++j) y[j] = y[j] + s[j];
      out.add_delta(y, cf);
    }
  }
  return out;
}

// shared Gauss kernel of the Fourier-type tokens: out[y] = C sum_x f[x] psi(sgn2 txy)
SchwartzVec gauss_kernel(const SchwartzVec& f, Int sgn2, const CycScalar& C) {
  SchwartzVec out(f.win);
  if (f.is_zero()) return out;
  for (const LocalVec& y : window_basis(f.win)) {
    CycScalar acc = CycScalar::zero();
    for (const auto& kv : f.coef) acc = acc + kv.second * psi_local(dot(kv.first, y).scaled(Rat(sgn2)));
    out.add_delta(y, acc * C);
  }
  return out;
}

SchwartzVec apply_w(const SchwartzVec& f) {
  const LocalFieldSpec& K = f.win.K;
  Int m = f.win.m;
  CycScalar C = weil_index(LocalElement::one(K)).conj().pow(m) *
                CycScalar::q_pow_half(K.q, -m * (K.e + K.c_psi));
  return gauss_kernel(f, -2, C.scaled(pow_rat(Rat(K.q), -m * f.win.b)));
}

SchwartzVec apply_w_inv(const SchwartzVec& f) {
  const LocalFieldSpec& K = f.win.K;
  Int m = f.win.m;
  CycScalar C = weil_index(LocalElement::one(K)).pow(m) *
                CycScalar::q_pow_half(K.q, -m * (K.e + K.c_psi));
  return gauss_kernel(f, 2, C.scaled(pow_rat(Rat(K.q), -m * f.win.b)));
}

}  // namespace

namespace {

SchwartzVec apply_token_raw(const SchwartzVec& f, const Token& t) {
  switch (t.kind) {
    case Token::USharp:
      return apply_usharp(f, t.P);
    case Token::UFlat:
      // conjugation realization: w^{-1} usharp(-S) w
      return apply_w_inv(apply_usharp(apply_w(f).compressed(), lmat_neg(t.P)).compressed());
    case Token::MA:
      return apply_ma(f, t.P);
    case Token::W:
      return apply_w(f);
    case Token::WScaled: {
      LocalMatData cI = lmat_id(f.win.K, f.win.m);
      for (auto& row : cI)
        for (auto& e : row)
          if (!e.is_zero()) e = t.c;
      return apply_w(apply_ma(f, cI).compressed());
    }
  }
  LOGIC_CHECK(false, "unhandled token kind");
  return f;
}

}  // namespace

SchwartzVec apply_token(const SchwartzVec& f, const Token& t) {
  return apply_token_raw(f, t).compressed();
}

SchwartzVec apply_word(const SchwartzVec& f, const GeneratorWord& w) {
  SchwartzVec g = f;
  for (auto it = w.rbegin(); it != w.rend(); ++it) g = apply_token(g, *it);
  return g;
}

std::vector<std::vector<CycScalar>> op_matrix(const Window& win, const GeneratorWord& w) {
  std::vector<LocalVec> basis = window_basis(win);
  size_t n = basis.size();
  std::vector<std::vector<CycScalar>> M(n, std::vector<CycScalar>(n, CycScalar::zero()));
  for (size_t j = 0; j < n; ++j) {
    SchwartzVec g = apply_word(SchwartzVec::delta(win, basis[j]), w);
    if (g.win.b > win.b)
      throw CheckError("WindowTooSmall", "word needs resolution exponent b = " +
                                             std::to_string(g.win.b) + " (window has b = " +
                                             std::to_string(win.b) + ")");
    if (g.win.b < win.b) g = g.embedded(win.b);
    for (size_t i = 0; i < n; ++i) {
      auto it = g.coef.find(basis[i]);
      if (it != g.coef.end()) M[i][j] = it->second;
    }
  }
  return M;
}

SchwartzVec fourier_apply(const SchwartzVec& f) {
  const LocalFieldSpec& K = f.win.K;
  Int m = f.win.m, b = f.win.b, c = K.c_psi;
  // image of S(p^{-a}/p^b) is S(p^{-b-c}/p^{a-c}); a - c = b + e keeps the shape
  SchwartzVec out(Window(K, m, b + K.e));
  CycScalar C = CycScalar::q_pow_half(K.q, -m * c).scaled(pow_rat(Rat(K.q), -m * b));
  for (const LocalVec& y : window_basis(out.win)) {
    bool in_support = true;
    for (const LocalElement& yj : y)
      if (yj.val_or_inf() < -b - c) in_support = false;
    if (!in_support) continue;
    CycScalar acc = CycScalar::zero();
    for (const auto& kv : f.coef) acc = acc + kv.second * psi_local(dot(kv.first, y));
    out.add_delta(y, acc * C);
  }
  return out;
}

}  // namespace kp
