#include "kp/symmat.hpp"

#include <algorithm>
#include <sstream>

namespace kp {

FMat FMat::identity(const FieldSpec& f, Int n) {
  FMat a(f, n, n);
  for (Int i = 0; i < n; ++i) a.at(i, i) = FieldElement(f, Rat(1));
  return a;
}

FMat FMat::scalar(const FieldSpec& f, Int n, const FieldElement& s) {
  FMat a(f, n, n);
  for (Int i = 0; i < n; ++i) a.at(i, i) = s;
  return a;
}

FMat FMat::operator*(const FMat& o) const {
  DOMAIN_CHECK(cols == o.rows && F == o.F, "matrix shape mismatch");
  FMat r(F, rows, o.cols);
  for (Int i = 0; i < rows; ++i)
    for (Int k = 0; k < cols; ++k) {
      if (at(i, k).is_zero()) continue;
      for (Int j = 0; j < o.cols; ++j)
        r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
    }
  return r;
}

FMat FMat::operator+(const FMat& o) const {
  DOMAIN_CHECK(rows == o.rows && cols == o.cols && F == o.F, "matrix shape mismatch");
  FMat r = *this;
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = r.e[i] + o.e[i];
  return r;
}

FMat FMat::operator-(const FMat& o) const { return *this + (-o); }

FMat FMat::operator-() const {
  FMat r = *this;
  for (auto& x : r.e) x = -x;
  return r;
}

FMat FMat::transpose() const {
  FMat r(F, cols, rows);
  for (Int i = 0; i < rows; ++i)
    for (Int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
  return r;
}

FMat FMat::scaled(const FieldElement& s) const {
  FMat r = *this;
  for (auto& x : r.e) x = x * s;
  return r;
}

FieldElement FMat::det() const {
  DOMAIN_CHECK(rows == cols, "determinant of a square matrix");
  if (rows == 0) return FieldElement(F, Rat(1));
  if (rows == 1) return at(0, 0);
  if (rows == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
  FieldElement acc(F, Rat(0));
  for (Int j = 0; j < cols; ++j) {
    FMat minor(F, rows - 1, cols - 1);
    for (Int r = 1; r < rows; ++r) {
      Int cc = 0;
      for (Int c = 0; c < cols; ++c) {
        if (c == j) continue;
        minor.at(r - 1, cc++) = at(r, c);
      }
    }
    FieldElement term = at(0, j) * minor.det();
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

FMat FMat::inverse() const {
  DOMAIN_CHECK(rows == cols, "inverse of a square matrix");
  FieldElement d = det();
  DOMAIN_CHECK(!d.is_zero(), "singular matrix");
  if (rows == 1) {
    FMat r(F, 1, 1);
    r.at(0, 0) = FieldElement(F, Rat(1)) / d;
    return r;
  }
  if (rows == 2) {
    FMat r(F, 2, 2);
    r.at(0, 0) = at(1, 1) / d;
    r.at(1, 1) = at(0, 0) / d;
    r.at(0, 1) = -(at(0, 1)) / d;
    r.at(1, 0) = -(at(1, 0)) / d;
    return r;
  }
  // Gauss-Jordan over the field
  FMat aug(F, rows, 2 * cols);
  for (Int i = 0; i < rows; ++i) {
    for (Int j = 0; j < cols; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols + i) = FieldElement(F, Rat(1));
  }
  for (Int col = 0, row = 0; col < cols; ++col, ++row) {
    Int pr = -1;
    for (Int i = row; i < rows; ++i)
      if (!aug.at(i, col).is_zero()) { pr = i; break; }
    LOGIC_CHECK(pr >= 0, "singular despite nonzero determinant");
    for (Int j = 0; j < 2 * cols; ++j) std::swap(aug.at(pr, j), aug.at(row, j));
    FieldElement d0 = aug.at(row, col);
    for (Int j = 0; j < 2 * cols; ++j) aug.at(row, j) = aug.at(row, j) / d0;
    for (Int i = 0; i < rows; ++i) {
      if (i == row || aug.at(i, col).is_zero()) continue;
      FieldElement f0 = aug.at(i, col);
      for (Int j = 0; j < 2 * cols; ++j)
        aug.at(i, j) = aug.at(i, j) - f0 * aug.at(row, j);
    }
  }
  FMat r(F, rows, cols);
  for (Int i = 0; i < rows; ++i)
    for (Int j = 0; j < cols; ++j) r.at(i, j) = aug.at(i, cols + j);
  return r;
}

bool FMat::is_integral() const {
  for (const auto& x : e)
    if (!x.is_integral()) return false;
  return true;
}

std::string FMat::str() const {
  std::ostringstream os;
  os << "[";
  for (Int i = 0; i < rows; ++i) {
    os << (i ? "; " : "");
    for (Int j = 0; j < cols; ++j) os << (j ? "," : "") << at(i, j).str();
  }
  os << "]";
  return os.str();
}

SymMat SymMat::from_mat(const FMat& a) {
  DOMAIN_CHECK(a.rows == a.cols, "symmetric matrix must be square");
  SymMat t(a.F, a.rows);
  for (Int i = 0; i < a.rows; ++i)
    for (Int j = 0; j < a.rows; ++j) {
      DOMAIN_CHECK(a.at(i, j) == a.at(j, i), "matrix is not symmetric");
      t.at(i, j) = a.at(i, j);
    }
  return t;
}

SymMat SymMat::operator+(const SymMat& o) const {
  DOMAIN_CHECK(m == o.m && F == o.F, "shape mismatch");
  SymMat r = *this;
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = r.e[i] + o.e[i];
  return r;
}

SymMat SymMat::operator-(const SymMat& o) const {
  DOMAIN_CHECK(m == o.m && F == o.F, "shape mismatch");
  SymMat r = *this;
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = r.e[i] - o.e[i];
  return r;
}

SymMat SymMat::scaled(const Rat& s) const {
  SymMat r = *this;
  for (auto& x : r.e) x = x.scaled(s);
  return r;
}

SymMat SymMat::scaled_elt(const FieldElement& s) const {
  SymMat r = *this;
  for (auto& x : r.e) x = x * s;
  return r;
}

FMat SymMat::as_mat() const {
  FMat a(F, m, m);
  a.e = e;
  return a;
}

SymMat SymMat::congruence(const FMat& a) const {
  DOMAIN_CHECK(a.rows == m && a.cols == m && a.F == F, "congruence shape mismatch");
  return from_mat(a.transpose() * as_mat() * a);
}

FieldElement SymMat::matrix_trace() const {
  FieldElement t(F, Rat(0));
  for (Int i = 0; i < m; ++i) t = t + at(i, i);
  return t;
}

bool SymMat::is_half_integral() const {
  for (Int i = 0; i < m; ++i)
    for (Int j = 0; j < m; ++j) {
      const FieldElement& x = at(i, j);
      if (i == j) {
        if (!x.is_integral()) return false;
      } else if (!x.scaled(Rat(2)).is_integral()) {
        return false;
      }
    }
  return true;
}

bool SymMat::is_integral_sym() const {
  for (const auto& x : e)
    if (!x.is_integral()) return false;
  return true;
}

bool SymMat::in_4Lstar() const {
  for (Int i = 0; i < m; ++i)
    for (Int j = 0; j < m; ++j) {
      Rat s = (i == j) ? Rat(1, 4) : Rat(1, 2);
      if (!at(i, j).scaled(s).is_integral()) return false;
    }
  return true;
}

bool SymMat::is_totally_psd() const {
  // every principal minor, not just the leading ones: the non-strict criterion
  for (Int mask = 1; mask < (Int(1) << m); ++mask) {
    std::vector<Int> idx;
    for (Int i = 0; i < m; ++i)
      if (mask & (Int(1) << i)) idx.push_back(i);
    FMat sub(F, Int(idx.size()), Int(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j) sub.at(Int(i), Int(j)) = at(idx[i], idx[j]);
    if (!sub.det().totally_nonnegative()) return false;
  }
  return true;
}

bool SymMat::is_totally_pd() const {
  for (Int k = 1; k <= m; ++k) {
    FMat sub(F, k, k);
    for (Int i = 0; i < k; ++i)
      for (Int j = 0; j < k; ++j) sub.at(i, j) = at(i, j);
    if (!sub.det().totally_positive()) return false;
  }
  return true;
}

int SymMat::cmp(const SymMat& o) const {
  LOGIC_CHECK(F == o.F && m == o.m, "comparing different shapes");
  for (size_t i = 0; i < e.size(); ++i) {
    int c = e[i].cmp(o.e[i]);
    if (c != 0) return c;
  }
  return 0;
}

std::string SymMat::key() const {
  std::ostringstream os;
  for (const auto& x : e) os << x.str() << ';';
  return os.str();
}

SymMat ResidueVector::outer() const {
  SymMat t(F, m());
  for (Int i = 0; i < m(); ++i)
    for (Int j = 0; j < m(); ++j) t.at(i, j) = v[size_t(i)] * v[size_t(j)];
  return t;
}

Int ResidueVector::index() const {
  Int base = Int(1) << F.degree();
  Int idx = 0;
  for (Int i = m() - 1; i >= 0; --i) {
    const FieldElement& x = v[size_t(i)];
    LOGIC_CHECK((x.a == 0 || x.a == 1) && (x.b == 0 || x.b == 1), "non-canonical residue lift");
    Int digit = Int(x.a == 1) + 2 * Int(x.b == 1);
    idx = idx * base + digit;
  }
  return idx;
}

ResidueVector ResidueVector::from_index(const FieldSpec& f, Int m, Int idx) {
  DOMAIN_CHECK(idx >= 0 && idx < residue_class_count(f, m), "residue index out of range");
  ResidueVector r(f, m);
  Int base = Int(1) << f.degree();
  for (Int i = 0; i < m; ++i) {
    Int digit = idx % base;
    idx /= base;
    r.v[size_t(i)] = FieldElement(f, Rat(digit & 1), f.quadratic() ? Rat((digit >> 1) & 1) : Rat(0));
  }
  return r;
}

ResidueVector ResidueVector::reduce(const std::vector<FieldElement>& x) {
  DOMAIN_CHECK(!x.empty(), "empty vector");
  ResidueVector r(x[0].F, Int(x.size()));
  for (size_t i = 0; i < x.size(); ++i) {
    DOMAIN_CHECK(x[i].is_integral(), "residue reduction needs integral input");
    Zint a = num(x[i].a), b = num(x[i].b);
    r.v[i] = FieldElement(x[i].F, Rat(mpz_odd_p(a.get_mpz_t()) ? 1 : 0),
                          x[i].F.quadratic() ? Rat(mpz_odd_p(b.get_mpz_t()) ? 1 : 0) : Rat(0));
  }
  return r;
}

std::string ResidueVector::key() const {
  std::ostringstream os;
  for (const auto& x : v) os << x.str() << ';';
  return os.str();
}

std::vector<ResidueVector> plus_support_witnesses(const SymMat& T, const FieldElement& eta) {
  DOMAIN_CHECK(T.is_half_integral(), "support scan needs T in L_m^*");
  DOMAIN_CHECK(!eta.is_zero() && eta.is_integral(), "eta must be a nonzero integer of F");
  FieldElement etainv = FieldElement(eta.F, Rat(1)) / eta;
  DOMAIN_CHECK(etainv.is_integral(), "eta must be a unit");
  std::vector<ResidueVector> hits;
  SymMat scaledT = T.scaled_elt(etainv);
  for (Int idx = 0; idx < residue_class_count(T.F, T.m); ++idx) {
    ResidueVector lam = ResidueVector::from_index(T.F, T.m, idx);
    if ((scaledT - lam.outer()).in_4Lstar()) hits.push_back(lam);
  }
  return hits;
}

std::optional<ResidueVector> plus_support_witness(const SymMat& T, const FieldElement& eta) {
  std::vector<ResidueVector> hits = plus_support_witnesses(T, eta);
  // the class is determined mod 2o^m when it exists
  LOGIC_CHECK(hits.size() <= 1, "support witness is not unique");
  if (hits.empty()) return std::nullopt;
  return hits[0];
}

namespace {

// integral, totally nonnegative diagonal candidates with trace <= bound
std::vector<FieldElement> diag_candidates(const FieldSpec& F, Int bound) {
  std::vector<Rat> lo(size_t(F.degree()), Rat(0)), hi(size_t(F.degree()), Rat(bound));
  std::vector<FieldElement> cand = integral_box(F, lo, hi), out;
  for (const auto& t : cand)
    if (t.totally_nonnegative() && t.trace() <= bound) out.push_back(t);
  return out;
}

}  // namespace

std::vector<SymMat> enumerate_psd(const FieldSpec& F, Int m, Int bound) {
  DOMAIN_CHECK(m == 1 || m == 2, "enumeration implemented for m <= 2");
  DOMAIN_CHECK(bound >= 0, "bound must be nonnegative");
  std::vector<SymMat> out;
  std::vector<FieldElement> diag = diag_candidates(F, bound);
  if (m == 1) {
    for (const auto& t : diag) {
      SymMat T(F, 1);
      T.at(0, 0) = t;
      out.push_back(T);
    }
  } else {
    for (const auto& t11 : diag)
      for (const auto& t22 : diag) {
        if (t11.trace() + t22.trace() > bound) continue;
        // |2 t12| <= 2 sqrt(t11 t22) <= t11 + t22 at every embedding
        FieldElement s = t11 + t22;
        std::vector<Rat> lo, hi;
        // the bound s is a field element; box the lattice search by its rational
        // trace at each embedding is overkill, so use sign filtering directly:
        // candidates y = 2 t12 integral with y^2 <= 4 t11 t22 at both embeddings.
        // A safe integer box: |emb_i(y)| <= emb_i(s), and emb_i(s) <= Tr(s).
        Rat cap = s.trace();
        lo.assign(size_t(F.degree()), -cap);
        hi.assign(size_t(F.degree()), cap);
        for (const auto& y : integral_box(F, lo, hi)) {
          SymMat T(F, 2);
          T.at(0, 0) = t11;
          T.at(1, 1) = t22;
          T.set(0, 1, y.scaled(Rat(1, 2)));
          if (T.is_totally_psd()) out.push_back(T);
        }
      }
  }
  std::sort(out.begin(), out.end(), [](const SymMat& x, const SymMat& y) { return x.cmp(y) < 0; });
  return out;
}

}  // namespace kp
