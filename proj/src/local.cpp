#include "kp/local.hpp"

namespace kp {

std::string LocalFieldSpec::name() const {
  switch (kind) {
    case LocalKind::Q2: return "q2";
    case LocalKind::UnramifiedQuad: return "q4";
    case LocalKind::RamifiedSqrt2: return "q2sqrt2";
  }
  return "?";
}

Rat frac2(const Rat& x) {
  if (x == 0) return Rat(0);
  Zint d = den(x);
  Int t = Int(mpz_scan1(d.get_mpz_t(), 0));
  if (t == 0) return Rat(0);  // odd denominator: a 2-adic integer
  Zint m = Zint(1) << size_t(t);
  Zint dodd = d >> size_t(t);
  Zint dinv;
  int ok = mpz_invert(dinv.get_mpz_t(), dodd.get_mpz_t(), m.get_mpz_t());
  LOGIC_CHECK(ok != 0, "odd part must be invertible mod 2^t");
  Zint r = (num(x) * dinv) % m;
  if (r < 0) r += m;
  Rat f(r, m);
  f.canonicalize();
  return f;
}

LocalElement LocalElement::uniformizer_pow(const LocalFieldSpec& K, Int k) {
  if (K.kind != LocalKind::RamifiedSqrt2) return LocalElement(K, pow_rat(Rat(2), k));
  if (k % 2 == 0) return LocalElement(K, pow_rat(Rat(2), k / 2));
  // k odd: pi^k = 2^{(k-1)/2} * sqrt2 (k-1 is even, the division is exact)
  return LocalElement(K, Rat(0), pow_rat(Rat(2), (k - 1) / 2));
}

LocalElement LocalElement::operator+(const LocalElement& o) const {
  DOMAIN_CHECK(K == o.K, "mixed local fields");
  return LocalElement(K, a + o.a, b + o.b);
}

LocalElement LocalElement::operator-(const LocalElement& o) const {
  DOMAIN_CHECK(K == o.K, "mixed local fields");
  return LocalElement(K, a - o.a, b - o.b);
}

LocalElement LocalElement::operator*(const LocalElement& o) const {
  DOMAIN_CHECK(K == o.K, "mixed local fields");
  switch (K.kind) {
    case LocalKind::Q2:
      return LocalElement(K, a * o.a);
    case LocalKind::UnramifiedQuad:
      // zeta^2 = -1 - zeta
      return LocalElement(K, a * o.a - b * o.b, a * o.b + b * o.a - b * o.b);
    case LocalKind::RamifiedSqrt2:
      return LocalElement(K, a * o.a + Rat(2) * b * o.b, a * o.b + b * o.a);
  }
  LOGIC_CHECK(false, "unreachable");
  return *this;
}

LocalElement LocalElement::conj() const {
  switch (K.kind) {
    case LocalKind::Q2: return *this;
    case LocalKind::UnramifiedQuad: return LocalElement(K, a - b, -b);  // zeta -> zeta^2
    case LocalKind::RamifiedSqrt2: return LocalElement(K, a, -b);
  }
  LOGIC_CHECK(false, "unreachable");
  return *this;
}

Rat LocalElement::trace() const {
  switch (K.kind) {
    case LocalKind::Q2: return a;
    case LocalKind::UnramifiedQuad: return Rat(2) * a - b;
    case LocalKind::RamifiedSqrt2: return Rat(2) * a;
  }
  LOGIC_CHECK(false, "unreachable");
  return a;
}

Rat LocalElement::norm() const {
  LocalElement n = *this * conj();
  LOGIC_CHECK(n.b == 0, "norm must land in Q2");
  return K.quadratic() ? n.a : a;
}

LocalElement LocalElement::inv() const {
  DOMAIN_CHECK(!is_zero(), "inverse of zero");
  if (!K.quadratic()) return LocalElement(K, Rat(1) / a);
  Rat n = norm();
  LocalElement c = conj();
  return c.scaled(Rat(1) / n);
}

Int LocalElement::valuation() const {
  LOGIC_CHECK(!is_zero(), "valuation of zero");
  // no cancellation: {1, theta} stays a basis of the residue pieces
  Int va = a == 0 ? kValInf : val2(a);
  Int vb = b == 0 ? kValInf : val2(b);
  switch (K.kind) {
    case LocalKind::Q2: return va;
    case LocalKind::UnramifiedQuad: return va < vb ? va : vb;
    case LocalKind::RamifiedSqrt2: {
      Int wa = a == 0 ? kValInf : 2 * va;
      Int wb = b == 0 ? kValInf : 2 * vb + 1;
      return wa < wb ? wa : wb;
    }
  }
  LOGIC_CHECK(false, "unreachable");
  return 0;
}

int LocalElement::cmp(const LocalElement& o) const {
  int c = mpq_cmp(a.get_mpq_t(), o.a.get_mpq_t());
  if (c != 0) return c < 0 ? -1 : 1;
  c = mpq_cmp(b.get_mpq_t(), o.b.get_mpq_t());
  return c == 0 ? 0 : (c < 0 ? -1 : 1);
}

std::string LocalElement::str() const {
  if (!K.quadratic() || b == 0) return rat_to_string(a);
  const char* t = K.kind == LocalKind::UnramifiedQuad ? "z" : "r";
  if (a == 0) return rat_to_string(b) + t;
  return rat_to_string(a) + (b > 0 ? "+" : "") + rat_to_string(b) + t;
}

CycScalar psi_local(const LocalElement& x) {
  Rat f = frac2(Rat(x.K.s) * x.trace());
  Zint n = num(f), d = den(f);
  DOMAIN_CHECK(n.fits_slong_p() && d.fits_slong_p(), "character argument too deep");
  return CycScalar::root_of_unity(-n.get_si(), d.get_si());
}

std::vector<LocalElement> residue_transversal(const LocalFieldSpec& K, Int k) {
  DOMAIN_CHECK(k >= 0, "transversal of o/p^k needs k >= 0");
  std::vector<LocalElement> out;
  if (K.kind == LocalKind::Q2) {
    out.reserve(size_t(1) << size_t(k));
    for (Int u = 0; u < (Int(1) << k); ++u) out.push_back(LocalElement(K, Rat(u)));
    return out;
  }
  // coordinate moduli: 2^ku for the rational part, 2^kv for the theta part
  Int ku = K.kind == LocalKind::UnramifiedQuad ? k : (k + 1) / 2;
  Int kv = K.kind == LocalKind::UnramifiedQuad ? k : k / 2;
  out.reserve(size_t(1) << size_t(ku + kv));
  for (Int u = 0; u < (Int(1) << ku); ++u)
    for (Int v = 0; v < (Int(1) << kv); ++v)
      out.push_back(LocalElement(K, Rat(u), Rat(v)));
  return out;
}

LocalElement reduce_mod_pk(const LocalElement& x, Int k) {
  const LocalFieldSpec& K = x.K;
  if (K.kind == LocalKind::Q2) return LocalElement(K, mod_2pow(x.a, k));
  if (K.kind == LocalKind::UnramifiedQuad)
    return LocalElement(K, mod_2pow(x.a, k), mod_2pow(x.b, k));
  // p^{2j} = 2^j o; p^{2j+1} = 2^{j+1} Z2 + 2^j sqrt2 Z2
  Int ja = k >= 0 ? (k + 1) / 2 : k / 2;  // ceil(k/2)
  Int jb = k >= 0 ? k / 2 : (k - 1) / 2;  // floor(k/2)
  return LocalElement(K, mod_2pow(x.a, ja), mod_2pow(x.b, jb));
}

namespace {

// one Riemann-sum level of the Weil-index oracle
CycScalar gauss_level(const LocalElement& a, Int k) {
  const LocalFieldSpec& K = a.K;
  Int v = a.valuation();
  // psi(a(x+y)^2) = psi(ax^2) on cosets of p^{k'}: both cross terms land in p^{-c}
  Int kp = k - K.e - v - K.c_psi;
  Int half = -K.c_psi - v;
  Int kp2 = half >= 0 ? (half + 1) / 2 : half / 2;  // ceil(half/2)
  if (kp2 > kp) kp = kp2;
  if (-k > kp) kp = -k;
  LocalElement pik = LocalElement::uniformizer_pow(K, -k);
  CycScalar tot = CycScalar::zero();
  for (const LocalElement& r : residue_transversal(K, k + kp)) {
    LocalElement x = pik * r;
    tot = tot + psi_local(a * x * x);
  }
  return tot.scaled(pow_rat(Rat(K.q), -kp));
}

// G = alpha * r with r a positive element of Q or Q*sqrt2; recover alpha
CycScalar phase_eighth_root(const CycScalar& G) {
  int hits = 0;
  CycScalar found = CycScalar::one();
  for (Int j = 0; j < 8; ++j) {
    CycScalar cand = CycScalar::root_of_unity(j, 8);
    CycScalar x = G * cand.conj();
    if (x != x.conj()) continue;
    bool pos = false, known = false;
    if (x.is_rational()) {
      pos = x.rational_value() > 0;
      known = true;
    } else {
      CycScalar y = x * CycScalar::sqrt2();
      if (y.is_rational()) {
        pos = y.rational_value() > 0;
        known = true;
      }
    }
    if (!known || !pos) continue;
    ++hits;
    found = cand;
  }
  LOGIC_CHECK(hits == 1, "Gauss sum phase must be a unique eighth root");
  return found;
}

}  // namespace

CycScalar weil_index(const LocalElement& a0) {
  DOMAIN_CHECK(!a0.is_zero(), "Weil index of zero");
  // alpha(a b^2) = alpha(a): strip even uniformizer powers first
  Int v0 = a0.valuation();
  Int sh = 2 * (v0 >= 0 ? v0 / 2 : (v0 - 1) / 2);  // even, <= v0
  LocalElement a = a0 * LocalElement::uniformizer_pow(a0.K, -sh);
  Int v = a.valuation();
  const LocalFieldSpec& K = a.K;
  // psi(a x^2) is identically 1 on p^{-k} while 2k <= v + c: start past that
  // regime, where the constant positive phase would fake a stabilization.
  Int kstart = (v + K.c_psi) / 2 + 1;
  if (kstart < 1) kstart = 1;
  bool have_prev = false;
  CycScalar prev = CycScalar::one();
  for (Int k = kstart; k < kstart + 10; ++k) {
    CycScalar G = gauss_level(a, k);
    if (G.is_zero()) {
      have_prev = false;
      continue;
    }
    CycScalar al = phase_eighth_root(G);
    if (have_prev && al == prev) return al;
    prev = al;
    have_prev = true;
  }
  throw CheckError("NoStabilization", "Gauss sums did not stabilize for " + a0.str());
}

}  // namespace kp
