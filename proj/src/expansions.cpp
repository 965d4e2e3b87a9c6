#include "kp/expansions.hpp"

#include <algorithm>
#include <sstream>

namespace kp {

namespace {

void check_metadata(const FieldSpec& F, Int m, const std::vector<Int>& k, Int eta) {
  DOMAIN_CHECK(m >= 1, "degree m must be positive");
  DOMAIN_CHECK(Int(k.size()) == F.degree(), "weight needs one entry per embedding");
  for (Int kj : k) DOMAIN_CHECK(kj >= 1, "weight entries must be positive");
  DOMAIN_CHECK(eta == 1 || eta == -1, "eta must be a unit sign");
  // N(eta)^m = (-1)^{m sum k_j}; for eta = -1 the norm is (-1)^{deg F}
  Int lhs = (eta == -1) ? F.degree() * m : 0;
  Int ksum = 0;
  for (Int kj : k) ksum += kj;
  if (mod_positive(lhs - m * ksum, 2) != 0)
    throw CheckError("EtaNormCondition",
                     "N(eta)^m != (-1)^{m sum k} for eta=" + std::to_string(eta));
}

std::string trace_err(const SymMat& T, const Rat& bound) {
  std::ostringstream os;
  os << "key trace " << rat_to_string(T.trace_down()) << " beyond certified bound "
     << rat_to_string(bound);
  return os.str();
}

}  // namespace

Expansion::Expansion(const FieldSpec& f, Int m_, std::vector<Int> k, Int eta_, const Rat& bound)
    : F(f), m(m_), weight(std::move(k)), eta(eta_), trace_bound(bound) {
  check_metadata(F, m, weight, eta);
  DOMAIN_CHECK(trace_bound >= 0, "trace bound must be nonnegative");
}

void Expansion::set(const SymMat& T, const CycScalar& v) {
  DOMAIN_CHECK(T.F == F && T.m == m, "key shape mismatch");
  DOMAIN_CHECK(T.is_half_integral(), "key must lie in L_m^*");
  DOMAIN_CHECK(T.is_totally_psd(), "key must be totally positive semidefinite");
  DOMAIN_CHECK(T.trace_down() <= trace_bound, trace_err(T, trace_bound));
  std::string key = T.key();
  if (v.is_zero()) {
    c.erase(key);
    return;
  }
  c[key] = {T, v};
}

CycScalar Expansion::get(const SymMat& T) const {
  auto it = c.find(T.key());
  return it == c.end() ? CycScalar::zero() : it->second.second;
}

bool Expansion::operator==(const Expansion& o) const {
  if (!(F == o.F) || m != o.m || weight != o.weight || eta != o.eta ||
      trace_bound != o.trace_bound || c.size() != o.c.size())
    return false;
  auto jt = o.c.begin();
  for (auto it = c.begin(); it != c.end(); ++it, ++jt) {
    if (it->first != jt->first) return false;
    if (!(it->second.second == jt->second.second)) return false;
  }
  return true;
}

void Expansion::check_plus_type() const {
  for (const auto& kv : c) {
    const SymMat& T = kv.second.first;
    DOMAIN_CHECK(T.is_half_integral(), "plus expansion key must lie in L_m^*");
    DOMAIN_CHECK(T.is_totally_psd(), "plus expansion key must be totally psd");
  }
}

bool Expansion::cusp_supported() const {
  for (const auto& kv : c)
    if (!kv.second.first.is_totally_pd()) return false;
  return true;
}

JacobiExpansion::JacobiExpansion(const FieldSpec& f, Int m_, std::vector<Int> k, const Rat& bound)
    : F(f), m(m_), weight(std::move(k)), trace_bound(bound) {
  DOMAIN_CHECK(m >= 1, "degree m must be positive");
  DOMAIN_CHECK(Int(weight.size()) == F.degree(), "weight needs one entry per embedding");
  for (Int kj : weight) DOMAIN_CHECK(kj >= 2, "Jacobi weight entries must be at least 2");
  DOMAIN_CHECK(trace_bound >= 0, "trace bound must be nonnegative");
}

void JacobiExpansion::set(const SymMat& T, const ResidueVector& lam, const CycScalar& v) {
  DOMAIN_CHECK(T.F == F && T.m == m && lam.F == F && lam.m() == m, "key shape mismatch");
  DOMAIN_CHECK(T.trace_down() <= trace_bound, trace_err(T, trace_bound));
  if (!T.is_half_integral() || !T.is_totally_psd() || !(T + lam.outer()).in_4Lstar())
    throw CheckError("JacobiKeyInvariant",
                     "key needs T in L_m^*, T >= 0 and T = -lambda t(lambda) mod 4L_m^*");
  std::string key = T.key() + "|" + lam.key();
  if (v.is_zero()) {
    c.erase(key);
    return;
  }
  c[key] = {T, lam, v};
}

CycScalar JacobiExpansion::get(const SymMat& T, const ResidueVector& lam) const {
  auto it = c.find(T.key() + "|" + lam.key());
  return it == c.end() ? CycScalar::zero() : std::get<2>(it->second);
}

bool JacobiExpansion::operator==(const JacobiExpansion& o) const {
  if (!(F == o.F) || m != o.m || weight != o.weight || trace_bound != o.trace_bound ||
      c.size() != o.c.size())
    return false;
  auto jt = o.c.begin();
  for (auto it = c.begin(); it != c.end(); ++it, ++jt) {
    if (it->first != jt->first) return false;
    if (!(std::get<2>(it->second) == std::get<2>(jt->second))) return false;
  }
  return true;
}

SplitFamily::SplitFamily(const FieldSpec& f, Int m_, std::vector<Int> k, Int eta_,
                         const Rat& bound)
    : F(f), m(m_), weight(std::move(k)), eta(eta_), trace_bound(bound) {
  check_metadata(F, m, weight, eta);
  DOMAIN_CHECK(trace_bound >= 0, "trace bound must be nonnegative");
  comp.resize(size_t(residue_class_count(F, m)));
}

void SplitFamily::set(Int lam_index, const SymMat& T, const CycScalar& v) {
  DOMAIN_CHECK(lam_index >= 0 && lam_index < Int(comp.size()), "lambda index out of range");
  DOMAIN_CHECK(T.F == F && T.m == m, "key shape mismatch");
  DOMAIN_CHECK(T.trace_down() <= trace_bound, trace_err(T, trace_bound));
  ResidueVector lam = ResidueVector::from_index(F, m, lam_index);
  FieldElement etainv = FieldElement(F, Rat(1)) / FieldElement(F, Rat(eta));
  if (!(T.scaled_elt(etainv) - lam.outer()).in_4Lstar())
    throw CheckError("SplitKeyInvariant",
                     "component key needs eta^{-1} T - lambda t(lambda) in 4 L_m^*");
  std::string key = T.key();
  if (v.is_zero()) {
    comp[size_t(lam_index)].erase(key);
    return;
  }
  comp[size_t(lam_index)][key] = {T, v};
}

Int SplitFamily::total_size() const {
  Int n = 0;
  for (const auto& mp : comp) n += Int(mp.size());
  return n;
}

bool SplitFamily::operator==(const SplitFamily& o) const {
  if (!(F == o.F) || m != o.m || weight != o.weight || eta != o.eta ||
      trace_bound != o.trace_bound || comp.size() != o.comp.size())
    return false;
  for (size_t i = 0; i < comp.size(); ++i) {
    if (comp[i].size() != o.comp[i].size()) return false;
    auto jt = o.comp[i].begin();
    for (auto it = comp[i].begin(); it != comp[i].end(); ++it, ++jt) {
      if (it->first != jt->first) return false;
      if (!(it->second.second == jt->second.second)) return false;
    }
  }
  return true;
}

std::pair<SymMat, ResidueVector> normalize_jacobi_key(const SymMat& N,
                                                      const std::vector<FieldElement>& r) {
  DOMAIN_CHECK(N.is_half_integral(), "raw index N must lie in L_m^*");
  DOMAIN_CHECK(Int(r.size()) == N.m, "index vector length mismatch");
  ResidueVector lam = ResidueVector::reduce(r);
  SymMat T = N.scaled(Rat(4));
  for (Int i = 0; i < N.m; ++i)
    for (Int j = 0; j < N.m; ++j) T.at(i, j) = T.at(i, j) - r[size_t(i)] * r[size_t(j)];
  LOGIC_CHECK(T.is_half_integral(), "4N - r t(r) stays half-integral");
  LOGIC_CHECK((T + lam.outer()).in_4Lstar(), "invariant key congruence");
  return {T, lam};
}

std::pair<SymMat, std::vector<FieldElement>> denormalize_jacobi_key(const SymMat& T,
                                                                    const ResidueVector& lam) {
  DOMAIN_CHECK(T.m == lam.m() && T.F == lam.F, "key shape mismatch");
  if (!T.is_half_integral() || !(T + lam.outer()).in_4Lstar())
    throw CheckError("JacobiKeyInvariant",
                     "T = -lambda t(lambda) mod 4 L_m^* fails; no raw representative");
  std::vector<FieldElement> r = lam.v;
  SymMat N = (T + lam.outer()).scaled(Rat(1, 4));
  LOGIC_CHECK(N.is_half_integral(), "(T + lambda t(lambda))/4 lands in L_m^*");
  return {N, r};
}

SplitFamily split_plus(const Expansion& h) {
  h.check_plus_type();
  SplitFamily fam(h.F, h.m, h.weight, h.eta, h.trace_bound);
  FieldElement eta_elt(h.F, Rat(h.eta));
  for (const auto& kv : h.c) {
    const SymMat& T = kv.second.first;
    auto w = plus_support_witness(T, eta_elt);
    if (!w) throw CheckError("NotPlusSupported", "no support witness for key " + T.key());
    fam.set(w->index(), T, kv.second.second);
  }
  return fam;
}

JacobiExpansion jacobi_of_plus(const Expansion& h) {
  if (h.eta != -1)
    throw CheckError("UnsupportedEta", "the Jacobi correspondence is realized at eta = -1");
  h.check_plus_type();
  std::vector<Int> kj = h.weight;
  for (Int& k : kj) k += 1;
  JacobiExpansion g(h.F, h.m, kj, h.trace_bound);
  FieldElement eta_elt(h.F, Rat(h.eta));
  for (const auto& kv : h.c) {
    const SymMat& T = kv.second.first;
    auto w = plus_support_witness(T, eta_elt);
    if (!w) throw CheckError("NotPlusSupported", "no support witness for key " + T.key());
    g.set(T, *w, kv.second.second);
  }
  return g;
}

Expansion plus_of_jacobi(const JacobiExpansion& g) {
  std::vector<Int> k = g.weight;
  for (Int& kj : k) {
    DOMAIN_CHECK(kj >= 2, "Jacobi weight too small to shift down");
    kj -= 1;
  }
  Expansion h(g.F, g.m, k, -1, g.trace_bound);
  std::map<std::string, std::string> lam_of;  // T key -> lambda key, duplicate guard
  for (const auto& kv : g.c) {
    const SymMat& T = std::get<0>(kv.second);
    const ResidueVector& lam = std::get<1>(kv.second);
    auto ins = lam_of.emplace(T.key(), lam.key());
    if (!ins.second && ins.first->second != lam.key())
      throw CheckError("DuplicateWitness",
                       "keys with equal T but distinct lambda cannot come from a plus form");
    h.set(T, std::get<2>(kv.second));
  }
  return h;
}

JacobiExpansion compose_theta(const SplitFamily& fam) {
  if (fam.eta != -1)
    throw CheckError("UnsupportedEta", "the theta expansion is composed at eta = -1");
  std::vector<Int> kj = fam.weight;
  for (Int& k : kj) k += 1;
  JacobiExpansion g(fam.F, fam.m, kj, fam.trace_bound);
  for (Int idx = 0; idx < Int(fam.comp.size()); ++idx) {
    ResidueVector lam = ResidueVector::from_index(fam.F, fam.m, idx);
    for (const auto& kv : fam.comp[size_t(idx)])
      g.set(kv.second.first, lam, kv.second.second);
  }
  return g;
}

namespace {

// per-coordinate candidates p with q_F(p + shift) <= bound, certified complete:
// |emb_j(p + shift)| <= s pointwise forces emb_j(p) into [-s - mu, s + mu]
std::vector<FieldElement> coordinate_candidates(const FieldSpec& F, const FieldElement& shift,
                                                const Rat& bound) {
  Int s = 0;
  while (Rat(s) * Rat(s) < bound) ++s;
  Int u = 1;  // smallest integer with u^2 >= d
  while (u * u < F.d) ++u;
  Rat mu = F.quadratic() ? (F.half_basis() ? Rat(1, 2) + Rat(1 + u) / 4 : Rat(1, 2) + Rat(u) / 2)
                         : Rat(1, 2);
  std::vector<Rat> lo(size_t(F.degree()), -(Rat(s) + mu)), hi(size_t(F.degree()), Rat(s) + mu);
  std::vector<FieldElement> out;
  for (const auto& p : integral_box(F, lo, hi)) {
    FieldElement x = p + shift;
    if ((x * x).trace() <= bound) out.push_back(x);
  }
  return out;
}

}  // namespace

std::vector<ThetaTerm> theta_coeffs(const ResidueVector& lam, const Rat& bound) {
  DOMAIN_CHECK(bound >= 0, "bound must be nonnegative");
  const FieldSpec& F = lam.F;
  Int m = lam.m();
  std::vector<std::vector<FieldElement>> cand;
  cand.reserve(size_t(m));
  for (Int i = 0; i < m; ++i)
    cand.push_back(coordinate_candidates(F, lam.v[size_t(i)].scaled(Rat(1, 2)), bound));
  std::vector<ThetaTerm> out;
  for (const auto& ci : cand)
    if (ci.empty()) return out;
  std::vector<size_t> odo(size_t(m), 0);
  while (true) {
    std::vector<FieldElement> x(size_t(m), FieldElement(F, Rat(0)));
    Rat q(0);
    for (Int i = 0; i < m; ++i) {
      x[size_t(i)] = cand[size_t(i)][odo[size_t(i)]];
      q += (x[size_t(i)] * x[size_t(i)]).trace();
    }
    if (q <= bound) {
      ThetaTerm term;
      term.zexp = SymMat(F, m);
      for (Int i = 0; i < m; ++i)
        for (Int j = 0; j < m; ++j) term.zexp.at(i, j) = x[size_t(i)] * x[size_t(j)];
      term.wexp.reserve(size_t(m));
      for (Int i = 0; i < m; ++i) term.wexp.push_back(x[size_t(i)].scaled(Rat(2)));
      out.push_back(std::move(term));
    }
    Int pos = 0;
    while (pos < m) {
      if (++odo[size_t(pos)] < cand[size_t(pos)].size()) break;
      odo[size_t(pos)] = 0;
      ++pos;
    }
    if (pos == m) break;
  }
  // canonical order: by z-exponent, then w-exponent
  std::sort(out.begin(), out.end(), [](const ThetaTerm& a, const ThetaTerm& b) {
    int c0 = a.zexp.cmp(b.zexp);
    if (c0 != 0) return c0 < 0;
    for (size_t i = 0; i < a.wexp.size(); ++i) {
      int c1 = a.wexp[i].cmp(b.wexp[i]);
      if (c1 != 0) return c1 < 0;
    }
    return false;
  });
  return out;
}

Expansion rho_usharp(const Expansion& h, const SymMat& S) {
  DOMAIN_CHECK(S.F == h.F && S.m == h.m, "S shape mismatch");
  Expansion out(h.F, h.m, h.weight, h.eta, h.trace_bound);
  for (const auto& kv : h.c) {
    const SymMat& T = kv.second.first;
    FieldElement tr(h.F, Rat(0));
    for (Int i = 0; i < h.m; ++i)
      for (Int j = 0; j < h.m; ++j) tr = tr + T.at(i, j) * S.at(j, i);
    out.set(T, kv.second.second * tr.additive_character_finite());
  }
  return out;
}

namespace {

bool rat_sqrt(const Rat& r, Rat& root) {
  if (r < 0) return false;
  Zint n = num(r), d = den(r);
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  Zint sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  root = Rat(sn) / Rat(sd);
  return true;
}

// exact square root in F when one exists; the sign of the result is arbitrary
bool sqrt_in_field(const FieldElement& x, FieldElement& out) {
  const FieldSpec& F = x.F;
  if (x.is_zero()) {
    out = FieldElement(F, Rat(0));
    return true;
  }
  if (!F.quadratic()) {
    Rat r;
    if (!rat_sqrt(x.a, r)) return false;
    out = FieldElement(F, r);
    return true;
  }
  Rat nrm = x.norm(), s;
  if (!rat_sqrt(nrm, s)) return false;  // N(u)^2 = N(x) needs N(x) square
  for (int sg : {1, -1}) {
    Rat n_root = sg > 0 ? s : Rat(-s);
    Rat tsq = x.trace() + 2 * n_root, t;  // Tr(u)^2 = Tr(x) + 2 N(u)
    if (!rat_sqrt(tsq, t)) continue;
    if (t != 0) {
      // u^2 - Tr(u) u + N(u) = 0 and u^2 = x give u = (x + N(u)) / Tr(u)
      FieldElement u = (x + FieldElement(F, n_root)).scaled(Rat(1) / t);
      if (u * u == x) {
        out = u;
        return true;
      }
    } else {
      // trace-zero root: u = beta sqrt(d) with beta^2 = x / d (x must be rational)
      if (x.b != 0) continue;
      Rat beta2 = x.a / Rat(F.d), beta;
      if (!rat_sqrt(beta2, beta)) continue;
      FieldElement u = FieldElement::sqrt_d(F).scaled(beta);
      if (u * u == x) {
        out = u;
        return true;
      }
    }
  }
  return false;
}

// rational upper bound for max_j lambda_max(emb_j(A tA)), by Gershgorin row sums
// with interval absolute values; exact for integer matrices of exact embeddings
Rat congruence_stretch(const FMat& A) {
  FMat X = A * A.transpose();
  Rat best(0);
  for (int j = 0; j < A.F.degree(); ++j)
    for (Int i = 0; i < X.rows; ++i) {
      Rat row(0);
      for (Int k = 0; k < X.cols; ++k) row += Rat(X.at(i, k).embed(j, 96).abs_hi().d_up());
      if (row > best) best = row;
    }
  LOGIC_CHECK(best > 0, "A tA has positive diagonal");
  return best;
}

}  // namespace

Expansion rho_mA(const Expansion& h, const FMat& A) {
  DOMAIN_CHECK(A.F == h.F && A.rows == h.m && A.cols == h.m, "A shape mismatch");
  FieldElement det = A.det();
  DOMAIN_CHECK(!det.is_zero(), "A must be invertible");
  FieldElement u(h.F, Rat(0));
  Int t = -1;
  for (Int tc : {Int(0), Int(1)}) {
    if (sqrt_in_field(det.scaled(tc ? Rat(1, 2) : Rat(1)), u)) {
      t = tc;
      break;
    }
  }
  if (t < 0)
    throw CheckError("UnsupportedDeterminant",
                     "det(A) = " + det.str() + " is not of the form 2^t u^2");
  // det^{-k-1/2} = prod_j |emb_j(u)|^{-(2k_j+1)} * 2^{t sum_j (-k_j - 1/2)}
  Int twok1 = 0;
  for (Int kj : h.weight) twok1 += 2 * kj + 1;
  Rat rational_part;
  if (u.is_rational()) {
    Rat au = u.a >= 0 ? u.a : -u.a;
    rational_part = pow_rat(au, -twok1);
  } else {
    for (size_t j = 1; j < h.weight.size(); ++j)
      if (h.weight[j] != h.weight[0])
        throw CheckError("UnsupportedDeterminant",
                         "irrational square part needs parallel weight");
    Rat an = u.norm() >= 0 ? u.norm() : -u.norm();
    rational_part = pow_rat(an, -(2 * h.weight[0] + 1));
  }
  CycScalar scalar = CycScalar::from_rat(rational_part) * CycScalar::q_pow_half(2, -t * twok1);

  Rat stretch = congruence_stretch(A);
  Expansion out(h.F, h.m, h.weight, h.eta, h.trace_bound / stretch);
  FMat Ainv = A.inverse();
  for (const auto& kv : h.c) {
    SymMat Tp = kv.second.first.congruence(Ainv);
    if (!Tp.is_half_integral()) continue;  // the key has no preimage in the lattice
    if (Tp.trace_down() > out.trace_bound) continue;  // beyond the certified region
    out.set(Tp, scalar * kv.second.second);
  }
  return out;
}

}  // namespace kp
