#include "kp/numeval.hpp"

#include <algorithm>
#include <map>

namespace kp {

CMat CMat::operator+(const CMat& o) const {
  DOMAIN_CHECK(m == o.m, "matrix size mismatch");
  CMat r = *this;
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] + o.e[i];
  return r;
}

CMat CMat::operator*(const CMat& o) const {
  DOMAIN_CHECK(m == o.m, "matrix size mismatch");
  mpfr_prec_t prec = e.empty() ? 192 : e[0].re.prec();
  CMat r(m, prec);
  for (Int i = 0; i < m; ++i)
    for (Int j = 0; j < m; ++j) {
      CIval s(prec);
      for (Int k = 0; k < m; ++k) s = s + at(i, k) * o.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

CIval CMat::det() const {
  DOMAIN_CHECK(m >= 1 && m <= 2, "determinant implemented for m <= 2");
  if (m == 1) return at(0, 0);
  return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
}

CMat CMat::inverse() const {
  DOMAIN_CHECK(m >= 1 && m <= 2, "inverse implemented for m <= 2");
  CIval dd = det();
  if (dd.abs2().contains_zero())
    throw CheckError("PrecisionExhausted", "determinant interval touches zero");
  mpfr_prec_t prec = e[0].re.prec();
  CMat r(m, prec);
  CIval one(Ival::from_int(1, prec), Ival(prec));
  if (m == 1) {
    r.at(0, 0) = one / dd;
    return r;
  }
  r.at(0, 0) = at(1, 1) / dd;
  r.at(1, 1) = at(0, 0) / dd;
  r.at(0, 1) = (CIval(prec) - at(0, 1)) / dd;
  r.at(1, 0) = (CIval(prec) - at(1, 0)) / dd;
  return r;
}

CIval CMat::trace() const {
  mpfr_prec_t prec = e.empty() ? 192 : e[0].re.prec();
  CIval s(prec);
  for (Int i = 0; i < m; ++i) s = s + at(i, i);
  return s;
}

namespace {

// exact lower bound for the least eigenvalue of a rational pd matrix; for
// m = 2 this is det/tr, which never exceeds the least eigenvalue
Rat min_eig_lower(const SymMat& y) {
  DOMAIN_CHECK(y.m >= 1 && y.m <= 2, "eigenvalue bound implemented for m <= 2");
  DOMAIN_CHECK(y.is_totally_pd(), "Im z must be positive definite");
  if (y.m == 1) return y.at(0, 0).a;
  Rat tr = y.at(0, 0).a + y.at(1, 1).a;
  Rat det = y.at(0, 0).a * y.at(1, 1).a - y.at(0, 1).a * y.at(0, 1).a;
  return det / tr;
}

}  // namespace

EvalPoint rational_point(const FieldSpec& F, Int m, const std::vector<SymMat>& re,
                         const std::vector<SymMat>& im, const std::vector<std::vector<Rat>>& w,
                         mpfr_prec_t prec) {
  Int n = F.degree();
  DOMAIN_CHECK(m >= 1, "m must be positive");
  DOMAIN_CHECK(Int(re.size()) == n && Int(im.size()) == n, "one matrix per real embedding");
  DOMAIN_CHECK(w.empty() || Int(w.size()) == n, "w: absent, or one vector per embedding");
  EvalPoint pt;
  pt.m = m;
  pt.n = n;
  for (Int j = 0; j < n; ++j) {
    const SymMat& x = re[size_t(j)];
    const SymMat& y = im[size_t(j)];
    DOMAIN_CHECK(!x.F.quadratic() && !y.F.quadratic(), "per-embedding data lives over Q");
    DOMAIN_CHECK(x.m == m && y.m == m, "matrix size mismatch");
    pt.sigma.push_back(min_eig_lower(y));
    CMat zj(m, prec);
    for (Int a = 0; a < m; ++a)
      for (Int b = 0; b < m; ++b)
        zj.at(a, b) =
            CIval(Ival::from_rat(x.at(a, b).a, prec), Ival::from_rat(y.at(a, b).a, prec));
    pt.z.push_back(zj);
    if (!w.empty()) {
      DOMAIN_CHECK(Int(w[size_t(j)].size()) == m, "w vector length mismatch");
      std::vector<Ival> wj;
      for (Int i = 0; i < m; ++i) wj.push_back(Ival::from_rat(w[size_t(j)][size_t(i)], prec));
      pt.w.push_back(wj);
    }
  }
  return pt;
}

EvalPoint scalar_point(const FieldSpec& F, Int m, const Rat& re_s, const Rat& im_s,
                       mpfr_prec_t prec) {
  FieldSpec Q = FieldSpec::rationals();
  SymMat x = SymMat::from_mat(FMat::scalar(Q, m, FieldElement(Q, re_s)));
  SymMat y = SymMat::from_mat(FMat::scalar(Q, m, FieldElement(Q, im_s)));
  std::vector<SymMat> re(size_t(F.degree()), x), im(size_t(F.degree()), y);
  return rational_point(F, m, re, im, {}, prec);
}

namespace {

// e(sum_j tr(emb_j(T) z_j))
CIval e_of_trace(const SymMat& T, const EvalPoint& pt, mpfr_prec_t prec) {
  CIval arg(prec);
  for (Int j = 0; j < pt.n; ++j)
    for (Int a = 0; a < T.m; ++a)
      for (Int b = 0; b < T.m; ++b) {
        Ival c = T.at(a, b).embed(int(j), prec);
        const CIval& z = pt.z[size_t(j)].at(b, a);
        arg = arg + CIval(c * z.re, c * z.im);
      }
  return e_of(arg);
}

}  // namespace

CIval eval_expansion(const Expansion& h, const EvalPoint& pt, const Rat& exp_scale,
                     mpfr_prec_t prec) {
  DOMAIN_CHECK(pt.m == h.m && pt.n == h.F.degree(), "point shape matches expansion");
  CIval total(prec);
  for (const auto& kv : h.c) {
    const SymMat& T = kv.second.first;
    total = total + kv.second.second.to_complex(prec) * e_of_trace(T.scaled(exp_scale), pt, prec);
  }
  return total;
}

CIval eval_split_component(const SplitFamily& fam, Int lam_index, const EvalPoint& pt,
                           mpfr_prec_t prec) {
  DOMAIN_CHECK(lam_index >= 0 && lam_index < Int(fam.comp.size()), "component index");
  DOMAIN_CHECK(pt.m == fam.m && pt.n == fam.F.degree(), "point shape matches family");
  Rat quarter = rat_of(1, 4);
  CIval total(prec);
  for (const auto& kv : fam.comp[size_t(lam_index)]) {
    const SymMat& T = kv.second.first;
    total = total + kv.second.second.to_complex(prec) * e_of_trace(T.scaled(quarter), pt, prec);
  }
  return total;
}

namespace {

// Upper bound for the theta tail beyond Tr tr(x t(x)) > B at least-eigenvalue
// level sigma.  Each dropped term has modulus <= exp(-2 pi sigma Q(x)) with
// Q(x) = Tr tr(x t(x)); splitting one factor exp(-pi sigma Q) <= exp(-pi sigma B)
// and bounding the other by the full lattice sum gives
//   tail <= exp(-pi sigma B) * Theta^(m deg),  Theta = 1 + 2g/(1-g),
// where g = exp(-pi sigma c_F / 4) dominates the one-dimensional Gaussian sum
// over (1/2) o_F and c_F lower-bounds the least eigenvalue of the trace form.
Ival theta_tail_bound(const FieldSpec& F, Int m, const Rat& sigma, const Rat& B,
                      mpfr_prec_t prec) {
  Ival pi = pi_interval(prec);
  Ival s = Ival::from_rat(sigma, prec);
  Rat cF(1);
  if (F.quadratic()) {
    Rat trw = F.trace_omega();
    FieldElement w = FieldElement::omega(F);
    Rat trw2 = (w * w).trace();
    Rat tr = 2 + trw2;
    Rat det = 2 * trw2 - trw * trw;
    LOGIC_CHECK(det > 0 && tr > 0, "trace form must be positive definite");
    cF = det / tr;
  }
  Ival g = (-(pi * s * Ival::from_rat(cF, prec) / Ival::from_int(4, prec))).exp_();
  if (mpfr_cmp_ui(g.hi.v, 1) >= 0)
    throw CheckError("TailBoundTooLarge", "sigma too small to certify the lattice sum");
  Ival one = Ival::from_int(1, prec);
  Ival theta1 = one + Ival::from_int(2, prec) * g / (one - g);
  Ival tot = one;
  for (Int i = 0; i < F.degree() * m; ++i) tot = tot * theta1;
  return (-(pi * s * Ival::from_rat(B, prec))).exp_() * tot;
}

}  // namespace

CIval eval_theta(const ResidueVector& lam, const EvalPoint& pt, double eps, mpfr_prec_t prec) {
  const FieldSpec& F = lam.F;
  Int m = lam.m(), n = F.degree();
  DOMAIN_CHECK(pt.m == m && pt.n == n, "point shape matches residue vector");
  DOMAIN_CHECK(eps > 0, "eps must be positive");
  Rat sigma = pt.sigma.at(0);
  for (const Rat& s : pt.sigma) sigma = std::min(sigma, s);
  DOMAIN_CHECK(sigma > 0, "sigma must be positive");

  Rat B(4);
  const Rat cap(Int(1) << 20);
  Ival tau = theta_tail_bound(F, m, sigma, B, prec);
  while (mpfr_cmp_d(tau.hi.v, eps) > 0) {
    B = B * 2;
    if (B > cap)
      throw CheckError("TailBoundTooLarge", "cannot certify the theta tail below eps");
    tau = theta_tail_bound(F, m, sigma, B, prec);
  }

  std::vector<ThetaTerm> terms = theta_coeffs(lam, B);
  CIval total(prec);
  for (const ThetaTerm& t : terms) {
    CIval arg(prec);
    for (Int j = 0; j < n; ++j) {
      for (Int a = 0; a < m; ++a)
        for (Int b = 0; b < m; ++b) {
          Ival c = t.zexp.at(a, b).embed(int(j), prec);
          const CIval& z = pt.z[size_t(j)].at(b, a);
          arg = arg + CIval(c * z.re, c * z.im);
        }
      if (!pt.w.empty()) {
        Ival wr(prec);
        for (Int i = 0; i < m; ++i)
          wr = wr + t.wexp[size_t(i)].embed(int(j), prec) * pt.w[size_t(j)][size_t(i)];
        arg.re = arg.re + wr;
      }
    }
    total = total + e_of(arg);
  }
  // widen by the certified tail; the result encloses the full series
  double tb = tau.hi.d_up();
  Ival box = Ival::hull(-tb, tb, prec);
  total.re = total.re + box;
  total.im = total.im + box;
  return total;
}

CIval eval_jacobi(const JacobiExpansion& g, const EvalPoint& pt, double eps, mpfr_prec_t prec) {
  DOMAIN_CHECK(pt.m == g.m && pt.n == g.F.degree(), "point shape matches expansion");
  Rat quarter = rat_of(1, 4);
  std::map<Int, CIval> hval;
  std::map<Int, ResidueVector> lam_of;
  for (const auto& kv : g.c) {
    const SymMat& T = std::get<0>(kv.second);
    const ResidueVector& lam = std::get<1>(kv.second);
    CIval term = std::get<2>(kv.second).to_complex(prec) * e_of_trace(T.scaled(quarter), pt, prec);
    Int idx = lam.index();
    auto it = hval.find(idx);
    if (it == hval.end()) {
      hval.emplace(idx, term);
      lam_of.emplace(idx, lam);
    } else {
      it->second = it->second + term;
    }
  }
  CIval total(prec);
  for (const auto& kv : hval)
    total = total + kv.second * eval_theta(lam_of.at(kv.first), pt, eps, prec);
  return total;
}

GroupMat group_identity(const FieldSpec& F, Int m) {
  FieldElement zero = FieldElement::from_int(F, 0);
  GroupMat g;
  g.a = FMat::identity(F, m);
  g.b = FMat::scalar(F, m, zero);
  g.c = FMat::scalar(F, m, zero);
  g.d = FMat::identity(F, m);
  return g;
}

GroupMat group_mul(const GroupMat& x, const GroupMat& y) {
  GroupMat r;
  r.a = x.a * y.a + x.b * y.c;
  r.b = x.a * y.b + x.b * y.d;
  r.c = x.c * y.a + x.d * y.c;
  r.d = x.c * y.b + x.d * y.d;
  return r;
}

bool is_symplectic(const GroupMat& g) {
  Int m = g.a.rows;
  if (g.a.cols != m || g.b.rows != m || g.b.cols != m || g.c.rows != m || g.c.cols != m ||
      g.d.rows != m || g.d.cols != m)
    return false;
  FMat tac = g.a.transpose() * g.c;
  FMat tbd = g.b.transpose() * g.d;
  if (!(tac == tac.transpose()) || !(tbd == tbd.transpose())) return false;
  FMat gram = g.a.transpose() * g.d - g.c.transpose() * g.b;
  return gram == FMat::identity(g.a.F, m);
}

void check_gamma0_4(const GroupMat& g) {
  if (!is_symplectic(g)) throw CheckError("NotInGroup", "matrix is not symplectic");
  if (!g.a.is_integral() || !g.d.is_integral())
    throw CheckError("NotInGroup", "diagonal blocks must be integral");
  const FieldSpec& F = g.a.F;
  FieldElement delta = FieldElement::different_gen(F);
  if (!g.b.scaled(delta).is_integral())
    throw CheckError("NotInGroup", "upper block must lie in the inverse different");
  FieldElement inv4d = FieldElement::from_int(F, 1) / (FieldElement::from_int(F, 4) * delta);
  if (!g.c.scaled(inv4d).is_integral())
    throw CheckError("NotInGroup", "lower block must lie in 4 times the different");
}

namespace {

CMat cmat_embed(const FMat& a, Int j, mpfr_prec_t prec) {
  DOMAIN_CHECK(a.rows == a.cols, "square block expected");
  CMat r(a.rows, prec);
  for (Int i = 0; i < a.rows; ++i)
    for (Int k = 0; k < a.cols; ++k) r.at(i, k) = CIval(a.at(i, k).embed(int(j), prec), Ival(prec));
  return r;
}

// certified positive rational below the least eigenvalue of Im(zj)
Rat sigma_from_interval(const CMat& zj) {
  if (zj.m == 1) {
    double lo = zj.at(0, 0).im.lo.d_down();
    if (!(lo > 0))
      throw CheckError("PrecisionExhausted", "cannot certify Im(gamma z) positive");
    return Rat(lo);
  }
  DOMAIN_CHECK(zj.m == 2, "eigenvalue bound implemented for m <= 2");
  Ival tr = zj.at(0, 0).im + zj.at(1, 1).im;
  Ival det = zj.at(0, 0).im * zj.at(1, 1).im - zj.at(0, 1).im * zj.at(1, 0).im;
  if (!(tr.lo.d_down() > 0) || !(det.lo.d_down() > 0))
    throw CheckError("PrecisionExhausted", "cannot certify Im(gamma z) positive definite");
  double lo = (det / tr).lo.d_down();
  if (!(lo > 0)) throw CheckError("PrecisionExhausted", "cannot certify Im(gamma z) positive");
  return Rat(lo);
}

}  // namespace

double theta_transform_residual(const GroupMat& g, const EvalPoint& pt, double eps,
                                mpfr_prec_t prec) {
  check_gamma0_4(g);
  const FieldSpec& F = g.a.F;
  Int m = g.a.rows, n = F.degree();
  DOMAIN_CHECK(pt.m == m && pt.n == n, "point shape matches group element");
  DOMAIN_CHECK(pt.w.empty(), "the transform statement is at w = 0");

  EvalPoint pt2;
  pt2.m = m;
  pt2.n = n;
  CIval rhs(Ival::from_int(1, prec), Ival(prec));
  for (Int j = 0; j < n; ++j) {
    CMat A = cmat_embed(g.a, j, prec), B = cmat_embed(g.b, j, prec);
    CMat C = cmat_embed(g.c, j, prec), D = cmat_embed(g.d, j, prec);
    const CMat& Z = pt.z[size_t(j)];
    CMat den = C * Z + D;
    CIval dd = den.det();
    CMat gz = (A * Z + B) * den.inverse();
    pt2.sigma.push_back(sigma_from_interval(gz));
    pt2.z.push_back(gz);
    rhs = rhs * (dd * dd);
  }

  ResidueVector lam0(F, m);
  CIval bottom = eval_theta(lam0, pt, eps, prec);
  if (bottom.abs2().contains_zero())
    throw CheckError("PrecisionExhausted", "theta denominator interval touches zero");
  CIval t = eval_theta(lam0, pt2, eps, prec) / bottom;
  CIval t2 = t * t;
  CIval diff = t2 * t2 - rhs;
  Ival a2 = diff.abs2();
  MpReal r(prec);
  mpfr_sqrt(r.v, a2.hi.v, MPFR_RNDU);
  return r.d_up();
}

}  // namespace kp
