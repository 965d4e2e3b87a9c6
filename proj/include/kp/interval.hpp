#ifndef KP_INTERVAL_HPP
#define KP_INTERVAL_HPP

#include <mpfr.h>

#include <string>
#include <utility>

#include "kp/rational.hpp"
#include "kp/util.hpp"

namespace kp {

// Thin RAII shell over mpfr_t so intervals can live in std containers.
class MpReal {
 public:
  mpfr_t v;
  explicit MpReal(mpfr_prec_t prec = 192) { mpfr_init2(v, prec); mpfr_set_zero(v, 1); }
  MpReal(const MpReal& o) { mpfr_init2(v, mpfr_get_prec(o.v)); mpfr_set(v, o.v, MPFR_RNDN); }
  MpReal(MpReal&& o) noexcept { mpfr_init2(v, mpfr_get_prec(o.v)); mpfr_swap(v, o.v); }
  MpReal& operator=(const MpReal& o) {
    if (this != &o) { mpfr_set_prec(v, mpfr_get_prec(o.v)); mpfr_set(v, o.v, MPFR_RNDN); }
    return *this;
  }
  MpReal& operator=(MpReal&& o) noexcept {
    if (this != &o) mpfr_swap(v, o.v);
    return *this;
  }
  ~MpReal() { mpfr_clear(v); }
  mpfr_prec_t prec() const { return mpfr_get_prec(v); }
  double d() const { return mpfr_get_d(v, MPFR_RNDN); }
  double d_up() const { return mpfr_get_d(v, MPFR_RNDU); }
  double d_down() const { return mpfr_get_d(v, MPFR_RNDD); }
};

// Closed interval [lo, hi]; every operation rounds outward, so the true value of the
// represented quantity is always contained.
class Ival {
 public:
  MpReal lo, hi;

  explicit Ival(mpfr_prec_t prec = 192) : lo(prec), hi(prec) {}

  static Ival from_rat(const Rat& r, mpfr_prec_t prec = 192) {
    Ival x(prec);
    mpfr_set_q(x.lo.v, r.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(x.hi.v, r.get_mpq_t(), MPFR_RNDU);
    return x;
  }
  static Ival from_int(Int n, mpfr_prec_t prec = 192) { return from_rat(Rat(n), prec); }
  static Ival point(double d, mpfr_prec_t prec = 192) {
    Ival x(prec);
    mpfr_set_d(x.lo.v, d, MPFR_RNDD);
    mpfr_set_d(x.hi.v, d, MPFR_RNDU);
    return x;
  }
  static Ival hull(double a, double b, mpfr_prec_t prec = 192) {
    Ival x(prec);
    mpfr_set_d(x.lo.v, a <= b ? a : b, MPFR_RNDD);
    mpfr_set_d(x.hi.v, a <= b ? b : a, MPFR_RNDU);
    return x;
  }

  mpfr_prec_t prec() const { return lo.prec(); }
  bool valid() const { return mpfr_cmp(lo.v, hi.v) <= 0; }

  Ival operator+(const Ival& o) const {
    Ival r(std::max(prec(), o.prec()));
    mpfr_add(r.lo.v, lo.v, o.lo.v, MPFR_RNDD);
    mpfr_add(r.hi.v, hi.v, o.hi.v, MPFR_RNDU);
    return r;
  }
  Ival operator-(const Ival& o) const {
    Ival r(std::max(prec(), o.prec()));
    mpfr_sub(r.lo.v, lo.v, o.hi.v, MPFR_RNDD);
    mpfr_sub(r.hi.v, hi.v, o.lo.v, MPFR_RNDU);
    return r;
  }
  Ival operator-() const {
    Ival r(prec());
    mpfr_neg(r.lo.v, hi.v, MPFR_RNDD);
    mpfr_neg(r.hi.v, lo.v, MPFR_RNDU);
    return r;
  }
  Ival operator*(const Ival& o) const {
    Ival r(std::max(prec(), o.prec()));
    MpReal t(r.prec());
    mpfr_mul(r.lo.v, lo.v, o.lo.v, MPFR_RNDD);
    mpfr_mul(r.hi.v, lo.v, o.lo.v, MPFR_RNDU);
    const mpfr_srcptr as[2] = {lo.v, hi.v}, bs[2] = {o.lo.v, o.hi.v};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (i == 0 && j == 0) continue;
        mpfr_mul(t.v, as[i], bs[j], MPFR_RNDD);
        if (mpfr_cmp(t.v, r.lo.v) < 0) mpfr_set(r.lo.v, t.v, MPFR_RNDD);
        mpfr_mul(t.v, as[i], bs[j], MPFR_RNDU);
        if (mpfr_cmp(t.v, r.hi.v) > 0) mpfr_set(r.hi.v, t.v, MPFR_RNDU);
      }
    return r;
  }
  Ival operator/(const Ival& o) const {
    DOMAIN_CHECK(!o.contains_zero(), "interval division by interval containing 0");
    Ival r(std::max(prec(), o.prec()));
    MpReal t(r.prec());
    mpfr_div(r.lo.v, lo.v, o.lo.v, MPFR_RNDD);
    mpfr_div(r.hi.v, lo.v, o.lo.v, MPFR_RNDU);
    const mpfr_srcptr as[2] = {lo.v, hi.v}, bs[2] = {o.lo.v, o.hi.v};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (i == 0 && j == 0) continue;
        mpfr_div(t.v, as[i], bs[j], MPFR_RNDD);
        if (mpfr_cmp(t.v, r.lo.v) < 0) mpfr_set(r.lo.v, t.v, MPFR_RNDD);
        mpfr_div(t.v, as[i], bs[j], MPFR_RNDU);
        if (mpfr_cmp(t.v, r.hi.v) > 0) mpfr_set(r.hi.v, t.v, MPFR_RNDU);
      }
    return r;
  }

  bool contains_zero() const {
    return mpfr_sgn(lo.v) <= 0 && mpfr_sgn(hi.v) >= 0;
  }
  bool overlaps(const Ival& o) const {
    return mpfr_cmp(lo.v, o.hi.v) <= 0 && mpfr_cmp(o.lo.v, hi.v) <= 0;
  }

  // upper bound of |x| over the interval, rounded up
  MpReal abs_hi() const {
    MpReal m(prec());
    mpfr_abs(m.v, lo.v, MPFR_RNDU);
    MpReal m2(prec());
    mpfr_abs(m2.v, hi.v, MPFR_RNDU);
    if (mpfr_cmp(m2.v, m.v) > 0) return m2;
    return m;
  }
  double width() const {
    MpReal w(prec());
    mpfr_sub(w.v, hi.v, lo.v, MPFR_RNDU);
    return w.d();
  }
  double mid() const {
    MpReal w(prec());
    mpfr_add(w.v, hi.v, lo.v, MPFR_RNDN);
    mpfr_div_ui(w.v, w.v, 2, MPFR_RNDN);
    return w.d();
  }

  // exp is monotone: endpoint evaluation suffices
  Ival exp_() const {
    Ival r(prec());
    mpfr_exp(r.lo.v, lo.v, MPFR_RNDD);
    mpfr_exp(r.hi.v, hi.v, MPFR_RNDU);
    return r;
  }
  Ival sqrt_() const {
    DOMAIN_CHECK(mpfr_sgn(lo.v) >= 0, "interval sqrt of possibly negative value");
    Ival r(prec());
    mpfr_sqrt(r.lo.v, lo.v, MPFR_RNDD);
    mpfr_sqrt(r.hi.v, hi.v, MPFR_RNDU);
    return r;
  }

  // cos/sin by midpoint value widened by the radius (both are 1-Lipschitz); our
  // angle intervals are a few ulps wide, so no extremum bookkeeping is needed.
  Ival cos_() const { return lipschitz1(mpfr_cos); }
  Ival sin_() const { return lipschitz1(mpfr_sin); }

  std::string str() const {
    char bl[64], bh[64];
    mpfr_snprintf(bl, sizeof bl, "%.20Rg", lo.v);
    mpfr_snprintf(bh, sizeof bh, "%.20Rg", hi.v);
    return std::string("[") + bl + "," + bh + "]";
  }

 private:
  typedef int (*MpfrUnary)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
  Ival lipschitz1(MpfrUnary f) const {
    Ival r(prec());
    MpReal mid(prec()), rad(prec()), t(prec());
    mpfr_add(mid.v, lo.v, hi.v, MPFR_RNDN);
    mpfr_div_ui(mid.v, mid.v, 2, MPFR_RNDN);
    mpfr_sub(rad.v, hi.v, lo.v, MPFR_RNDU);  // >= 2 * true radius; fine, still rigorous
    f(t.v, mid.v, MPFR_RNDD);
    mpfr_sub(r.lo.v, t.v, rad.v, MPFR_RNDD);
    f(t.v, mid.v, MPFR_RNDU);
    mpfr_add(r.hi.v, t.v, rad.v, MPFR_RNDU);
    return r;
  }
};

// pi as an interval
inline Ival pi_interval(mpfr_prec_t prec = 192) {
  Ival p(prec);
  mpfr_const_pi(p.lo.v, MPFR_RNDD);
  mpfr_const_pi(p.hi.v, MPFR_RNDU);
  return p;
}

struct CIval {
  Ival re, im;
  explicit CIval(mpfr_prec_t prec = 192) : re(prec), im(prec) {}
  CIval(const Ival& r, const Ival& i) : re(r), im(i) {}
  CIval operator+(const CIval& o) const { return CIval(re + o.re, im + o.im); }
  CIval operator-(const CIval& o) const { return CIval(re - o.re, im - o.im); }
  CIval operator*(const CIval& o) const {
    return CIval(re * o.re - im * o.im, re * o.im + im * o.re);
  }
  CIval operator/(const CIval& o) const {
    Ival n = o.re * o.re + o.im * o.im;
    return CIval((re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n);
  }
  CIval conj() const { return CIval(re, -im); }
  Ival abs2() const { return re * re + im * im; }
  bool overlaps(const CIval& o) const { return re.overlaps(o.re) && im.overlaps(o.im); }
  std::string str() const { return re.str() + " + i*" + im.str(); }
};

// e(z) = exp(2 pi i z) for complex z; |e(z)| = exp(-2 pi Im z)
inline CIval e_of(const CIval& z) {
  mpfr_prec_t prec = z.re.prec();
  Ival two_pi = pi_interval(prec) * Ival::from_int(2, prec);
  Ival mod = (-(two_pi * z.im)).exp_();
  Ival ang = two_pi * z.re;
  return CIval(mod * ang.cos_(), mod * ang.sin_());
}

}  // namespace kp

#endif
