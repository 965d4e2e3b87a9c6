#ifndef KP_FIELD_HPP
#define KP_FIELD_HPP

#include <string>
#include <vector>

#include "kp/cyclotomic.hpp"
#include "kp/interval.hpp"
#include "kp/rational.hpp"
#include "kp/util.hpp"

namespace kp {

// Totally real base field: Q (d == 0) or Q(sqrt d) with d >= 2 squarefree.
// Integral basis is (1, omega), omega = (1+sqrt d)/2 when d = 1 mod 4, else sqrt d.
struct FieldSpec {
  Int d = 0;

  static FieldSpec rationals() { return FieldSpec{0}; }
  static FieldSpec real_quadratic(Int d);

  bool quadratic() const { return d != 0; }
  Int degree() const { return quadratic() ? 2 : 1; }
  bool half_basis() const { return quadratic() && mod_positive(d, 4) == 1; }
  Rat trace_omega() const { return half_basis() ? Rat(1) : Rat(0); }
  // omega^2 = omega2_const + omega2_lin * omega
  Rat omega2_const() const { return half_basis() ? Rat(d - 1) / 4 : Rat(d); }
  Rat omega2_lin() const { return half_basis() ? Rat(1) : Rat(0); }
  bool operator==(const FieldSpec& o) const { return d == o.d; }
  bool operator!=(const FieldSpec& o) const { return d != o.d; }
  std::string str() const { return quadratic() ? "Q(sqrt" + std::to_string(d) + ")" : "Q"; }
};

// Element a + b*omega with exact rational coordinates.
struct FieldElement {
  FieldSpec F;
  Rat a, b;

  FieldElement() : F(FieldSpec::rationals()), a(0), b(0) {}
  FieldElement(const FieldSpec& f, const Rat& a_, const Rat& b_ = Rat(0)) : F(f), a(a_), b(b_) {
    DOMAIN_CHECK(f.quadratic() || b_ == 0, "rational field has no second coordinate");
  }
  static FieldElement from_int(const FieldSpec& f, Int n) { return FieldElement(f, Rat(n)); }
  static FieldElement omega(const FieldSpec& f) {
    DOMAIN_CHECK(f.quadratic(), "omega needs a quadratic field");
    return FieldElement(f, Rat(0), Rat(1));
  }
  static FieldElement sqrt_d(const FieldSpec& f);  // 2*omega - 1 or omega
  static FieldElement different_gen(const FieldSpec& f);

  bool is_zero() const { return a == 0 && b == 0; }
  bool is_integral() const { return is_integer(a) && is_integer(b); }
  bool is_rational() const { return b == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const { return FieldElement(F, -a, -b); }
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement scaled(const Rat& r) const { return FieldElement(F, a * r, b * r); }
  FieldElement galois_conj() const;
  bool operator==(const FieldElement& o) const { return F == o.F && a == o.a && b == o.b; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  Rat trace() const { return F.quadratic() ? 2 * a + b * F.trace_omega() : a; }
  Rat norm() const;

  // exact sign at real embedding i (0: sqrt d > 0, 1: sqrt d < 0); returns -1, 0, 1
  int sign_at(int i) const;
  bool totally_positive() const { return sign_at(0) > 0 && (!F.quadratic() || sign_at(1) > 0); }
  bool totally_nonnegative() const {
    return sign_at(0) >= 0 && (!F.quadratic() || sign_at(1) >= 0);
  }

  Ival embed(int i, mpfr_prec_t prec = 192) const;

  // e(-Tr_{F/Q}(x) mod 1): the finite part of the standard additive character
  CycScalar additive_character_finite() const {
    Rat t = frac_part(-trace());
    Zint n = num(t), dn = den(t);
    DOMAIN_CHECK(n.fits_slong_p() && dn.fits_slong_p(), "character argument too large");
    return CycScalar::root_of_unity(n.get_si(), dn.get_si());
  }

  // canonical coordinate order, for deterministic enumerations
  int cmp(const FieldElement& o) const {
    if (a != o.a) return a < o.a ? -1 : 1;
    if (b != o.b) return b < o.b ? -1 : 1;
    return 0;
  }
  std::string str() const;
};

// All integral x with lo[i] <= embedding_i(x) <= hi[i] for each real embedding,
// in canonical coordinate order.  Bounds are rational; membership is decided by
// exact sign tests, interval arithmetic only shrinks the candidate box.
std::vector<FieldElement> integral_box(const FieldSpec& F, const std::vector<Rat>& lo,
                                       const std::vector<Rat>& hi);

// Certificate: the dual of o_F under (x,y) -> Tr(xy) equals (1/different_gen) * o_F.
bool dual_lattice_is_inverse_different(const FieldSpec& F);

}  // namespace kp

#endif
