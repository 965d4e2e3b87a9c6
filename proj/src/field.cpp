#include "kp/field.hpp"

#include <sstream>

namespace kp {

FieldSpec FieldSpec::real_quadratic(Int d) {
  DOMAIN_CHECK(d >= 2, "real quadratic field needs d >= 2");
  for (Int p = 2; p * p <= d; ++p)
    DOMAIN_CHECK(d % (p * p) != 0, "d must be squarefree");
  return FieldSpec{d};
}

FieldElement FieldElement::sqrt_d(const FieldSpec& f) {
  DOMAIN_CHECK(f.quadratic(), "sqrt_d needs a quadratic field");
  if (f.half_basis()) return FieldElement(f, Rat(-1), Rat(2));
  return FieldElement(f, Rat(0), Rat(1));
}

FieldElement FieldElement::different_gen(const FieldSpec& f) {
  if (!f.quadratic()) return FieldElement(f, Rat(1));
  if (f.half_basis()) return sqrt_d(f);
  return sqrt_d(f).scaled(Rat(2));
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  DOMAIN_CHECK(F == o.F, "mixed fields");
  return FieldElement(F, a + o.a, b + o.b);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  DOMAIN_CHECK(F == o.F, "mixed fields");
  return FieldElement(F, a - o.a, b - o.b);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  DOMAIN_CHECK(F == o.F, "mixed fields");
  Rat cross = b * o.b;
  return FieldElement(F, a * o.a + cross * F.omega2_const(),
                      a * o.b + b * o.a + cross * F.omega2_lin());
}

FieldElement FieldElement::galois_conj() const {
  if (!F.quadratic()) return *this;
  // conj(omega) = Tr(omega) - omega
  return FieldElement(F, a + b * F.trace_omega(), -b);
}

Rat FieldElement::norm() const {
  if (!F.quadratic()) return a;
  FieldElement n = *this * galois_conj();
  LOGIC_CHECK(n.b == 0, "norm must be rational");
  return n.a;
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  DOMAIN_CHECK(F == o.F, "mixed fields");
  DOMAIN_CHECK(!o.is_zero(), "division by zero");
  if (!F.quadratic()) return FieldElement(F, a / o.a);
  FieldElement num = *this * o.galois_conj();
  Rat n = o.norm();
  return FieldElement(F, num.a / n, num.b / n);
}

int FieldElement::sign_at(int i) const {
  DOMAIN_CHECK(i == 0 || (i == 1 && F.quadratic()), "bad embedding index");
  if (!F.quadratic()) return a == 0 ? 0 : (a > 0 ? 1 : -1);
  // write as u + v sqrt(d); embedding 1 flips v
  Rat u = a, v = b;
  if (F.half_basis()) {
    u = a + b / 2;
    v = b / 2;
  }
  if (i == 1) v = -v;
  if (v == 0) return u == 0 ? 0 : (u > 0 ? 1 : -1);
  if (u == 0) return v > 0 ? 1 : -1;
  // u, v nonzero: u + v sqrt(d) = 0 is impossible (d squarefree >= 2)
  if (u > 0 && v > 0) return 1;
  if (u < 0 && v < 0) return -1;
  Rat disc = u * u - v * v * Rat(F.d);
  LOGIC_CHECK(disc != 0, "sqrt(d) cannot be rational");
  int s = disc > 0 ? 1 : -1;
  return u > 0 ? s : -s;
}

Ival FieldElement::embed(int i, mpfr_prec_t prec) const {
  DOMAIN_CHECK(i == 0 || (i == 1 && F.quadratic()), "bad embedding index");
  Ival va = Ival::from_rat(a, prec);
  if (!F.quadratic()) return va;
  Ival sq = Ival::from_int(F.d, prec).sqrt_();
  if (i == 1) sq = -sq;
  Ival om = F.half_basis() ? (Ival::from_int(1, prec) + sq) * Ival::from_rat(Rat(1, 2), prec)
                           : sq;
  return va + Ival::from_rat(b, prec) * om;
}

std::string FieldElement::str() const {
  std::ostringstream os;
  if (!F.quadratic()) {
    os << rat_to_string(a);
  } else {
    os << rat_to_string(a) << "+" << rat_to_string(b) << "w";
  }
  return os.str();
}

std::vector<FieldElement> integral_box(const FieldSpec& F, const std::vector<Rat>& lo,
                                       const std::vector<Rat>& hi) {
  DOMAIN_CHECK(Int(lo.size()) == F.degree() && Int(hi.size()) == F.degree(),
               "one bound pair per embedding");
  std::vector<FieldElement> out;
  if (!F.quadratic()) {
    for (Zint n = ceil_rat(lo[0]); n <= floor_rat(hi[0]); ++n)
      out.emplace_back(F, Rat(n));
    return out;
  }
  // x = a + b*omega: emb_0 - emb_1 = b*sqrt(d), so b is confined to
  // [(lo0-hi1)/sqrt d, (hi0-lo1)/sqrt d]; pad the float box outward by 1 and let the
  // exact sign filter make the final call.
  mpfr_prec_t prec = 96;
  Ival sq = Ival::from_int(F.d, prec).sqrt_();
  Ival brange_lo = (Ival::from_rat(lo[0], prec) - Ival::from_rat(hi[1], prec)) / sq;
  Ival brange_hi = (Ival::from_rat(hi[0], prec) - Ival::from_rat(lo[1], prec)) / sq;
  double bl = brange_lo.mid() - 1.5, bh = brange_hi.mid() + 1.5;
  if (bl > bh) return out;
  Ival om0 = F.half_basis() ? (Ival::from_int(1, prec) + sq) * Ival::point(0.5, prec) : sq;
  Ival om1 = F.half_basis() ? (Ival::from_int(1, prec) - sq) * Ival::point(0.5, prec) : -sq;
  for (Int b = Int(bl); b <= Int(bh); ++b) {
    Ival bb = Ival::from_int(b, prec);
    // a in [lo0 - b*om0, hi0 - b*om0] intersect [lo1 - b*om1, hi1 - b*om1]
    double a_lo = std::max((Ival::from_rat(lo[0], prec) - bb * om0).mid(),
                           (Ival::from_rat(lo[1], prec) - bb * om1).mid()) -
                  1.5;
    double a_hi = std::min((Ival::from_rat(hi[0], prec) - bb * om0).mid(),
                           (Ival::from_rat(hi[1], prec) - bb * om1).mid()) +
                  1.5;
    for (Int a = Int(a_lo); a <= Int(a_hi); ++a) {
      FieldElement x(F, Rat(a), Rat(b));
      bool ok = true;
      for (int i = 0; i < 2 && ok; ++i) {
        FieldElement xl = x - FieldElement(F, lo[size_t(i)]);
        FieldElement xh = FieldElement(F, hi[size_t(i)]) - x;
        ok = xl.sign_at(i) >= 0 && xh.sign_at(i) >= 0;
      }
      if (ok) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const FieldElement& x, const FieldElement& y) { return x.cmp(y) < 0; });
  return out;
}

bool dual_lattice_is_inverse_different(const FieldSpec& F) {
  FieldElement delta = FieldElement::different_gen(F);
  if (!F.quadratic()) return delta == FieldElement(F, Rat(1));
  // Gram matrix of (1, omega) under the trace form
  FieldElement one(F, Rat(1)), om = FieldElement::omega(F);
  Rat g00 = (one * one).trace(), g01 = (one * om).trace(), g11 = (om * om).trace();
  Rat det = g00 * g11 - g01 * g01;
  if (det == 0) return false;
  // dual basis vectors in coordinates: columns of Gram^{-1}
  Rat d00 = g11 / det, d01 = -g01 / det, d11 = g00 / det;
  FieldElement e0(F, d00, d01), e1(F, d01, d11);
  // both must generate (1/delta) o_F: delta * e_i integral, and index matches |N(delta)|
  if (!(e0 * delta).is_integral() || !(e1 * delta).is_integral()) return false;
  Rat nd = delta.norm();
  if (nd < 0) nd = -nd;
  // [dual : o_F] = 1/det(Gram)... both lattices have rational coordinate matrices;
  // equality holds iff the index of o_F in the dual equals N(delta) in absolute value
  return nd == (det < 0 ? -det : det);
}

}  // namespace kp
