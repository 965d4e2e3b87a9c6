#ifndef KP_CYCLOTOMIC_HPP
#define KP_CYCLOTOMIC_HPP

#include <string>
#include <vector>

#include "kp/interval.hpp"
#include "kp/rational.hpp"
#include "kp/util.hpp"

namespace kp {

// Element of Q(zeta_N) in the power basis zeta^0 .. zeta^{phi(N)-1}, reduced mod the
// N-th cyclotomic polynomial.  The reduced coordinate vector at a fixed order is
// unique, so equality and hashing are exact.  normalize() shrinks the order where
// that is cheap to detect (2-power towers, orders 2 mod 4, rationals), keeping
// serialized forms canonical for byte-identical reruns.
class CycScalar {
 public:
  Int order;
  std::vector<Rat> c;

  CycScalar() : order(1), c(1, Rat(0)) {}

  static CycScalar zero() { return CycScalar(); }
  static CycScalar one() { return from_rat(Rat(1)); }
  static CycScalar from_rat(const Rat& r) {
    CycScalar z;
    z.c[0] = r;
    return z;
  }
  // e(num/den), den >= 1
  static CycScalar root_of_unity(Int num, Int den);
  static CycScalar zeta(Int n) { return root_of_unity(1, n); }
  static CycScalar sqrt2();             // zeta_8 - zeta_8^3
  static CycScalar q_pow_half(Int q, Int t);  // q^{t/2} for q in {2, 4}, t any sign

  // counts[j] copies of zeta_n^j, summed and reduced; the Gauss-sum accumulator
  static CycScalar from_root_buckets(Int n, const std::vector<Zint>& counts);

  bool is_zero() const;
  bool is_rational() const;
  Rat rational_value() const;

  CycScalar operator+(const CycScalar& o) const;
  CycScalar operator-(const CycScalar& o) const;
  CycScalar operator-() const;
  CycScalar operator*(const CycScalar& o) const;
  CycScalar scaled(const Rat& r) const;
  CycScalar conj() const;
  CycScalar galois(Int t) const;  // zeta -> zeta^t, gcd(t, order) = 1
  CycScalar inv() const;
  CycScalar pow(Int e) const;

  bool operator==(const CycScalar& o) const;
  bool operator!=(const CycScalar& o) const { return !(*this == o); }
  bool is_unit_modulus() const;

  CIval to_complex(mpfr_prec_t prec = 192) const;
  std::string key() const;  // canonical string; equal values at equal keys

  void normalize();

  // coefficients of the monic N-th cyclotomic polynomial, low degree first
  static const std::vector<Zint>& cyclotomic_poly(Int n);
  static Int order_cap();
};

}  // namespace kp

#endif
