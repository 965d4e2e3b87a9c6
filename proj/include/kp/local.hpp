#ifndef KP_LOCAL_HPP
#define KP_LOCAL_HPP

#include <string>
#include <vector>

#include "kp/cyclotomic.hpp"
#include "kp/rational.hpp"
#include "kp/util.hpp"

namespace kp {

// The three completions at 2 we work over. Elements are written a + b*theta
// with rational a, b: theta = zeta (zeta^2 + zeta + 1 = 0) in the unramified
// quadratic case, theta = sqrt2 in the ramified case, absent over Q2. Every
// rational embeds in Q2, so coordinates are unrestricted; valuations and
// canonical residue representatives are still exact.
enum class LocalKind { Q2, UnramifiedQuad, RamifiedSqrt2 };

struct LocalFieldSpec {
  LocalKind kind;
  Int q;      // residue field size
  Int e;      // |2| = q^{-e}
  Int c_psi;  // largest c with psi trivial on p^{-c}
  int s;      // psi(x) = e(-Frac2(Tr(s x)))

  static LocalFieldSpec q2(int s = -1) { return {LocalKind::Q2, 2, 1, 0, s}; }
  static LocalFieldSpec unramified_quadratic(int s = -1) {
    return {LocalKind::UnramifiedQuad, 4, 1, 0, s};
  }
  static LocalFieldSpec ramified_sqrt2(int s = -1) {
    return {LocalKind::RamifiedSqrt2, 2, 2, 3, s};
  }

  bool quadratic() const { return kind != LocalKind::Q2; }
  std::string name() const;
  bool operator==(const LocalFieldSpec& o) const { return kind == o.kind && s == o.s; }
  bool operator!=(const LocalFieldSpec& o) const { return !(*this == o); }
};

// 2-adic fractional part of a rational: the unique dyadic f in [0,1) with
// x - f integral at 2 (odd denominators are invertible mod powers of 2).
Rat frac2(const Rat& x);

// canonical representative of x mod 2^k Z_2, dyadic, in [0, 2^k)
inline Rat mod_2pow(const Rat& x, Int k) {
  return pow_rat(Rat(2), k) * frac2(x * pow_rat(Rat(2), -k));
}

struct LocalElement {
  LocalFieldSpec K;
  Rat a, b;

  static constexpr Int kValInf = Int(1) << 30;  // valuation sentinel for 0

  LocalElement(const LocalFieldSpec& K_, const Rat& a_, const Rat& b_ = Rat(0))
      : K(K_), a(a_), b(b_) {
    DOMAIN_CHECK(K.quadratic() || b == 0, "Q2 elements have no theta part");
  }

  static LocalElement zero(const LocalFieldSpec& K) { return LocalElement(K, Rat(0)); }
  static LocalElement one(const LocalFieldSpec& K) { return LocalElement(K, Rat(1)); }
  static LocalElement from_rat(const LocalFieldSpec& K, const Rat& r) {
    return LocalElement(K, r);
  }
  static LocalElement theta(const LocalFieldSpec& K) {
    DOMAIN_CHECK(K.quadratic(), "theta lives in the quadratic extensions");
    return LocalElement(K, Rat(0), Rat(1));
  }
  // pi^k: pi = 2 when unramified over Q2, pi = sqrt2 when ramified
  static LocalElement uniformizer_pow(const LocalFieldSpec& K, Int k);
  // generator of the different; equals pi^{c_psi} for our psi
  static LocalElement different_gen(const LocalFieldSpec& K) {
    return uniformizer_pow(K, K.c_psi);
  }

  bool is_zero() const { return a == 0 && b == 0; }
  LocalElement operator+(const LocalElement& o) const;
  LocalElement operator-(const LocalElement& o) const;
  LocalElement operator-() const { return LocalElement(K, -a, -b); }
  LocalElement operator*(const LocalElement& o) const;
  bool operator==(const LocalElement& o) const { return K == o.K && a == o.a && b == o.b; }
  bool operator!=(const LocalElement& o) const { return !(*this == o); }

  LocalElement conj() const;  // Galois conjugate; identity on Q2
  Rat trace() const;          // to Q2
  Rat norm() const;
  LocalElement scaled(const Rat& r) const { return LocalElement(K, a * r, b * r); }
  LocalElement inv() const;

  Int valuation() const;  // pi-adic order; rejects 0
  Int val_or_inf() const { return is_zero() ? kValInf : valuation(); }
  bool integral() const { return val_or_inf() >= 0; }
  bool is_unit() const { return val_or_inf() == 0; }

  int cmp(const LocalElement& o) const;
  bool operator<(const LocalElement& o) const { return cmp(o) < 0; }
  std::string str() const;
};

// psi(x) = e(-Frac2(Tr(s x))): index c_psi, trivial exactly on p^{-c_psi}
CycScalar psi_local(const LocalElement& x);

// Weil index alpha_psi(a): stabilized phase of the normalized Gauss sums
// q^{-k'} sum_{x in p^{-k}/p^{k'}} psi(a x^2). An eighth root of unity.
CycScalar weil_index(const LocalElement& a);

// canonical transversal of o/p^k, deterministic order
std::vector<LocalElement> residue_transversal(const LocalFieldSpec& K, Int k);

// canonical representative of x + p^k (any sign of k)
LocalElement reduce_mod_pk(const LocalElement& x, Int k);

inline bool in_pk(const LocalElement& x, Int k) { return x.val_or_inf() >= k; }

}  // namespace kp

#endif
