#ifndef KP_RATIONAL_HPP
#define KP_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "kp/util.hpp"

namespace kp {

typedef mpq_class Rat;
typedef mpz_class Zint;

inline Rat rat_from_string(const std::string& s) {
  DOMAIN_CHECK(!s.empty(), "empty rational literal");
  Rat r;
  int rc = r.set_str(s, 10);
  DOMAIN_CHECK(rc == 0, "bad rational literal: " + s);
  r.canonicalize();
  return r;
}

inline std::string rat_to_string(const Rat& r) {
  return r.get_str();  // canonical p/q, q > 0, gcd 1
}

// mpq_class(n, d) does NOT canonicalize; always build variable fractions here
inline Rat rat_of(Int n, Int d) {
  DOMAIN_CHECK(d != 0, "zero denominator");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline Zint num(const Rat& r) { return r.get_num(); }
inline Zint den(const Rat& r) { return r.get_den(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Zint floor_rat(const Rat& r) {
  Zint q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

inline Zint ceil_rat(const Rat& r) {
  Zint q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

// r - floor(r), in [0,1)
inline Rat frac_part(const Rat& r) { return r - Rat(floor_rat(r)); }

inline Rat pow_rat(const Rat& base, Int e) {
  if (e == 0) return Rat(1);
  DOMAIN_CHECK(base != 0 || e > 0, "0 to a negative power");
  Rat b = e > 0 ? base : Rat(1) / base;
  Int n = e > 0 ? e : -e;
  Rat acc(1);
  while (n > 0) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

// 2-adic valuation of a nonzero rational; the inert prime of every local field we touch.
inline Int val2(const Rat& r) {
  LOGIC_CHECK(r != 0, "val2 of zero");
  return Int(mpz_scan1(r.get_num().get_mpz_t(), 0)) -
         Int(mpz_scan1(r.get_den().get_mpz_t(), 0));
}

inline std::vector<Int> divisors(Int n) {
  LOGIC_CHECK(n >= 1, "divisors of n >= 1");
  std::vector<Int> small, large;
  for (Int d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
  return small;
}

}  // namespace kp

#endif
