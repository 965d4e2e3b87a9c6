#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kp/cyclotomic.hpp"
#include "kp/interval.hpp"

using namespace kp;

namespace {

// independent product-over-divisors oracle for cyclotomic polynomials
std::vector<Zint> poly_mul(const std::vector<Zint>& a, const std::vector<Zint>& b) {
  std::vector<Zint> p(a.size() + b.size() - 1, Zint(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) p[i + j] += a[i] * b[j];
  return p;
}

}  // namespace

TEST_CASE("cyclotomic polynomial products recover x^n - 1") {
  for (Int n = 1; n <= 36; ++n) {
    std::vector<Zint> prod{Zint(1)};
    for (Int d : divisors(n)) prod = poly_mul(prod, CycScalar::cyclotomic_poly(d));
    REQUIRE(Int(prod.size()) == n + 1);
    CHECK(prod[0] == -1);
    CHECK(prod[size_t(n)] == 1);
    for (Int k = 1; k < n; ++k) CHECK(prod[size_t(k)] == 0);
  }
}

TEST_CASE("specific cyclotomic polynomials") {
  auto& p8 = CycScalar::cyclotomic_poly(8);  // x^4 + 1
  CHECK(p8 == std::vector<Zint>{Zint(1), Zint(0), Zint(0), Zint(0), Zint(1)});
  auto& p12 = CycScalar::cyclotomic_poly(12);  // x^4 - x^2 + 1
  CHECK(p12 == std::vector<Zint>{Zint(1), Zint(0), Zint(-1), Zint(0), Zint(1)});
}

TEST_CASE("roots of unity reduce to canonical orders") {
  CHECK(CycScalar::root_of_unity(1, 2) == CycScalar::from_rat(Rat(-1)));
  CHECK(CycScalar::root_of_unity(2, 8).order == 4);    // e(1/4)
  CHECK(CycScalar::root_of_unity(1, 6).order == 3);    // 2 mod 4 order folds down
  CHECK(CycScalar::root_of_unity(5, 5) == CycScalar::one());
  CHECK(CycScalar::root_of_unity(-1, 4) == CycScalar::root_of_unity(3, 4));
}

TEST_CASE("ring operations against direct identities") {
  CycScalar i = CycScalar::root_of_unity(1, 4);
  CHECK(i * i == CycScalar::from_rat(Rat(-1)));
  CycScalar z3 = CycScalar::zeta(3);
  CHECK(z3.pow(3) == CycScalar::one());
  CHECK((z3 * z3 + z3 + CycScalar::one()).is_zero());  // minimal polynomial
  CycScalar z7 = CycScalar::zeta(7);
  // sum of all 7th roots vanishes
  CycScalar s = CycScalar::zero();
  for (Int k = 0; k < 7; ++k) s = s + z7.pow(k);
  CHECK(s.is_zero());
  // distributivity spot check across mixed orders
  CycScalar a = CycScalar::zeta(8) + CycScalar::zeta(3);
  CycScalar b = CycScalar::zeta(12) - CycScalar::one();
  CycScalar c = CycScalar::zeta(4);
  CHECK(a * (b + c) == a * b + a * c);
}

TEST_CASE("sqrt2 embeds and squares correctly") {
  CycScalar s2 = CycScalar::sqrt2();
  CHECK(s2 * s2 == CycScalar::from_rat(Rat(2)));
  CIval z = s2.to_complex();
  CHECK(std::abs(z.re.mid() - 1.4142135623730951) < 1e-12);
  CHECK(z.im.contains_zero());
  CHECK(CycScalar::q_pow_half(2, 2) == CycScalar::from_rat(Rat(2)));
  CHECK(CycScalar::q_pow_half(2, -1) * CycScalar::q_pow_half(2, 1) == CycScalar::one());
  CHECK(CycScalar::q_pow_half(4, 3) == CycScalar::from_rat(Rat(8)));
  CHECK(CycScalar::q_pow_half(2, 3) == s2.scaled(Rat(2)));
}

TEST_CASE("conjugation and modulus") {
  CycScalar z = CycScalar::zeta(16);
  CHECK(z.conj() == z.pow(15));
  CHECK(z.is_unit_modulus());
  CHECK(!(z + CycScalar::one()).is_unit_modulus());
  CycScalar w = CycScalar::zeta(5).scaled(Rat(2, 3)) + CycScalar::one();
  CHECK(w.conj().conj() == w);
  CHECK((w * w.conj()).is_rational() == false);  // lies in the real subfield, not Q
}

TEST_CASE("inverse solves exactly") {
  CycScalar w = CycScalar::one() + CycScalar::zeta(5);
  CHECK(w * w.inv() == CycScalar::one());
  CycScalar u = CycScalar::zeta(8).scaled(Rat(3, 7)) - CycScalar::from_rat(Rat(2));
  CHECK(u * u.inv() == CycScalar::one());
  CHECK_THROWS_AS(CycScalar::zero().inv(), std::domain_error);
}

TEST_CASE("equality across different parent orders") {
  CHECK(CycScalar::zeta(3) == CycScalar::root_of_unity(4, 12));
  CHECK(CycScalar::zeta(6) == CycScalar::zeta(3) * CycScalar::from_rat(Rat(-1)) * CycScalar::zeta(3));
  // e(1/6) = -e(2/3)
  CHECK(CycScalar::zeta(6) == -(CycScalar::zeta(3).pow(2)));
  CHECK(CycScalar::zeta(6).key() == (-(CycScalar::zeta(3).pow(2))).key());
}

TEST_CASE("bucket sums reduce like explicit sums") {
  std::vector<Zint> counts(24, Zint(0));
  counts[3] = 5;
  counts[20] = -2;
  counts[0] = 1;
  CycScalar direct = CycScalar::from_rat(Rat(1)) + CycScalar::root_of_unity(3, 24).scaled(Rat(5)) -
                     CycScalar::root_of_unity(20, 24).scaled(Rat(2));
  CHECK(CycScalar::from_root_buckets(24, counts) == direct);
  // all n-th roots sum to zero
  std::vector<Zint> all(40, Zint(1));
  CHECK(CycScalar::from_root_buckets(40, all).is_zero());
}

TEST_CASE("interval arithmetic brackets simple constants") {
  Ival pi = pi_interval();
  CHECK(std::abs(pi.mid() - 3.141592653589793) < 1e-12);
  CHECK(pi.width() < 1e-40);
  Ival x = Ival::from_rat(Rat(1, 3));
  Ival y = (x * x + x).sqrt_();  // sqrt(4/9) = 2/3
  CHECK(y.overlaps(Ival::from_rat(Rat(2, 3))));
  CIval e1 = e_of(CIval(Ival::from_rat(Rat(1, 2)), Ival::from_rat(Rat(0))));
  CHECK(e1.re.overlaps(Ival::from_int(-1)));  // e(1/2) = -1
  CHECK(e1.im.contains_zero());
  CHECK(e1.re.width() < 1e-40);
}

TEST_CASE("to_complex agrees with interval evaluation of roots") {
  for (Int n : {5, 8, 12}) {
    for (Int k = 0; k < n; ++k) {
      CIval z = CycScalar::root_of_unity(k, n).to_complex();
      CIval w = e_of(CIval(Ival::from_rat(rat_of(k, n)), Ival::from_rat(Rat(0))));
      CHECK(z.overlaps(w));
      CHECK(z.re.width() < 1e-40);
    }
  }
}
