#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "kp/numeval.hpp"
#include "kp/util.hpp"

using namespace kp;

namespace {

SymMat sym1q(const FieldSpec& F, const Rat& x) {
  SymMat T(F, 1);
  T.at(0, 0) = FieldElement(F, x);
  return T;
}

SymMat sym2q(const FieldSpec& F, Rat a, Rat b, Rat d) {
  SymMat T(F, 2);
  T.at(0, 0) = FieldElement(F, a);
  T.at(1, 1) = FieldElement(F, d);
  T.set(0, 1, FieldElement(F, b));
  return T;
}

template <class Fn>
std::string thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const CheckError& e) {
    return e.code;
  }
  return "";
}

// reference values from plain double sums, independent of the interval path
const double kTheta0AtI = 1.0037348854877393;   // sum_p exp(-2 pi p^2)
const double kTheta1AtI = 0.4157606025960271;   // sum_p exp(-2 pi (p+1/2)^2)
const double kTheta0At2I = 1.0000069746847124;  // sum_p exp(-4 pi p^2)
const double kTheta0F5 = 1.000007000734361;     // sum_{s,t} exp(-2 pi (2s^2+2st+3t^2))

const double kTau = 6.283185307179586;

}  // namespace

TEST_CASE("certified theta values at standard points") {
  FieldSpec Q = FieldSpec::rationals();
  ResidueVector lam0(Q, 1);
  ResidueVector lam1 = ResidueVector::reduce({FieldElement::from_int(Q, 1)});

  EvalPoint pt = scalar_point(Q, 1, Rat(0), Rat(1));
  CIval t0 = eval_theta(lam0, pt, 1e-12);
  CHECK(std::abs(t0.re.mid() - kTheta0AtI) < 1e-10);
  CHECK(t0.re.width() < 1e-10);
  CHECK(std::abs(t0.im.mid()) < 1e-10);

  CIval t1 = eval_theta(lam1, pt, 1e-12);
  CHECK(std::abs(t1.re.mid() - kTheta1AtI) < 1e-10);

  CIval t02 = eval_theta(lam0, scalar_point(Q, 1, Rat(0), Rat(2)), 1e-12);
  CHECK(std::abs(t02.re.mid() - kTheta0At2I) < 1e-10);

  FieldSpec F5 = FieldSpec::real_quadratic(5);
  CIval t5 = eval_theta(ResidueVector(F5, 1), scalar_point(F5, 1, Rat(0), Rat(1)), 1e-12);
  CHECK(std::abs(t5.re.mid() - kTheta0F5) < 1e-10);
  CHECK(std::abs(t5.im.mid()) < 1e-10);
}

TEST_CASE("theta with a real elliptic variable") {
  FieldSpec Q = FieldSpec::rationals();
  EvalPoint pt =
      rational_point(Q, 1, {sym1q(Q, Rat(0))}, {sym1q(Q, Rat(1))}, {{rat_of(1, 3)}});
  CIval t = eval_theta(ResidueVector(Q, 1), pt, 1e-12);
  std::complex<double> ref(0, 0);
  for (int p = -10; p <= 10; ++p)
    ref += std::exp(-kTau * p * p) * std::polar(1.0, kTau * 2.0 * p / 3.0);
  CHECK(std::abs(t.re.mid() - ref.real()) < 1e-10);
  CHECK(std::abs(t.im.mid() - ref.imag()) < 1e-10);
}

TEST_CASE("uncertifiable tails are refused") {
  FieldSpec Q = FieldSpec::rationals();
  EvalPoint bad = scalar_point(Q, 1, Rat(0), rat_of(1, Int(1) << 25));
  CHECK(thrown_code([&] { eval_theta(ResidueVector(Q, 1), bad, 1e-8); }) ==
        "TailBoundTooLarge");
}

TEST_CASE("evaluation points demand certified shapes") {
  FieldSpec Q = FieldSpec::rationals();
  FieldSpec F5 = FieldSpec::real_quadratic(5);
  CHECK_THROWS_AS(scalar_point(Q, 1, Rat(0), Rat(0)), std::domain_error);
  CHECK_THROWS_AS(scalar_point(Q, 1, Rat(0), Rat(-1)), std::domain_error);
  CHECK_THROWS_AS(
      rational_point(F5, 1, {sym1q(Q, Rat(0))}, {sym1q(Q, Rat(1))}, {}),
      std::domain_error);  // one matrix per embedding
  CHECK_THROWS_AS(
      rational_point(Q, 1, {sym1q(Q, Rat(0))}, {sym1q(Q, Rat(1))}, {{Rat(0), Rat(0)}}),
      std::domain_error);  // w length
}

TEST_CASE("expansion evaluation matches a direct sum") {
  FieldSpec Q = FieldSpec::rationals();
  Expansion h(Q, 1, {1}, -1, Rat(12));
  h.set(sym1q(Q, Rat(3)), CycScalar::one());
  h.set(sym1q(Q, Rat(4)), CycScalar::from_rat(Rat(2)));
  h.set(sym1q(Q, Rat(8)), CycScalar::root_of_unity(1, 8));

  EvalPoint pt = scalar_point(Q, 1, Rat(0), rat_of(1, 4));
  CIval v = eval_expansion(h, pt, Rat(1));
  std::complex<double> ref = std::exp(-kTau * 3 / 4.0) +
                             2.0 * std::exp(-kTau * 4 / 4.0) +
                             std::polar(std::exp(-kTau * 8 / 4.0), kTau / 8);
  CHECK(std::abs(v.re.mid() - ref.real()) < 1e-12);
  CHECK(std::abs(v.im.mid() - ref.imag()) < 1e-12);
}

TEST_CASE("split components reassemble the plus expansion") {
  FieldSpec Q = FieldSpec::rationals();
  Expansion h(Q, 1, {1}, -1, Rat(12));
  h.set(sym1q(Q, Rat(3)), CycScalar::one());
  h.set(sym1q(Q, Rat(4)), CycScalar::from_rat(Rat(2)));
  h.set(sym1q(Q, Rat(8)), CycScalar::root_of_unity(1, 8));
  h.set(sym1q(Q, Rat(11)), CycScalar::from_rat(Rat(-1)));
  SplitFamily fam = split_plus(h);

  // h(z) = sum_lambda h_lambda(4z)
  EvalPoint p1 = scalar_point(Q, 1, Rat(0), rat_of(1, 4));
  EvalPoint p4 = scalar_point(Q, 1, Rat(0), Rat(1));
  CIval direct = eval_expansion(h, p1, Rat(1));
  CIval sum(192);
  for (Int li = 0; li < residue_class_count(Q, 1); ++li)
    sum = sum + eval_split_component(fam, li, p4);
  CHECK(sum.overlaps(direct));
  CHECK(std::abs(sum.re.mid() - direct.re.mid()) < 1e-14);
  CHECK(std::abs(sum.im.mid() - direct.im.mid()) < 1e-14);
}

TEST_CASE("jacobi evaluation matches the raw double sum") {
  FieldSpec Q = FieldSpec::rationals();
  Expansion h(Q, 1, {1}, -1, Rat(12));
  h.set(sym1q(Q, Rat(3)), CycScalar::one());
  h.set(sym1q(Q, Rat(4)), CycScalar::from_rat(Rat(2)));
  h.set(sym1q(Q, Rat(8)), CycScalar::root_of_unity(1, 8));
  h.set(sym1q(Q, Rat(11)), CycScalar::from_rat(Rat(-1)));
  h.set(sym1q(Q, Rat(12)), CycScalar::from_rat(rat_of(1, 3)));
  JacobiExpansion g = jacobi_of_plus(h);

  EvalPoint pt =
      rational_point(Q, 1, {sym1q(Q, Rat(0))}, {sym1q(Q, Rat(1))}, {{rat_of(1, 3)}});
  CIval val = eval_jacobi(g, pt, 1e-12);

  // raw series: keys (N, r) with 4N - r^2 stored and r in the matching class
  std::vector<std::pair<int, std::complex<double>>> keys = {
      {3, {1, 0}},
      {4, {2, 0}},
      {8, std::polar(1.0, kTau / 8)},
      {11, {-1, 0}},
      {12, {1.0 / 3, 0}}};
  std::complex<double> ref(0, 0);
  for (int r = -40; r <= 40; ++r)
    for (const auto& kv : keys) {
      if ((kv.first + r * r) % 4 != 0) continue;
      double N = (kv.first + double(r) * r) / 4;
      ref += kv.second * std::exp(-kTau * N) * std::polar(1.0, kTau * r / 3.0);
    }
  CHECK(std::abs(val.re.mid() - ref.real()) < 1e-8);
  CHECK(std::abs(val.im.mid() - ref.imag()) < 1e-8);

  // the componentwise product is the same number
  SplitFamily fam = split_plus(h);
  CIval acc(192);
  for (Int li = 0; li < residue_class_count(Q, 1); ++li)
    acc = acc + eval_split_component(fam, li, pt) *
                    eval_theta(ResidueVector::from_index(Q, 1, li), pt, 1e-12);
  CHECK(acc.overlaps(val));
  CHECK(std::abs(acc.re.mid() - ref.real()) < 1e-8);
  CHECK(std::abs(acc.im.mid() - ref.imag()) < 1e-8);
}

TEST_CASE("rank two jacobi evaluation matches the raw double sum") {
  FieldSpec Q = FieldSpec::rationals();
  Expansion h(Q, 2, {1}, -1, Rat(8));
  h.set(sym2q(Q, Rat(3), Rat(1), Rat(3)), CycScalar::one());
  h.set(sym2q(Q, Rat(4), Rat(0), Rat(0)), CycScalar::root_of_unity(1, 4));
  JacobiExpansion g = jacobi_of_plus(h);

  EvalPoint pt = scalar_point(Q, 2, Rat(0), Rat(1));
  CIval val = eval_jacobi(g, pt, 1e-10);

  std::complex<double> ref(0, 0);
  for (int r1 = -25; r1 <= 25; ++r1)
    for (int r2 = -25; r2 <= 25; ++r2) {
      double rr = double(r1) * r1 + double(r2) * r2;
      if (r1 % 2 != 0 && r2 % 2 != 0) ref += std::exp(-kTau * (6 + rr) / 4);
      if (r1 % 2 == 0 && r2 % 2 == 0)
        ref += std::complex<double>(0, 1) * std::exp(-kTau * (4 + rr) / 4);
    }
  CHECK(std::abs(val.re.mid() - ref.real()) < 1e-7);
  CHECK(std::abs(val.im.mid() - ref.imag()) < 1e-7);
}

TEST_CASE("group membership certificates") {
  FieldSpec Q = FieldSpec::rationals();
  GroupMat id = group_identity(Q, 1);
  CHECK(is_symplectic(id));
  CHECK_NOTHROW(check_gamma0_4(id));

  GroupMat l4 = group_identity(Q, 1);
  l4.c.at(0, 0) = FieldElement::from_int(Q, 4);
  CHECK(is_symplectic(l4));
  CHECK_NOTHROW(check_gamma0_4(l4));

  GroupMat l1 = group_identity(Q, 1);
  l1.c.at(0, 0) = FieldElement::from_int(Q, 1);
  CHECK(is_symplectic(l1));
  CHECK(thrown_code([&] { check_gamma0_4(l1); }) == "NotInGroup");

  GroupMat bad = group_identity(Q, 1);
  bad.a.at(0, 0) = FieldElement::from_int(Q, 2);
  CHECK(!is_symplectic(bad));
  CHECK(thrown_code([&] { check_gamma0_4(bad); }) == "NotInGroup");

  FieldSpec F5 = FieldSpec::real_quadratic(5);
  GroupMat u5 = group_identity(F5, 1);
  u5.b.at(0, 0) = FieldElement::sqrt_d(F5).scaled(rat_of(1, 5));  // 1/sqrt(5)
  CHECK(is_symplectic(u5));
  CHECK_NOTHROW(check_gamma0_4(u5));

  GroupMat ub = group_identity(F5, 1);
  ub.b.at(0, 0) = FieldElement(F5, rat_of(1, 5));
  CHECK(thrown_code([&] { check_gamma0_4(ub); }) == "NotInGroup");

  GroupMat l45 = group_identity(F5, 1);
  l45.c.at(0, 0) = FieldElement::sqrt_d(F5).scaled(Rat(4));
  CHECK_NOTHROW(check_gamma0_4(l45));
  GroupMat word = group_mul(u5, l45);
  CHECK(is_symplectic(word));
  CHECK_NOTHROW(check_gamma0_4(word));
  // the product realizes the block formula
  CHECK(word.a == FMat::identity(F5, 1) + FMat::scalar(F5, 1, FieldElement::from_int(F5, 4)));
}

TEST_CASE("theta transformation law holds on sampled group elements") {
  FieldSpec Q = FieldSpec::rationals();
  EvalPoint pt = scalar_point(Q, 1, Rat(0), Rat(1));

  GroupMat l4 = group_identity(Q, 1);
  l4.c.at(0, 0) = FieldElement::from_int(Q, 4);
  CHECK(theta_transform_residual(l4, pt, 1e-12) < 1e-6);

  GroupMat u1 = group_identity(Q, 1);
  u1.b.at(0, 0) = FieldElement::from_int(Q, 1);
  CHECK(theta_transform_residual(u1, pt, 1e-12) < 1e-6);

  GroupMat word = group_mul(l4, u1);
  CHECK(theta_transform_residual(word, pt, 1e-12) < 1e-6);

  FieldSpec F5 = FieldSpec::real_quadratic(5);
  EvalPoint p5 = scalar_point(F5, 1, Rat(0), Rat(2));
  GroupMat l45 = group_identity(F5, 1);
  l45.c.at(0, 0) = FieldElement::sqrt_d(F5).scaled(Rat(4));
  CHECK(theta_transform_residual(l45, p5, 1e-12) < 1e-6);

  GroupMat mu = group_identity(F5, 1);
  mu.a.at(0, 0) = FieldElement::omega(F5);
  mu.d.at(0, 0) = FieldElement(F5, Rat(1)) / FieldElement::omega(F5);
  CHECK(is_symplectic(mu));
  CHECK(theta_transform_residual(mu, p5, 1e-12) < 1e-6);

  EvalPoint p2 = scalar_point(Q, 2, Rat(0), Rat(1));
  CHECK(theta_transform_residual(group_identity(Q, 2), p2, 1e-12) < 1e-7);

  GroupMat l1 = group_identity(Q, 1);
  l1.c.at(0, 0) = FieldElement::from_int(Q, 1);
  CHECK(thrown_code([&] { theta_transform_residual(l1, pt, 1e-9); }) == "NotInGroup");
}
