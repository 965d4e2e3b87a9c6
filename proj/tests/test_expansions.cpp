#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kp/expansions.hpp"
#include "kp/util.hpp"

using namespace kp;

namespace {

SymMat sym1(const FieldSpec& F, const FieldElement& x) {
  SymMat T(F, 1);
  T.at(0, 0) = x;
  return T;
}

SymMat sym1q(const FieldSpec& F, const Rat& x) { return sym1(F, FieldElement(F, x)); }

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

// random plus-supported expansion: every enumerated key with a witness gets a
// small random scalar times a root of unity
Expansion random_plus(const FieldSpec& F, Int m, std::vector<Int> k, Int bound, uint64_t seed) {
  Expansion h(F, m, k, -1, Rat(bound));
  FieldElement eta = FieldElement::from_int(F, -1);
  Rng rng(seed);
  for (const SymMat& T : enumerate_psd(F, m, bound)) {
    if (!plus_support_witness(T, eta)) continue;
    Int a = rng.range(-5, 5);
    if (a == 0) continue;
    CycScalar v = CycScalar::from_rat(rat_of(a, 1 + Int(rng.below(4)))) *
                  CycScalar::root_of_unity(Int(rng.below(8)), 8);
    h.set(T, v);
  }
  return h;
}

}  // namespace

TEST_CASE("weight and unit norm condition") {
  FieldSpec Q = FieldSpec::rationals();
  CHECK_NOTHROW(Expansion(Q, 1, {1}, -1, Rat(10)));
  CHECK_NOTHROW(Expansion(Q, 1, {3}, -1, Rat(10)));
  CHECK(thrown_code([&] { Expansion(Q, 1, {2}, -1, Rat(10)); }) == "EtaNormCondition");
  // eta = 1 flips the parity demand
  CHECK_NOTHROW(Expansion(Q, 1, {2}, 1, Rat(10)));
  CHECK(thrown_code([&] { Expansion(Q, 1, {1}, 1, Rat(10)); }) == "EtaNormCondition");

  FieldSpec F5 = FieldSpec::real_quadratic(5);
  CHECK_NOTHROW(Expansion(F5, 1, {1, 1}, -1, Rat(10)));
  CHECK_NOTHROW(Expansion(F5, 1, {1, 3}, -1, Rat(10)));
  CHECK(thrown_code([&] { Expansion(F5, 1, {1, 2}, -1, Rat(10)); }) == "EtaNormCondition");
  CHECK_NOTHROW(Expansion(F5, 2, {1, 1}, -1, Rat(10)));
}

TEST_CASE("container is the object") {
  FieldSpec Q = FieldSpec::rationals();
  Expansion h(Q, 1, {1}, -1, Rat(10));
  h.set(sym1q(Q, Rat(3)), CycScalar::one());
  h.set(sym1q(Q, Rat(4)), CycScalar::from_rat(Rat(2)));
  CHECK(h.size() == 2);
  CHECK(h.get(sym1q(Q, Rat(3))) == CycScalar::one());
  CHECK(h.get(sym1q(Q, Rat(8))) == CycScalar::zero());
  // zero value erases the key
  h.set(sym1q(Q, Rat(3)), CycScalar::zero());
  CHECK(h.size() == 1);
  // keys outside the container shape are rejected
  CHECK_THROWS_AS(h.set(sym1q(Q, Rat(-4)), CycScalar::one()), std::domain_error);
  CHECK_THROWS_AS(h.set(sym1q(Q, Rat(12)), CycScalar::one()), std::domain_error);
  CHECK_THROWS_AS(h.set(sym1q(Q, rat_of(1, 3)), CycScalar::one()), std::domain_error);
  CHECK_NOTHROW(h.check_plus_type());

  Expansion h2(Q, 1, {1}, -1, Rat(10));
  h2.set(sym1q(Q, Rat(4)), CycScalar::from_rat(Rat(2)));
  CHECK(h == h2);
}

TEST_CASE("key normalization round trip") {
  FieldSpec Q = FieldSpec::rationals();
  // m = 1: N = 1, r = 1 gives the invariant pair (3, [1])
  auto [T, lam] = normalize_jacobi_key(sym1q(Q, Rat(1)), {FieldElement::from_int(Q, 1)});
  CHECK(T == sym1q(Q, Rat(3)));
  CHECK(lam == ResidueVector::reduce({FieldElement::from_int(Q, 1)}));
  auto [N, r] = denormalize_jacobi_key(T, lam);
  CHECK(N == sym1q(Q, Rat(1)));
  CHECK(r.size() == 1);
  CHECK(r[0] == FieldElement::from_int(Q, 1));

  // m = 2 with a half-integral index
  SymMat N2 = sym2q(Q, Rat(1), rat_of(1, 2), Rat(1));
  std::vector<FieldElement> r2 = {FieldElement::from_int(Q, 1), FieldElement::from_int(Q, 1)};
  auto [T2, lam2] = normalize_jacobi_key(N2, r2);
  CHECK(T2 == sym2q(Q, Rat(3), Rat(1), Rat(3)));
  auto [N2b, r2b] = denormalize_jacobi_key(T2, lam2);
  CHECK(N2b == N2);
  CHECK(r2b == r2);

  // negative residues land in the same class: r = -1 matches r = 1
  auto [T3, lam3] = normalize_jacobi_key(sym1q(Q, Rat(1)), {FieldElement::from_int(Q, -1)});
  CHECK(T3 == T);
  CHECK(lam3 == lam);

  // the congruence gate on invalid invariant pairs
  CHECK(thrown_code([&] {
          denormalize_jacobi_key(sym1q(Q, Rat(1)), ResidueVector(Q, 1));
        }) == "JacobiKeyInvariant");
}

TEST_CASE("split partitions by witness") {
  FieldSpec Q = FieldSpec::rationals();
  Expansion h(Q, 1, {1}, -1, Rat(10));
  h.set(sym1q(Q, Rat(3)), CycScalar::one());
  h.set(sym1q(Q, Rat(4)), CycScalar::from_rat(Rat(2)));
  h.set(sym1q(Q, Rat(7)), CycScalar::from_rat(Rat(-1)));
  SplitFamily fam = split_plus(h);
  CHECK(fam.total_size() == 3);
  CHECK(Int(fam.comp.size()) == residue_class_count(Q, 1));
  Int i0 = ResidueVector(Q, 1).index();
  Int i1 = ResidueVector::reduce({FieldElement::from_int(Q, 1)}).index();
  CHECK(fam.comp[size_t(i0)].count(sym1q(Q, Rat(4)).key()) == 1);
  CHECK(fam.comp[size_t(i1)].count(sym1q(Q, Rat(3)).key()) == 1);
  CHECK(fam.comp[size_t(i1)].count(sym1q(Q, Rat(7)).key()) == 1);

  // 1 mod 4 and 2 mod 4 are not supported
  Expansion bad(Q, 1, {1}, -1, Rat(10));
  bad.set(sym1q(Q, Rat(5)), CycScalar::one());
  CHECK(thrown_code([&] { split_plus(bad); }) == "NotPlusSupported");
  bad = Expansion(Q, 1, {1}, -1, Rat(10));
  bad.set(sym1q(Q, Rat(6)), CycScalar::one());
  CHECK(thrown_code([&] { split_plus(bad); }) == "NotPlusSupported");
}

TEST_CASE("jacobi correspondence round trip") {
  FieldSpec Q = FieldSpec::rationals();
  FieldSpec F5 = FieldSpec::real_quadratic(5);
  struct Case {
    FieldSpec F;
    Int m;
    std::vector<Int> k;
    Int bound;
  };
  std::vector<Case> cases = {{Q, 1, {3}, 16, }, {Q, 2, {1}, 8}, {F5, 1, {1, 1}, 8}};
  for (size_t ci = 0; ci < cases.size(); ++ci) {
    Expansion h = random_plus(cases[ci].F, cases[ci].m, cases[ci].k, cases[ci].bound,
                              0x9e3779b97f4a7c15ull + ci);
    CHECK(h.size() > 0);
    JacobiExpansion g = jacobi_of_plus(h);
    CHECK(g.size() == h.size());
    for (size_t j = 0; j < g.weight.size(); ++j) CHECK(g.weight[j] == h.weight[j] + 1);
    CHECK(plus_of_jacobi(g) == h);
    // splitting then attaching theta indices is the same reindexing
    JacobiExpansion g2 = compose_theta(split_plus(h));
    CHECK(g2 == g);
  }

  // the coefficient value is carried unchanged onto the witness pair
  Expansion h(Q, 1, {1}, -1, Rat(10));
  h.set(sym1q(Q, Rat(3)), CycScalar::root_of_unity(1, 8));
  JacobiExpansion g = jacobi_of_plus(h);
  ResidueVector one = ResidueVector::reduce({FieldElement::from_int(Q, 1)});
  CHECK(g.get(sym1q(Q, Rat(3)), one) == CycScalar::root_of_unity(1, 8));
  CHECK(g.get(sym1q(Q, Rat(3)), ResidueVector(Q, 1)) == CycScalar::zero());

  // eta = +1 data still splits by witness, but has no theta attachment
  Expansion hp(Q, 1, {2}, 1, Rat(10));
  hp.set(sym1q(Q, Rat(4)), CycScalar::one());
  SplitFamily famp = split_plus(hp);
  CHECK(famp.total_size() == 1);
  CHECK(famp.comp[size_t(ResidueVector(Q, 1).index())].count(sym1q(Q, Rat(4)).key()) == 1);
  CHECK(thrown_code([&] { jacobi_of_plus(hp); }) == "UnsupportedEta");
  CHECK(thrown_code([&] { compose_theta(famp); }) == "UnsupportedEta");
}

TEST_CASE("jacobi container congruence gate") {
  FieldSpec Q = FieldSpec::rationals();
  JacobiExpansion g(Q, 1, {2}, Rat(10));
  ResidueVector lam0(Q, 1);
  ResidueVector lam1 = ResidueVector::reduce({FieldElement::from_int(Q, 1)});
  CHECK_NOTHROW(g.set(sym1q(Q, Rat(4)), lam0, CycScalar::one()));
  CHECK_NOTHROW(g.set(sym1q(Q, Rat(3)), lam1, CycScalar::one()));
  CHECK(thrown_code([&] { g.set(sym1q(Q, Rat(3)), lam0, CycScalar::one()); }) ==
        "JacobiKeyInvariant");
  CHECK(thrown_code([&] { g.set(sym1q(Q, Rat(4)), lam1, CycScalar::one()); }) ==
        "JacobiKeyInvariant");
}

TEST_CASE("unipotent coefficient action") {
  FieldSpec Q = FieldSpec::rationals();
  Expansion h(Q, 1, {1}, -1, Rat(10));
  h.set(sym1q(Q, Rat(3)), CycScalar::one());
  h.set(sym1q(Q, Rat(4)), CycScalar::from_rat(Rat(2)));

  SymMat S = sym1q(Q, rat_of(1, 4));
  Expansion hs = rho_usharp(h, S);
  CHECK(hs.get(sym1q(Q, Rat(3))) == CycScalar::root_of_unity(1, 4));  // e(-3/4)
  CHECK(hs.get(sym1q(Q, Rat(4))) == CycScalar::from_rat(Rat(2)));     // e(-1) = 1

  // integral S acts trivially
  CHECK(rho_usharp(h, sym1q(Q, Rat(2))) == h);

  // additive in S
  SymMat S2 = sym1q(Q, rat_of(3, 8));
  SymMat S12 = sym1q(Q, rat_of(5, 8));
  CHECK(rho_usharp(rho_usharp(h, S), S2) == rho_usharp(h, S12));

  FieldSpec F5 = FieldSpec::real_quadratic(5);
  Expansion h5 = random_plus(F5, 1, {1, 1}, 8, 7);
  SymMat S5 = sym1(F5, FieldElement::omega(F5).scaled(rat_of(1, 4)));
  SymMat S5b = sym1(F5, FieldElement(F5, rat_of(1, 2), rat_of(1, 4)));
  SymMat S5c = sym1(F5, FieldElement(F5, rat_of(1, 2), rat_of(1, 2)));
  CHECK(rho_usharp(rho_usharp(h5, S5), S5b) == rho_usharp(h5, S5c));
}

TEST_CASE("diagonal coefficient action") {
  FieldSpec Q = FieldSpec::rationals();

  // det A = 2: the scalar is 2^{-(2k+1)/2}
  Expansion h(Q, 1, {1}, -1, Rat(4));
  h.set(sym1q(Q, Rat(4)), CycScalar::one());
  FMat A = FMat::scalar(Q, 1, FieldElement::from_int(Q, 2));
  Expansion ha = rho_mA(h, A);
  CHECK(ha.trace_bound == Rat(1));
  CHECK(ha.size() == 1);
  CHECK(ha.get(sym1q(Q, Rat(1))) == CycScalar::q_pow_half(2, -3));

  // det A = 3 is not 2^t u^2: the scalar would leave the coefficient domain
  CHECK(thrown_code([&] {
          rho_mA(h, FMat::scalar(Q, 1, FieldElement::from_int(Q, 3)));
        }) == "UnsupportedDeterminant");

  // det A = 4 = 2^2: the scalar is rational
  Expansion h16(Q, 1, {1}, -1, Rat(19));
  h16.set(sym1q(Q, Rat(16)), CycScalar::one());
  h16.set(sym1q(Q, Rat(3)), CycScalar::one());
  FMat A4 = FMat::scalar(Q, 1, FieldElement::from_int(Q, 4));
  Expansion ha4 = rho_mA(h16, A4);
  CHECK(ha4.trace_bound == rat_of(19, 16));
  CHECK(ha4.size() == 1);  // the key 3 has no preimage in the lattice
  CHECK(ha4.get(sym1q(Q, Rat(1))) == CycScalar::from_rat(rat_of(1, 8)));

  // det A = 18 = 2 * 3^2: mixed scalar
  Expansion h18(Q, 1, {1}, -1, Rat(324));
  h18.set(sym1q(Q, Rat(324)), CycScalar::one());
  FMat A18 = FMat::scalar(Q, 1, FieldElement::from_int(Q, 18));
  Expansion ha18 = rho_mA(h18, A18);
  CHECK(ha18.get(sym1q(Q, Rat(1))) ==
        CycScalar::q_pow_half(2, -3) * CycScalar::from_rat(rat_of(1, 27)));

  // det A = 6 is not 2^t u^2: refuse rather than leave the scalar domain
  CHECK(thrown_code([&] {
          rho_mA(h18, FMat::scalar(Q, 1, FieldElement::from_int(Q, 6)));
        }) == "UnsupportedDeterminant");

  FieldSpec F5 = FieldSpec::real_quadratic(5);
  FieldElement w = FieldElement::omega(F5);

  // det A = omega is not 2^t * square: refuse rather than leave the scalar domain
  Expansion h5(F5, 1, {1, 1}, -1, Rat(16));
  h5.set(sym1(F5, w * w * w * w), CycScalar::one());
  FMat Aw = FMat::scalar(F5, 1, w);
  CHECK(thrown_code([&] { rho_mA(h5, Aw); }) == "UnsupportedDeterminant");

  // det A = omega^2: the unit norm drops out at parallel weight
  FMat Aw2 = FMat::scalar(F5, 1, w * w);
  Expansion ha5 = rho_mA(h5, Aw2);
  CHECK(ha5.size() == 1);
  CHECK(ha5.get(sym1q(F5, Rat(1))) == CycScalar::one());

  // ... but requires parallel weight
  Expansion h5np(F5, 1, {1, 3}, -1, Rat(16));
  h5np.set(sym1(F5, w * w * w * w), CycScalar::one());
  CHECK(thrown_code([&] { rho_mA(h5np, Aw2); }) == "UnsupportedDeterminant");

  // singular A is rejected outright
  CHECK_THROWS_AS(rho_mA(h, FMat::scalar(Q, 1, FieldElement::from_int(Q, 0))),
                  std::domain_error);
}

TEST_CASE("shear and diagonal actions interchange") {
  // coefficientwise, M_A U_S = U_{A S tA} M_A
  FieldSpec Q = FieldSpec::rationals();
  Expansion h = random_plus(Q, 1, {3}, 16, 11);
  CHECK(h.size() >= 4);
  FMat A = FMat::scalar(Q, 1, FieldElement::from_int(Q, 2));
  SymMat S = sym1q(Q, rat_of(1, 8));
  Expansion lhs = rho_mA(rho_usharp(h, S), A);
  Expansion rhs = rho_usharp(rho_mA(h, A), sym1q(Q, rat_of(1, 2)));
  CHECK(lhs.size() >= 2);
  CHECK(lhs == rhs);
}

TEST_CASE("unimodular congruence moves keys without a scalar") {
  FieldSpec Q = FieldSpec::rationals();
  Expansion h(Q, 2, {1}, -1, Rat(24));
  h.set(sym2q(Q, Rat(3), Rat(1), Rat(3)), CycScalar::root_of_unity(1, 3));
  FMat A(Q, 2, 2);
  A.at(0, 0) = FieldElement::from_int(Q, 1);
  A.at(0, 1) = FieldElement::from_int(Q, 1);
  A.at(1, 0) = FieldElement::from_int(Q, 0);
  A.at(1, 1) = FieldElement::from_int(Q, 1);
  Expansion ha = rho_mA(h, A);
  CHECK(ha.trace_bound == Rat(8));
  CHECK(ha.size() == 1);
  // tA^{-1} T A^{-1} for T = [[3,1],[1,3]]
  CHECK(ha.get(sym2q(Q, Rat(3), Rat(-2), Rat(4))) == CycScalar::root_of_unity(1, 3));
}

TEST_CASE("theta monomials up to a trace bound") {
  FieldSpec Q = FieldSpec::rationals();
  ResidueVector lam0(Q, 1);
  ResidueVector lam1 = ResidueVector::reduce({FieldElement::from_int(Q, 1)});

  std::vector<ThetaTerm> t0 = theta_coeffs(lam0, Rat(4));
  CHECK(t0.size() == 5);  // p in {-2..2}
  std::vector<ThetaTerm> t1 = theta_coeffs(lam1, Rat(1));
  CHECK(t1.size() == 2);  // x = +-1/2
  for (const ThetaTerm& t : t1) {
    CHECK(t.zexp == sym1q(Q, rat_of(1, 4)));
    CHECK((t.wexp[0] == FieldElement::from_int(Q, 1) ||
           t.wexp[0] == FieldElement::from_int(Q, -1)));
  }
  // zexp = x tx and wexp = 2x stay coupled
  for (const ThetaTerm& t : theta_coeffs(lam1, Rat(25))) {
    FieldElement x = t.wexp[0].scaled(rat_of(1, 2));
    CHECK(t.zexp == sym1(Q, x * x));
    CHECK((t.wexp[0] - FieldElement::from_int(Q, 1)).scaled(rat_of(1, 2)).is_integral());
  }

  FieldSpec F5 = FieldSpec::real_quadratic(5);
  std::vector<ThetaTerm> t5 = theta_coeffs(ResidueVector(F5, 1), Rat(2));
  CHECK(t5.size() == 3);  // x = 0, +-1

  // m = 2 over Q: x = (p1, p2), |x|^2 <= 2 gives 1 + 4 + 4 points
  std::vector<ThetaTerm> t22 = theta_coeffs(ResidueVector(Q, 2), Rat(2));
  CHECK(t22.size() == 9);
}
