// End-to-end acceptance harness.  Each numbered block below certifies one
// library-level property on a fixed seeded corpus and prints a single
// PASS/FAIL line; the process exits 0 only when every line passed.  All
// algebraic checks are exact; the numeric checks carry certified interval
// enclosures with the stated tolerances.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "kp/expansions.hpp"
#include "kp/numeval.hpp"
#include "kp/util.hpp"
#include "kp/weil.hpp"

using namespace kp;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& detail) {
  std::printf("%s %2d %s\n", pass ? "PASS" : "FAIL", idx, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

LocalMatData sym1(const LocalElement& x) { return {{x}}; }

LocalElement quad_form(const LocalMatData& B, const LocalVec& v) {
  LocalElement s = LocalElement::zero(v[0].K);
  for (size_t j = 0; j < v.size(); ++j)
    for (size_t k = 0; k < v.size(); ++k) s = s + v[j] * B[j][k] * v[k];
  return s;
}

CycScalar cyc_pow(const CycScalar& x, int n) {
  CycScalar r = CycScalar::one();
  for (int i = 0; i < n; ++i) r = r * x;
  return r;
}

// ---------------------------------------------------------------- corpus

// seeded plus containers shared by blocks 1 and 2; keys are built as
// 3 lam tlam + 4N with N half-integral totally psd, so every key carries a
// residue witness by construction and the container passes check_plus_type
std::vector<Expansion> seeded_corpus() {
  FieldSpec Q = FieldSpec::rationals();
  FieldSpec F5 = FieldSpec::real_quadratic(5);
  struct Combo {
    FieldSpec F;
    Int m;
    uint64_t seed;
  };
  std::vector<Combo> combos = {{Q, 1, 101}, {Q, 2, 102}, {F5, 1, 103}, {F5, 2, 104}};
  std::vector<Expansion> out;
  for (const Combo& cb : combos) {
    Rng rng(cb.seed);
    for (int rep = 0; rep < 25; ++rep) {
      // weight parity must satisfy the unit-norm condition for eta = -1
      std::vector<Int> weight;
      if (!cb.F.quadratic()) {
        weight = {cb.m == 1 ? 9 + 2 * Int(rng.below(3)) : 8 + Int(rng.below(4))};
      } else if (cb.m == 1) {
        Int k1 = 7 + Int(rng.below(4));
        weight = {k1, k1 + 2 * Int(rng.below(2))};
      } else {
        weight = {7 + Int(rng.below(4)), 6 + Int(rng.below(4))};
      }
      Expansion h(cb.F, cb.m, weight, -1, Rat(20));
      Int classes = residue_class_count(cb.F, cb.m);
      int want = 3 + int(rng.below(3));
      for (int attempt = 0; attempt < 60 && h.size() < want; ++attempt) {
        ResidueVector lam = ResidueVector::from_index(cb.F, cb.m, Int(rng.below(uint64_t(classes))));
        SymMat N(cb.F, cb.m);
        for (Int i = 0; i < cb.m; ++i) {
          Rat hi = Rat(rng.below(3));
          Rat lo = cb.F.quadratic() ? Rat(rng.below(2)) : Rat(0);
          N.set(i, i, FieldElement(cb.F, hi, lo));
        }
        if (cb.m == 2) {
          Rat h1 = rat_of(rng.range(-1, 1), 2);
          Rat h2 = cb.F.quadratic() ? rat_of(rng.range(-1, 1), 2) : Rat(0);
          N.set(0, 1, FieldElement(cb.F, h1, h2));
        }
        if (!N.is_totally_psd()) continue;
        SymMat T = lam.outer().scaled(Rat(3)) + N.scaled(Rat(4));
        if (T.trace_down() > Rat(20)) continue;
        Int num = Int(rng.range(1, 3)) * (rng.below(2) ? 1 : -1);
        CycScalar v = CycScalar::from_rat(rat_of(num, Int(1 + rng.below(2)))) *
                      CycScalar::root_of_unity(Int(rng.below(8)), 8);
        h.set(T, v);
      }
      h.check_plus_type();
      out.push_back(h);
    }
  }
  return out;
}

// ---------------------------------------------------------------- block 1+2

void run_round_trip_blocks() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Expansion> corpus = seeded_corpus();

  bool rt_ok = true;
  std::vector<JacobiExpansion> images;
  images.reserve(corpus.size());
  for (const Expansion& h : corpus) {
    JacobiExpansion g = jacobi_of_plus(h);
    Expansion back = plus_of_jacobi(g);
    if (!(back == h)) rt_ok = false;
    JacobiExpansion g2 = jacobi_of_plus(plus_of_jacobi(g));
    if (!(g2 == g)) rt_ok = false;
    images.push_back(g);
  }
  double rt_s = seconds_since(t0);
  bool rt_time = rt_s < 60.0;
  char buf[192];
  std::snprintf(buf, sizeof buf,
                "coefficient round-trips exact both ways on %zu seeded containers (%.1fs)",
                corpus.size(), rt_s);
  report(1, rt_ok && rt_time, buf);

  // theta path: exact equality first, then certified numeric enclosures
  auto t1 = std::chrono::steady_clock::now();
  bool path_ok = true;
  std::vector<SplitFamily> fams;
  fams.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    SplitFamily fam = split_plus(corpus[i]);
    if (!(compose_theta(fam) == images[i])) path_ok = false;
    fams.push_back(fam);
  }

  const mpfr_prec_t prec = 128;
  const double eps = 1e-9;
  double worst = 0.0;
  int points = 0;
  bool num_ok = true;
  for (size_t i = 0; i < corpus.size() && num_ok; ++i) {
    const Expansion& h = corpus[i];
    Rng rng(9000 + uint64_t(i));
    Int deg = h.F.degree();
    FieldSpec QF = FieldSpec::rationals();
    for (int p = 0; p < 5; ++p) {
      std::vector<SymMat> re, im;
      std::vector<std::vector<Rat>> wv;
      for (Int emb = 0; emb < deg; ++emb) {
        SymMat r(QF, h.m), s(QF, h.m);
        for (Int j = 0; j < h.m; ++j) {
          r.set(j, j, FieldElement(QF, rat_of(rng.range(-2, 2), 4)));
          s.set(j, j, FieldElement(QF, rat_of(4 + Int(rng.below(5)), 4)));
        }
        if (h.m == 2) r.set(0, 1, FieldElement(QF, rat_of(rng.range(-1, 1), 4)));
        re.push_back(r);
        im.push_back(s);
        std::vector<Rat> wcol;
        for (Int j = 0; j < h.m; ++j) wcol.push_back(rat_of(rng.range(-1, 1), 2));
        wv.push_back(wcol);
      }
      EvalPoint pt = rational_point(h.F, h.m, re, im, wv, prec);
      CIval lhs = eval_jacobi(images[i], pt, eps, prec);
      CIval rhs(prec);
      Int classes = residue_class_count(h.F, h.m);
      for (Int lam = 0; lam < classes; ++lam) {
        if (fams[i].comp[size_t(lam)].empty()) continue;
        CIval hl = eval_split_component(fams[i], lam, pt, prec);
        CIval th = eval_theta(ResidueVector::from_index(h.F, h.m, lam), pt, eps, prec);
        rhs = rhs + hl * th;
      }
      CIval diff = lhs - rhs;
      double dre = diff.re.abs_hi().d(), dim = diff.im.abs_hi().d();
      worst = std::max(worst, std::max(dre, dim));
      ++points;
      if (dre > 1e-8 || dim > 1e-8) num_ok = false;
    }
  }
  std::snprintf(buf, sizeof buf,
                "theta path exact; %d certified evaluations agree within 1e-8 "
                "(worst %.1e, %.1fs)",
                points, worst, seconds_since(t1));
  report(2, path_ok && num_ok, buf);
}

// ---------------------------------------------------------------- block 3

void run_classical_predicate() {
  FieldSpec Q = FieldSpec::rationals();
  FieldElement eta(Q, Rat(-1));
  bool ok = true;
  int accepted = 0;
  for (Int n = 0; n <= 100; ++n) {
    SymMat T(Q, 1);
    T.set(0, 0, FieldElement(Q, Rat(n)));
    bool got = plus_support_witness(T, eta).has_value();
    bool want = (n % 4 == 0) || (n % 4 == 3);
    if (got != want) ok = false;
    if (got) ++accepted;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "support predicate on 0..100 matches the residues 0,3 mod 4 (%d accepted)",
                accepted);
  report(3, ok, buf);
}

// ---------------------------------------------------------------- block 4

// normalized entry height: a and d are measured in integral coordinates, b
// after clearing the inverse-different denominator, c after dividing out the
// 4 * different factor; each coordinate must be an integer of magnitude <= 2
bool coords_within(const FieldElement& x, Int bound) {
  if (!x.is_integral()) return false;
  return x.a >= Rat(-bound) && x.a <= Rat(bound) && x.b >= Rat(-bound) && x.b <= Rat(bound);
}

bool entry_height_le2(const GroupMat& g) {
  const FieldSpec& F = g.a.F;
  FieldElement dg = FieldElement::different_gen(F);
  for (Int i = 0; i < g.a.rows; ++i)
    for (Int j = 0; j < g.a.cols; ++j) {
      if (!coords_within(g.a.at(i, j), 2)) return false;
      if (!coords_within(g.d.at(i, j), 2)) return false;
      if (!coords_within(g.b.at(i, j) * dg, 2)) return false;
      if (!coords_within((g.c.at(i, j) / dg).scaled(rat_of(1, 4)), 2)) return false;
    }
  return true;
}

void run_theta_transform() {
  auto t0 = std::chrono::steady_clock::now();
  FieldSpec F5 = FieldSpec::real_quadratic(5);
  FieldElement dg = FieldElement::different_gen(F5);
  FieldElement om = FieldElement::omega(F5);
  FieldElement one(F5, Rat(1));

  auto upper = [&](const FieldElement& b) {
    GroupMat g = group_identity(F5, 1);
    g.b.at(0, 0) = b;
    return g;
  };
  auto lower = [&](const FieldElement& c) {
    GroupMat g = group_identity(F5, 1);
    g.c.at(0, 0) = c;
    return g;
  };
  auto torus = [&](const FieldElement& u) {
    GroupMat g = group_identity(F5, 1);
    g.a.at(0, 0) = u;
    g.d.at(0, 0) = one / u;
    return g;
  };

  std::vector<GroupMat> pool;
  for (const FieldElement& t : {one, -one, om, -om}) pool.push_back(upper(t / dg));
  pool.push_back(upper(one));
  pool.push_back(upper(-one));
  for (const FieldElement& t : {one, -one, om}) pool.push_back(lower(dg.scaled(Rat(4)) * t));
  pool.push_back(torus(om));
  pool.push_back(torus(one / om));
  pool.push_back(torus(-one));

  Rng rng(4040);
  std::vector<GroupMat> picked;
  std::set<std::string> seen;
  int attempts = 0;
  while (picked.size() < 10 && attempts < 5000) {
    ++attempts;
    GroupMat g = group_identity(F5, 1);
    int len = 1 + int(rng.below(4));
    for (int j = 0; j < len; ++j) g = group_mul(g, pool[rng.below(pool.size())]);
    if (!entry_height_le2(g)) continue;
    std::string key = g.a.str() + "|" + g.b.str() + "|" + g.c.str() + "|" + g.d.str();
    if (!seen.insert(key).second) continue;
    picked.push_back(g);
  }

  bool ok = picked.size() == 10;
  int nontrivial_c = 0;
  double worst = 0.0;
  EvalPoint pt = scalar_point(F5, 1, Rat(0), Rat(2));
  for (const GroupMat& g : picked) {
    check_gamma0_4(g);
    if (!g.c.at(0, 0).is_zero()) ++nontrivial_c;
    double r = theta_transform_residual(g, pt, 1e-12);
    worst = std::max(worst, r);
    if (r > 1e-6) ok = false;
  }
  double el = seconds_since(t0);
  if (el >= 120.0) ok = false;
  char buf[192];
  std::snprintf(buf, sizeof buf,
                "quartic cocycle residual <= 1e-6 for %zu seeded elements, %d with c != 0 "
                "(worst %.1e, %.1fs)",
                picked.size(), nontrivial_c, worst, el);
  report(4, ok, buf);
}

// ---------------------------------------------------------------- block 5

void run_local_engine() {
  LocalFieldSpec K = LocalFieldSpec::q2();
  bool unitary_ok = true;
  int mats = 0;
  for (Int m = 1; m <= 2; ++m)
    for (Int i = 0; i <= K.e; ++i)
      for (const GeneratorWord& w : gamma_generator_words(K, m, i)) {
        if (!cyc_mat_unitary(level_matrix(K, m, w, i))) unitary_ok = false;
        ++mats;
      }

  // eigenvalue of the upper unipotent on every level vector, parameters over
  // the full residue transversal that the phase can distinguish
  bool eigen_ok = true;
  int eigen_checks = 0;
  LocalElement dinv = LocalElement::different_gen(K).inv();
  for (Int m = 1; m <= 2; ++m)
    for (Int i = 0; i <= K.e; ++i) {
      LocalElement sc = LocalElement::uniformizer_pow(K, 2 * i) * dinv;
      std::vector<LocalElement> reps = residue_transversal(K, 2 * (K.e - i));
      std::vector<LocalMatData> params;
      if (m == 1) {
        for (const LocalElement& u : reps) params.push_back(sym1(u));
      } else {
        for (const LocalElement& u : reps)
          for (const LocalElement& v : reps)
            for (const LocalElement& t : reps) {
              LocalMatData B = {{u, t}, {t, v}};
              params.push_back(B);
            }
      }
      for (const LocalVec& lam : level_indices(K, m, i)) {
        SchwartzVec emb = embed_level(K, m, i, lam, 0);
        for (const LocalMatData& B : params) {
          LocalMatData Bp = B;
          for (auto& row : Bp)
            for (auto& x : row) x = x * sc;
          SchwartzVec got = apply_token(emb, Token::usharp(Bp));
          CycScalar ev = psi_local(quad_form(B, lam) * sc.scaled(rat_of(1, 4)));
          if (!sv_equal(got, emb.scaled(ev))) eigen_ok = false;
          ++eigen_checks;
        }
      }
    }

  // brute-force character sum against the closed form of the transform
  bool fourier_ok = true;
  int fourier_checks = 0;
  Rat half = rat_of(1, 2);
  for (Int m = 1; m <= 2; ++m)
    for (Int i = 0; i <= K.e; ++i)
      for (const LocalVec& lam : level_indices(K, m, i)) {
        SchwartzVec got = fourier_apply(embed_level(K, m, i, lam, 0));
        SchwartzVec expect(Window(K, m, K.e));
        CycScalar amp = CycScalar::q_pow_half(K.q, m * (2 * i - K.c_psi));
        for (const LocalVec& y : window_basis(expect.win)) {
          bool in = true;
          for (const LocalElement& yj : y)
            if (yj.val_or_inf() < i - K.c_psi) in = false;
          if (!in) continue;
          LocalElement ph = LocalElement::zero(K);
          for (size_t j = 0; j < y.size(); ++j) ph = ph + y[j] * lam[j].scaled(half);
          expect.add_delta(y, amp * psi_local(ph));
        }
        if (!sv_equal(got, expect)) fourier_ok = false;
        ++fourier_checks;
      }

  char buf[192];
  std::snprintf(buf, sizeof buf,
                "%d generator matrices unitary, %d eigenvalue identities, %d transform "
                "closed forms, all exact",
                mats, eigen_checks, fourier_checks);
  report(5, unitary_ok && eigen_ok && fourier_ok, buf);
}

// ---------------------------------------------------------------- block 6

void run_gauss_factorization() {
  LocalFieldSpec K = LocalFieldSpec::q2();
  LocalElement dgen = LocalElement::different_gen(K);
  bool ok = true;
  int checks = 0;
  Rng rng(77);
  for (Int m = 1; m <= 2; ++m)
    for (Int i = 0; i <= K.e; ++i)
      for (int rep = 0; rep < 20; ++rep) {
        LocalMatData S;
        if (m == 1) {
          S = sym1(LocalElement::from_rat(K, Rat(rng.range(-8, 8))));
        } else {
          LocalElement a = LocalElement::from_rat(K, Rat(rng.range(-8, 8)));
          LocalElement b = LocalElement::from_rat(K, Rat(rng.range(-8, 8)));
          LocalElement t = LocalElement::from_rat(K, Rat(rng.range(-8, 8)));
          S = {{a, t}, {t, b}};
        }
        CycScalar xi = uflat_gauss_defect(K, m, S, i);
        if (!(cyc_pow(xi, 8) == CycScalar::one())) ok = false;
        RepMatrix G = uflat_gauss_matrix(K, m, S, i);
        LocalMatData Sd = S;
        for (auto& row : Sd)
          for (auto& x : row) x = x * dgen;
        RepMatrix M = level_matrix(K, m, {Token::uflat(Sd)}, i);
        for (size_t r = 0; r < M.size(); ++r)
          for (size_t c = 0; c < M[r].size(); ++c)
            if (!(M[r][c] == xi * G[r][c])) ok = false;
        ++checks;
      }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "lower-unipotent matrix equals xi * gauss matrix with xi^8 = 1 on %d seeded "
                "parameters",
                checks);
  report(6, ok, buf);
}

// ---------------------------------------------------------------- block 7

std::vector<Token> level4_pool(const LocalFieldSpec& K) {
  LocalElement dgen = LocalElement::different_gen(K);
  std::vector<Token> pool = {
      Token::usharp(sym1(dgen.inv())),
      Token::usharp(sym1(dgen.inv().scaled(Rat(3)))),
      Token::uflat(sym1(dgen.scaled(Rat(4)))),
      Token::uflat(sym1(dgen.scaled(Rat(-4)))),
      Token::ma(sym1(LocalElement::from_rat(K, Rat(3)))),
      Token::ma(sym1(LocalElement::from_rat(K, Rat(-1)))),
  };
  if (K.quadratic()) {
    pool.push_back(Token::usharp(sym1(dgen.inv() * LocalElement::theta(K))));
    pool.push_back(Token::uflat(sym1(dgen.scaled(Rat(4)) * LocalElement::theta(K))));
    pool.push_back(
        Token::ma(sym1(LocalElement::one(K) + LocalElement::theta(K).scaled(Rat(2)))));
  }
  return pool;
}

std::vector<Token> deep_pool(const LocalFieldSpec& K) {
  LocalElement dgen = LocalElement::different_gen(K);
  LocalElement b0 = dgen.inv().scaled(Rat(4));
  std::vector<Token> pool = {
      Token::usharp(sym1(b0)),
      Token::usharp(sym1(b0.scaled(Rat(3)))),
      Token::uflat(sym1(dgen)),
      Token::uflat(sym1(dgen.scaled(Rat(3)))),
      Token::ma(sym1(LocalElement::from_rat(K, Rat(3)))),
      Token::ma(sym1(LocalElement::from_rat(K, Rat(-1)))),
  };
  if (K.quadratic()) {
    pool.push_back(Token::usharp(sym1(b0 * LocalElement::theta(K))));
    pool.push_back(Token::uflat(sym1(dgen * LocalElement::theta(K))));
    pool.push_back(
        Token::ma(sym1(LocalElement::one(K) + LocalElement::theta(K).scaled(Rat(2)))));
  }
  return pool;
}

void run_characters() {
  std::vector<LocalFieldSpec> fields = {LocalFieldSpec::q2(),
                                        LocalFieldSpec::unramified_quadratic(),
                                        LocalFieldSpec::ramified_sqrt2()};
  bool ok = true;
  int mult_checks = 0, rel_checks = 0;
  for (const LocalFieldSpec& K : fields) {
    std::vector<Token> pool = level4_pool(K);
    Rng rng(6100 + uint64_t(K.e) + uint64_t(K.q));
    for (int rep = 0; rep < 50; ++rep) {
      GeneratorWord w1, w2;
      for (int j = 1 + int(rng.below(3)); j > 0; --j) w1.push_back(pool[rng.below(pool.size())]);
      for (int j = 1 + int(rng.below(3)); j > 0; --j) w2.push_back(pool[rng.below(pool.size())]);
      GeneratorWord w12 = w1;
      w12.insert(w12.end(), w2.begin(), w2.end());
      CycScalar e1 = epsilon_char(K, 1, w1, false);
      CycScalar e2 = epsilon_char(K, 1, w2, false);
      if (!(epsilon_char(K, 1, w12, false) == e1 * e2)) ok = false;
      if (!e1.is_unit_modulus() || !e2.is_unit_modulus()) ok = false;
      ++mult_checks;
    }
    std::vector<Token> dp = deep_pool(K);
    Rng rng2(6700 + uint64_t(K.e) + uint64_t(K.q));
    for (int rep = 0; rep < 50; ++rep) {
      GeneratorWord w;
      for (int j = 1 + int(rng2.below(4)); j > 0; --j) w.push_back(dp[rng2.below(dp.size())]);
      if (!check_char_relation(K, 1, w)) ok = false;
      ++rel_checks;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "character multiplicative and unit-modulus on %d word pairs, level relation "
                "on %d words",
                mult_checks, rel_checks);
  report(7, ok, buf);
}

// ---------------------------------------------------------------- block 8

void run_commutant() {
  LocalFieldSpec K = LocalFieldSpec::q2();
  bool ok = true;
  std::string dims;
  for (Int m = 1; m <= 2; ++m)
    for (Int i = 0; i <= K.e; ++i) {
      std::vector<RepMatrix> gens;
      for (const GeneratorWord& w : gamma_generator_words(K, m, i))
        gens.push_back(level_matrix(K, m, w, i));
      Int d = commutant_dim(gens);
      if (d != 1) ok = false;
      if (!dims.empty()) dims += ",";
      dims += std::to_string(d);
    }
  report(8, ok, "commutant dimension " + dims + " for the four (m, level) images");
}

// ---------------------------------------------------------------- block 9

void run_idempotent() {
  LocalFieldSpec K = LocalFieldSpec::q2();
  bool ok = true;
  std::string note;

  std::vector<RepMatrix> gens;
  for (const GeneratorWord& w : gamma_generator_words(K, 1, 0))
    gens.push_back(level_matrix(K, 1, w, 0));
  std::vector<RepMatrix> G;
  try {
    G = group_closure(gens, 100000);
  } catch (const CheckError&) {
    report(9, false, "closure did not terminate under cap 1e5");
    return;
  }

  Int qme = 2;
  std::vector<CycScalar> f = idempotent_vector(G, qme);
  std::vector<CycScalar> ff = hecke_convolve(G, f, f);
  for (size_t i = 0; i < f.size(); ++i)
    if (!(ff[i] == f[i])) ok = false;

  // conjugated coefficient against the direct inner-product formula
  for (const LocalFieldSpec& F : {LocalFieldSpec::q2(), LocalFieldSpec::unramified_quadratic(),
                                  LocalFieldSpec::ramified_sqrt2()}) {
    LocalElement d4 = LocalElement::different_gen(F).scaled(Rat(4));
    std::vector<GeneratorWord> words = {
        {},
        {Token::uflat(sym1(d4))},
        {Token::ma(sym1(LocalElement::from_rat(F, Rat(3))))},
        {Token::usharp(sym1(d4.inv()))},
        {Token::usharp(sym1(d4.inv())), Token::uflat(sym1(d4)),
         Token::ma(sym1(LocalElement::from_rat(F, Rat(-1))))},
    };
    SchwartzVec phi = embed_level(F, 1, 0, {LocalElement::zero(F)}, 0);
    Rat scale = Rat(1);
    for (Int t = 0; t < F.e; ++t) scale *= Rat(F.q);
    for (const GeneratorWord& w : words)
      if (!(Ek_value(F, 1, w) == sv_inner(phi, apply_word(phi, w)).scaled(scale))) ok = false;
  }

  // the two-variable closure is larger; run it under an extended cap with a
  // wall-clock budget, or honor an explicit opt-out
  const char* cap_env = std::getenv("KP_CLOSURE_CAP_M2");
  long cap2 = cap_env ? std::atol(cap_env) : 200000;
  if (cap2 <= 0) {
    note = "m=2 closure skipped: disabled via KP_CLOSURE_CAP_M2";
  } else {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<RepMatrix> gens2;
    for (const GeneratorWord& w : gamma_generator_words(K, 2, 0))
      gens2.push_back(level_matrix(K, 2, w, 0));
    size_t order2 = 0;
    try {
      order2 = group_closure(gens2, cap2).size();
    } catch (const CheckError& e) {
      ok = false;
      note = std::string("m=2 closure failed: ") + e.code;
    }
    double el = seconds_since(t0);
    if (order2 > 0) {
      char nb[96];
      std::snprintf(nb, sizeof nb, "m=2 closure order %zu in %.1fs", order2, el);
      note = nb;
      if (el >= 300.0) ok = false;
    }
  }

  char buf[224];
  std::snprintf(buf, sizeof buf,
                "closure order %zu under cap 1e5, idempotent convolution exact, conjugated "
                "coefficient consistent; %s",
                G.size(), note.c_str());
  report(9, ok, buf);
}

// ---------------------------------------------------------------- block 10

void run_key_identity() {
  bool ok = true;
  int checks = 0;

  // one-variable: the identity only sees S mod 4, so {0,1,2,3} is a full
  // transversal; two variables additionally see the off-diagonal mod 2
  LocalFieldSpec K = LocalFieldSpec::q2();
  for (Int s = 0; s < 4; ++s) {
    if (!key_lemma_verify(K, 1, 0, sym1(LocalElement::from_rat(K, Rat(s))))) ok = false;
    ++checks;
  }
  for (Int s11 = 0; s11 < 4; ++s11)
    for (Int s22 = 0; s22 < 4; ++s22)
      for (Int s12 = 0; s12 < 2; ++s12) {
        LocalElement a = LocalElement::from_rat(K, Rat(s11));
        LocalElement b = LocalElement::from_rat(K, Rat(s22));
        LocalElement t = LocalElement::from_rat(K, Rat(s12));
        LocalMatData S = {{a, t}, {t, b}};
        if (!key_lemma_verify(K, 2, 0, S)) ok = false;
        ++checks;
      }

  LocalFieldSpec R = LocalFieldSpec::ramified_sqrt2();
  Rng rng(83);
  for (Int i = 0; i <= 1; ++i)
    for (int rep = 0; rep < 10; ++rep) {
      LocalElement S(R, Rat(rng.range(-4, 4)), Rat(rng.range(-4, 4)));
      if (!key_lemma_verify(R, 1, i, sym1(S))) ok = false;
      ++checks;
    }

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "level-lowering coefficient identity exact on %d parameters "
                "(full transversals and seeded ramified cases)",
                checks);
  report(10, ok, buf);
}

// ---------------------------------------------------------------- block 11

void run_index_laws() {
  bool ok = true;
  int checks = 0;
  std::vector<LocalFieldSpec> fields = {LocalFieldSpec::q2(),
                                        LocalFieldSpec::unramified_quadratic(),
                                        LocalFieldSpec::ramified_sqrt2()};
  for (const LocalFieldSpec& K : fields) {
    std::vector<LocalElement> units;
    for (Int u : {1, 3, 5, 7}) units.push_back(LocalElement::from_rat(K, Rat(u)));
    if (K.quadratic()) {
      LocalElement th = LocalElement::theta(K);
      if (K.e == 2) {
        // ramified: theta is the uniformizer, so shift units by it instead
        for (Int u : {1, 3}) {
          units.push_back(LocalElement::one(K).scaled(Rat(u)) + th);
          units.push_back(LocalElement::one(K).scaled(Rat(u)) + th.scaled(Rat(2)));
        }
      } else {
        units.push_back(th);
        units.push_back(th.scaled(Rat(3)));
        units.push_back(LocalElement::one(K) + th);
        units.push_back(LocalElement::one(K) + th.scaled(Rat(2)));
      }
    }
    LocalElement pi = LocalElement::uniformizer_pow(K, 1);
    std::vector<LocalElement> sample = units;
    for (const LocalElement& u : units) sample.push_back(pi * u);

    std::vector<LocalElement> squares = {LocalElement::from_rat(K, Rat(1)),
                                         LocalElement::from_rat(K, Rat(3)), pi};
    if (K.quadratic() && K.e == 0) squares.push_back(LocalElement::theta(K));

    for (const LocalElement& a : sample) {
      CycScalar w = weil_index(a);
      if (!(cyc_pow(w, 8) == CycScalar::one())) ok = false;
      if (!(weil_index(-a) == w.conj())) ok = false;
      for (const LocalElement& b : squares)
        if (!(weil_index(a * b * b) == w)) ok = false;
      ++checks;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "index is an eighth root, square-class invariant, conjugated by negation "
                "on %d stabilized samples",
                checks);
  report(11, ok, buf);
}

}  // namespace

int main() {
  run_round_trip_blocks();
  run_classical_predicate();
  run_theta_transform();
  run_local_engine();
  run_gauss_factorization();
  run_characters();
  run_commutant();
  run_idempotent();
  run_key_identity();
  run_index_laws();
  if (g_failures) std::printf("%d criteria failed\n", g_failures);
  return g_failures ? 1 : 0;
}
