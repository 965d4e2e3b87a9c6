#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>
#include <set>
#include <string>

#include "kp/schwartz.hpp"

using namespace kp;

namespace {

std::vector<LocalFieldSpec> base_fields() {
  return {LocalFieldSpec::q2(), LocalFieldSpec::unramified_quadratic(),
          LocalFieldSpec::ramified_sqrt2()};
}

LocalMatData sym1(const LocalElement& x) { return {{x}}; }

LocalElement quad(const LocalMatData& B, const LocalVec& v) {
  LocalElement s = LocalElement::zero(v[0].K);
  for (size_t j = 0; j < v.size(); ++j)
    for (size_t k = 0; k < v.size(); ++k) s = s + v[j] * B[j][k] * v[k];
  return s;
}

std::string thrown_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const CheckError& e) {
    return e.code;
  } catch (const std::domain_error&) {
    return "domain";
  }
  return "";
}

bool is_unitary(const std::vector<std::vector<CycScalar>>& M) {
  size_t n = M.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      CycScalar s = CycScalar::zero();
      for (size_t k = 0; k < n; ++k) s = s + M[k][i].conj() * M[k][j];
      if (!(s == (i == j ? CycScalar::one() : CycScalar::zero()))) return false;
    }
  return true;
}

bool is_scalar_matrix(const std::vector<std::vector<CycScalar>>& M, CycScalar* out) {
  for (size_t i = 0; i < M.size(); ++i)
    for (size_t j = 0; j < M.size(); ++j) {
      if (i != j && !M[i][j].is_zero()) return false;
      if (i != j) continue;
      if (!(M[i][j] == M[0][0])) return false;
    }
  *out = M[0][0];
  return true;
}

SchwartzVec phi0_emb(const LocalFieldSpec& K, Int m) {
  LocalVec lambda(size_t(m), LocalElement::zero(K));
  return embed_level(K, m, 0, lambda, 0);
}

SchwartzVec random_vec(const Window& w, std::mt19937& rng, Int terms) {
  std::vector<LocalVec> basis = window_basis(w);
  std::uniform_int_distribution<size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> num(-3, 3), root(0, 7);
  SchwartzVec f(w);
  for (Int t = 0; t < terms; ++t) {
    Rat r = rat_of(num(rng), 2);  // halves exercise non-integral scalars
    if (r == 0) r = 1;
    f.add_delta(basis[pick(rng)], CycScalar::root_of_unity(root(rng), 8).scaled(r));
  }
  return f;
}

}  // namespace

TEST_CASE("window basis enumerates each coset once") {
  for (const LocalFieldSpec& K : base_fields()) {
    for (Int m = 1; m <= 2; ++m)
      for (Int b = 0; b <= (m == 1 ? 1 : 0); ++b) {
        Window w(K, m, b);
        CHECK(w.a == b + K.e + K.c_psi);
        std::vector<LocalVec> basis = window_basis(w);
        Int expect = 1;
        for (Int j = 0; j < m * (w.a + w.b); ++j) expect *= K.q;
        CHECK(Int(basis.size()) == expect);
        CHECK(w.dim() == expect);
        std::set<LocalVec, LocalVecLess> seen;
        for (const LocalVec& x : basis) {
          CHECK(reduce_vec(x, b) == x);
          for (const LocalElement& c : x) CHECK(c.val_or_inf() >= -w.a);
          seen.insert(x);
        }
        CHECK(Int(seen.size()) == expect);
      }
  }
}

TEST_CASE("delta bookkeeping, embedding, compression") {
  LocalFieldSpec K = LocalFieldSpec::q2();
  Window w1(K, 1, 1);
  SchwartzVec f(w1);
  f.add_delta({LocalElement::from_rat(K, rat_of(1, 2))}, CycScalar::one());
  // 5/2 = 1/2 + 2 lands in the same coset mod p^1
  f.add_delta({LocalElement::from_rat(K, rat_of(5, 2))}, CycScalar::one());
  CHECK(f.coef.size() == 1);
  CHECK(f.coef.begin()->second == CycScalar::from_rat(Rat(2)));
  f.add_delta({LocalElement::from_rat(K, rat_of(1, 2))}, CycScalar::from_rat(Rat(-2)));
  CHECK(f.is_zero());

  for (const LocalFieldSpec& F : base_fields()) {
    std::mt19937 rng(7);
    Window w(F, 1, 0);
    SchwartzVec g = random_vec(w, rng, 4);
    SchwartzVec emb = g.embedded(w.b + 2);
    CHECK(emb.win.b == w.b + 2);
    CHECK(sv_equal(emb, g));
    SchwartzVec back = emb.compressed();
    CHECK(back.win.b == g.compressed().win.b);
    CHECK(sv_equal(back, g));
    // inner products do not depend on the resolution
    SchwartzVec h = random_vec(w, rng, 4);
    CHECK(sv_inner(emb, h) == sv_inner(g, h));
    CHECK(sv_inner(g, h.embedded(w.b + 1)) == sv_inner(g, h));
    CycScalar c = CycScalar::root_of_unity(1, 8).scaled(rat_of(3, 2));
    CHECK(sv_inner(g.scaled(c), h) == c * sv_inner(g, h));
    CHECK(sv_inner(g, h.scaled(c)) == sv_inner(g, h) * c.conj());
    CHECK(sv_inner(sv_add(g, h), h) == sv_inner(g, h) + sv_inner(h, h));
  }

  // delta mass: self-pairing of a unit delta is q^{-mb}
  Window w2(K, 1, 2);
  SchwartzVec d = SchwartzVec::delta(w2, {LocalElement::zero(K)});
  CHECK(sv_inner(d, d) == CycScalar::from_rat(rat_of(1, 4)));
}

TEST_CASE("level vectors embed and project") {
  for (const LocalFieldSpec& K : base_fields()) {
    for (Int i = 0; i <= K.e; ++i) {
      std::vector<LocalVec> idx = level_indices(K, 1, i);
      CHECK(Int(idx.size()) == level_dim(K, 1, i));
      std::vector<SchwartzVec> embs;
      for (const LocalVec& lam : idx) embs.push_back(embed_level(K, 1, i, lam, 0));
      for (size_t j = 0; j < idx.size(); ++j) {
        std::vector<CycScalar> coords = project_level(embs[j], i);
        for (size_t k = 0; k < coords.size(); ++k)
          CHECK(coords[k] == (k == j ? CycScalar::one() : CycScalar::zero()));
        // the same function at a finer resolution projects identically
        std::vector<CycScalar> coords2 = project_level(embs[j].embedded(2), i);
        for (size_t k = 0; k < coords2.size(); ++k) CHECK(coords2[k] == coords[k]);
      }
      // a random combination comes back with its coefficients
      SchwartzVec comb(Window(K, 1, 0));
      std::vector<CycScalar> want;
      for (size_t j = 0; j < idx.size(); ++j) {
        CycScalar c = CycScalar::root_of_unity(Int(j) % 8, 8).scaled(Rat(Int(j) + 1));
        want.push_back(c);
        comb = sv_add(comb, embs[j].scaled(c));
      }
      std::vector<CycScalar> got = project_level(comb, i);
      for (size_t j = 0; j < idx.size(); ++j) CHECK(got[j] == want[j]);
    }
    // a bare delta is not invariant at the top level
    SchwartzVec d = SchwartzVec::delta(Window(K, 1, 0),
                                       {LocalElement::from_rat(K, rat_of(1, 2))});
    CHECK(thrown_code([&] { project_level(d, K.e); }) == "InvarianceViolation");
  }
  // two coordinates
  LocalFieldSpec K = LocalFieldSpec::q2();
  std::vector<LocalVec> idx = level_indices(K, 2, 0);
  CHECK(Int(idx.size()) == 4);
  for (size_t j = 0; j < idx.size(); ++j) {
    std::vector<CycScalar> coords = project_level(embed_level(K, 2, 0, idx[j], 0), 0);
    for (size_t k = 0; k < coords.size(); ++k)
      CHECK(coords[k] == (k == j ? CycScalar::one() : CycScalar::zero()));
  }
}

TEST_CASE("fourier transform of level vectors in closed form") {
  auto check_field = [](const LocalFieldSpec& K, Int m) {
    Int c = K.c_psi;
    Rat half = rat_of(1, 2);
    for (Int i = 0; i <= K.e; ++i) {
      for (const LocalVec& lam : level_indices(K, m, i)) {
        SchwartzVec g = fourier_apply(embed_level(K, m, i, lam, 0));
        // expected: q^{m(2i-c)/2} psi(t x lam / 2) on (p^{i-c})^m
        SchwartzVec expect(Window(K, m, K.e));
        CycScalar amp = CycScalar::q_pow_half(K.q, m * (2 * i - c));
        for (const LocalVec& y : window_basis(expect.win)) {
          bool in = true;
          for (const LocalElement& yj : y)
            if (yj.val_or_inf() < i - c) in = false;
          if (!in) continue;
          LocalElement ph = LocalElement::zero(K);
          for (size_t j = 0; j < y.size(); ++j) ph = ph + y[j] * lam[j].scaled(half);
          expect.add_delta(y, amp * psi_local(ph));
        }
        CHECK(sv_equal(g, expect));
      }
    }
  };
  for (const LocalFieldSpec& K : base_fields()) check_field(K, 1);
  check_field(LocalFieldSpec::q2(), 2);
  check_field(LocalFieldSpec::q2(1), 1);
  check_field(LocalFieldSpec::ramified_sqrt2(1), 1);
}

TEST_CASE("fourier inversion and plancherel") {
  std::mt19937 rng(11);
  for (const LocalFieldSpec& K : base_fields()) {
    for (Int b = 0; b <= 1; ++b) {
      SchwartzVec f = random_vec(Window(K, 1, b), rng, 5);
      SchwartzVec g = random_vec(Window(K, 1, b), rng, 5);
      SchwartzVec ff = fourier_apply(fourier_apply(f));
      SchwartzVec flip(f.win);
      for (const auto& kv : f.coef) flip.add_delta({-kv.first[0]}, kv.second);
      CHECK(sv_equal(ff, flip));
      CHECK(sv_inner(fourier_apply(f), fourier_apply(g)) == sv_inner(f, g));
    }
  }
}

TEST_CASE("gauss token against the fourier formula") {
  // the w operator is conj(alpha(1))^m q^{-me/2} Phi-hat(-2x)
  std::mt19937 rng(23);
  for (const LocalFieldSpec& K : base_fields()) {
    for (Int b = 0; b <= 1; ++b) {
      SchwartzVec f = random_vec(Window(K, 1, b), rng, 5);
      SchwartzVec ff = fourier_apply(f);
      CycScalar C =
          weil_index(LocalElement::one(K)).conj() * CycScalar::q_pow_half(K.q, -K.e);
      SchwartzVec expect(f.win);
      for (const LocalVec& x : window_basis(f.win)) {
        LocalVec key = reduce_vec({x[0].scaled(Rat(-2))}, ff.win.b);
        auto it = ff.coef.find(key);
        if (it != ff.coef.end()) expect.add_delta(x, C * it->second);
      }
      CHECK(sv_equal(apply_token(f, Token::w(K)), expect));
    }
  }
}

TEST_CASE("gauss token matrix on the smallest window") {
  for (int s : {-1, 1}) {
    LocalFieldSpec K = LocalFieldSpec::q2(s);
    Window w(K, 1, 0);
    auto M = op_matrix(w, {Token::w(K)});
    CycScalar C = weil_index(LocalElement::one(K)).conj() * CycScalar::q_pow_half(2, -1);
    CHECK(M[0][0] == C);
    CHECK(M[0][1] == C);
    CHECK(M[1][0] == C);
    CHECK(M[1][1] == -C);
  }
  for (const LocalFieldSpec& K : base_fields()) {
    Window w(K, 1, 0);
    CHECK(is_unitary(op_matrix(w, {Token::w(K)})));
    // fourth power of the gauss token is a unit scalar
    GeneratorWord w4(4, Token::w(K));
    CycScalar s = CycScalar::zero();
    CHECK(is_scalar_matrix(op_matrix(w, w4), &s));
    CHECK(s.is_unit_modulus());
    // so is w m(-1) w, whose underlying matrix is the identity
    LocalMatData negI = lmat_neg(lmat_id(K, 1));
    CycScalar s2 = CycScalar::zero();
    CHECK(is_scalar_matrix(op_matrix(w, {Token::w(K), Token::ma(negI), Token::w(K)}), &s2));
    CHECK(s2.is_unit_modulus());
  }
}

TEST_CASE("uflat with zero parameter certifies the inverse pair") {
  std::mt19937 rng(31);
  for (const LocalFieldSpec& K : base_fields()) {
    SchwartzVec f = random_vec(Window(K, 1, 1), rng, 5);
    SchwartzVec g = apply_token(f, Token::uflat(sym1(LocalElement::zero(K))));
    CHECK(sv_equal(g, f));
  }
}

TEST_CASE("usharp multiplier and eigen diagonality") {
  for (int s : {-1, 1}) {
    LocalFieldSpec K = LocalFieldSpec::q2(s);
    auto M = op_matrix(Window(K, 1, 0), {Token::usharp(sym1(LocalElement::one(K)))});
    CHECK(M[0][0] == CycScalar::one());
    CHECK(M[0][1].is_zero());
    CHECK(M[1][0].is_zero());
    CHECK(M[1][1] == psi_local(LocalElement::from_rat(K, rat_of(1, 4))));
  }

  // u-sharp(delta^{-1} pi^{2i} B) scales Phi_lambda by psi(pi^{2i} lamBlam / 4delta)
  auto eigen_sweep = [](const LocalFieldSpec& K, Int m) {
    LocalElement dinv = LocalElement::different_gen(K).inv();
    for (Int i = 0; i <= K.e; ++i) {
      LocalElement sc = LocalElement::uniformizer_pow(K, 2 * i) * dinv;
      std::vector<LocalElement> entries = residue_transversal(K, 2 * (K.e - i));
      std::vector<LocalMatData> params;
      if (m == 1) {
        for (const LocalElement& u : entries) params.push_back(sym1(u));
      } else {
        for (const LocalElement& u : entries)
          for (const LocalElement& v : entries) {
            LocalMatData B = lmat_id(K, 2);
            B[0][0] = u;
            B[1][1] = v;
            B[0][1] = B[1][0] = entries[1 % entries.size()];
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
          CycScalar ev = psi_local(quad(B, lam) * sc.scaled(rat_of(1, 4)));
          CHECK(sv_equal(got, emb.scaled(ev)));
        }
      }
    }
  };
  for (const LocalFieldSpec& K : base_fields()) eigen_sweep(K, 1);
  eigen_sweep(LocalFieldSpec::q2(), 2);
  eigen_sweep(LocalFieldSpec::unramified_quadratic(1), 1);

  // non-integral parameter needs a finer window than the matrix was asked on
  LocalFieldSpec K = LocalFieldSpec::q2();
  Token half = Token::usharp(sym1(LocalElement::from_rat(K, rat_of(1, 2))));
  CHECK(thrown_code([&] { op_matrix(Window(K, 1, 0), {half}); }) == "WindowTooSmall");
  // growth is consistent: applying on a pre-refined copy gives the same function
  std::mt19937 rng(41);
  for (const LocalFieldSpec& F : base_fields()) {
    SchwartzVec f = random_vec(Window(F, 1, 0), rng, 4);
    Token t = Token::usharp(sym1(LocalElement::different_gen(F).inv()));
    CHECK(sv_equal(apply_token(f, t), apply_token(f.embedded(3), t)));
  }
}

TEST_CASE("diagonal torus token") {
  for (const LocalFieldSpec& K : base_fields()) {
    // unit parameter: permutation times the fixed unit scalar
    LocalElement u = K.quadratic() ? LocalElement::one(K) + LocalElement::theta(K).scaled(Rat(2))
                                   : LocalElement::from_rat(K, Rat(3));
    REQUIRE(u.is_unit());
    Window w(K, 1, 0);
    std::vector<LocalVec> basis = window_basis(w);
    auto M = op_matrix(w, {Token::ma(sym1(u))});
    CycScalar s0 = weil_index(LocalElement::one(K)) * weil_index(u).conj();
    LocalElement ui = u.inv();
    for (size_t j = 0; j < basis.size(); ++j) {
      LocalVec target = reduce_vec({ui * basis[j][0]}, w.b);
      for (size_t i = 0; i < basis.size(); ++i)
        CHECK(M[i][j] == (basis[i] == target ? s0 : CycScalar::zero()));
    }
    CHECK(is_unitary(M));
  }

  // doubling: Phi_0 goes to a narrowed indicator with |2|^{1/2} amplitude
  {
    LocalFieldSpec K = LocalFieldSpec::q2();
    SchwartzVec g = apply_token(phi0_emb(K, 1), Token::ma(sym1(LocalElement::from_rat(K, Rat(2)))));
    CHECK(g.win.b == 0);
    CycScalar amp = weil_index(LocalElement::one(K)) *
                    weil_index(LocalElement::from_rat(K, Rat(2))).conj() *
                    CycScalar::q_pow_half(2, -1);
    CHECK(g.coef.size() == 2);  // indicator of p^{-1}, the whole b=0 window
    for (const auto& kv : g.coef) CHECK(kv.second == amp);
  }

  // ma(2) then ma(1/2) is exactly the identity operator
  std::mt19937 rng(43);
  for (const LocalFieldSpec& K : base_fields()) {
    SchwartzVec f = random_vec(Window(K, 1, 0), rng, 4);
    GeneratorWord word{Token::ma(sym1(LocalElement::from_rat(K, Rat(2)))),
                       Token::ma(sym1(LocalElement::from_rat(K, rat_of(1, 2))))};
    CHECK(sv_equal(apply_word(f, word), f));
  }

  // swap on two coordinates
  {
    LocalFieldSpec K = LocalFieldSpec::q2();
    LocalMatData swap = {{LocalElement::zero(K), LocalElement::one(K)},
                         {LocalElement::one(K), LocalElement::zero(K)}};
    Window w(K, 2, 0);
    std::vector<LocalVec> basis = window_basis(w);
    auto M = op_matrix(w, {Token::ma(swap)});
    CycScalar s0 = weil_index(LocalElement::one(K)) *
                   weil_index(LocalElement::from_rat(K, Rat(-1))).conj();
    for (size_t j = 0; j < basis.size(); ++j) {
      LocalVec target = {basis[j][1], basis[j][0]};
      for (size_t i = 0; i < basis.size(); ++i)
        CHECK(M[i][j] == (basis[i] == target ? s0 : CycScalar::zero()));
    }
  }

  // parameters that are not unit multiples of uniformizer powers are rejected
  {
    LocalFieldSpec K = LocalFieldSpec::q2();
    LocalMatData bad = lmat_id(K, 2);
    bad[1][1] = LocalElement::from_rat(K, Rat(2));
    SchwartzVec f = SchwartzVec::delta(Window(K, 2, 0), LocalVec(2, LocalElement::zero(K)));
    CHECK(thrown_code([&] { apply_token(f, Token::ma(bad)); }) == "domain");
    LocalMatData sing = lmat_id(K, 2);
    sing[1][1] = LocalElement::zero(K);
    CHECK(thrown_code([&] { apply_token(f, Token::ma(sing)); }) == "domain");
  }
}

TEST_CASE("uflat token matrices and unitarity") {
  std::mt19937 rng(47);
  for (const LocalFieldSpec& K : base_fields()) {
    // matrix-level conjugation identity
    LocalElement S0 = LocalElement::from_rat(K, Rat(3)) + (K.quadratic()
                          ? LocalElement::theta(K)
                          : LocalElement::zero(K));
    LocalMatData S = sym1(S0);
    LocalMatData lhs = word_matrix(K, 1, {Token::uflat(S)});
    LocalMatData wmat = token_matrix(K, 1, Token::w(K));
    LocalMatData rhs = lmat_mul(
        lmat_inv(wmat), lmat_mul(token_matrix(K, 1, Token::usharp(lmat_neg(S))), wmat));
    CHECK(lmat_eq(lhs, rhs));
    LocalMatData expect = lmat_id(K, 2);
    expect[1][0] = S0;
    CHECK(lmat_eq(lhs, expect));

    // the operator is unitary even when the window has to grow
    SchwartzVec f = random_vec(Window(K, 1, 0), rng, 4);
    SchwartzVec g = random_vec(Window(K, 1, 0), rng, 4);
    Token t = Token::uflat(sym1(LocalElement::one(K)));
    CHECK(sv_inner(apply_token(f, t), apply_token(g, t)) == sv_inner(f, g));
  }

  // window-stable parameter: full matrix is unitary
  {
    LocalFieldSpec K = LocalFieldSpec::q2();
    CHECK(is_unitary(op_matrix(Window(K, 1, 0), {Token::uflat(sym1(LocalElement::one(K)))})));
  }
  {
    LocalFieldSpec K = LocalFieldSpec::ramified_sqrt2();
    Token t = Token::uflat(sym1(LocalElement::different_gen(K)));
    CHECK(is_unitary(op_matrix(Window(K, 1, 0), {t})));
  }

  // q2 level-0 matrix equals the closed-form gauss matrix up to an 8th root
  for (int s : {-1, 1}) {
    LocalFieldSpec K = LocalFieldSpec::q2(s);
    auto M = op_matrix(Window(K, 1, 0), {Token::uflat(sym1(LocalElement::one(K)))});
    CycScalar i4 = CycScalar::zeta(4);
    CycScalar gp = (CycScalar::one() + i4).scaled(rat_of(1, 2));
    CycScalar gm = (CycScalar::one() - i4).scaled(rat_of(1, 2));
    if (s == -1) std::swap(gp, gm);
    // G = [[gp, gm], [gm, gp]] for s = +1
    CycScalar xi = M[0][0] * gp.inv();
    CHECK(xi.pow(8) == CycScalar::one());
    CHECK(M[0][1] == xi * gm);
    CHECK(M[1][0] == xi * gm);
    CHECK(M[1][1] == xi * gp);
  }
}

TEST_CASE("word order and underlying matrices") {
  std::mt19937 rng(53);
  for (const LocalFieldSpec& K : base_fields()) {
    Token t1 = Token::usharp(sym1(LocalElement::one(K)));
    Token t2 = Token::w(K);
    SchwartzVec f = random_vec(Window(K, 1, 0), rng, 4);
    CHECK(sv_equal(apply_word(f, {t1, t2}), apply_token(apply_token(f, t2), t1)));
    LocalMatData g = word_matrix(K, 1, {t1, t2});
    CHECK(lmat_eq(g, lmat_mul(token_matrix(K, 1, t1), token_matrix(K, 1, t2))));
    CHECK(is_symplectic(K, 1, g));
    for (const Token& t : {t1, t2, Token::ma(sym1(LocalElement::from_rat(K, Rat(3)))),
                           Token::uflat(sym1(LocalElement::different_gen(K))),
                           Token::wscaled(LocalElement::from_rat(K, Rat(2)))})
      CHECK(is_symplectic(K, 1, token_matrix(K, 1, t)));
  }
}

TEST_CASE("congruence membership") {
  for (const LocalFieldSpec& K : base_fields()) {
    LocalElement one = LocalElement::one(K), dgen = LocalElement::different_gen(K);
    LocalMatData id2 = lmat_id(K, 2);
    CHECK(in_gamma0(K, 1, id2, 1));
    CHECK(in_gamma0(K, 1, id2, 4));
    CHECK(in_conjugated_gamma(K, 1, id2));
    for (Int i = 0; i <= K.e; ++i) CHECK(in_gamma_level(K, 1, id2, i));

    LocalMatData usharp_d = word_matrix(K, 1, {Token::usharp(sym1(dgen.inv()))});
    CHECK(in_gamma0(K, 1, usharp_d, 1));
    CHECK(in_gamma_level(K, 1, usharp_d, 0));
    if (K.e > 0) CHECK(!in_gamma_level(K, 1, usharp_d, 1));

    LocalMatData uflat_d = word_matrix(K, 1, {Token::uflat(sym1(dgen))});
    CHECK(in_gamma0(K, 1, uflat_d, 1));
    CHECK(!in_gamma0(K, 1, uflat_d, 4));
    for (Int i = 0; i <= K.e; ++i) CHECK(in_gamma_level(K, 1, uflat_d, i));

    LocalMatData uflat_4d = word_matrix(K, 1, {Token::uflat(sym1(dgen.scaled(Rat(4))))});
    CHECK(in_gamma0(K, 1, uflat_4d, 4));
    CHECK(in_conjugated_gamma(K, 1, uflat_4d));

    LocalMatData wmat = token_matrix(K, 1, Token::w(K));
    CHECK(is_symplectic(K, 1, wmat));
    CHECK(in_gamma0(K, 1, wmat, 1) == (K.c_psi == 0));

    // conjugating level-1 elements by the scaled gauss matrix lands in the
    // support of the conjugated idempotent
    LocalMatData w2d = token_matrix(K, 1, Token::wscaled(dgen.scaled(Rat(2))));
    for (const LocalMatData& g : {usharp_d, uflat_d, wmat}) {
      if (!in_gamma0(K, 1, g, 1)) continue;
      LocalMatData h = lmat_mul(w2d, lmat_mul(g, lmat_inv(w2d)));
      CHECK(in_conjugated_gamma(K, 1, h));
    }
  }
}

TEST_CASE("scaled gauss token fixes the base vector up to a unit") {
  auto check = [](const LocalFieldSpec& K, Int m) {
    SchwartzVec phi = phi0_emb(K, m);
    LocalElement c = LocalElement::different_gen(K).scaled(Rat(2));
    SchwartzVec u = apply_token(phi, Token::wscaled(c));
    CycScalar r = sv_inner(u, phi) * sv_inner(phi, phi).inv();
    CHECK(r.is_unit_modulus());
    CHECK(sv_equal(u, phi.scaled(r)));
  };
  for (const LocalFieldSpec& K : base_fields()) check(K, 1);
  check(LocalFieldSpec::q2(), 2);
  check(LocalFieldSpec::q2(1), 1);
}

TEST_CASE("random stable words act unitarily") {
  std::mt19937 rng(59);
  for (const LocalFieldSpec& K : base_fields()) {
    std::vector<Token> pool = {
        Token::usharp(sym1(LocalElement::one(K))),
        Token::usharp(sym1(LocalElement::from_rat(K, Rat(3)))),
        Token::uflat(sym1(LocalElement::different_gen(K))),
        Token::ma(sym1(LocalElement::from_rat(K, Rat(-3)))),
        Token::w(K),
    };
    if (K.quadratic()) pool.push_back(Token::usharp(sym1(LocalElement::theta(K))));
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    Window w(K, 1, 0);
    for (int rep = 0; rep < 6; ++rep) {
      GeneratorWord word;
      for (int l = 0; l < 4; ++l) word.push_back(pool[pick(rng)]);
      CHECK(is_unitary(op_matrix(w, word)));
    }
    // words that force growth still preserve the pairing
    std::vector<Token> wide = pool;
    wide.push_back(Token::usharp(sym1(LocalElement::different_gen(K).inv())));
    wide.push_back(Token::ma(sym1(LocalElement::from_rat(K, Rat(2)))));
    std::uniform_int_distribution<size_t> pick2(0, wide.size() - 1);
    for (int rep = 0; rep < 4; ++rep) {
      GeneratorWord word;
      for (int l = 0; l < 3; ++l) word.push_back(wide[pick2(rng)]);
      SchwartzVec f = random_vec(w, rng, 3), g = random_vec(w, rng, 3);
      CHECK(sv_inner(apply_word(f, word), apply_word(g, word)) == sv_inner(f, g));
    }
  }
}
