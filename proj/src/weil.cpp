#include "kp/weil.hpp"

#include <algorithm>
#include <map>

#include "kp/util.hpp"

namespace kp {

namespace {

Int ipow(Int b, Int e) {
  Int r = 1;
  for (Int j = 0; j < e; ++j) r *= b;
  return r;
}

LocalElement vdot(const LocalVec& x, const LocalVec& y) {
  LocalElement s = LocalElement::zero(x.at(0).K);
  for (size_t j = 0; j < x.size(); ++j) s = s + x[j] * y[j];
  return s;
}

LocalElement vquad(const LocalMatData& S, const LocalVec& v) {
  LocalElement s = LocalElement::zero(v.at(0).K);
  for (size_t j = 0; j < v.size(); ++j)
    for (size_t k = 0; k < v.size(); ++k) s = s + v[j] * S[j][k] * v[k];
  return s;
}

std::vector<LocalVec> coord_grid(const std::vector<LocalElement>& one, Int m) {
  std::vector<LocalVec> out{LocalVec{}};
  for (Int j = 0; j < m; ++j) {
    std::vector<LocalVec> next;
    next.reserve(out.size() * one.size());
    for (const LocalVec& head : out)
      for (const LocalElement& x : one) {
        LocalVec v = head;
        v.push_back(x);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

LocalMatData scalar_mat(const LocalFieldSpec& K, Int m, const LocalElement& c) {
  LocalMatData M = lmat_id(K, m);
  for (Int j = 0; j < m; ++j) M[size_t(j)][size_t(j)] = c;
  return M;
}

SchwartzVec base_vector(const LocalFieldSpec& K, Int m, Int i) {
  return embed_level(K, m, i, LocalVec(size_t(m), LocalElement::zero(K)), 0);
}

// scalar r with g = r * phi; CheckError("NotEigenvector") otherwise
CycScalar eigen_ratio(const SchwartzVec& g, const SchwartzVec& phi) {
  CycScalar r = sv_inner(g, phi) * sv_inner(phi, phi).inv();
  if (!sv_equal(g, phi.scaled(r)))
    throw CheckError("NotEigenvector", "base vector is not an eigenvector of the word");
  return r;
}

}  // namespace

RepMatrix cyc_mat_id(Int d) {
  RepMatrix M(size_t(d), std::vector<CycScalar>(size_t(d), CycScalar::zero()));
  for (Int j = 0; j < d; ++j) M[size_t(j)][size_t(j)] = CycScalar::one();
  return M;
}

RepMatrix cyc_mat_mul(const RepMatrix& x, const RepMatrix& y) {
  size_t n = x.size(), p = y[0].size();
  LOGIC_CHECK(x[0].size() == y.size(), "matrix product shape");
  RepMatrix out(n, std::vector<CycScalar>(p, CycScalar::zero()));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < y.size(); ++k) {
      if (x[i][k].is_zero()) continue;
      for (size_t j = 0; j < p; ++j) out[i][j] = out[i][j] + x[i][k] * y[k][j];
    }
  return out;
}

RepMatrix cyc_mat_conj_transpose(const RepMatrix& x) {
  RepMatrix out(x[0].size(), std::vector<CycScalar>(x.size(), CycScalar::zero()));
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < x[0].size(); ++j) out[j][i] = x[i][j].conj();
  return out;
}

bool cyc_mat_eq(const RepMatrix& x, const RepMatrix& y) {
  if (x.size() != y.size()) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != y[i].size()) return false;
    for (size_t j = 0; j < x[i].size(); ++j)
      if (!(x[i][j] == y[i][j])) return false;
  }
  return true;
}

bool cyc_mat_unitary(const RepMatrix& x) {
  return cyc_mat_eq(cyc_mat_mul(cyc_mat_conj_transpose(x), x), cyc_mat_id(Int(x.size())));
}

std::string cyc_mat_key(const RepMatrix& x) {
  std::string out;
  for (const auto& row : x)
    for (const CycScalar& c : row) {
      out += c.key();
      out += ';';
    }
  return out;
}

RepMatrix level_matrix(const LocalFieldSpec& K, Int m, const GeneratorWord& word, Int i) {
  DOMAIN_CHECK(0 <= i && i <= K.e, "level out of range");
  if (!in_gamma_level(K, m, word_matrix(K, m, word), i))
    throw CheckError("NotInGroup", "word leaves the level-" + std::to_string(i) +
                                       " congruence group");
  std::vector<LocalVec> idx = level_indices(K, m, i);
  size_t d = idx.size();
  RepMatrix M(d, std::vector<CycScalar>(d, CycScalar::zero()));
  for (size_t col = 0; col < d; ++col) {
    SchwartzVec g = apply_word(embed_level(K, m, i, idx[col], 0), word);
    std::vector<CycScalar> coords = project_level(g, i);
    for (size_t row = 0; row < d; ++row) M[row][col] = coords[row];
  }
  return M;
}

RepMatrix uflat_gauss_matrix(const LocalFieldSpec& K, Int m, const LocalMatData& S, Int i) {
  DOMAIN_CHECK(0 <= i && i <= K.e, "level out of range");
  DOMAIN_CHECK(Int(S.size()) == m, "parameter size must match");
  for (const auto& row : S)
    for (const LocalElement& x : row) DOMAIN_CHECK(x.integral(), "parameter must be integral");
  LocalElement dinv = LocalElement::different_gen(K).inv();
  LocalElement lin = LocalElement::uniformizer_pow(K, i) * dinv;          // pi^i / delta
  LocalElement qsc = LocalElement::uniformizer_pow(K, 2 * i) * dinv;      // pi^{2i} / delta
  Rat half = rat_of(1, 2), quarter = rat_of(1, 4);
  std::vector<LocalVec> idx = level_indices(K, m, i);
  size_t d = idx.size();
  Rat amp = pow_rat(Rat(K.q), m * (i - K.e));
  RepMatrix M(d, std::vector<CycScalar>(d, CycScalar::zero()));
  for (size_t col = 0; col < d; ++col)
    for (size_t row = 0; row < d; ++row) {
      CycScalar acc = CycScalar::zero();
      for (const LocalVec& nu : idx) {
        LocalElement arg = vdot(nu, idx[col]).scaled(half) * lin -
                           vquad(S, nu).scaled(quarter) * qsc -
                           vdot(nu, idx[row]).scaled(half) * lin;
        acc = acc + psi_local(arg);
      }
      M[row][col] = acc.scaled(amp);
    }
  return M;
}

CycScalar uflat_gauss_defect(const LocalFieldSpec& K, Int m, const LocalMatData& S, Int i) {
  LocalElement dg = LocalElement::different_gen(K);
  LocalMatData dS = S;
  for (auto& row : dS)
    for (auto& x : row) x = x * dg;
  RepMatrix A = level_matrix(K, m, {Token::uflat(dS)}, i);
  RepMatrix G = uflat_gauss_matrix(K, m, S, i);
  CycScalar xi = CycScalar::zero();
  for (size_t r = 0; r < G.size() && xi.is_zero(); ++r)
    for (size_t c = 0; c < G.size() && xi.is_zero(); ++c)
      if (!G[r][c].is_zero()) xi = A[r][c] * G[r][c].inv();
  bool ok = !xi.is_zero() && xi.pow(8) == CycScalar::one();
  for (size_t r = 0; ok && r < G.size(); ++r)
    for (size_t c = 0; ok && c < G.size(); ++c)
      if (!(A[r][c] == xi * G[r][c])) ok = false;
  if (!ok)
    throw CheckError("GaussContractViolation",
                     "level matrix is not an eighth-root multiple of the gauss form");
  return xi;
}

CycScalar epsilon_char(const LocalFieldSpec& K, Int m, const GeneratorWord& word,
                       bool top_level) {
  LocalMatData g = word_matrix(K, m, word);
  bool member = top_level ? in_gamma_level(K, m, g, K.e) : in_gamma0(K, m, g, 4);
  if (!member)
    throw CheckError("NotInGroup", top_level
                                       ? "word leaves the deepest principal group"
                                       : "word leaves the level-4 congruence group");
  SchwartzVec phi = base_vector(K, m, top_level ? K.e : 0);
  CycScalar r = eigen_ratio(apply_word(phi, word), phi);
  LOGIC_CHECK(r.is_unit_modulus(), "character value must be a unit");
  return r.inv();
}

bool check_char_relation(const LocalFieldSpec& K, Int m, const GeneratorWord& word) {
  LocalElement two = LocalElement::from_rat(K, Rat(2));
  LocalElement half = LocalElement::from_rat(K, rat_of(1, 2));
  GeneratorWord conj;
  conj.push_back(Token::ma(scalar_mat(K, m, half)));
  conj.insert(conj.end(), word.begin(), word.end());
  conj.push_back(Token::ma(scalar_mat(K, m, two)));
  return epsilon_char(K, m, conj, false) == epsilon_char(K, m, word, true);
}

CycScalar ek_value(const LocalFieldSpec& K, Int m, const GeneratorWord& word) {
  if (!in_gamma0(K, m, word_matrix(K, m, word), 1)) return CycScalar::zero();
  SchwartzVec phi = base_vector(K, m, 0);
  return sv_inner(phi, apply_word(phi, word)).scaled(Rat(ipow(K.q, m * K.e)));
}

CycScalar Ek_value(const LocalFieldSpec& K, Int m, const GeneratorWord& word) {
  if (!in_conjugated_gamma(K, m, word_matrix(K, m, word))) return CycScalar::zero();
  LocalElement c = LocalElement::different_gen(K).scaled(Rat(2));
  SchwartzVec u = apply_token(base_vector(K, m, 0), Token::wscaled(c));
  return sv_inner(u, apply_word(u, word)).scaled(Rat(ipow(K.q, m * K.e)));
}

std::vector<GeneratorWord> gamma_generator_words(const LocalFieldSpec& K, Int m, Int i) {
  DOMAIN_CHECK(m == 1 || m == 2, "supported coordinate counts are 1 and 2");
  DOMAIN_CHECK(0 <= i && i <= K.e, "level out of range");
  std::vector<GeneratorWord> out;
  LocalElement one = LocalElement::one(K), zero = LocalElement::zero(K);

  std::vector<LocalElement> units;
  for (const LocalElement& r : residue_transversal(K, 2 * K.e + 1))
    if (r.is_unit()) units.push_back(r);
  if (m == 1) {
    for (const LocalElement& u : units) out.push_back({Token::ma({{u}})});
  } else {
    for (const LocalElement& u : units) {
      LocalMatData A = lmat_id(K, 2);
      A[0][0] = u;
      out.push_back({Token::ma(A)});
    }
    LocalMatData e12 = lmat_id(K, 2), e21 = lmat_id(K, 2), sw = lmat_id(K, 2);
    e12[0][1] = one;
    e21[1][0] = one;
    sw[0][0] = sw[1][1] = zero;
    sw[0][1] = sw[1][0] = one;
    out.push_back({Token::ma(e12)});
    out.push_back({Token::ma(e21)});
    out.push_back({Token::ma(sw)});
  }

  std::vector<LocalElement> rbasis{one};
  if (K.kind == LocalKind::UnramifiedQuad) rbasis.push_back(LocalElement::theta(K));
  std::vector<LocalMatData> shapes;
  if (m == 1) {
    shapes.push_back({{one}});
  } else {
    for (int which = 0; which < 3; ++which) {
      LocalMatData E(2, std::vector<LocalElement>(2, zero));
      if (which == 0) E[0][0] = one;
      if (which == 1) E[1][1] = one;
      if (which == 2) E[0][1] = E[1][0] = one;
      shapes.push_back(E);
    }
  }
  LocalElement dgen = LocalElement::different_gen(K);
  LocalElement dinv = dgen.inv();
  for (Int j = 0; j < 2 * (K.e - i); ++j) {
    LocalElement wj = LocalElement::uniformizer_pow(K, j);
    for (const LocalElement& beta : rbasis)
      for (const LocalMatData& E : shapes) {
        LocalMatData B = E, C = E;
        LocalElement ub = dinv * LocalElement::uniformizer_pow(K, 2 * i) * wj * beta;
        LocalElement fb = dgen * wj * beta;
        for (Int r = 0; r < m; ++r)
          for (Int cI = 0; cI < m; ++cI) {
            B[size_t(r)][size_t(cI)] = B[size_t(r)][size_t(cI)] * ub;
            C[size_t(r)][size_t(cI)] = C[size_t(r)][size_t(cI)] * fb;
          }
        out.push_back({Token::usharp(B)});
        out.push_back({Token::uflat(C)});
      }
  }
  return out;
}

std::vector<RepMatrix> group_closure(const std::vector<RepMatrix>& gens, Int cap) {
  DOMAIN_CHECK(!gens.empty(), "need at least one generator");
  DOMAIN_CHECK(cap >= 1, "cap must be positive");
  Int d = Int(gens[0].size());
  for (const RepMatrix& g : gens) {
    DOMAIN_CHECK(Int(g.size()) == d, "generators must share one size");
    for (const auto& row : g) DOMAIN_CHECK(Int(row.size()) == d, "generators must be square");
  }
  std::map<std::string, RepMatrix> seen;
  std::vector<const RepMatrix*> work;
  RepMatrix id = cyc_mat_id(d);
  auto add = [&](RepMatrix g) -> void {
    std::string k = cyc_mat_key(g);
    auto it = seen.find(k);
    if (it != seen.end()) return;
    if (Int(seen.size()) >= cap)
      throw CheckError("CapExceeded", "closure exceeds " + std::to_string(cap) + " elements");
    auto ins = seen.emplace(std::move(k), std::move(g));
    work.push_back(&ins.first->second);
  };
  add(id);
  // map nodes are stable, so the worklist can hold pointers while growing
  for (size_t w = 0; w < work.size(); ++w)
    for (const RepMatrix& g : gens) add(cyc_mat_mul(*work[w], g));
  std::vector<RepMatrix> out;
  out.reserve(seen.size());
  for (auto& kv : seen) out.push_back(kv.second);
  return out;
}

std::vector<CycScalar> hecke_convolve(const std::vector<RepMatrix>& G,
                                      const std::vector<CycScalar>& f1,
                                      const std::vector<CycScalar>& f2) {
  DOMAIN_CHECK(!G.empty(), "empty group");
  DOMAIN_CHECK(f1.size() == G.size() && f2.size() == G.size(),
               "vectors must be indexed by the group");
  std::map<std::string, size_t> index;
  for (size_t j = 0; j < G.size(); ++j) index.emplace(cyc_mat_key(G[j]), j);
  std::vector<RepMatrix> inv;
  inv.reserve(G.size());
  for (const RepMatrix& g : G) inv.push_back(cyc_mat_conj_transpose(g));
  Rat scale = rat_of(1, Int(G.size()));
  std::vector<CycScalar> out(G.size(), CycScalar::zero());
  for (size_t a = 0; a < G.size(); ++a) {
    CycScalar acc = CycScalar::zero();
    for (size_t b = 0; b < G.size(); ++b) {
      auto it = index.find(cyc_mat_key(cyc_mat_mul(G[a], inv[b])));
      LOGIC_CHECK(it != index.end(), "group is closed under products");
      acc = acc + f1[it->second] * f2[b];
    }
    out[a] = acc.scaled(scale);
  }
  return out;
}

std::vector<CycScalar> idempotent_vector(const std::vector<RepMatrix>& G, Int scale) {
  std::vector<CycScalar> out;
  out.reserve(G.size());
  for (const RepMatrix& g : G) out.push_back(g[0][0].conj().scaled(Rat(scale)));
  return out;
}

Int commutant_dim(const std::vector<RepMatrix>& gens) {
  DOMAIN_CHECK(!gens.empty(), "need at least one generator");
  size_t d = gens[0].size();
  size_t n = d * d;
  std::vector<std::vector<CycScalar>> rows;
  for (const RepMatrix& g : gens)
    for (size_t r = 0; r < d; ++r)
      for (size_t c = 0; c < d; ++c) {
        std::vector<CycScalar> row(n, CycScalar::zero());
        for (size_t a = 0; a < d; ++a)
          for (size_t b = 0; b < d; ++b) {
            CycScalar v = CycScalar::zero();
            if (a == r) v = v + g[b][c];
            if (b == c) v = v - g[r][a];
            row[a * d + b] = v;
          }
        rows.push_back(std::move(row));
      }
  // rank by exact elimination
  size_t rank = 0;
  for (size_t col = 0; col < n && rank < rows.size(); ++col) {
    size_t piv = rank;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    CycScalar pi = rows[rank][col].inv();
    for (size_t j = col; j < n; ++j) rows[rank][j] = rows[rank][j] * pi;
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      CycScalar f = rows[r][col];
      for (size_t j = col; j < n; ++j) rows[r][j] = rows[r][j] - f * rows[rank][j];
    }
    ++rank;
  }
  return Int(n) - Int(rank);
}

bool key_lemma_verify(const LocalFieldSpec& K, Int m, Int i, const LocalMatData& S) {
  DOMAIN_CHECK(0 <= i && i < K.e, "index must stay below the top level");
  Int lev_hi = K.e - i, lev_lo = K.e - i - 1;
  LocalElement dinv = LocalElement::different_gen(K).inv();
  // 1/(delta pi^{2i+1}) and the averaging weight q^{-m(2i+1)}
  LocalElement u = LocalElement::uniformizer_pow(K, -(2 * i + 1)) * dinv;
  Rat weight = pow_rat(Rat(K.q), -m * (2 * i + 1));
  std::vector<LocalVec> diags = coord_grid(residue_transversal(K, 2 * i + 1), m);
  for (const LocalVec& kappa : level_indices(K, m, lev_lo)) {
    SchwartzVec hi = embed_level(K, m, lev_hi, reduce_vec(kappa, i), 0);
    SchwartzVec acc(Window(K, m, 0));
    for (const LocalVec& dvec : diags) {
      LocalMatData B = lmat_id(K, m);
      LocalElement phase_arg = LocalElement::zero(K);
      for (Int j = 0; j < m; ++j) {
        B[size_t(j)][size_t(j)] = dvec[size_t(j)].scaled(Rat(4)) * u;
        phase_arg = phase_arg + dvec[size_t(j)] * kappa[size_t(j)] * kappa[size_t(j)];
      }
      CycScalar phase = psi_local(-(phase_arg * u));
      acc = sv_add(acc, apply_token(hi, Token::usharp(B)).scaled(phase));
    }
    if (!sv_equal(acc.scaled(CycScalar::from_rat(weight)),
                  embed_level(K, m, lev_lo, kappa, 0)))
      return false;
  }
  try {
    uflat_gauss_defect(K, m, S, lev_lo);
  } catch (const CheckError&) {
    return false;
  }
  return true;
}

}  // namespace kp
