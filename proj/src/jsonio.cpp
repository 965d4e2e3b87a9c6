#include "kp/jsonio.hpp"

namespace kp {

namespace {

void need(bool ok, const std::string& what) { DOMAIN_CHECK(ok, what); }

Int int_of_json(const Json& j, const std::string& what) {
  need(j.is_number_integer(), what + " must be an integer");
  return j.get<Int>();
}

}  // namespace

Json rat_json(const Rat& r) { return rat_to_string(r); }

Rat rat_of_json(const Json& j) {
  if (j.is_number_integer()) return Rat(j.get<Int>());
  need(j.is_string(), "rationals are serialized as strings");
  return rat_from_string(j.get<std::string>());
}

Json field_json(const FieldSpec& F) {
  return F.quadratic() ? "qsqrt" + std::to_string(F.d) : std::string("q");
}

FieldSpec field_of_json(const Json& j) {
  need(j.is_string(), "field tag must be a string");
  std::string s = j.get<std::string>();
  if (s == "q") return FieldSpec::rationals();
  need(s.rfind("qsqrt", 0) == 0 && s.size() > 5, "unknown field tag: " + s);
  return FieldSpec::real_quadratic(Int(std::stoll(s.substr(5))));
}

Json felt_json(const FieldElement& x) {
  if (!x.F.quadratic()) return rat_json(x.a);
  return Json::array({rat_json(x.a), rat_json(x.b)});
}

FieldElement felt_of_json(const FieldSpec& F, const Json& j) {
  if (j.is_array()) {
    need(F.quadratic(), "two coordinates over the rational field");
    need(j.size() == 2, "field element wants two coordinates");
    return FieldElement(F, rat_of_json(j[0]), rat_of_json(j[1]));
  }
  return FieldElement(F, rat_of_json(j));
}

Json symmat_json(const SymMat& T) {
  Json rows = Json::array();
  for (Int i = 0; i < T.m; ++i) {
    Json row = Json::array();
    for (Int j = 0; j < T.m; ++j) row.push_back(felt_json(T.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

SymMat symmat_of_json(const FieldSpec& F, const Json& j) {
  need(j.is_array() && !j.empty(), "matrix must be a non-empty array of rows");
  Int m = Int(j.size());
  SymMat T(F, m);
  for (Int r = 0; r < m; ++r) {
    need(j[size_t(r)].is_array() && Int(j[size_t(r)].size()) == m, "matrix rows must be square");
    for (Int c = 0; c < m; ++c) T.at(r, c) = felt_of_json(F, j[size_t(r)][size_t(c)]);
  }
  for (Int r = 0; r < m; ++r)
    for (Int c = r + 1; c < m; ++c)
      need(T.at(r, c) == T.at(c, r), "matrix must be symmetric");
  return T;
}

Json fmat_json(const FMat& A) {
  Json rows = Json::array();
  for (Int i = 0; i < A.rows; ++i) {
    Json row = Json::array();
    for (Int j = 0; j < A.cols; ++j) row.push_back(felt_json(A.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

FMat fmat_of_json(const FieldSpec& F, const Json& j) {
  need(j.is_array() && !j.empty(), "matrix must be a non-empty array of rows");
  Int rows = Int(j.size());
  need(j[0].is_array() && !j[0].empty(), "matrix rows must be non-empty arrays");
  Int cols = Int(j[0].size());
  FMat A(F, rows, cols);
  for (Int r = 0; r < rows; ++r) {
    need(j[size_t(r)].is_array() && Int(j[size_t(r)].size()) == cols, "ragged matrix rows");
    for (Int c = 0; c < cols; ++c) A.at(r, c) = felt_of_json(F, j[size_t(r)][size_t(c)]);
  }
  return A;
}

Json rvec_json(const ResidueVector& lam) {
  Json out = Json::array();
  for (const FieldElement& x : lam.v) out.push_back(felt_json(x));
  return out;
}

ResidueVector rvec_of_json(const FieldSpec& F, const Json& j) {
  need(j.is_array() && !j.empty(), "residue vector must be a non-empty array");
  std::vector<FieldElement> v;
  for (const Json& e : j) v.push_back(felt_of_json(F, e));
  for (const FieldElement& x : v) need(x.is_integral(), "residue vector entries must be integral");
  return ResidueVector::reduce(v);
}

Json scalar_json(const CycScalar& z) {
  Json coeffs = Json::array();
  for (const Rat& r : z.c) coeffs.push_back(rat_json(r));
  return Json{{"order", z.order}, {"coeffs", coeffs}};
}

CycScalar scalar_of_json(const Json& j) {
  need(j.is_object() && j.contains("order") && j.contains("coeffs"),
       "scalar wants {order, coeffs}");
  Int order = int_of_json(j["order"], "scalar order");
  need(order >= 1, "scalar order must be positive");
  const Json& coeffs = j["coeffs"];
  need(coeffs.is_array(), "scalar coeffs must be an array");
  CycScalar z = CycScalar::zero();
  for (size_t k = 0; k < coeffs.size(); ++k) {
    Rat r = rat_of_json(coeffs[k]);
    if (r != 0) z = z + CycScalar::root_of_unity(Int(k), order).scaled(r);
  }
  return z;
}

namespace {

// shared envelope reader: field/m/weight/trace_bound, with a fixed kind tag
struct Envelope {
  FieldSpec F;
  Int m;
  std::vector<Int> weight;
  Rat bound;
};

Envelope envelope_of_json(const Json& j, const std::string& kind) {
  need(j.is_object(), "expansion must be a JSON object");
  need(j.contains("kind") && j["kind"] == kind, "expected kind \"" + kind + "\"");
  for (const char* k : {"field", "m", "weight", "trace_bound"})
    need(j.contains(k), std::string("expansion wants a \"") + k + "\" field");
  Envelope env;
  env.F = field_of_json(j["field"]);
  env.m = int_of_json(j["m"], "m");
  need(j["weight"].is_array() && !j["weight"].empty(), "weight must be a non-empty array");
  for (const Json& w : j["weight"]) env.weight.push_back(int_of_json(w, "weight entry"));
  env.bound = rat_of_json(j["trace_bound"]);
  return env;
}

Int eta_of_json(const Json& j) {
  need(j.contains("eta"), "expansion wants an \"eta\" field");
  Rat eta = rat_of_json(j["eta"]);
  need(eta == 1 || eta == -1, "eta must be 1 or -1");
  return eta == 1 ? 1 : -1;
}

}  // namespace

Json expansion_json(const Expansion& h) {
  Json out{{"kind", "plus"},
           {"field", field_json(h.F)},
           {"m", h.m},
           {"weight", h.weight},
           {"eta", rat_json(Rat(h.eta))},
           {"trace_bound", rat_json(h.trace_bound)}};
  Json coeffs = Json::array();
  for (const auto& [key, tv] : h.c)
    coeffs.push_back(Json{{"T", symmat_json(tv.first)}, {"c", scalar_json(tv.second)}});
  out["coefficients"] = coeffs;
  return out;
}

Expansion expansion_of_json(const Json& j) {
  Envelope env = envelope_of_json(j, "plus");
  Expansion h(env.F, env.m, env.weight, eta_of_json(j), env.bound);
  need(j.contains("coefficients") && j["coefficients"].is_array(),
       "expansion wants a \"coefficients\" array");
  for (const Json& item : j["coefficients"]) {
    need(item.is_object() && item.contains("T") && item.contains("c"),
         "coefficient wants {T, c}");
    h.set(symmat_of_json(env.F, item["T"]), scalar_of_json(item["c"]));
  }
  return h;
}

Json jacobi_json(const JacobiExpansion& g) {
  Json out{{"kind", "jacobi"},
           {"field", field_json(g.F)},
           {"m", g.m},
           {"weight", g.weight},
           {"eta", "-1"},
           {"trace_bound", rat_json(g.trace_bound)}};
  Json coeffs = Json::array();
  for (const auto& [key, tv] : g.c)
    coeffs.push_back(Json{{"T", symmat_json(std::get<0>(tv))},
                          {"lambda", rvec_json(std::get<1>(tv))},
                          {"c", scalar_json(std::get<2>(tv))}});
  out["coefficients"] = coeffs;
  return out;
}

JacobiExpansion jacobi_of_json(const Json& j) {
  Envelope env = envelope_of_json(j, "jacobi");
  need(eta_of_json(j) == -1, "jacobi expansions assume eta = -1");
  JacobiExpansion g(env.F, env.m, env.weight, env.bound);
  need(j.contains("coefficients") && j["coefficients"].is_array(),
       "expansion wants a \"coefficients\" array");
  for (const Json& item : j["coefficients"]) {
    need(item.is_object() && item.contains("T") && item.contains("lambda") && item.contains("c"),
         "coefficient wants {T, lambda, c}");
    g.set(symmat_of_json(env.F, item["T"]), rvec_of_json(env.F, item["lambda"]),
          scalar_of_json(item["c"]));
  }
  return g;
}

Json family_json(const SplitFamily& fam) {
  Json out{{"kind", "split"},
           {"field", field_json(fam.F)},
           {"m", fam.m},
           {"weight", fam.weight},
           {"eta", rat_json(Rat(fam.eta))},
           {"trace_bound", rat_json(fam.trace_bound)}};
  Json comps = Json::array();
  for (size_t idx = 0; idx < fam.comp.size(); ++idx) {
    Json coeffs = Json::array();
    for (const auto& [key, tv] : fam.comp[idx])
      coeffs.push_back(Json{{"T", symmat_json(tv.first)}, {"c", scalar_json(tv.second)}});
    comps.push_back(Json{{"lambda", rvec_json(ResidueVector::from_index(fam.F, fam.m, Int(idx)))},
                         {"coefficients", coeffs}});
  }
  out["components"] = comps;
  return out;
}

SplitFamily family_of_json(const Json& j) {
  Envelope env = envelope_of_json(j, "split");
  SplitFamily fam(env.F, env.m, env.weight, eta_of_json(j), env.bound);
  need(j.contains("components") && j["components"].is_array(),
       "family wants a \"components\" array");
  need(Int(j["components"].size()) == residue_class_count(env.F, env.m),
       "family wants one component per residue class");
  for (const Json& comp : j["components"]) {
    need(comp.is_object() && comp.contains("lambda") && comp.contains("coefficients"),
         "component wants {lambda, coefficients}");
    Int idx = rvec_of_json(env.F, comp["lambda"]).index();
    for (const Json& item : comp["coefficients"]) {
      need(item.is_object() && item.contains("T") && item.contains("c"),
           "coefficient wants {T, c}");
      fam.set(idx, symmat_of_json(env.F, item["T"]), scalar_of_json(item["c"]));
    }
  }
  return fam;
}

LocalFieldSpec local_field_of_name(const std::string& name) {
  if (name == "q2") return LocalFieldSpec::q2();
  if (name == "q4") return LocalFieldSpec::unramified_quadratic();
  if (name == "q2sqrt2") return LocalFieldSpec::ramified_sqrt2();
  DOMAIN_CHECK(false, "unknown local field (want q2 | q4 | q2sqrt2): " + name);
  return LocalFieldSpec::q2();
}

Json lelt_json(const LocalElement& x) {
  if (!x.K.quadratic()) return rat_json(x.a);
  return Json::array({rat_json(x.a), rat_json(x.b)});
}

LocalElement lelt_of_json(const LocalFieldSpec& K, const Json& j) {
  if (j.is_array()) {
    need(K.quadratic(), "two coordinates over Q2");
    need(j.size() == 2, "local element wants two coordinates");
    return LocalElement(K, rat_of_json(j[0]), rat_of_json(j[1]));
  }
  return LocalElement(K, rat_of_json(j));
}

Json lmat_json(const LocalMatData& A) {
  Json rows = Json::array();
  for (const auto& row : A) {
    Json r = Json::array();
    for (const LocalElement& x : row) r.push_back(lelt_json(x));
    rows.push_back(r);
  }
  return rows;
}

LocalMatData lmat_of_json(const LocalFieldSpec& K, const Json& j) {
  need(j.is_array() && !j.empty(), "matrix must be a non-empty array of rows");
  LocalMatData A;
  size_t cols = 0;
  for (const Json& row : j) {
    need(row.is_array() && !row.empty(), "matrix rows must be non-empty arrays");
    if (A.empty()) cols = row.size();
    need(row.size() == cols, "ragged matrix rows");
    std::vector<LocalElement> r;
    for (const Json& x : row) r.push_back(lelt_of_json(K, x));
    A.push_back(r);
  }
  return A;
}

Json token_json(const Token& t) {
  switch (t.kind) {
    case Token::USharp: return Json{{"op", "usharp"}, {"B", lmat_json(t.P)}};
    case Token::UFlat: return Json{{"op", "uflat"}, {"S", lmat_json(t.P)}};
    case Token::MA: return Json{{"op", "ma"}, {"A", lmat_json(t.P)}};
    case Token::W: return Json{{"op", "w"}};
    case Token::WScaled: return Json{{"op", "wscaled"}, {"c", lelt_json(t.c)}};
  }
  LOGIC_CHECK(false, "unreachable token kind");
  return Json();
}

Token token_of_json(const LocalFieldSpec& K, const Json& j) {
  need(j.is_object() && j.contains("op") && j["op"].is_string(), "token wants an \"op\" tag");
  std::string op = j["op"].get<std::string>();
  if (op == "usharp") {
    need(j.contains("B"), "usharp wants \"B\"");
    return Token::usharp(lmat_of_json(K, j["B"]));
  }
  if (op == "uflat") {
    need(j.contains("S"), "uflat wants \"S\"");
    return Token::uflat(lmat_of_json(K, j["S"]));
  }
  if (op == "ma") {
    need(j.contains("A"), "ma wants \"A\"");
    return Token::ma(lmat_of_json(K, j["A"]));
  }
  if (op == "w") return Token::w(K);
  if (op == "wscaled") {
    need(j.contains("c"), "wscaled wants \"c\"");
    return Token::wscaled(lelt_of_json(K, j["c"]));
  }
  DOMAIN_CHECK(false, "unknown token op: " + op);
  return Token::w(K);
}

Json word_json(const GeneratorWord& w) {
  Json out = Json::array();
  for (const Token& t : w) out.push_back(token_json(t));
  return out;
}

GeneratorWord word_of_json(const LocalFieldSpec& K, const Json& j) {
  need(j.is_array(), "word must be an array of tokens");
  GeneratorWord w;
  for (const Json& t : j) w.push_back(token_of_json(K, t));
  return w;
}

Json repmat_json(const RepMatrix& M) {
  Json rows = Json::array();
  for (const auto& row : M) {
    Json r = Json::array();
    for (const CycScalar& z : row) r.push_back(scalar_json(z));
    rows.push_back(r);
  }
  return rows;
}

EvalPoint point_of_json(const FieldSpec& F, Int m, const Json& j, mpfr_prec_t prec) {
  need(j.is_object() && j.contains("re") && j.contains("im"), "point wants {re, im}");
  need(j["re"].is_array() && j["im"].is_array(), "point parts must be arrays per embedding");
  Int n = F.degree();
  need(Int(j["re"].size()) == n && Int(j["im"].size()) == n,
       "point wants one matrix per real embedding");
  // per-embedding values are plain real matrices with rational entries
  FieldSpec Q = FieldSpec::rationals();
  std::vector<SymMat> re, im;
  for (Int k = 0; k < n; ++k) {
    re.push_back(symmat_of_json(Q, j["re"][size_t(k)]));
    im.push_back(symmat_of_json(Q, j["im"][size_t(k)]));
  }
  std::vector<std::vector<Rat>> w;
  if (j.contains("w")) {
    need(j["w"].is_array() && Int(j["w"].size()) == n, "w wants one vector per embedding");
    for (const Json& row : j["w"]) {
      need(row.is_array() && Int(row.size()) == m, "w vectors must have m coordinates");
      std::vector<Rat> wr;
      for (const Json& x : row) wr.push_back(rat_of_json(x));
      w.push_back(wr);
    }
  }
  return rational_point(F, m, re, im, w, prec);
}

Json cival_json(const CIval& v) {
  return Json{{"re", v.re.str()}, {"im", v.im.str()}};
}

}  // namespace kp
