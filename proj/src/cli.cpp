#include "kp/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace kp {

namespace {

Json load_json(const std::string& path) {
  std::ifstream in(path);
  DOMAIN_CHECK(in.good(), "cannot open input file: " + path);
  Json j = Json::parse(in);  // parse_error carries the byte position
  // a report from an earlier command is accepted in place of its payload
  if (j.is_object() && j.contains("status") && j.contains("payload")) return j["payload"];
  return j;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

// report under construction; certificates decide the final status
struct Report {
  Json& j;
  bool any_failed = false;

  void cert(const std::string& name, bool passed, const std::string& detail) {
    j["certificates"].push_back(Json{{"name", name}, {"passed", passed}, {"detail", detail}});
    any_failed = any_failed || !passed;
  }
};

FieldElement eta_element(const Expansion& h) { return FieldElement::from_int(h.F, h.eta); }

std::vector<RepMatrix> generator_matrices(const LocalFieldSpec& K, Int m, Int i) {
  std::vector<RepMatrix> gens;
  for (const GeneratorWord& w : gamma_generator_words(K, m, i))
    gens.push_back(level_matrix(K, m, w, i));
  return gens;
}

// seeded words inside the deepest principal congruence group
std::vector<GeneratorWord> random_top_words(const LocalFieldSpec& K, Int m, uint64_t seed,
                                            Int count) {
  DOMAIN_CHECK(m == 1, "random word generation is wired for m = 1");
  LocalElement dgen = LocalElement::different_gen(K);
  LocalElement b0 = dgen.inv().scaled(Rat(4));
  std::vector<Token> pool = {
      Token::usharp({{b0}}),
      Token::usharp({{b0.scaled(Rat(3))}}),
      Token::uflat({{dgen}}),
      Token::uflat({{dgen.scaled(Rat(3))}}),
      Token::ma({{LocalElement::from_rat(K, Rat(3))}}),
      Token::ma({{LocalElement::from_rat(K, Rat(-1))}}),
  };
  if (K.quadratic()) {
    pool.push_back(Token::usharp({{b0 * LocalElement::theta(K)}}));
    pool.push_back(Token::uflat({{dgen * LocalElement::theta(K)}}));
    pool.push_back(
        Token::ma({{LocalElement::one(K) + LocalElement::theta(K).scaled(Rat(2))}}));
  }
  Rng rng(seed);
  std::vector<GeneratorWord> words;
  for (Int n = 0; n < count; ++n) {
    GeneratorWord w;
    Int len = rng.range(1, 4);
    for (Int k = 0; k < len; ++k) w.push_back(pool[size_t(rng.below(pool.size()))]);
    words.push_back(w);
  }
  return words;
}

std::vector<LocalMatData> random_symmetric(const LocalFieldSpec& K, Int m, uint64_t seed,
                                           Int count) {
  Rng rng(seed);
  std::vector<LocalMatData> out;
  for (Int n = 0; n < count; ++n) {
    LocalMatData S(size_t(m), std::vector<LocalElement>(size_t(m), LocalElement::zero(K)));
    for (Int i = 0; i < m; ++i)
      for (Int j = i; j < m; ++j) {
        Rat a(rng.range(-4, 4));
        Rat b = K.quadratic() ? Rat(rng.range(-4, 4)) : Rat(0);
        LocalElement x(K, a, b);
        S[size_t(i)][size_t(j)] = x;
        S[size_t(j)][size_t(i)] = x;
      }
    out.push_back(S);
  }
  return out;
}

}  // namespace

CliResult dispatch(const std::vector<std::string>& args) {
  CliResult res;
  res.report = Json{{"command", ""},
                    {"args", args},
                    {"status", "error"},
                    {"payload", Json::object()},
                    {"certificates", Json::array()}};
  Report rep{res.report};
  Json& payload = res.report["payload"];

  CLI::App app{"exact certificates for the plus-space correspondence and the 2-adic engine"};
  app.require_subcommand(1);

  // shared option storage; each handler reads only what its command registered
  std::string in_file, field_tag = "q", local_tag = "q2";
  Int opt_m = 1, opt_bound = 10, opt_level = 0, opt_count = 50;
  Int opt_cap = 100000;
  Int opt_precision = 192;
  uint64_t opt_seed = 1;
  std::vector<std::string> coords;

  auto with_out = [&](CLI::App* sub) {
    sub->add_option("--out", res.out_path, "write the report to this file");
    return sub;
  };

  // ---- expansion commands ----
  CLI::App* c_check = with_out(app.add_subcommand("plus-check", "verify the coefficient support condition"));
  c_check->add_option("file", in_file, "plus expansion JSON")->required();
  c_check->callback([&] {
    res.report["command"] = "plus-check";
    Expansion h = expansion_of_json(load_json(in_file));
    FieldElement eta = eta_element(h);
    Json witnesses = Json::array();
    Int bad = 0;
    for (const auto& [key, tv] : h.c) {
      std::vector<ResidueVector> ws = plus_support_witnesses(tv.first, eta);
      if (ws.size() == 1) {
        witnesses.push_back(Json{{"T", symmat_json(tv.first)}, {"lambda", rvec_json(ws[0])}});
      } else {
        ++bad;
        rep.cert("support-congruence", false,
                 "T=" + tv.first.key() +
                     (ws.empty() ? " admits no residue class" : " admits several residue classes"));
      }
    }
    if (bad == 0)
      rep.cert("support-congruence", true,
               std::to_string(h.size()) + " coefficients, each with exactly one residue witness");
    payload = Json{{"coefficients", h.size()}, {"witnesses", witnesses}};
  });

  CLI::App* c_split = with_out(app.add_subcommand("split", "partition a plus expansion by residue witness"));
  c_split->add_option("file", in_file, "plus expansion JSON")->required();
  c_split->callback([&] {
    res.report["command"] = "split";
    Expansion h = expansion_of_json(load_json(in_file));
    SplitFamily fam = split_plus(h);
    Expansion back(h.F, h.m, h.weight, h.eta, h.trace_bound);
    for (const auto& comp : fam.comp)
      for (const auto& [key, tv] : comp) back.set(tv.first, tv.second);
    rep.cert("split-reassembly", back == h,
             "reassembling the components returns the input expansion exactly");
    payload = family_json(fam);
  });

  CLI::App* c_jop = with_out(app.add_subcommand("jacobi-of-plus", "coefficient correspondence, plus to jacobi"));
  c_jop->add_option("file", in_file, "plus expansion JSON")->required();
  c_jop->callback([&] {
    res.report["command"] = "jacobi-of-plus";
    Expansion h = expansion_of_json(load_json(in_file));
    JacobiExpansion g = jacobi_of_plus(h);
    rep.cert("round-trip", plus_of_jacobi(g) == h, "inverse map returns the input exactly");
    payload = jacobi_json(g);
  });

  CLI::App* c_poj = with_out(app.add_subcommand("plus-of-jacobi", "coefficient correspondence, jacobi to plus"));
  c_poj->add_option("file", in_file, "jacobi expansion JSON")->required();
  c_poj->callback([&] {
    res.report["command"] = "plus-of-jacobi";
    JacobiExpansion g = jacobi_of_json(load_json(in_file));
    Expansion h = plus_of_jacobi(g);
    rep.cert("round-trip", jacobi_of_plus(h) == g, "inverse map returns the input exactly");
    payload = expansion_json(h);
  });

  CLI::App* c_comp = with_out(app.add_subcommand("compose-theta", "multiply components by theta series and sum"));
  c_comp->add_option("file", in_file, "split family JSON")->required();
  c_comp->callback([&] {
    res.report["command"] = "compose-theta";
    SplitFamily fam = family_of_json(load_json(in_file));
    JacobiExpansion g = compose_theta(fam);
    rep.cert("unique-reindexing", g.size() == fam.total_size(),
             "every component coefficient lands on exactly one invariant key");
    payload = jacobi_json(g);
  });

  CLI::App* c_norm = with_out(app.add_subcommand("normalize-key", "invariant jacobi key of a raw index pair"));
  c_norm->add_option("file", in_file, "JSON with field and (N, r) or (T, lambda)")->required();
  c_norm->callback([&] {
    res.report["command"] = "normalize-key";
    Json j = load_json(in_file);
    DOMAIN_CHECK(j.is_object() && j.contains("field"), "input wants a \"field\" tag");
    FieldSpec F = field_of_json(j["field"]);
    auto r_of = [&](const Json& arr) {
      DOMAIN_CHECK(arr.is_array() && !arr.empty(), "r must be a non-empty array");
      std::vector<FieldElement> r;
      for (const Json& x : arr) r.push_back(felt_of_json(F, x));
      return r;
    };
    auto r_json = [&](const std::vector<FieldElement>& r) {
      Json out = Json::array();
      for (const FieldElement& x : r) out.push_back(felt_json(x));
      return out;
    };
    if (j.contains("N")) {
      DOMAIN_CHECK(j.contains("r"), "raw key wants both N and r");
      SymMat N = symmat_of_json(F, j["N"]);
      std::vector<FieldElement> r = r_of(j["r"]);
      auto [T, lam] = normalize_jacobi_key(N, r);
      auto [N2, r2] = denormalize_jacobi_key(T, lam);
      auto [T2, lam2] = normalize_jacobi_key(N2, r2);
      rep.cert("round-trip", T2 == T && lam2 == lam,
               "canonical raw representative maps back to the same invariant key");
      payload = Json{{"T", symmat_json(T)},
                     {"lambda", rvec_json(lam)},
                     {"canonical_N", symmat_json(N2)},
                     {"canonical_r", r_json(r2)}};
    } else {
      DOMAIN_CHECK(j.contains("T") && j.contains("lambda"), "input wants (N, r) or (T, lambda)");
      SymMat T = symmat_of_json(F, j["T"]);
      ResidueVector lam = rvec_of_json(F, j["lambda"]);
      auto [N, r] = denormalize_jacobi_key(T, lam);
      auto [T2, lam2] = normalize_jacobi_key(N, r);
      rep.cert("round-trip", T2 == T && lam2 == lam,
               "raw representative maps back to the input invariant key");
      payload = Json{{"N", symmat_json(N)}, {"r", r_json(r)}};
    }
  });

  CLI::App* c_enum = with_out(app.add_subcommand("enumerate-T", "totally psd half-integral index matrices"));
  c_enum->add_option("--field", field_tag, "q or qsqrtD");
  c_enum->add_option("--m", opt_m, "matrix size");
  c_enum->add_option("--bound", opt_bound, "trace bound");
  c_enum->callback([&] {
    res.report["command"] = "enumerate-T";
    FieldSpec F = field_of_json(Json(field_tag));
    std::vector<SymMat> list = enumerate_psd(F, opt_m, opt_bound);
    bool keys_ok = true, sorted = true;
    for (size_t k = 0; k < list.size(); ++k) {
      keys_ok = keys_ok && list[k].is_half_integral() && list[k].is_totally_psd();
      if (k > 0) sorted = sorted && list[k - 1].cmp(list[k]) < 0;
    }
    rep.cert("support-keys", keys_ok, "every matrix is half-integral and totally psd");
    rep.cert("canonical-order", sorted, "strictly increasing in the canonical matrix order");
    Json mats = Json::array();
    for (const SymMat& T : list) mats.push_back(symmat_json(T));
    payload = Json{{"count", list.size()}, {"matrices", mats}};
  });

  CLI::App* c_eval = with_out(app.add_subcommand("eval", "certified numeric evaluation at a point"));
  c_eval->add_option("file", in_file, "JSON with form and z (and optional w, eps)")->required();
  c_eval->add_option("--precision", opt_precision, "working precision in bits");
  c_eval->callback([&] {
    res.report["command"] = "eval";
    Json j = load_json(in_file);
    DOMAIN_CHECK(j.is_object() && j.contains("form") && j.contains("z"),
                 "input wants {form, z}");
    double eps = j.contains("eps") ? std::stod(j["eps"].get<std::string>()) : 1e-10;
    mpfr_prec_t prec = mpfr_prec_t(opt_precision);
    const Json& form = j["form"];
    DOMAIN_CHECK(form.is_object() && form.contains("kind"), "form wants a \"kind\" tag");
    std::string kind = form["kind"].get<std::string>();
    CIval v(prec);
    if (kind == "plus") {
      Expansion h = expansion_of_json(form);
      v = eval_expansion(h, point_of_json(h.F, h.m, j["z"], prec), Rat(1), prec);
    } else if (kind == "jacobi") {
      JacobiExpansion g = jacobi_of_json(form);
      v = eval_jacobi(g, point_of_json(g.F, g.m, j["z"], prec), eps, prec);
    } else if (kind == "theta") {
      DOMAIN_CHECK(form.contains("field") && form.contains("lambda"),
                   "theta form wants {field, lambda}");
      FieldSpec F = field_of_json(form["field"]);
      ResidueVector lam = rvec_of_json(F, form["lambda"]);
      v = eval_theta(lam, point_of_json(F, lam.m(), j["z"], prec), eps, prec);
    } else {
      DOMAIN_CHECK(false, "unknown form kind: " + kind);
    }
    rep.cert("certified-enclosure", v.re.valid() && v.im.valid(),
             "enclosure widths re=" + fmt_double(v.re.width()) +
                 " im=" + fmt_double(v.im.width()));
    payload = Json{{"value", cival_json(v)}};
  });

  CLI::App* c_tt = with_out(app.add_subcommand("theta-transform", "fourth-power transform residual of a group element"));
  c_tt->add_option("file", in_file, "JSON with field, gamma blocks, z")->required();
  c_tt->add_option("--precision", opt_precision, "working precision in bits");
  c_tt->callback([&] {
    res.report["command"] = "theta-transform";
    Json j = load_json(in_file);
    DOMAIN_CHECK(j.is_object() && j.contains("field") && j.contains("gamma") && j.contains("z"),
                 "input wants {field, gamma, z}");
    FieldSpec F = field_of_json(j["field"]);
    const Json& ga = j["gamma"];
    DOMAIN_CHECK(ga.is_object() && ga.contains("a") && ga.contains("b") && ga.contains("c") &&
                     ga.contains("d"),
                 "gamma wants blocks {a, b, c, d}");
    GroupMat g{fmat_of_json(F, ga["a"]), fmat_of_json(F, ga["b"]), fmat_of_json(F, ga["c"]),
               fmat_of_json(F, ga["d"])};
    check_gamma0_4(g);
    rep.cert("group-membership", true, "entry ideals verified exactly");
    double eps = j.contains("eps") ? std::stod(j["eps"].get<std::string>()) : 1e-12;
    double tol = j.contains("tolerance") ? std::stod(j["tolerance"].get<std::string>()) : 1e-6;
    mpfr_prec_t prec = mpfr_prec_t(opt_precision);
    EvalPoint pt = point_of_json(F, g.a.rows, j["z"], prec);
    double resid = theta_transform_residual(g, pt, eps, prec);
    rep.cert("transform-residual", resid <= tol,
             "residual " + fmt_double(resid) + " vs tolerance " + fmt_double(tol));
    payload = Json{{"residual", fmt_double(resid)}};
  });

  // ---- local engine commands ----
  CLI::App* weil = app.add_subcommand("weil", "2-adic representation engine");
  weil->require_subcommand(1);

  auto add_local = [&](CLI::App* sub, bool with_level) {
    sub->add_option("--local", local_tag, "q2 | q4 | q2sqrt2");
    sub->add_option("--m", opt_m, "number of coordinates");
    if (with_level) sub->add_option("--level", opt_level, "invariance level");
    return with_out(sub);
  };

  CLI::App* w_mat = add_local(weil->add_subcommand("matrix", "matrix of a word on a level basis"), true);
  w_mat->add_option("file", in_file, "word JSON")->required();
  w_mat->callback([&] {
    res.report["command"] = "weil matrix";
    LocalFieldSpec K = local_field_of_name(local_tag);
    GeneratorWord word = word_of_json(K, load_json(in_file));
    RepMatrix M = level_matrix(K, opt_m, word, opt_level);
    rep.cert("unitary", cyc_mat_unitary(M), "M times its conjugate transpose is the identity, exact");
    payload = Json{{"dim", M.size()}, {"matrix", repmat_json(M)}};
  });

  CLI::App* w_char = add_local(weil->add_subcommand("character", "eigenvalue character of the base vector"), true);
  w_char->add_option("file", in_file, "word JSON")->required();
  w_char->callback([&] {
    res.report["command"] = "weil character";
    LocalFieldSpec K = local_field_of_name(local_tag);
    DOMAIN_CHECK(opt_level == 0 || opt_level == K.e, "character level must be 0 or e");
    GeneratorWord word = word_of_json(K, load_json(in_file));
    CycScalar ev = epsilon_char(K, opt_m, word, opt_level == K.e && K.e > 0);
    rep.cert("unit-modulus", ev.is_unit_modulus(), "character value times its conjugate is 1, exact");
    payload = Json{{"level", opt_level}, {"epsilon", scalar_json(ev)}};
  });

  CLI::App* w_rel = add_local(weil->add_subcommand("relation", "conjugation relation between the two characters"), false);
  w_rel->add_option("file", in_file, "word JSON (omit for seeded random words)");
  w_rel->add_option("--seed", opt_seed, "seed for random words");
  w_rel->add_option("--count", opt_count, "number of random words");
  w_rel->callback([&] {
    res.report["command"] = "weil relation";
    LocalFieldSpec K = local_field_of_name(local_tag);
    std::vector<GeneratorWord> words;
    if (!in_file.empty())
      words.push_back(word_of_json(K, load_json(in_file)));
    else
      words = random_top_words(K, opt_m, opt_seed, opt_count);
    Int failures = 0;
    for (const GeneratorWord& w : words)
      if (!check_char_relation(K, opt_m, w)) ++failures;
    rep.cert("character-relation", failures == 0,
             std::to_string(words.size()) + " words checked, " + std::to_string(failures) +
                 " failures");
    payload = Json{{"checked", words.size()}};
  });

  CLI::App* w_gauss = add_local(weil->add_subcommand("gauss", "closed-form matrix of a lower unipotent"), true);
  w_gauss->add_option("file", in_file, "symmetric parameter matrix JSON")->required();
  w_gauss->callback([&] {
    res.report["command"] = "weil gauss";
    LocalFieldSpec K = local_field_of_name(local_tag);
    Json j = load_json(in_file);
    LocalMatData S = lmat_of_json(K, j.is_object() && j.contains("S") ? j["S"] : j);
    RepMatrix G = uflat_gauss_matrix(K, opt_m, S, opt_level);
    CycScalar xi = uflat_gauss_defect(K, opt_m, S, opt_level);
    rep.cert("proportional-to-formula", true,
             "operator matrix equals defect times the closed form, entrywise exact");
    rep.cert("defect-eighth-root", xi.pow(8) == CycScalar::one(),
             "defect to the eighth power is 1, exact");
    payload = Json{{"defect", scalar_json(xi)}, {"matrix", repmat_json(G)}};
  });

  CLI::App* w_comm = add_local(weil->add_subcommand("commutant", "commutant dimension of the generator image"), true);
  w_comm->callback([&] {
    res.report["command"] = "weil commutant";
    LocalFieldSpec K = local_field_of_name(local_tag);
    std::vector<RepMatrix> gens = generator_matrices(K, opt_m, opt_level);
    Int d = commutant_dim(gens);
    rep.cert("scalar-commutant", d == 1, "commutant dimension " + std::to_string(d));
    payload = Json{{"generators", gens.size()}, {"commutant_dim", d}};
  });

  CLI::App* w_clos = add_local(weil->add_subcommand("closure", "finite closure of the generator image"), true);
  w_clos->add_option("--cap", opt_cap, "element cap");
  w_clos->callback([&] {
    res.report["command"] = "weil closure";
    LocalFieldSpec K = local_field_of_name(local_tag);
    std::vector<RepMatrix> gens = generator_matrices(K, opt_m, opt_level);
    bool unit = true;
    for (const RepMatrix& g : gens) unit = unit && cyc_mat_unitary(g);
    rep.cert("generators-unitary", unit, "all generator matrices unitary, exact");
    std::vector<RepMatrix> G = group_closure(gens, opt_cap);
    payload = Json{{"generators", gens.size()}, {"order", G.size()}};
    if (G.size() <= 256) {
      Json elems = Json::array();
      for (const RepMatrix& g : G) elems.push_back(repmat_json(g));
      payload["elements"] = elems;
    }
  });

  CLI::App* w_idem = add_local(weil->add_subcommand("idempotent", "matrix-coefficient idempotent on the closure"), true);
  w_idem->add_option("--cap", opt_cap, "element cap");
  w_idem->callback([&] {
    res.report["command"] = "weil idempotent";
    LocalFieldSpec K = local_field_of_name(local_tag);
    std::vector<RepMatrix> G = group_closure(generator_matrices(K, opt_m, opt_level), opt_cap);
    Int d = level_dim(K, opt_m, opt_level);
    std::vector<CycScalar> f = idempotent_vector(G, d);
    std::vector<CycScalar> ff = hecke_convolve(G, f, f);
    bool idem = true;
    for (size_t k = 0; k < G.size(); ++k) idem = idem && ff[k] == f[k];
    rep.cert("convolution-idempotent", idem,
             "e * e = e over the " + std::to_string(G.size()) + "-element closure, exact");
    payload = Json{{"order", G.size()}, {"dim", d}};
  });

  CLI::App* w_key = add_local(weil->add_subcommand("key-lemma", "level-lowering coefficient identity"), true);
  w_key->add_option("file", in_file, "symmetric parameter matrix JSON (omit for seeded random)");
  w_key->add_option("--seed", opt_seed, "seed for random parameters");
  w_key->add_option("--count", opt_count, "number of random parameters");
  w_key->callback([&] {
    res.report["command"] = "weil key-lemma";
    LocalFieldSpec K = local_field_of_name(local_tag);
    std::vector<LocalMatData> params;
    if (!in_file.empty()) {
      Json j = load_json(in_file);
      params.push_back(lmat_of_json(K, j.is_object() && j.contains("S") ? j["S"] : j));
    } else {
      params = random_symmetric(K, opt_m, opt_seed, opt_count);
    }
    Int failures = 0;
    for (const LocalMatData& S : params)
      if (!key_lemma_verify(K, opt_m, opt_level, S)) ++failures;
    rep.cert("coefficient-identity", failures == 0,
             std::to_string(params.size()) + " parameters checked, " + std::to_string(failures) +
                 " failures");
    payload = Json{{"checked", params.size()}};
  });

  CLI::App* w_idx = with_out(weil->add_subcommand("index", "normalized quadratic Gauss phase of an element"));
  w_idx->add_option("--local", local_tag, "q2 | q4 | q2sqrt2");
  w_idx->add_option("coords", coords, "element coordinates: a [b]")->expected(1, 2);
  w_idx->callback([&] {
    res.report["command"] = "weil index";
    LocalFieldSpec K = local_field_of_name(local_tag);
    DOMAIN_CHECK(!coords.empty(), "element coordinates required");
    LocalElement a(K, rat_from_string(coords[0]),
                   coords.size() > 1 ? rat_from_string(coords[1]) : Rat(0));
    CycScalar alpha = weil_index(a);
    rep.cert("eighth-root", alpha.pow(8) == CycScalar::one(), "alpha^8 = 1, exact");
    rep.cert("square-class", weil_index(a.scaled(Rat(4))) == alpha,
             "invariant under multiplication by a nonzero square, exact");
    payload = Json{{"element", lelt_json(a)}, {"alpha", scalar_json(alpha)}};
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    res.report["status"] = rep.any_failed ? "fail" : "ok";
    res.exit_code = rep.any_failed ? 1 : 0;
  } catch (const CLI::CallForHelp&) {
    res.report["status"] = "ok";
    payload = Json{{"help", app.help()}};
    res.exit_code = 0;
  } catch (const CLI::ParseError& e) {
    res.report["status"] = "error";
    payload = Json{{"diagnostic", e.what()}};
    res.exit_code = 2;
  } catch (const CheckError& e) {
    rep.cert(e.code, false, e.what());
    res.report["status"] = "fail";
    res.exit_code = 1;
  } catch (const Json::exception& e) {
    res.report["status"] = "error";
    payload = Json{{"diagnostic", e.what()}};
    res.exit_code = 2;
  } catch (const std::exception& e) {
    res.report["status"] = "error";
    payload = Json{{"diagnostic", e.what()}};
    res.exit_code = 2;
  }
  return res;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
  CliResult res = dispatch(args);
  std::string text = res.report.dump(2) + "\n";
  if (!res.out_path.empty()) {
    std::ofstream out(res.out_path);
    if (!out.good()) {
      std::cerr << "cannot write report to " << res.out_path << "\n";
      return 2;
    }
    out << text;
  } else {
    std::cout << text;
  }
  return res.exit_code;
}

}  // namespace kp
