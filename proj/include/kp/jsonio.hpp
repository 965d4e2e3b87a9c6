#ifndef KP_JSONIO_HPP
#define KP_JSONIO_HPP

#include <json.hpp>

#include <string>

#include "kp/expansions.hpp"
#include "kp/numeval.hpp"
#include "kp/weil.hpp"

namespace kp {

// ordered_json keeps insertion order, so every writer below is byte-deterministic;
// rationals travel as strings, never as lossy number literals
using Json = nlohmann::ordered_json;

Json rat_json(const Rat& r);
Rat rat_of_json(const Json& j);

// "q" or "qsqrtD"
Json field_json(const FieldSpec& F);
FieldSpec field_of_json(const Json& j);

// rational field: one coordinate string; quadratic: ["a","b"] in the basis 1, omega
Json felt_json(const FieldElement& x);
FieldElement felt_of_json(const FieldSpec& F, const Json& j);

Json symmat_json(const SymMat& T);
SymMat symmat_of_json(const FieldSpec& F, const Json& j);

Json fmat_json(const FMat& A);
FMat fmat_of_json(const FieldSpec& F, const Json& j);

Json rvec_json(const ResidueVector& lam);
ResidueVector rvec_of_json(const FieldSpec& F, const Json& j);

// {"order":N,"coeffs":[...]}; read side rebuilds through root_of_unity, so any
// coefficient vector comes back in canonical reduced form
Json scalar_json(const CycScalar& z);
CycScalar scalar_of_json(const Json& j);

Json expansion_json(const Expansion& h);
Expansion expansion_of_json(const Json& j);

Json jacobi_json(const JacobiExpansion& g);
JacobiExpansion jacobi_of_json(const Json& j);

Json family_json(const SplitFamily& fam);
SplitFamily family_of_json(const Json& j);

// q2 | q4 | q2sqrt2, the three completions at 2
LocalFieldSpec local_field_of_name(const std::string& name);

// Q2: one coordinate string; quadratic: ["a","b"] in the basis 1, theta
Json lelt_json(const LocalElement& x);
LocalElement lelt_of_json(const LocalFieldSpec& K, const Json& j);

Json lmat_json(const LocalMatData& A);
LocalMatData lmat_of_json(const LocalFieldSpec& K, const Json& j);

// [{"op":"usharp","B":[["1/2"]]},{"op":"w"},...]
Json token_json(const Token& t);
Token token_of_json(const LocalFieldSpec& K, const Json& j);
Json word_json(const GeneratorWord& w);
GeneratorWord word_of_json(const LocalFieldSpec& K, const Json& j);

Json repmat_json(const RepMatrix& M);

// {"re":[T per embedding],"im":[T per embedding],"w":[[rat]] optional}
EvalPoint point_of_json(const FieldSpec& F, Int m, const Json& j, mpfr_prec_t prec);
// certified enclosure as endpoint strings
Json cival_json(const CIval& v);

}  // namespace kp

#endif
