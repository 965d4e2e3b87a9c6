#ifndef KP_SCHWARTZ_HPP
#define KP_SCHWARTZ_HPP

#include <map>
#include <string>
#include <vector>

#include "kp/cyclotomic.hpp"
#include "kp/local.hpp"

namespace kp {

using LocalVec = std::vector<LocalElement>;
using LocalMatData = std::vector<std::vector<LocalElement>>;

struct LocalVecLess {
  bool operator()(const LocalVec& x, const LocalVec& y) const;
};

// Finite-dimensional slice of the Schwartz space: functions supported in
// (p^{-a})^m and invariant under translation by (p^b)^m, spanned by the delta
// functions of the q^{m(a+b)} cosets.  The support exponent is tied to the
// invariance exponent, a = b + e + c_psi, which is the smallest shape the
// Fourier-type operator maps onto itself; operators that need finer invariance
// enlarge b (and a with it) rather than ever leaving the family.
struct Window {
  LocalFieldSpec K;
  Int m;
  Int b;
  Int a;

  Window(const LocalFieldSpec& K_, Int m_, Int b_);
  Int dim() const;
  bool operator==(const Window& o) const { return K == o.K && m == o.m && b == o.b; }
  bool operator!=(const Window& o) const { return !(*this == o); }
};

// canonical coset representatives, one per basis delta, in enumeration order
std::vector<LocalVec> window_basis(const Window& w);

LocalVec reduce_vec(const LocalVec& x, Int k);

// Sparse vector in a window; keys are canonical representatives, zero
// coefficients are never stored.
struct SchwartzVec {
  Window win;
  std::map<LocalVec, CycScalar, LocalVecLess> coef;

  explicit SchwartzVec(const Window& w) : win(w) {}
  static SchwartzVec delta(const Window& w, const LocalVec& x);

  void add_delta(const LocalVec& x, const CycScalar& c);
  bool is_zero() const { return coef.empty(); }
  // the same function at a finer resolution b2 >= win.b
  SchwartzVec embedded(Int b2) const;
  // the same function at the coarsest resolution that can hold it; inverse of
  // embedded, so apply_token results are always minimal
  SchwartzVec compressed() const;
  SchwartzVec scaled(const CycScalar& c) const;
};

SchwartzVec sv_add(const SchwartzVec& f, const SchwartzVec& g);
// L^2 pairing, conjugate-linear in the second slot, with vol(o^m) = 1
CycScalar sv_inner(const SchwartzVec& f, const SchwartzVec& g);
bool sv_equal(const SchwartzVec& f, const SchwartzVec& g);

// level basis: Phi_lambda at level i is the indicator of lambda/2 + (p^{-i})^m,
// for lambda running over (o/p^{e-i})^m; the level space has dimension q^{m(e-i)}
Int level_dim(const LocalFieldSpec& K, Int m, Int i);
std::vector<LocalVec> level_indices(const LocalFieldSpec& K, Int m, Int i);
SchwartzVec embed_level(const LocalFieldSpec& K, Int m, Int i, const LocalVec& lambda, Int b);
// coefficients of f in the level-i basis; CheckError("InvarianceViolation")
// when f is not exactly a combination of the level vectors
std::vector<CycScalar> project_level(const SchwartzVec& f, Int i);

// One generator token.  Each token owns a fixed operator (one metaplectic lift
// per underlying matrix); UFlat is realized by conjugation, as the composite
// W^{-1} USharp(-S) W, so no two-cocycle ever has to be evaluated.
struct Token {
  enum Kind { USharp, UFlat, MA, W, WScaled } kind;
  LocalMatData P;  // m x m parameter for USharp / UFlat / MA
  LocalElement c;  // scalar parameter for WScaled

  static Token usharp(const LocalMatData& B);
  static Token uflat(const LocalMatData& S);
  static Token ma(const LocalMatData& A);
  static Token w(const LocalFieldSpec& K);
  static Token wscaled(const LocalElement& c);
};

using GeneratorWord = std::vector<Token>;

// 2m x 2m matrix helpers over the local field
LocalMatData lmat_id(const LocalFieldSpec& K, Int n);
LocalMatData lmat_mul(const LocalMatData& x, const LocalMatData& y);
LocalMatData lmat_transpose(const LocalMatData& x);
LocalMatData lmat_neg(const LocalMatData& x);
LocalMatData lmat_inv(const LocalMatData& x);
LocalElement lmat_det(const LocalMatData& x);
bool lmat_eq(const LocalMatData& x, const LocalMatData& y);

LocalMatData token_matrix(const LocalFieldSpec& K, Int m, const Token& t);
// product of the token matrices in word order
LocalMatData word_matrix(const LocalFieldSpec& K, Int m, const GeneratorWord& w);

bool is_symplectic(const LocalFieldSpec& K, Int m, const LocalMatData& g);
// symplectic with a,d integral, val(b block) >= vb, val(c block) >= vc
bool in_group_ideal(const LocalFieldSpec& K, Int m, const LocalMatData& g, Int vb, Int vc);
bool in_gamma0(const LocalFieldSpec& K, Int m, const LocalMatData& g, Int level4);
bool in_gamma_level(const LocalFieldSpec& K, Int m, const LocalMatData& g, Int i);
// the conjugate of Gamma_0(1) under the scaled Fourier token (support of the
// conjugated idempotent): a,d integral, b in 4^{-1}d^{-1}, c in 4d
bool in_conjugated_gamma(const LocalFieldSpec& K, Int m, const LocalMatData& g);

// applying operators; the result may live on a finer window
SchwartzVec apply_token(const SchwartzVec& f, const Token& t);
// tokens act in composition order: the first token of the word acts last
SchwartzVec apply_word(const SchwartzVec& f, const GeneratorWord& w);

// dense matrix of the word on a fixed window, columns indexed by window_basis;
// CheckError("WindowTooSmall") when the action needs a finer resolution
std::vector<std::vector<CycScalar>> op_matrix(const Window& win, const GeneratorWord& w);

// plain Fourier transform (self-dual normalization), used to certify the
// transform formula for the level vectors
SchwartzVec fourier_apply(const SchwartzVec& f);

}  // namespace kp

#endif
