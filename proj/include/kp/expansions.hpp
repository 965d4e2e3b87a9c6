#ifndef KP_EXPANSIONS_HPP
#define KP_EXPANSIONS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kp/cyclotomic.hpp"
#include "kp/symmat.hpp"

namespace kp {

// Formal Fourier series sum_T c(T) e(Tr_{F/Q} tr(T z)) with exact scalar values.
// The container is the object: trace_bound certifies that every coefficient with
// Tr_{F/Q}(tr T) <= trace_bound is present, and set() refuses keys beyond it so
// no operation can fabricate data outside the certified region.
struct Expansion {
  FieldSpec F;
  Int m = 1;
  std::vector<Int> weight;  // one entry per real embedding
  Int eta = -1;             // unit sign entering the support scans as eta^{-1} T
  Rat trace_bound = Rat(0);
  // canonical key string -> (T, value); exact zeros are never stored
  std::map<std::string, std::pair<SymMat, CycScalar>> c;

  Expansion() {}
  Expansion(const FieldSpec& f, Int m_, std::vector<Int> k, Int eta_, const Rat& bound);

  void set(const SymMat& T, const CycScalar& v);
  CycScalar get(const SymMat& T) const;
  Int size() const { return Int(c.size()); }
  bool operator==(const Expansion& o) const;

  // plus-space container shape: half-integral totally psd keys; the unit/weight
  // norm condition is checked at construction already
  void check_plus_type() const;
  bool cusp_supported() const;  // metadata: all keys totally positive definite
};

// Jacobi coefficients on invariant keys (T, lambda).  A raw index pair (N, r)
// carries the same coefficient as every shift r -> r + 2x, so the value only
// depends on T = 4N - r tr(r) and lambda = r mod 2; storing that quotient makes
// the correspondence maps total.
struct JacobiExpansion {
  FieldSpec F;
  Int m = 1;
  std::vector<Int> weight;  // plus-side weight shifted by one at each embedding
  Rat trace_bound = Rat(0);
  std::map<std::string, std::tuple<SymMat, ResidueVector, CycScalar>> c;

  JacobiExpansion() {}
  JacobiExpansion(const FieldSpec& f, Int m_, std::vector<Int> k, const Rat& bound);

  void set(const SymMat& T, const ResidueVector& lam, const CycScalar& v);
  CycScalar get(const SymMat& T, const ResidueVector& lam) const;
  Int size() const { return Int(c.size()); }
  bool operator==(const JacobiExpansion& o) const;
};

// The components h_lambda of a plus form; component lambda holds keys T with
// eta^{-1} T - lambda tr(lambda) in 4 L_m^*, understood as exponents T/4.
struct SplitFamily {
  FieldSpec F;
  Int m = 1;
  std::vector<Int> weight;
  Int eta = -1;
  Rat trace_bound = Rat(0);
  std::vector<std::map<std::string, std::pair<SymMat, CycScalar>>> comp;  // by lambda index

  SplitFamily() {}
  SplitFamily(const FieldSpec& f, Int m_, std::vector<Int> k, Int eta_, const Rat& bound);

  void set(Int lam_index, const SymMat& T, const CycScalar& v);
  Int total_size() const;
  bool operator==(const SplitFamily& o) const;
};

// one theta monomial: e(Tr tr(zexp * z)) e(Tr t(wexp) w), coefficient 1
struct ThetaTerm {
  SymMat zexp;                     // x tr(x), quarter-integral entries
  std::vector<FieldElement> wexp;  // 2x, integral entries
};

// (N, r) -> (T, lambda) = (4N - r tr(r), r mod 2); the invariant key of a raw index
std::pair<SymMat, ResidueVector> normalize_jacobi_key(const SymMat& N,
                                                      const std::vector<FieldElement>& r);
// canonical raw representative of an invariant key; rejects keys violating the
// congruence T = -lambda tr(lambda) mod 4 L_m^*
std::pair<SymMat, std::vector<FieldElement>> denormalize_jacobi_key(const SymMat& T,
                                                                    const ResidueVector& lam);

// partition the coefficients of h by their support witness
SplitFamily split_plus(const Expansion& h);
// the coefficient-level correspondence (eta = -1): value at (T, witness(T)) is c(T)
JacobiExpansion jacobi_of_plus(const Expansion& h);
// inverse direction; DuplicateWitness if two keys share T with different lambda
Expansion plus_of_jacobi(const JacobiExpansion& g);
// multiply component lambda by theta_lambda and sum: pure reindexing on invariant keys
JacobiExpansion compose_theta(const SplitFamily& fam);

// all monomials of theta_lambda with Tr tr(x tr(x)) <= bound, x = p + lambda/2;
// completeness is certified by the integral-box enclosure of the embeddings
std::vector<ThetaTerm> theta_coeffs(const ResidueVector& lam, const Rat& bound);

// coefficient action of the unipotent operator: c(T) -> c(T) psi_1(tr(T S))
Expansion rho_usharp(const Expansion& h, const SymMat& S);
// coefficient action of m(A): c'(T') = det(A)^{-k-1/2} c(tA T' A); requires
// det(A) = 2^t u^2 so the scalar lives in the cyclotomic domain
Expansion rho_mA(const Expansion& h, const FMat& A);

}  // namespace kp

#endif
