#ifndef KP_WEIL_HPP
#define KP_WEIL_HPP

#include <string>
#include <vector>

#include "kp/schwartz.hpp"

namespace kp {

using RepMatrix = std::vector<std::vector<CycScalar>>;

RepMatrix cyc_mat_id(Int d);
RepMatrix cyc_mat_mul(const RepMatrix& x, const RepMatrix& y);
// inverse of a unitary matrix
RepMatrix cyc_mat_conj_transpose(const RepMatrix& x);
bool cyc_mat_eq(const RepMatrix& x, const RepMatrix& y);
bool cyc_mat_unitary(const RepMatrix& x);
// canonical serialization, used to deduplicate group elements
std::string cyc_mat_key(const RepMatrix& x);

// matrix of the word on the level-i invariant space, columns indexed by
// level_indices; CheckError("NotInGroup") when the underlying matrix does not
// preserve that space's congruence group
RepMatrix level_matrix(const LocalFieldSpec& K, Int m, const GeneratorWord& word, Int i);

// closed-form level-i matrix of the lower-unipotent u-flat(delta S), S
// integral symmetric, with the fourth-root prefactor omitted:
//   q^{m(i-e)} sum_nu psi(pi^i tnu lam/2delta - pi^{2i} tnu S nu/4delta
//                         - pi^i tnu mu/2delta)
RepMatrix uflat_gauss_matrix(const LocalFieldSpec& K, Int m, const LocalMatData& S, Int i);
// the scalar xi with level_matrix(uflat(delta S)) = xi * uflat_gauss_matrix;
// asserts xi^8 = 1, CheckError("GaussContractViolation") if no such scalar
CycScalar uflat_gauss_defect(const LocalFieldSpec& K, Int m, const LocalMatData& S, Int i);

// character value on the base vector: omega(word) Phi_0 = epsilon^{-1} Phi_0.
// top_level false: level-0 vector, word must lie in the level-4 congruence
// group; true: level-e vector, word must lie in the deepest principal group.
// CheckError("NotEigenvector") when Phi_0 is not an eigenvector of the word.
CycScalar epsilon_char(const LocalFieldSpec& K, Int m, const GeneratorWord& word, bool top_level);
// the two characters agree after conjugating by the doubling torus element
bool check_char_relation(const LocalFieldSpec& K, Int m, const GeneratorWord& word);

// matrix coefficient of the base vector against the level-0 structure:
// q^{me} (Phi_0, omega(word) Phi_0) on the level-1 group, 0 elsewhere
CycScalar ek_value(const LocalFieldSpec& K, Int m, const GeneratorWord& word);
// the conjugated coefficient, supported on the conjugate group; realized with
// u = omega(w_{2 delta I}) Phi_0 so no inverse lift is ever needed
CycScalar Ek_value(const LocalFieldSpec& K, Int m, const GeneratorWord& word);

// single-token words generating the level-i congruence group's image
std::vector<GeneratorWord> gamma_generator_words(const LocalFieldSpec& K, Int m, Int i);

// multiplicative closure of unitary matrices, sorted by canonical key;
// CheckError("CapExceeded") past the element cap
std::vector<RepMatrix> group_closure(const std::vector<RepMatrix>& gens, Int cap);

// (f1 * f2)(g) = |G|^{-1} sum_h f1(g h^{-1}) f2(h), vectors indexed like G
std::vector<CycScalar> hecke_convolve(const std::vector<RepMatrix>& G,
                                      const std::vector<CycScalar>& f1,
                                      const std::vector<CycScalar>& f2);
// scale * conj(entry(0,0)) per element: the idempotent as a vector on G
std::vector<CycScalar> idempotent_vector(const std::vector<RepMatrix>& G, Int scale);

// dimension of { X : X g = g X for all generators }
Int commutant_dim(const std::vector<RepMatrix>& gens);

// coefficient identities tying consecutive level spaces together: the
// diagonal-averaging identity is checked exactly, the lower-unipotent identity
// up to one eighth root of unity shared across all indices
bool key_lemma_verify(const LocalFieldSpec& K, Int m, Int i, const LocalMatData& S);

}  // namespace kp

#endif
