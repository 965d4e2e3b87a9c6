#ifndef KP_NUMEVAL_HPP
#define KP_NUMEVAL_HPP

#include "kp/expansions.hpp"
#include "kp/interval.hpp"

namespace kp {

// complex interval matrix; inversion and determinants are provided for m <= 2
struct CMat {
  Int m = 0;
  std::vector<CIval> e;

  CMat() {}
  CMat(Int m_, mpfr_prec_t prec) : m(m_), e(size_t(m_ * m_), CIval(prec)) {}
  CIval& at(Int i, Int j) { return e[size_t(i * m + j)]; }
  const CIval& at(Int i, Int j) const { return e[size_t(i * m + j)]; }

  CMat operator+(const CMat& o) const;
  CMat operator*(const CMat& o) const;
  CIval det() const;
  CMat inverse() const;
  CIval trace() const;
};

// A point of the product of Siegel half-spaces, one matrix per real embedding.
// sigma[j] is a certified positive rational lower bound for the least eigenvalue
// of Im z_j; every tail estimate rests on it.  w (when present) is real.
struct EvalPoint {
  Int m = 1, n = 1;
  std::vector<CMat> z;
  std::vector<std::vector<Ival>> w;
  std::vector<Rat> sigma;
};

EvalPoint rational_point(const FieldSpec& F, Int m, const std::vector<SymMat>& re,
                         const std::vector<SymMat>& im, const std::vector<std::vector<Rat>>& w,
                         mpfr_prec_t prec = 192);
// z_j = re_s I + i im_s I at every embedding, no w
EvalPoint scalar_point(const FieldSpec& F, Int m, const Rat& re_s, const Rat& im_s,
                       mpfr_prec_t prec = 192);

// finite sum over stored keys of c(T) e(Tr tr(exp_scale T z)); the container is
// the object, so no tail is attached
CIval eval_expansion(const Expansion& h, const EvalPoint& pt, const Rat& exp_scale,
                     mpfr_prec_t prec = 192);
CIval eval_split_component(const SplitFamily& fam, Int lam_index, const EvalPoint& pt,
                           mpfr_prec_t prec = 192);

// infinite series theta_lambda(z, w) with certified Gaussian tail below eps:
// terms with Tr tr(x t(x)) > B contribute at most e^{-pi sigma B} Theta^m, where
// Theta bounds the full one-coordinate sum; B grows until that bound clears eps
CIval eval_theta(const ResidueVector& lam, const EvalPoint& pt, double eps,
                 mpfr_prec_t prec = 192);

// sum over lambda of h_lambda(z) theta_lambda(z, w) from the invariant keys
CIval eval_jacobi(const JacobiExpansion& g, const EvalPoint& pt, double eps,
                  mpfr_prec_t prec = 192);

// symplectic element with m x m blocks over F
struct GroupMat {
  FMat a, b, c, d;
};

GroupMat group_identity(const FieldSpec& F, Int m);
GroupMat group_mul(const GroupMat& x, const GroupMat& y);
bool is_symplectic(const GroupMat& g);
// entry ideals: a, d integral, b in dd^{-1}, c in 4 dd; throws NotInGroup
void check_gamma0_4(const GroupMat& g);

// upper bound for |(theta(gz)/theta(z))^4 - prod_j det(c_j z_j + d_j)^2|
double theta_transform_residual(const GroupMat& g, const EvalPoint& pt, double eps,
                                mpfr_prec_t prec = 192);

}  // namespace kp

#endif
