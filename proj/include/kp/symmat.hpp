#ifndef KP_SYMMAT_HPP
#define KP_SYMMAT_HPP

#include <optional>
#include <string>
#include <vector>

#include "kp/field.hpp"

namespace kp {

// dense matrix over the base field
struct FMat {
  FieldSpec F;
  Int rows = 0, cols = 0;
  std::vector<FieldElement> e;

  FMat() {}
  FMat(const FieldSpec& f, Int r, Int c)
      : F(f), rows(r), cols(c), e(size_t(r * c), FieldElement(f, Rat(0))) {}
  static FMat identity(const FieldSpec& f, Int n);
  static FMat scalar(const FieldSpec& f, Int n, const FieldElement& s);

  FieldElement& at(Int i, Int j) { return e[size_t(i * cols + j)]; }
  const FieldElement& at(Int i, Int j) const { return e[size_t(i * cols + j)]; }

  FMat operator*(const FMat& o) const;
  FMat operator+(const FMat& o) const;
  FMat operator-(const FMat& o) const;
  FMat operator-() const;
  FMat transpose() const;
  FMat scaled(const FieldElement& s) const;
  FieldElement det() const;
  FMat inverse() const;
  bool is_integral() const;
  bool operator==(const FMat& o) const { return F == o.F && rows == o.rows && cols == o.cols && e == o.e; }
  std::string str() const;
};

// symmetric m x m matrix; entry storage is full but symmetry is enforced
struct SymMat {
  FieldSpec F;
  Int m = 0;
  std::vector<FieldElement> e;

  SymMat() {}
  SymMat(const FieldSpec& f, Int m_)
      : F(f), m(m_), e(size_t(m_ * m_), FieldElement(f, Rat(0))) {}
  static SymMat from_mat(const FMat& a);

  FieldElement& at(Int i, Int j) { return e[size_t(i * m + j)]; }
  const FieldElement& at(Int i, Int j) const { return e[size_t(i * m + j)]; }
  void set(Int i, Int j, const FieldElement& x) { at(i, j) = x; at(j, i) = x; }

  SymMat operator+(const SymMat& o) const;
  SymMat operator-(const SymMat& o) const;
  SymMat scaled(const Rat& r) const;
  SymMat scaled_elt(const FieldElement& s) const;
  SymMat congruence(const FMat& a) const;  // tA * this * A
  FMat as_mat() const;

  FieldElement matrix_trace() const;
  Rat trace_down() const { return matrix_trace().trace(); }  // Tr_{F/Q} tr(T)

  // membership in L_m^*: integral diagonal, off-diagonal in (1/2) o_F
  bool is_half_integral() const;
  bool is_integral_sym() const;
  // membership in 4 L_m^*: diagonal in 4 o_F, off-diagonal in 2 o_F
  bool in_4Lstar() const;

  // every principal minor totally nonnegative, checked by exact sign tests
  bool is_totally_psd() const;
  // Sylvester: leading principal minors totally positive
  bool is_totally_pd() const;

  int cmp(const SymMat& o) const;
  bool operator==(const SymMat& o) const { return cmp(o) == 0; }
  std::string key() const;
};

// class of lambda in (o/2o)^m, stored by the canonical lift with coordinates in {0,1}
struct ResidueVector {
  FieldSpec F;
  std::vector<FieldElement> v;

  ResidueVector() {}
  ResidueVector(const FieldSpec& f, Int m) : F(f), v(size_t(m), FieldElement(f, Rat(0))) {}
  Int m() const { return Int(v.size()); }
  SymMat outer() const;  // lambda * lambda^t
  Int index() const;     // canonical position among all 2^{m deg} classes
  static ResidueVector from_index(const FieldSpec& f, Int m, Int idx);
  static ResidueVector reduce(const std::vector<FieldElement>& x);  // mod 2o, per entry
  bool operator==(const ResidueVector& o) const { return F == o.F && v == o.v; }
  std::string key() const;
};

inline Int residue_class_count(const FieldSpec& F, Int m) {
  return Int(1) << (m * F.degree());
}

// all lambda with eta^{-1} T - lambda lambda^t in 4 L_m^*; the plus-space support
// condition admits at most one class, which the scan verifies
std::vector<ResidueVector> plus_support_witnesses(const SymMat& T, const FieldElement& eta);
std::optional<ResidueVector> plus_support_witness(const SymMat& T, const FieldElement& eta);

// all totally psd T in L_m^* with Tr_{F/Q}(tr T) <= bound, canonical order; m <= 2
std::vector<SymMat> enumerate_psd(const FieldSpec& F, Int m, Int bound);

}  // namespace kp

#endif
