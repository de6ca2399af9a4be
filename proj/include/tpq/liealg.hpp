#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tpq/geom.hpp"
#include "tpq/scalar.hpp"

namespace tpq {

/// Finite-dimensional real Lie algebra given by structure constants
/// [e_i, e_j] = sum_k c^k_ij e_k. Antisymmetry and Jacobi are verified on
/// construction.
class LieAlgebraModel {
 public:
  /// `brackets[{i, j}]` for i < j; missing pairs commute.
  LieAlgebraModel(std::vector<std::string> names,
                  const std::map<std::pair<int, int>, std::vector<Rational>>& brackets);

  int dim() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> index(std::string_view name) const;
  /// [e_i, e_j] as a coefficient vector.
  const std::vector<Rational>& bracket(int i, int j) const { return c_[i][j]; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::vector<Rational>>> c_;
};

/// Span of the elementary matrices e_ab (a in rows, b in cols, 1-based)
/// inside gl(N), ordered row-major. Throws if the span is not closed.
LieAlgebraModel build_gl_subalgebra(const std::vector<int>& rows, const std::vector<int>& cols);

/// Element of the exterior algebra of the Lie algebra (contravariant) or of
/// its dual (covariant), with exact rational coefficients.
template <Variance V>
class AlgAntisym {
 public:
  AlgAntisym() = default;
  AlgAntisym(int dim, int grade);
  static AlgAntisym basis(int dim, std::vector<int> indices);
  static AlgAntisym scalar(int dim, const Rational& value);

  int dim() const { return dim_; }
  int grade() const { return grade_; }
  const std::map<IndexMask, Rational>& components() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }
  Rational at(IndexMask m) const;
  void set(IndexMask m, const Rational& v);
  void add(IndexMask m, const Rational& v);

  AlgAntisym operator-() const;
  AlgAntisym& operator+=(const AlgAntisym& o);
  AlgAntisym& operator-=(const AlgAntisym& o) { return *this += -o; }
  friend AlgAntisym operator+(AlgAntisym a, const AlgAntisym& b) { return a += b; }
  friend AlgAntisym operator-(AlgAntisym a, const AlgAntisym& b) { return a -= b; }
  friend bool operator==(const AlgAntisym& a, const AlgAntisym& b) {
    if (a.comps_.empty() && b.comps_.empty()) return true;
    return a.grade_ == b.grade_ && a.dim_ == b.dim_ && a.comps_ == b.comps_;
  }
  AlgAntisym scaled(const Rational& q) const;

  /// "-e11^e12 + 2*e13^e23" using the given basis names (with a trailing
  /// '*' on dual names).
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  int dim_ = 0;
  int grade_ = 0;
  std::map<IndexMask, Rational> comps_;
};

using AlgMultiVector = AlgAntisym<Variance::Contravariant>;
using AlgForm = AlgAntisym<Variance::Covariant>;

extern template class AlgAntisym<Variance::Contravariant>;
extern template class AlgAntisym<Variance::Covariant>;

AlgMultiVector alg_wedge(const AlgMultiVector& a, const AlgMultiVector& b);
AlgForm alg_wedge(const AlgForm& a, const AlgForm& b);
AlgForm alg_interior(const AlgMultiVector& x, const AlgForm& eta);
Rational alg_evaluate(const AlgMultiVector& p, const std::vector<AlgForm>& alphas);
Rational alg_evaluate(const AlgForm& eta, const std::vector<AlgMultiVector>& xs);
AlgMultiVector alg_sharp(const AlgMultiVector& r, const AlgForm& eta);

/// Chevalley-Eilenberg differential with trivial coefficients.
AlgForm ce_differential(const LieAlgebraModel& g, const AlgForm& xi);
/// Coadjoint Lie derivative L_x eta = i_x d eta + d i_x eta.
AlgForm alg_lie_derivative(const LieAlgebraModel& g, const AlgMultiVector& x, const AlgForm& eta);
AlgMultiVector algebraic_schouten(const LieAlgebraModel& g, const AlgMultiVector& p, const AlgMultiVector& q);

struct AlgTwistedCheck {
  AlgForm closed;
  AlgMultiVector structure;
  bool ok() const { return closed.is_zero() && structure.is_zero(); }
};
AlgTwistedCheck check_twisted_structure(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi);

std::vector<AlgForm> closed_two_forms(const LieAlgebraModel& g);

/// {a, b}^phi = L_{r#a} b - L_{r#b} a + phi(r#a, r#b, .); the exact term
/// d r(a, b) vanishes on constants.
AlgForm alg_twisted_bracket(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi, const AlgForm& a,
                            const AlgForm& b);
/// The twisted differential with the anchor terms dropped (the base is a point).
AlgMultiVector algebraic_del_phi(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi,
                                 const AlgMultiVector& p);

/// r + del_phi(Z) for Z = sum lambda_i e_i, as one linear expression per
/// component over parameters named "lambda" + basis suffix (e.g. lambda12).
struct SymbolicExpansion {
  ChartPtr parameters;
  std::map<IndexMask, Expr> components;
  std::string to_string(const std::vector<std::string>& names) const;
};
SymbolicExpansion prequantization_expansion(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi);

struct PrequantizationSolution {
  bool solvable = false;
  AlgMultiVector z;                    // witness
  AlgForm big_phi;                     // witness
  std::vector<Rational> certificate;   // functional on grade-2 components (mask order)
  std::vector<IndexMask> certificate_rows;
  std::vector<AlgForm> closed_basis;
};
PrequantizationSolution solve_prequantization(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi);

/// Checks a certificate: it annihilates every del_phi(e_i) and every
/// r#(Phi_j) but not r.
bool verify_certificate(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi,
                        const PrequantizationSolution& s);

/// Matrix of del_phi from grade k to grade k+1 in the mask bases.
std::vector<std::vector<Rational>> del_phi_matrix(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi,
                                                  int k);
int ltp_cohomology(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi, int k);

/// All masks of a given grade in increasing order.
std::vector<IndexMask> masks_of_grade(int dim, int grade);

namespace corpus {
/// The r-matrix type structure on span{e_ij : i <= 2, j <= 3}.
struct Example6 {
  LieAlgebraModel algebra;
  AlgMultiVector r;
  AlgForm phi;
};
Example6 example6();
}  // namespace corpus

}  // namespace tpq
