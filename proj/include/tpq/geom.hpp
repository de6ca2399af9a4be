#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tpq/expr.hpp"

namespace tpq {

enum class Variance { Contravariant, Covariant };

/// Index set of a component, one bit per coordinate.
using IndexMask = std::uint32_t;

std::vector<int> mask_indices(IndexMask m);
IndexMask indices_mask(const std::vector<int>& strictly_increasing);
int mask_grade(IndexMask m);
/// Sign of the product e_A e_B in the exterior algebra, 0 if A and B overlap.
int wedge_sign(IndexMask a, IndexMask b);
/// "1,2,5" (1-based).
std::string mask_key(IndexMask m);

/// Grade-k antisymmetric tensor on a chart with Expr coefficients, stored
/// sparsely by index set. Absent components are zero.
template <Variance V>
class Antisym {
 public:
  Antisym() = default;
  Antisym(ChartPtr chart, int grade);

  static Antisym scalar(ChartPtr chart, Expr value);
  /// The basis element for `indices` (any order; sign from sorting, zero on repeats).
  static Antisym basis(ChartPtr chart, std::vector<int> indices);

  const ChartPtr& chart() const { return chart_; }
  const ChartSignature& sig() const { return *chart_; }
  int grade() const { return grade_; }
  int dim() const { return chart_->dim(); }
  const std::map<IndexMask, Expr>& components() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }

  Expr at(IndexMask m) const;
  Expr at(const std::vector<int>& strictly_increasing) const { return at(indices_mask(strictly_increasing)); }
  /// Component of a grade-0 object.
  Expr value() const { return at(IndexMask{0}); }
  void set(IndexMask m, Expr e);
  void add(IndexMask m, const Expr& e);

  Antisym operator-() const;
  Antisym& operator+=(const Antisym& o);
  Antisym& operator-=(const Antisym& o);
  friend Antisym operator+(Antisym a, const Antisym& b) { return a += b; }
  friend Antisym operator-(Antisym a, const Antisym& b) { return a -= b; }
  friend bool operator==(const Antisym& a, const Antisym& b) {
    // zero objects compare equal whatever their nominal grade
    if (a.comps_.empty() && b.comps_.empty()) return true;
    return a.grade_ == b.grade_ && same_chart(a.chart_, b.chart_) && a.comps_ == b.comps_;
  }

  Antisym times(const Expr& f) const;
  Antisym map(const std::function<Expr(const Expr&)>& fn) const;
  Antisym conjugate() const;

  /// "{1,2: expr; 3,4: expr}", keys 1-based.
  std::string to_string() const;

 private:
  ChartPtr chart_;
  int grade_ = 0;
  std::map<IndexMask, Expr> comps_;
};

using MultiVector = Antisym<Variance::Contravariant>;
using Form = Antisym<Variance::Covariant>;

extern template class Antisym<Variance::Contravariant>;
extern template class Antisym<Variance::Covariant>;

MultiVector vector_field(ChartPtr chart, const std::vector<Expr>& components);
Form one_form(ChartPtr chart, const std::vector<Expr>& components);

MultiVector wedge(const MultiVector& a, const MultiVector& b);
Form wedge(const Form& a, const Form& b);

Form exterior_derivative(const Form& eta);
Form differential(const ChartPtr& chart, const Expr& f);

/// Pairing of a 1-form with a vector field.
Expr pairing(const Form& alpha, const MultiVector& x);
/// X(f) for a vector field X.
Expr apply_vector(const MultiVector& x, const Expr& f);
/// P(a_1, ..., a_k) with the determinant convention.
Expr evaluate(const MultiVector& p, const std::vector<Form>& alphas);
/// eta(X_1, ..., X_k) with the determinant convention.
Expr evaluate(const Form& eta, const std::vector<MultiVector>& xs);

/// Lambda^sharp on forms of any grade; grade 1 satisfies
/// <beta, sharp(alpha)> = Lambda(alpha, beta).
MultiVector sharp(const MultiVector& lambda, const Form& eta);

Form interior_product(const MultiVector& x, const Form& eta);
/// phi(X, Y, .) as a 1-form.
Form contract_two(const Form& phi, const MultiVector& x, const MultiVector& y);

MultiVector schouten_bracket(const MultiVector& p, const MultiVector& q);
Form lie_derivative(const MultiVector& x, const Form& eta);

Form koszul_bracket(const MultiVector& lambda, const Form& alpha, const Form& beta);

Expr divergence(const MultiVector& x);

/// Bivector Lambda0 with i(Lambda0^sharp alpha) omega0 = -alpha, for a
/// 2-form with constant coefficients, nondegenerate on the coordinates
/// `coords` (all coordinates when empty).
MultiVector bivector_from_symplectic(const Form& omega0, std::vector<int> coords = {});

struct TwistedPoissonCheck {
  Form closed;         // d phi
  MultiVector structure;  // 1/2 [L, L] - L^sharp(phi)
  bool ok() const { return closed.is_zero() && structure.is_zero(); }
};

TwistedPoissonCheck check_twisted_poisson(const MultiVector& lambda, const Form& phi);

class TwistedPoissonStructure {
 public:
  /// Throws Error unless (lambda, phi) passes check_twisted_poisson.
  TwistedPoissonStructure(MultiVector lambda, Form phi);
  /// Skips the check; for negative tests and for reporting residuals.
  static TwistedPoissonStructure unchecked(MultiVector lambda, Form phi);

  const MultiVector& lambda() const { return lambda_; }
  const Form& phi() const { return phi_; }
  const ChartPtr& chart() const { return lambda_.chart(); }
  bool verified() const { return verified_; }

 private:
  TwistedPoissonStructure() = default;
  MultiVector lambda_;
  Form phi_;
  bool verified_ = false;
};

Form twisted_bracket(const TwistedPoissonStructure& s, const Form& alpha, const Form& beta);
MultiVector del_phi(const TwistedPoissonStructure& s, const MultiVector& p);

MultiVector hamiltonian_vector(const MultiVector& lambda, const Expr& f);
Expr function_bracket(const TwistedPoissonStructure& s, const Expr& f, const Expr& g);
Expr jacobiator(const TwistedPoissonStructure& s, const Expr& f, const Expr& g, const Expr& h);

void require_same_chart(const ChartPtr& a, const ChartPtr& b);

}  // namespace tpq
