#pragma once

#include "tpq/geom.hpp"

namespace tpq {

/// 2*pi*i as an exact expression.
Expr two_pi_i();

/// Trivial complex line bundle over one chart with unit section 1, a
/// connection nabla_Y s = Y(s) + <omega, Y> s and the contravariant
/// derivative D_a s = nabla_{L#a} s + 2 pi i <a, Z> s. Sections are Exprs.
class LineBundleModel {
 public:
  /// Zero (default-constructed) omega or z mean "absent". Throws if omega is
  /// not purely imaginary or z is not real.
  LineBundleModel(TwistedPoissonStructure structure, Form omega = {}, MultiVector z = {});
  /// No reality checks; for non-Hermitian experiments.
  static LineBundleModel general(TwistedPoissonStructure structure, Form omega, MultiVector z);

  const TwistedPoissonStructure& structure() const { return s_; }
  const ChartPtr& chart() const { return s_.chart(); }
  const MultiVector& lambda() const { return s_.lambda(); }
  const Form& omega() const { return omega_; }
  const MultiVector& z() const { return z_; }

  /// D_alpha s.
  Expr D(const Form& alpha, const Expr& s) const;
  /// X with D_alpha 1 = <alpha, X>, i.e. -L#(omega) + 2 pi i Z.
  MultiVector local_field() const;

 private:
  LineBundleModel(TwistedPoissonStructure structure, Form omega, MultiVector z, bool check);
  TwistedPoissonStructure s_;
  Form omega_;
  MultiVector z_;
};

/// C_D(a, b) s = D_a D_b s - D_b D_a s - D_{{a,b}^phi} s.
Expr curvature(const LineBundleModel& b, const Form& alpha, const Form& beta, const Expr& s);
/// The same with the untwisted Koszul bracket.
Expr koszul_curvature(const LineBundleModel& b, const Form& alpha, const Form& beta, const Expr& s);

/// Pi = del_phi(X) for the local field X.
MultiVector pi_bivector(const LineBundleModel& b);

struct PrequantizationCheck {
  Form closed;            // d Phi
  MultiVector residual;   // Lambda + del_phi Z - Lambda#(Phi)
  bool ok() const { return closed.is_zero() && residual.is_zero(); }
  // integrality of [Phi] is never decided
  static constexpr const char* integrality = "assumed";
};
PrequantizationCheck check_prequantization(const TwistedPoissonStructure& s, const MultiVector& z,
                                           const Form& big_phi);

/// fhat(s) = D_{df} s + 2 pi i f s.
Expr fhat_apply(const LineBundleModel& b, const Expr& f, const Expr& s);
/// [fhat, ghat](s) - D_{phi(L#df, L#dg, .)} s.
Expr twisted_commutator(const LineBundleModel& b, const Expr& f, const Expr& g, const Expr& s);
/// widehat{f,g}(s) - [fhat, ghat]^phi(s).
Expr homomorphism_residual(const LineBundleModel& b, const Expr& f, const Expr& g, const Expr& s);
/// (C_D(df, dg) + 2 pi i {f, g}) s.
Expr curvature_condition_residual(const LineBundleModel& b, const Expr& f, const Expr& g, const Expr& s);
/// L#(a)(s1 conj(s2)) - (D_a s1) conj(s2) - s1 conj(D_a s2).
Expr hermitian_defect(const LineBundleModel& b, const Form& alpha, const Expr& s1, const Expr& s2);

}  // namespace tpq
