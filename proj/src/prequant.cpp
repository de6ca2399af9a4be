#include "tpq/prequant.hpp"

namespace tpq {

Expr two_pi_i() { return Expr::pi().scaled(GaussRat(Rational(0), Rational(2))); }

LineBundleModel::LineBundleModel(TwistedPoissonStructure structure, Form omega, MultiVector z)
    : LineBundleModel(std::move(structure), std::move(omega), std::move(z), true) {}

LineBundleModel LineBundleModel::general(TwistedPoissonStructure structure, Form omega, MultiVector z) {
  return LineBundleModel(std::move(structure), std::move(omega), std::move(z), false);
}

LineBundleModel::LineBundleModel(TwistedPoissonStructure structure, Form omega, MultiVector z, bool check)
    : s_(std::move(structure)), omega_(std::move(omega)), z_(std::move(z)) {
  const auto& chart = s_.chart();
  if (!omega_.chart()) omega_ = Form(chart, 1);
  if (!z_.chart()) z_ = MultiVector(chart, 1);
  require_same_chart(chart, omega_.chart());
  require_same_chart(chart, z_.chart());
  if (!omega_.is_zero() && omega_.grade() != 1) throw Error("connection form must be a 1-form");
  if (!z_.is_zero() && z_.grade() != 1) throw Error("Z must be a vector field");
  if (check) {
    if (!(omega_.conjugate() == -omega_)) throw Error("connection form is not purely imaginary");
    if (!(z_.conjugate() == z_)) throw Error("Z is not real");
  }
}

Expr LineBundleModel::D(const Form& alpha, const Expr& s) const {
  require_same_chart(chart(), alpha.chart());
  MultiVector y = sharp(lambda(), alpha);
  Expr out = apply_vector(y, s);
  Expr coef = pairing(omega_, y) + pairing(alpha, z_) * two_pi_i();
  if (!coef.is_zero()) out += coef * s;
  return out;
}

MultiVector LineBundleModel::local_field() const {
  return z_.times(two_pi_i()) - sharp(lambda(), omega_);
}

namespace {

Expr curvature_with(const LineBundleModel& b, const Form& alpha, const Form& beta, const Expr& s,
                    const Form& bracket) {
  return b.D(alpha, b.D(beta, s)) - b.D(beta, b.D(alpha, s)) - b.D(bracket, s);
}

}  // namespace

Expr curvature(const LineBundleModel& b, const Form& alpha, const Form& beta, const Expr& s) {
  return curvature_with(b, alpha, beta, s, twisted_bracket(b.structure(), alpha, beta));
}

Expr koszul_curvature(const LineBundleModel& b, const Form& alpha, const Form& beta, const Expr& s) {
  return curvature_with(b, alpha, beta, s, koszul_bracket(b.lambda(), alpha, beta));
}

MultiVector pi_bivector(const LineBundleModel& b) { return del_phi(b.structure(), b.local_field()); }

PrequantizationCheck check_prequantization(const TwistedPoissonStructure& s, const MultiVector& z,
                                           const Form& big_phi) {
  require_same_chart(s.chart(), z.chart());
  require_same_chart(s.chart(), big_phi.chart());
  if (!z.is_zero() && z.grade() != 1) throw Error("Z must be a vector field");
  if (!big_phi.is_zero() && big_phi.grade() != 2) throw Error("Phi must be a 2-form");
  PrequantizationCheck out;
  out.closed = exterior_derivative(big_phi);
  MultiVector dz = z.is_zero() ? MultiVector(s.chart(), 2) : del_phi(s, z);
  out.residual = s.lambda() + dz - sharp(s.lambda(), big_phi);
  return out;
}

Expr fhat_apply(const LineBundleModel& b, const Expr& f, const Expr& s) {
  return b.D(differential(b.chart(), f), s) + two_pi_i() * f * s;
}

Expr twisted_commutator(const LineBundleModel& b, const Expr& f, const Expr& g, const Expr& s) {
  const auto& chart = b.chart();
  Expr comm = fhat_apply(b, f, fhat_apply(b, g, s)) - fhat_apply(b, g, fhat_apply(b, f, s));
  const Form& phi = b.structure().phi();
  if (phi.is_zero()) return comm;
  Form twist = contract_two(phi, sharp(b.lambda(), differential(chart, f)),
                           sharp(b.lambda(), differential(chart, g)));
  return comm - b.D(twist, s);
}

Expr homomorphism_residual(const LineBundleModel& b, const Expr& f, const Expr& g, const Expr& s) {
  Expr fg = function_bracket(b.structure(), f, g);
  return fhat_apply(b, fg, s) - twisted_commutator(b, f, g, s);
}

Expr curvature_condition_residual(const LineBundleModel& b, const Expr& f, const Expr& g, const Expr& s) {
  const auto& chart = b.chart();
  Expr c = curvature(b, differential(chart, f), differential(chart, g), s);
  return c + two_pi_i() * function_bracket(b.structure(), f, g) * s;
}

Expr hermitian_defect(const LineBundleModel& b, const Form& alpha, const Expr& s1, const Expr& s2) {
  const auto& sig = *b.chart();
  MultiVector y = sharp(b.lambda(), alpha);
  Expr s2c = s2.conjugate(sig);
  return apply_vector(y, s1 * s2c) - b.D(alpha, s1) * s2c - s1 * b.D(alpha, s2).conjugate(sig);
}

}  // namespace tpq
