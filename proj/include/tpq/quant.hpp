#pragma once

#include <string>
#include <vector>

#include "tpq/prequant.hpp"

namespace tpq {

/// Span of complex 1-forms, isotropic for Lambda. Membership questions are
/// answered against a complement: generators + complement must be a
/// constant-coefficient coframe. Without an explicit complement, coordinate
/// coforms are added greedily (constant generators only).
class Polarization {
 public:
  /// Throws Error unless Lambda(a_i, a_j) = 0 for all generator pairs.
  Polarization(TwistedPoissonStructure structure, std::vector<Form> generators, std::vector<Form> complement = {});
  static Polarization unchecked(TwistedPoissonStructure structure, std::vector<Form> generators,
                                std::vector<Form> complement = {});

  const TwistedPoissonStructure& structure() const { return s_; }
  const std::vector<Form>& generators() const { return gens_; }
  const std::vector<Form>& complement() const { return comp_; }

  /// Coefficients of a 1-form along the complement in the coframe
  /// generators + complement.
  std::vector<Expr> complement_part(const Form& gamma) const;

 private:
  Polarization(TwistedPoissonStructure structure, std::vector<Form> generators, std::vector<Form> complement,
               bool check);
  TwistedPoissonStructure s_;
  std::vector<Form> gens_;
  std::vector<Form> comp_;
  std::vector<std::vector<GaussRat>> inverse_;  // coframe -> coordinate inverse
};

struct PolarizationCheck {
  std::vector<Expr> isotropy;  // Lambda(a_i, a_j), i < j
  std::vector<Expr> closure;   // complement parts of {a_i, a_j}^phi, i < j
  bool ok() const;
};
PolarizationCheck check_polarization(const Polarization& p);

/// Complement parts of {gamma, a}^phi for every generator a, concatenated
/// generator by generator.
std::vector<Expr> membership_residual(const Polarization& p, const Form& gamma);

struct PairCheck {
  enum class Status { Ok, Residual, Diagonal, NotInP };
  Status status = Status::Ok;
  std::string message;
  std::vector<Expr> residuals;
  bool ok() const { return status == Status::Ok; }
};
/// Tests whether (g1, g2) belongs to the pair set defining the quantizable
/// observables: both in P(P), distinct, and {phi(L#dg1, L#dg2, .), a}^phi in P.
PairCheck quantizable_pair_check(const Polarization& p, const Expr& g1, const Expr& g2);

/// Half-density sections are written 1 (x) chi beta against a fixed
/// coordinate half-density beta; only chi is stored.
using HalfDensitySection = Expr;

/// L_X(chi beta) = (X chi + chi/2 div X) beta.
Expr half_density_lie(const MultiVector& x, const HalfDensitySection& chi);
/// L_X(delta v) = (X delta + delta div X) v for a 1-density.
Expr density_lie(const MultiVector& x, const Expr& delta);

/// D_a(1 (x) chi beta) = (D_a chi + chi/2 div L#(a)) beta.
HalfDensitySection half_density_D(const LineBundleModel& b, const Form& alpha, const HalfDensitySection& chi);
/// ghat on half-density sections: half_density_D(dg) + 2 pi i g chi.
HalfDensitySection quantum_operator(const LineBundleModel& b, const Expr& g, const HalfDensitySection& chi);

/// D_a(ghat s) - ghat(D_a s) + D_{{dg, a}^phi} s.
Expr commutation_residual(const LineBundleModel& b, const Form& alpha, const Expr& g, const HalfDensitySection& chi);
/// widehat{f,g} s - [fhat, ghat]^phi s on half-density sections.
Expr half_density_homomorphism_residual(const LineBundleModel& b, const Expr& f, const Expr& g,
                                        const HalfDensitySection& chi);
/// D_a(chi) for every generator a; all zero iff the section lies in H0.
std::vector<Expr> h0_residuals(const LineBundleModel& b, const Polarization& p, const HalfDensitySection& chi);
/// chi1 conj(chi2), the integrand of the inner product against v.
Expr inner_product_integrand(const ChartSignature& sig, const HalfDensitySection& chi1,
                             const HalfDensitySection& chi2);

}  // namespace tpq
