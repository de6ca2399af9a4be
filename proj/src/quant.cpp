#include "tpq/quant.hpp"

#include "tpq/linalg.hpp"

namespace tpq {

namespace {

std::vector<GaussRat> constant_row(const Form& a, int n) {
  if (a.grade() != 1 && !a.is_zero()) throw Error("polarization generators must be 1-forms");
  std::vector<GaussRat> row(n, GaussRat(0));
  for (const auto& [m, e] : a.components()) {
    auto c = e.constant_value();
    if (!c) throw Error("complement not constant-coefficient");
    row[std::countr_zero(m)] = *c;
  }
  return row;
}

bool all_zero(const std::vector<Expr>& v) {
  for (const auto& e : v) {
    if (!e.is_zero()) return false;
  }
  return true;
}

}  // namespace

Polarization::Polarization(TwistedPoissonStructure structure, std::vector<Form> generators,
                           std::vector<Form> complement)
    : Polarization(std::move(structure), std::move(generators), std::move(complement), true) {}

Polarization Polarization::unchecked(TwistedPoissonStructure structure, std::vector<Form> generators,
                                     std::vector<Form> complement) {
  return Polarization(std::move(structure), std::move(generators), std::move(complement), false);
}

Polarization::Polarization(TwistedPoissonStructure structure, std::vector<Form> generators,
                           std::vector<Form> complement, bool check)
    : s_(std::move(structure)), gens_(std::move(generators)), comp_(std::move(complement)) {
  const auto& chart = s_.chart();
  for (const auto& g : gens_) {
    require_same_chart(chart, g.chart());
    if (g.grade() != 1) throw Error("polarization generators must be 1-forms");
  }
  for (const auto& c : comp_) require_same_chart(chart, c.chart());
  if (check) {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      for (std::size_t j = i + 1; j < gens_.size(); ++j) {
        if (!evaluate(s_.lambda(), {gens_[i], gens_[j]}).is_zero()) {
          throw Error("polarization is not isotropic: Lambda(a" + std::to_string(i + 1) + ", a" +
                      std::to_string(j + 1) + ") != 0");
        }
      }
    }
  }
}

std::vector<Expr> Polarization::complement_part(const Form& gamma) const {
  const auto& chart = s_.chart();
  const int n = chart->dim();
  if (inverse_.empty()) {
    // coframe rows; complete with coordinate coforms when no complement given
    Matrix<GaussRat> rows;
    for (const auto& g : gens_) rows.push_back(constant_row(g, n));
    auto comp = comp_;
    if (comp.empty()) {
      for (int i = 0; i < n && static_cast<int>(rows.size()) < n; ++i) {
        auto candidate = rows;
        candidate.push_back(constant_row(Form::basis(chart, {i}), n));
        if (rank(candidate) == candidate.size()) {
          rows = std::move(candidate);
          comp.push_back(Form::basis(chart, {i}));
        }
      }
      const_cast<Polarization*>(this)->comp_ = comp;
    } else {
      for (const auto& c : comp) rows.push_back(constant_row(c, n));
    }
    if (static_cast<int>(rows.size()) != n || rank(rows) != static_cast<std::size_t>(n)) {
      throw Error("generators and complement do not form a coframe");
    }
    // gamma = sum_k c_k row_k, so c = gamma * rows^-1
    Matrix<GaussRat> aug = zero_matrix<GaussRat>(n, 2 * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) aug[i][j] = rows[i][j];
      aug[i][n + i] = GaussRat(1);
    }
    rref(aug);
    auto inv = zero_matrix<GaussRat>(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    }
    const_cast<Polarization*>(this)->inverse_ = std::move(inv);
  }
  const int ng = static_cast<int>(gens_.size());
  std::vector<Expr> out(n - ng);
  for (const auto& [m, e] : gamma.components()) {
    const int j = std::countr_zero(m);
    for (int k = ng; k < n; ++k) {
      const GaussRat& w = inverse_[j][k];
      if (!w.is_zero()) out[k - ng] += e.scaled(w);
    }
  }
  return out;
}

bool PolarizationCheck::ok() const { return all_zero(isotropy) && all_zero(closure); }

PolarizationCheck check_polarization(const Polarization& p) {
  PolarizationCheck out;
  const auto& g = p.generators();
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      out.isotropy.push_back(evaluate(p.structure().lambda(), {g[i], g[j]}));
      auto part = p.complement_part(twisted_bracket(p.structure(), g[i], g[j]));
      out.closure.insert(out.closure.end(), part.begin(), part.end());
    }
  }
  return out;
}

std::vector<Expr> membership_residual(const Polarization& p, const Form& gamma) {
  std::vector<Expr> out;
  const auto& chart = p.structure().chart();
  Form g = gamma.chart() ? gamma : Form(chart, 1);
  for (const auto& a : p.generators()) {
    auto part = p.complement_part(g.is_zero() ? Form(chart, 1) : twisted_bracket(p.structure(), g, a));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

PairCheck quantizable_pair_check(const Polarization& p, const Expr& g1, const Expr& g2) {
  PairCheck out;
  const auto& s = p.structure();
  const auto& chart = s.chart();
  if (g1 == g2) {
    out.status = PairCheck::Status::Diagonal;
    out.message = "diagonal pair (g1 = g2) is excluded";
    return out;
  }
  Form dg1 = differential(chart, g1), dg2 = differential(chart, g2);
  if (!all_zero(membership_residual(p, dg1))) {
    out.status = PairCheck::Status::NotInP;
    out.message = "g1 is not in P(P)";
    return out;
  }
  if (!all_zero(membership_residual(p, dg2))) {
    out.status = PairCheck::Status::NotInP;
    out.message = "g2 is not in P(P)";
    return out;
  }
  Form inner = contract_two(s.phi(), sharp(s.lambda(), dg1), sharp(s.lambda(), dg2));
  out.residuals = membership_residual(p, inner);
  if (!all_zero(out.residuals)) {
    out.status = PairCheck::Status::Residual;
    out.message = "{phi(L#dg1, L#dg2, .), a}^phi leaves the polarization";
  }
  return out;
}

Expr half_density_lie(const MultiVector& x, const HalfDensitySection& chi) {
  return apply_vector(x, chi) + (chi * divergence(x)).scaled(GaussRat(Rational(1, 2)));
}

Expr density_lie(const MultiVector& x, const Expr& delta) { return apply_vector(x, delta) + delta * divergence(x); }

HalfDensitySection half_density_D(const LineBundleModel& b, const Form& alpha, const HalfDensitySection& chi) {
  MultiVector y = sharp(b.lambda(), alpha);
  return b.D(alpha, chi) + (chi * divergence(y)).scaled(GaussRat(Rational(1, 2)));
}

HalfDensitySection quantum_operator(const LineBundleModel& b, const Expr& g, const HalfDensitySection& chi) {
  return half_density_D(b, differential(b.chart(), g), chi) + two_pi_i() * g * chi;
}

Expr commutation_residual(const LineBundleModel& b, const Form& alpha, const Expr& g,
                          const HalfDensitySection& chi) {
  Form dg = differential(b.chart(), g);
  return half_density_D(b, alpha, quantum_operator(b, g, chi)) - quantum_operator(b, g, half_density_D(b, alpha, chi)) +
         half_density_D(b, twisted_bracket(b.structure(), dg, alpha), chi);
}

Expr half_density_homomorphism_residual(const LineBundleModel& b, const Expr& f, const Expr& g,
                                        const HalfDensitySection& chi) {
  const auto& s = b.structure();
  const auto& chart = b.chart();
  Expr fg = function_bracket(s, f, g);
  Expr comm = quantum_operator(b, f, quantum_operator(b, g, chi)) - quantum_operator(b, g, quantum_operator(b, f, chi));
  if (!s.phi().is_zero()) {
    Form twist = contract_two(s.phi(), sharp(s.lambda(), differential(chart, f)),
                              sharp(s.lambda(), differential(chart, g)));
    comm -= half_density_D(b, twist, chi);
  }
  return quantum_operator(b, fg, chi) - comm;
}

std::vector<Expr> h0_residuals(const LineBundleModel& b, const Polarization& p, const HalfDensitySection& chi) {
  std::vector<Expr> out;
  for (const auto& a : p.generators()) out.push_back(half_density_D(b, a, chi));
  return out;
}

Expr inner_product_integrand(const ChartSignature& sig, const HalfDensitySection& chi1,
                             const HalfDensitySection& chi2) {
  return chi1 * chi2.conjugate(sig);
}

}  // namespace tpq
