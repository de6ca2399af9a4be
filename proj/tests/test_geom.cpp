#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "support.hpp"
#include "tpq/corpus.hpp"
#include "tpq/geom.hpp"

using namespace tpq;
using tpq::testing::ExprGen;

namespace {

ChartPtr chart3() { return make_chart({"x1", "x2", "x3"}); }
ChartPtr chart5() { return make_chart({"x1", "x2", "x3", "x4", "x5"}); }

// ---- independent oracles

// Value of a stored antisymmetric tensor on an ordered index tuple.
template <class T>
Expr tensor_entry(const T& a, const std::vector<int>& idx) {
  std::vector<int> sorted = idx;
  int sign = 1;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = 0; j + 1 < sorted.size() - i; ++j) {
      if (sorted[j] == sorted[j + 1]) return Expr();
      if (sorted[j] > sorted[j + 1]) {
        std::swap(sorted[j], sorted[j + 1]);
        sign = -sign;
      }
    }
  }
  for (std::size_t j = 0; j + 1 < sorted.size(); ++j) {
    if (sorted[j] == sorted[j + 1]) return Expr();
  }
  return a.at(indices_mask(sorted)).scaled(GaussRat(sign));
}

int permutation_sign(const std::vector<int>& p) {
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] > p[j]) s = -s;
    }
  }
  return s;
}

long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// (a ^ b)_J = 1/(p! q!) sum_sigma sgn(sigma) a(J_sigma[0..p)) b(J_sigma[p..)).
template <class T>
T wedge_oracle(const T& a, const T& b) {
  const int p = a.grade(), q = b.grade(), n = a.dim();
  T out(a.chart(), p + q);
  for (IndexMask m = 0; m < (IndexMask{1} << n); ++m) {
    if (mask_grade(m) != p + q) continue;
    auto idx = mask_indices(m);
    std::vector<int> perm(idx.size());
    std::iota(perm.begin(), perm.end(), 0);
    Expr total;
    do {
      std::vector<int> first, second;
      for (int k = 0; k < p; ++k) first.push_back(idx[perm[k]]);
      for (int k = p; k < p + q; ++k) second.push_back(idx[perm[k]]);
      total += (tensor_entry(a, first) * tensor_entry(b, second)).scaled(GaussRat(permutation_sign(perm)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.set(m, total.scaled(GaussRat(Rational(1, factorial(p) * factorial(q)))));
  }
  return out;
}

// Lie bracket of vector fields from the component formula.
MultiVector lie_bracket_oracle(const MultiVector& x, const MultiVector& y) {
  const auto& c = x.sig();
  std::vector<Expr> comps(c.dim());
  for (int b = 0; b < c.dim(); ++b) {
    for (int a = 0; a < c.dim(); ++a) {
      Expr xa = x.at(IndexMask{1} << a), ya = y.at(IndexMask{1} << a);
      comps[b] += xa * y.at(IndexMask{1} << b).differentiate(a, c) - ya * x.at(IndexMask{1} << b).differentiate(a, c);
    }
  }
  return vector_field(x.chart(), comps);
}

// Decomposes a multivector into monomials (P_I d_{i1}) ^ d_{i2} ^ ...
std::vector<std::vector<MultiVector>> decomposables(const MultiVector& p) {
  std::vector<std::vector<MultiVector>> out;
  for (const auto& [m, e] : p.components()) {
    auto idx = mask_indices(m);
    std::vector<MultiVector> vs;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      MultiVector v = MultiVector::basis(p.chart(), {idx[k]});
      vs.push_back(k == 0 ? v.times(e) : v);
    }
    out.push_back(std::move(vs));
  }
  return out;
}

MultiVector wedge_all(const ChartPtr& c, const std::vector<MultiVector>& vs, int skip) {
  MultiVector w = MultiVector::scalar(c, Expr(1));
  for (int k = 0; k < static_cast<int>(vs.size()); ++k) {
    if (k != skip) w = wedge(w, vs[k]);
  }
  return w;
}

// [X1^..^Xp, Y1^..^Yq] = sum (-1)^(i+j) [Xi,Yj] ^ X-hat ^ Y-hat, with the
// scalar cases [X1^..^Xp, g] = sum (-1)^(p-i) Xi(g) X-hat.
MultiVector schouten_oracle(const MultiVector& p, const MultiVector& q) {
  const auto& c = p.chart();
  const int pg = p.grade(), qg = q.grade();
  if (pg == 0 && qg == 0) return MultiVector(c, 0);
  if (pg == 0) {
    int s = ((qg - 1) % 2 == 0) ? -1 : 1;
    return schouten_oracle(q, p).times(Expr(s));
  }
  MultiVector out(c, pg + qg - 1);
  for (const auto& xs : decomposables(p)) {
    if (qg == 0) {
      for (int i = 0; i < pg; ++i) {
        Expr xg = apply_vector(xs[i], q.value());
        int s = ((pg - 1 - i) % 2 == 0) ? 1 : -1;
        out += wedge_all(c, xs, i).times(xg.scaled(GaussRat(s)));
      }
      continue;
    }
    for (const auto& ys : decomposables(q)) {
      for (int i = 0; i < pg; ++i) {
        for (int j = 0; j < qg; ++j) {
          MultiVector t = wedge(wedge(lie_bracket_oracle(xs[i], ys[j]), wedge_all(c, xs, i)), wedge_all(c, ys, j));
          out += ((i + j) % 2 == 0) ? t : -t;
        }
      }
    }
  }
  return out;
}

// The displayed alternating-sum formula for del_phi evaluated on 1-forms.
Expr del_phi_oracle(const TwistedPoissonStructure& s, const MultiVector& p, const std::vector<Form>& a) {
  const int k = p.grade();
  Expr total;
  for (int i = 0; i <= k; ++i) {
    std::vector<Form> rest;
    for (int m = 0; m <= k; ++m) {
      if (m != i) rest.push_back(a[m]);
    }
    Expr term = apply_vector(sharp(s.lambda(), a[i]), evaluate(p, rest));
    total += (i % 2 == 0) ? term : -term;
  }
  for (int i = 0; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) {
      std::vector<Form> args{twisted_bracket(s, a[i], a[j])};
      for (int m = 0; m <= k; ++m) {
        if (m != i && m != j) args.push_back(a[m]);
      }
      Expr term = evaluate(p, args);
      total += ((i + j) % 2 == 0) ? term : -term;
    }
  }
  return total;
}

// ---- examples

TEST(Geom, WedgeExamples) {
  auto c = chart3();
  EXPECT_EQ(wedge(Form::basis(c, {0}), Form::basis(c, {1})).components().at(indices_mask({0, 1})), Expr(1));
  EXPECT_TRUE(wedge(Form::basis(c, {0}), Form::basis(c, {0})).is_zero());
  EXPECT_EQ(Form::basis(c, {1, 0}), -Form::basis(c, {0, 1}));
}

TEST(Geom, WedgeWithOpaqueDifferentialMatchesOracle) {
  auto e2 = corpus::example2();
  Form df = differential(e2.chart, e2.f);
  EXPECT_EQ(wedge(e2.omega0, df), wedge_oracle(e2.omega0, df));
}

TEST(Geom, ExteriorDerivativeExamples) {
  auto c = chart3();
  Form x1dx2 = Form::basis(c, {1}).times(Expr::coordinate(0));
  EXPECT_EQ(exterior_derivative(x1dx2), Form::basis(c, {0, 1}));

  auto e2 = corpus::example2();
  EXPECT_TRUE(exterior_derivative(e2.phi).is_zero());

  auto e3 = corpus::example3(2, false);
  const int t = 4;
  Expr emt = Expr::exp(-Expr::coordinate(t));
  Form expected = e3.omega0.times(emt) - wedge(Form::basis(e3.chart, {t}), e3.alpha0).times(emt);
  EXPECT_EQ(exterior_derivative(e3.alpha0.times(emt)), expected);
}

TEST(Geom, SharpPairingConvention) {
  auto c = make_chart({"x1", "x2", "x3", "x4"});
  MultiVector l0 = MultiVector::basis(c, {0, 1});
  MultiVector v = sharp(l0, Form::basis(c, {0}));
  EXPECT_EQ(pairing(Form::basis(c, {1}), v), Expr(1));
  EXPECT_EQ(sharp(l0, Form::scalar(c, Expr::coordinate(2))).value(), Expr::coordinate(2));
}

TEST(Geom, InteriorProductExamples) {
  auto c = chart3();
  EXPECT_EQ(interior_product(MultiVector::basis(c, {1}), Form::basis(c, {0, 1})), -Form::basis(c, {0}));
  auto e2 = corpus::example2();
  for (int a = 0; a < 4; ++a) {
    Form dxa = Form::basis(e2.chart, {a});
    EXPECT_EQ(interior_product(sharp(e2.lambda0, dxa), e2.omega0), -dxa);
  }
  // Lambda0 = Lambda0^sharp(omega0)
  EXPECT_EQ(sharp(e2.lambda0, e2.omega0), e2.lambda0);
  EXPECT_EQ(e2.lambda0, MultiVector::basis(e2.chart, {0, 1}) + MultiVector::basis(e2.chart, {2, 3}));
}

TEST(Geom, SchoutenExamples) {
  auto c = chart3();
  MultiVector d1 = MultiVector::basis(c, {0});
  MultiVector x1d2 = MultiVector::basis(c, {1}).times(Expr::coordinate(0));
  EXPECT_EQ(schouten_bracket(d1, x1d2), MultiVector::basis(c, {1}));
}

TEST(Geom, SchoutenReproducesExample2) {
  auto e2 = corpus::example2();
  MultiVector half = schouten_bracket(e2.lambda, e2.lambda).times(Expr(GaussRat(Rational(1, 2))));
  MultiVector expected = -wedge(e2.lambda, sharp(e2.lambda0, differential(e2.chart, e2.f)));
  EXPECT_EQ(half, expected) << half.to_string() << "\n" << expected.to_string();
  EXPECT_EQ(sharp(e2.lambda, e2.phi), expected);
}

TEST(Geom, SchoutenReproducesExample3) {
  auto e3 = corpus::example3();
  MultiVector half = schouten_bracket(e3.lambda, e3.lambda).times(Expr(GaussRat(Rational(1, 2))));
  Expr e2t = Expr::exp(Expr::coordinate(4).scaled(GaussRat(2)));
  MultiVector expected = wedge(sharp(e3.lambda0, differential(e3.chart, e3.f)), e3.lambda0).times(e2t);
  EXPECT_EQ(half, expected) << half.to_string() << "\n" << expected.to_string();
  EXPECT_EQ(sharp(e3.lambda, e3.phi), expected);
}

TEST(Geom, TwistedPoissonExamples) {
  auto e1 = corpus::example1();
  auto r1 = check_twisted_poisson(e1.lambda, e1.phi);
  EXPECT_TRUE(r1.ok());
  EXPECT_TRUE(sharp(e1.lambda, e1.phi).is_zero());

  auto e2 = corpus::example2();
  EXPECT_TRUE(check_twisted_poisson(e2.lambda, e2.phi).ok());
  auto e3 = corpus::example3();
  EXPECT_TRUE(check_twisted_poisson(e3.lambda, e3.phi).ok());
  auto q = corpus::quant51(2);
  EXPECT_TRUE(check_twisted_poisson(q.lambda, q.phi).ok());

  // without the twist Example 3 is not Poisson
  auto bad = check_twisted_poisson(e3.lambda, Form(e3.chart, 3));
  EXPECT_FALSE(bad.structure.is_zero());
  EXPECT_THROW(TwistedPoissonStructure(e3.lambda, Form(e3.chart, 3)), Error);
}

TEST(Geom, ChartMismatchIsAnError) {
  EXPECT_THROW(wedge(Form::basis(chart3(), {0}), Form::basis(chart5(), {1})), ChartMismatch);
}

TEST(Geom, DelPhiExamples) {
  auto e3 = corpus::example3(2, false);
  TwistedPoissonStructure s(e3.lambda, e3.phi);
  EXPECT_TRUE(del_phi(s, MultiVector::scalar(e3.chart, Expr(7))).is_zero());
  Expr emt = Expr::exp(-Expr::coordinate(4));
  MultiVector expected = sharp(e3.lambda, exterior_derivative(e3.alpha0.times(emt))) - e3.lambda;
  EXPECT_EQ(del_phi(s, MultiVector::basis(e3.chart, {4})), expected);
}

TEST(Geom, ExactExample4) {
  auto e4 = corpus::example4();
  TwistedPoissonStructure s(e4.lambda, e4.phi);
  EXPECT_EQ(del_phi(s, e4.x0), e4.lambda);
}

TEST(Geom, HamiltonianSign) {
  // [Lambda, f] = -X_f with X_f = Lambda^sharp(df)
  ExprGen gen(chart3(), 11);
  for (int k = 0; k < 20; ++k) {
    MultiVector l = gen.multivector(2, 3);
    Expr f = gen.poly();
    EXPECT_EQ(schouten_bracket(l, MultiVector::scalar(l.chart(), f)), -hamiltonian_vector(l, f));
  }
}

TEST(Geom, DivergenceExamples) {
  auto c = chart3();
  EXPECT_TRUE(divergence(MultiVector::basis(c, {0})).is_zero());
  EXPECT_EQ(divergence(MultiVector::basis(c, {0}).times(Expr::coordinate(0))), Expr(1));
  auto q = corpus::quant51(2);
  for (int k = 0; k < q.n; ++k) {
    MultiVector v = sharp(q.lambda, q.polarization[k]);
    Expr expected =
        (Expr::exp(Expr::coordinate(q.t())) * q.f.differentiate(q.zb(k), *q.chart)).scaled(GaussRat(0, 2));
    EXPECT_EQ(divergence(v), expected);
    // Lambda^sharp(dz_k) = -2i e^t (d_zbk - f_zbk d_t)
    MultiVector lv = (MultiVector::basis(q.chart, {q.zb(k)}) -
                      MultiVector::basis(q.chart, {q.t()}).times(q.f.differentiate(q.zb(k), *q.chart)))
                         .times(Expr::exp(Expr::coordinate(q.t())).scaled(GaussRat(0, -2)));
    EXPECT_EQ(v, lv);
  }
}

TEST(Geom, FunctionBracketAndJacobiator) {
  auto c = chart3();
  auto s = TwistedPoissonStructure::unchecked(MultiVector::basis(c, {0, 1}), Form(c, 3));
  EXPECT_EQ(function_bracket(s, Expr::coordinate(0), Expr::coordinate(1)), Expr(1));

  auto e3 = corpus::example3();
  TwistedPoissonStructure tw(e3.lambda, e3.phi);
  auto untwisted = TwistedPoissonStructure::unchecked(e3.lambda, Form(e3.chart, 3));
  ExprGen gen(e3.chart, 12);
  bool saw_nonzero = false;
  for (int k = 0; k < 10; ++k) {
    Expr f = gen.poly(), g = gen.poly(), h = gen.poly();
    EXPECT_TRUE(jacobiator(tw, f, g, h).is_zero());
    Expr defect = jacobiator(untwisted, f, g, h);
    // with phi dropped the defect is exactly the twist term
    Expr twist = evaluate(sharp(e3.lambda, e3.phi),
                          {differential(e3.chart, f), differential(e3.chart, g), differential(e3.chart, h)});
    EXPECT_EQ(defect, twist);
    saw_nonzero |= !defect.is_zero();
  }
  EXPECT_TRUE(saw_nonzero);
}

// ---- properties

TEST(GeomProperty, WedgeMatchesAntisymmetrizationOracle) {
  ExprGen gen(chart5(), 21);
  for (int k = 0; k < 100; ++k) {
    int p = gen.pick(3), q = gen.pick(3);
    Form a = gen.form(p), b = gen.form(q);
    EXPECT_EQ(wedge(a, b), wedge_oracle(a, b));
    Form ba = wedge(b, a);
    EXPECT_EQ(wedge(a, b), (p * q) % 2 == 0 ? ba : -ba);
  }
}

TEST(GeomProperty, DSquaredIsZeroAndLeibniz) {
  ExprGen gen(chart5(), 22);
  for (int k = 0; k < 100; ++k) {
    int p = gen.pick(3);
    Form a = gen.form(p), b = gen.form(gen.pick(3));
    EXPECT_TRUE(exterior_derivative(exterior_derivative(a)).is_zero());
    Form lhs = exterior_derivative(wedge(a, b));
    Form rhs = wedge(exterior_derivative(a), b) +
               (p % 2 == 0 ? wedge(a, exterior_derivative(b)) : -wedge(a, exterior_derivative(b)));
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(GeomProperty, SharpSatisfiesPairingAndHigherGradeRule) {
  ExprGen gen(make_chart({"x1", "x2", "x3", "x4"}), 23);
  const auto& c = gen.chart();
  for (int k = 0; k < 30; ++k) {
    MultiVector l = gen.multivector(2, 4);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        Form da = Form::basis(c, {a}), db = Form::basis(c, {b});
        EXPECT_EQ(pairing(db, sharp(l, da)), evaluate(l, {da, db}));
      }
    }
    int g = 1 + gen.pick(3);
    Form eta = gen.form(g, 3);
    MultiVector se = sharp(l, eta);
    for (IndexMask m = 0; m < 16; ++m) {
      if (mask_grade(m) != g) continue;
      std::vector<Form> as;
      std::vector<MultiVector> xs;
      for (int i : mask_indices(m)) {
        as.push_back(Form::basis(c, {i}));
        xs.push_back(sharp(l, as.back()));
      }
      Expr rhs = evaluate(eta, xs);
      EXPECT_EQ(evaluate(se, as), g % 2 == 0 ? rhs : -rhs);
    }
  }
}

TEST(GeomProperty, InteriorProductIsAnAntiderivation) {
  ExprGen gen(chart5(), 24);
  for (int k = 0; k < 60; ++k) {
    MultiVector x = gen.multivector(1, 3);
    int p = gen.pick(3);
    Form a = gen.form(p), b = gen.form(gen.pick(3));
    EXPECT_TRUE(interior_product(x, interior_product(x, wedge(a, b))).is_zero());
    Form lhs = interior_product(x, wedge(a, b));
    Form rhs = wedge(interior_product(x, a), b) +
               (p % 2 == 0 ? wedge(a, interior_product(x, b)) : -wedge(a, interior_product(x, b)));
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(GeomProperty, SchoutenMatchesMonomialOracleInDim3) {
  ExprGen gen(chart3(), 25);
  for (int k = 0; k < 100; ++k) {
    int p = gen.pick(4), q = gen.pick(4);
    MultiVector a = gen.multivector(p), b = gen.multivector(q);
    EXPECT_EQ(schouten_bracket(a, b), schouten_oracle(a, b)) << "p=" << p << " q=" << q;
  }
}

TEST(GeomProperty, SchoutenAntisymmetryAndLeibniz) {
  ExprGen gen(make_chart({"x1", "x2", "x3", "x4"}), 26);
  for (int k = 0; k < 60; ++k) {
    int p = gen.pick(3), q = gen.pick(3), r = gen.pick(2);
    MultiVector a = gen.multivector(p), b = gen.multivector(q), c = gen.multivector(r);
    MultiVector ba = schouten_bracket(b, a);
    EXPECT_EQ(schouten_bracket(a, b), ((p - 1) * (q - 1)) % 2 == 0 ? -ba : ba);
    MultiVector lhs = schouten_bracket(a, wedge(b, c));
    MultiVector second = wedge(b, schouten_bracket(a, c));
    MultiVector rhs = wedge(schouten_bracket(a, b), c) + (((p - 1) * q) % 2 == 0 ? second : -second);
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(GeomProperty, LieDerivativeIdentities) {
  ExprGen gen(chart5(), 27);
  for (int k = 0; k < 60; ++k) {
    MultiVector x = gen.multivector(1, 3);
    Form eta = gen.form(gen.pick(3));
    Expr f = gen.poly(), g = gen.poly();
    Form lhs = lie_derivative(x.times(f), eta);
    Form rhs = lie_derivative(x, eta).times(f) + wedge(differential(x.chart(), f), interior_product(x, eta));
    EXPECT_EQ(lhs, rhs);
    EXPECT_EQ(lie_derivative(x, differential(x.chart(), g)), differential(x.chart(), apply_vector(x, g)));
  }
}

TEST(GeomProperty, KoszulBracketIdentities) {
  ExprGen gen(chart5(), 28);
  const auto& c = gen.chart();
  for (int k = 0; k < 40; ++k) {
    MultiVector l = gen.multivector(2, 3);
    Expr f = gen.poly(), g = gen.poly();
    Form df = differential(c, f), dg = differential(c, g);
    EXPECT_EQ(koszul_bracket(l, df, dg), differential(c, evaluate(l, {df, dg})));
    Form a = gen.form(1), b = gen.form(1);
    EXPECT_EQ(koszul_bracket(l, a, b.times(f)),
              koszul_bracket(l, a, b).times(f) + b.times(apply_vector(sharp(l, a), f)));
  }
  auto constant = MultiVector::basis(c, {0, 1}).times(Expr(3));
  EXPECT_TRUE(koszul_bracket(constant, Form::basis(c, {0}), Form::basis(c, {1})).is_zero());
}

TEST(GeomProperty, TwistedBracketIdentities) {
  auto e3 = corpus::example3();
  TwistedPoissonStructure s(e3.lambda, e3.phi);
  ExprGen gen(e3.chart, 29);
  const auto& c = e3.chart;
  for (int k = 0; k < 20; ++k) {
    Expr f = gen.poly(), g = gen.poly();
    Form df = differential(c, f), dg = differential(c, g);
    Form expected = differential(c, function_bracket(s, f, g)) +
                    contract_two(e3.phi, hamiltonian_vector(e3.lambda, f), hamiltonian_vector(e3.lambda, g));
    EXPECT_EQ(twisted_bracket(s, df, dg), expected);
    Form a = gen.form(1), b = gen.form(1);
    EXPECT_EQ(twisted_bracket(s, a, b.times(g)),
              twisted_bracket(s, a, b).times(g) + b.times(apply_vector(sharp(e3.lambda, a), g)));
  }
}

TEST(GeomProperty, DelPhiMatchesDisplayedFormulaOnArbitraryForms) {
  ExprGen gen(chart3(), 30);
  for (int k = 0; k < 30; ++k) {
    // the formula makes sense for any pair, valid or not
    auto s = TwistedPoissonStructure::unchecked(gen.multivector(2, 3), gen.form(3, 1));
    int grade = gen.pick(3);
    MultiVector p = gen.multivector(grade);
    std::vector<Form> alphas;
    for (int i = 0; i <= grade; ++i) alphas.push_back(gen.form(1, 2));
    EXPECT_EQ(evaluate(del_phi(s, p), alphas), del_phi_oracle(s, p, alphas)) << "grade " << grade;
  }
}

TEST(GeomProperty, DelPhiSquaresToZeroOnValidStructures) {
  auto e2 = corpus::example2();
  auto e3 = corpus::example3();
  std::vector<TwistedPoissonStructure> structures{TwistedPoissonStructure(e2.lambda, e2.phi),
                                                  TwistedPoissonStructure(e3.lambda, e3.phi)};
  for (std::size_t si = 0; si < structures.size(); ++si) {
    const auto& s = structures[si];
    ExprGen gen(s.chart(), 31 + si);
    for (int k = 0; k < 12; ++k) {
      MultiVector p = gen.multivector(gen.pick(3));
      EXPECT_TRUE(del_phi(s, del_phi(s, p)).is_zero());
    }
  }
}

TEST(GeomProperty, DelPhiSquareFailsWhenTwistIsDropped) {
  auto e3 = corpus::example3();
  auto s = TwistedPoissonStructure::unchecked(e3.lambda, Form(e3.chart, 3));
  bool any = false;
  for (const MultiVector& p : {MultiVector::scalar(e3.chart, Expr::coordinate(0)), MultiVector::basis(e3.chart, {4}),
                               MultiVector::basis(e3.chart, {0})}) {
    any |= !del_phi(s, del_phi(s, p)).is_zero();
  }
  EXPECT_TRUE(any);
}

TEST(GeomProperty, ChainMap) {
  auto e2 = corpus::example2();
  auto e3 = corpus::example3();
  std::vector<TwistedPoissonStructure> structures{TwistedPoissonStructure(e2.lambda, e2.phi),
                                                  TwistedPoissonStructure(e3.lambda, e3.phi)};
  for (std::size_t si = 0; si < structures.size(); ++si) {
    const auto& s = structures[si];
    ExprGen gen(s.chart(), 41 + si);
    for (int k = 0; k < 12; ++k) {
      Form eta = gen.form(gen.pick(4));
      EXPECT_EQ(del_phi(s, sharp(s.lambda(), eta)), -sharp(s.lambda(), exterior_derivative(eta)));
    }
  }
}

TEST(GeomProperty, DivergenceLeibniz) {
  ExprGen gen(chart5(), 50);
  for (int k = 0; k < 50; ++k) {
    MultiVector x = gen.multivector(1, 3);
    Expr f = gen.poly();
    EXPECT_EQ(divergence(x.times(f)), f * divergence(x) + apply_vector(x, f));
  }
}

}  // namespace
