#pragma once

#include <ostream>
#include <random>

#include "tpq/expr.hpp"
#include "tpq/geom.hpp"

namespace tpq {
template <Variance V>
void PrintTo(const Antisym<V>& a, std::ostream* os) {
  *os << (a.chart() ? a.to_string() : std::string("{}"));
}
}  // namespace tpq

namespace tpq::testing {

/// Chart x1, x2, t plus z, zb with an opaque real f(z, zb) and g(x1, x2).
inline ChartPtr mixed_chart() {
  return make_chart({"x1", "x2", "t", "z", "zb"}, {{"z", "zb"}},
                    {OpaqueSymbol{"f", {3, 4}, true}, OpaqueSymbol{"g", {0, 1}, true}});
}

/// Random small expressions over a chart: polynomials in coordinates and
/// jets with Gaussian-rational coefficients, occasionally times exp().
class ExprGen {
 public:
  ExprGen(ChartPtr chart, std::uint64_t seed) : chart_(std::move(chart)), rng_(seed) {}

  GaussRat coefficient() {
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    return GaussRat(Rational(num(rng_), den(rng_)), Rational(pick(3) == 0 ? num(rng_) : 0, den(rng_)));
  }

  Expr atom() {
    const int n = chart_->dim();
    const int s = static_cast<int>(chart_->opaque().size());
    int k = pick(n + s + 1);
    if (k < n) return Expr::coordinate(k);
    if (k < n + s) {
      int sym = k - n;
      Expr j = Expr::jet(sym);
      const auto& dep = chart_->opaque()[sym].depends;
      if (!dep.empty() && pick(2) == 0) j = j.differentiate(dep[pick(static_cast<int>(dep.size()))], *chart_);
      return j;
    }
    return Expr::pi();
  }

  Expr monomial() {
    Expr m(coefficient());
    int factors = pick(3);
    for (int i = 0; i < factors; ++i) {
      Expr a = atom();
      int p = pick(3) + 1;
      if (a.is_monomial() && pick(5) == 0) p = -p;
      m *= a.pow(p);
    }
    if (pick(4) == 0) {
      Expr arg = Expr(GaussRat(Rational(pick(7) - 3, pick(2) + 1))) * Expr::coordinate(pick(chart_->dim()));
      m *= Expr::exp(arg);
    }
    return m;
  }

  Expr expr(int max_terms = 4) {
    Expr e;
    int n = pick(max_terms) + 1;
    for (int i = 0; i < n; ++i) e += monomial();
    return e;
  }

  /// Polynomial of degree <= 2 in the coordinates with small rational
  /// coefficients; `terms` monomials at most.
  Expr poly(int terms = 3) {
    Expr e;
    const int n = chart_->dim();
    for (int k = 0; k < terms; ++k) {
      Expr m(GaussRat(Rational(pick(7) - 3, pick(3) + 1)));
      int deg = pick(3);
      for (int d = 0; d < deg; ++d) m *= Expr::coordinate(pick(n));
      e += m;
    }
    return e;
  }

  template <class T>
  T antisym(int grade, int density = 2) {
    T out(chart_, grade);
    const int n = chart_->dim();
    if (grade > n) return out;
    for (int k = 0; k < density; ++k) {
      std::vector<int> idx;
      while (static_cast<int>(idx.size()) < grade) {
        int c = pick(n);
        if (std::find(idx.begin(), idx.end(), c) == idx.end()) idx.push_back(c);
      }
      out += T::basis(chart_, idx).times(poly());
    }
    return out;
  }
  Form form(int grade, int density = 2) { return antisym<Form>(grade, density); }
  MultiVector multivector(int grade, int density = 2) { return antisym<MultiVector>(grade, density); }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937_64& rng() { return rng_; }
  const ChartPtr& chart() const { return chart_; }

 private:
  ChartPtr chart_;
  std::mt19937_64 rng_;
};

}  // namespace tpq::testing
