#include "tpq/corpus.hpp"

namespace tpq::corpus {
namespace {

std::vector<int> range(int from, int to) {
  std::vector<int> out;
  for (int i = from; i < to; ++i) out.push_back(i);
  return out;
}

Form darboux(const ChartPtr& chart, int n) {
  Form w(chart, 2);
  for (int k = 0; k < n; ++k) w += Form::basis(chart, {2 * k, 2 * k + 1});
  return w;
}

// Lambda0 on the first 2n coordinates of a chart.
MultiVector lambda_from(const Form& omega0, int n) { return bivector_from_symplectic(omega0, range(0, 2 * n)); }

}  // namespace

Example1 example1() {
  auto chart = make_chart({"x1", "x2", "x3"});
  return {chart, MultiVector::basis(chart, {0, 1}), Form::basis(chart, {0, 1, 2})};
}

Example2 example2(int n) {
  if (n < 2) throw Error("example 2 needs n >= 2");
  std::vector<std::string> coords;
  for (int i = 1; i <= 2 * n; ++i) coords.push_back("x" + std::to_string(i));
  std::vector<OpaqueSymbol> opaque{{"f", range(0, 2 * n), true}};
  for (int i = 1; i <= 2 * n; ++i) opaque.push_back({"a" + std::to_string(i), range(0, 2 * n), true});
  auto chart = make_chart(coords, {}, opaque, std::max(ChartSignature::kDefaultMaxDim, 2 * n));

  Example2 ex;
  ex.chart = chart;
  ex.omega0 = darboux(chart, n);
  ex.lambda0 = lambda_from(ex.omega0, n);
  ex.f = Expr::jet(0);
  ex.lambda = ex.lambda0.times(ex.f);
  ex.phi = wedge(ex.omega0, differential(chart, ex.f)).times(-ex.f.pow(-2));
  std::vector<Expr> a;
  for (int i = 1; i <= 2 * n; ++i) a.push_back(Expr::jet(i));
  ex.alpha = one_form(chart, a);
  ex.z = sharp(ex.lambda0, ex.alpha);
  return ex;
}

Example3 example3(int n, bool opaque_f) {
  if (n < 2) throw Error("example 3 needs n >= 2");
  std::vector<std::string> coords;
  for (int i = 1; i <= 2 * n; ++i) coords.push_back("x" + std::to_string(i));
  coords.push_back("t");
  std::vector<OpaqueSymbol> opaque;
  if (opaque_f) opaque.push_back({"f", range(0, 2 * n), true});
  auto chart = make_chart(coords, {}, opaque, std::max(ChartSignature::kDefaultMaxDim, 2 * n + 1));
  const int t = 2 * n;

  Example3 ex;
  ex.chart = chart;
  ex.omega0 = darboux(chart, n);
  ex.lambda0 = lambda_from(ex.omega0, n);
  ex.f = opaque_f ? Expr::jet(0) : Expr();
  Expr et = Expr::exp(Expr::coordinate(t));
  Expr emt = Expr::exp(-Expr::coordinate(t));
  MultiVector dt_vec = MultiVector::basis(chart, {t});
  ex.lambda = (ex.lambda0 + wedge(sharp(ex.lambda0, differential(chart, ex.f)), dt_vec)).times(et);
  ex.phi = wedge(ex.omega0, Form::basis(chart, {t})).times(-emt);

  ex.alpha0 = Form(chart, 1);
  for (int k = 0; k < n; ++k) ex.alpha0.set(IndexMask{1} << (2 * k + 1), Expr::coordinate(2 * k));
  ex.z = dt_vec;
  ex.big_phi = exterior_derivative(ex.alpha0.times(emt));
  return ex;
}

Example4 example4(int n) {
  Example3 e3 = example3(n, false);
  Example4 ex;
  ex.chart = e3.chart;
  ex.lambda = e3.lambda;
  ex.phi = e3.phi;
  ex.x0 = -MultiVector::basis(e3.chart, {2 * n}) - sharp(e3.lambda0, e3.alpha0);
  ex.z = -ex.x0;
  return ex;
}

Quant51 quant51(int n, bool with_g) {
  if (n < 1) throw Error("n must be positive");
  std::vector<std::string> coords;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int k = 1; k <= n; ++k) coords.push_back("z" + std::to_string(k));
  for (int k = 1; k <= n; ++k) {
    coords.push_back("zb" + std::to_string(k));
    pairs.emplace_back("z" + std::to_string(k), "zb" + std::to_string(k));
  }
  coords.push_back("t");
  std::vector<OpaqueSymbol> opaque{{"f", range(0, 2 * n), true}};
  if (with_g) opaque.push_back({"g", range(0, 2 * n + 1), true});
  auto chart = make_chart(coords, pairs, opaque,
                          std::max(ChartSignature::kDefaultMaxDim, 2 * n + 1));

  Quant51 q;
  q.n = n;
  q.chart = chart;
  q.f = Expr::jet(0);
  if (with_g) q.g = Expr::jet(1);
  const int t = q.t();
  Expr et = Expr::exp(Expr::coordinate(t));
  Expr emt = Expr::exp(-Expr::coordinate(t));
  const GaussRat i = GaussRat::imag_unit();

  MultiVector inner(chart, 2);
  MultiVector dt_vec = MultiVector::basis(chart, {t});
  for (int k = 0; k < n; ++k) {
    inner += MultiVector::basis(chart, {q.z(k), q.zb(k)});
    MultiVector v = MultiVector::basis(chart, {q.zb(k)}).times(q.f.differentiate(q.z(k), *chart)) -
                    MultiVector::basis(chart, {q.z(k)}).times(q.f.differentiate(q.zb(k), *chart));
    inner += wedge(v, dt_vec);
  }
  q.lambda = inner.times(et.scaled(i * GaussRat(-2)));

  Form w(chart, 3);
  for (int k = 0; k < n; ++k) w += Form::basis(chart, {q.z(k), q.zb(k), t});
  q.phi = w.times(emt.scaled(i * GaussRat(Rational(-1, 2))));

  for (int k = 0; k < n; ++k) q.polarization.push_back(Form::basis(chart, {q.z(k)}));
  for (int k = 0; k < n; ++k) q.complement.push_back(Form::basis(chart, {q.zb(k)}));
  q.complement.push_back(Form::basis(chart, {t}));
  return q;
}

}  // namespace tpq::corpus
