#include "tpq/geom.hpp"

#include <bit>

#include "tpq/linalg.hpp"

namespace tpq {

std::vector<int> mask_indices(IndexMask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

IndexMask indices_mask(const std::vector<int>& idx) {
  IndexMask m = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= 32) throw Error("component index out of range");
    if (k > 0 && idx[k] <= idx[k - 1]) throw Error("indices must be strictly increasing");
    m |= IndexMask{1} << idx[k];
  }
  return m;
}

int mask_grade(IndexMask m) { return std::popcount(m); }

int wedge_sign(IndexMask a, IndexMask b) {
  if (a & b) return 0;
  int swaps = 0;
  for (int j : mask_indices(b)) {
    IndexMask above = j >= 31 ? 0 : ~((IndexMask{1} << (j + 1)) - 1);
    swaps += std::popcount(a & above);
  }
  return swaps % 2 == 0 ? 1 : -1;
}

std::string mask_key(IndexMask m) {
  std::string out;
  for (int i : mask_indices(m)) {
    if (!out.empty()) out += ",";
    out += std::to_string(i + 1);
  }
  return out;
}

void require_same_chart(const ChartPtr& a, const ChartPtr& b) {
  if (!same_chart(a, b)) throw ChartMismatch();
}

// ---------------------------------------------------------------------------
// Antisym

template <Variance V>
Antisym<V>::Antisym(ChartPtr chart, int grade) : chart_(std::move(chart)), grade_(grade) {
  if (!chart_) throw Error("null chart");
  // grades above the dimension are allowed; such objects are always zero
  if (grade < 0 || grade > 32) throw Error("grade " + std::to_string(grade) + " out of range");
}

template <Variance V>
Antisym<V> Antisym<V>::scalar(ChartPtr chart, Expr value) {
  Antisym a(std::move(chart), 0);
  a.set(0, std::move(value));
  return a;
}

template <Variance V>
Antisym<V> Antisym<V>::basis(ChartPtr chart, std::vector<int> indices) {
  Antisym a(std::move(chart), static_cast<int>(indices.size()));
  int sign = 1;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    for (std::size_t j = i + 1; j < indices.size(); ++j) {
      if (indices[i] == indices[j]) return a;
      if (indices[i] > indices[j]) sign = -sign;
    }
  }
  std::sort(indices.begin(), indices.end());
  a.set(indices_mask(indices), Expr(sign));
  return a;
}

template <Variance V>
Expr Antisym<V>::at(IndexMask m) const {
  auto it = comps_.find(m);
  return it == comps_.end() ? Expr() : it->second;
}

template <Variance V>
void Antisym<V>::set(IndexMask m, Expr e) {
  if (mask_grade(m) != grade_) throw Error("component grade does not match");
  if (m >> dim()) throw Error("component index exceeds chart dimension");
  if (e.is_zero()) {
    comps_.erase(m);
  } else {
    comps_[m] = std::move(e);
  }
}

template <Variance V>
void Antisym<V>::add(IndexMask m, const Expr& e) {
  if (e.is_zero()) return;
  set(m, at(m) + e);
}

template <Variance V>
Antisym<V> Antisym<V>::operator-() const {
  Antisym out = *this;
  for (auto& [m, e] : out.comps_) e = -e;
  return out;
}

template <Variance V>
Antisym<V>& Antisym<V>::operator+=(const Antisym& o) {
  if (!chart_) return *this = o;
  if (!o.chart_) return *this;
  require_same_chart(chart_, o.chart_);
  if (grade_ != o.grade_) {
    // zero objects stand in for out-of-range grades, e.g. i_X of a function
    if (o.is_zero()) return *this;
    if (!is_zero()) throw Error("grade mismatch in sum");
    grade_ = o.grade_;
  }
  for (const auto& [m, e] : o.comps_) add(m, e);
  return *this;
}

template <Variance V>
Antisym<V>& Antisym<V>::operator-=(const Antisym& o) {
  return *this += -o;
}

template <Variance V>
Antisym<V> Antisym<V>::times(const Expr& f) const {
  return map([&](const Expr& e) { return e * f; });
}

template <Variance V>
Antisym<V> Antisym<V>::map(const std::function<Expr(const Expr&)>& fn) const {
  Antisym out(chart_, grade_);
  for (const auto& [m, e] : comps_) out.set(m, fn(e));
  return out;
}

template <Variance V>
Antisym<V> Antisym<V>::conjugate() const {
  // conjugation also swaps the coordinate directions z <-> zbar
  Antisym out(chart_, grade_);
  for (const auto& [m, e] : comps_) {
    std::vector<int> idx;
    for (int i : mask_indices(m)) idx.push_back(chart_->conjugate_of(i));
    auto b = basis(chart_, idx);
    const auto& [bm, sign] = *b.comps_.begin();
    out.add(bm, sign * e.conjugate(*chart_));
  }
  return out;
}

template <Variance V>
std::string Antisym<V>::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [m, e] : comps_) {
    if (!first) out += "; ";
    first = false;
    out += (grade_ == 0 ? std::string("") : mask_key(m) + ": ") + e.to_string(*chart_);
  }
  return out + "}";
}

template class Antisym<Variance::Contravariant>;
template class Antisym<Variance::Covariant>;

// ---------------------------------------------------------------------------
// Algebra

MultiVector vector_field(ChartPtr chart, const std::vector<Expr>& components) {
  MultiVector v(chart, 1);
  if (static_cast<int>(components.size()) != chart->dim()) throw Error("vector field needs one component per coordinate");
  for (int i = 0; i < chart->dim(); ++i) v.set(IndexMask{1} << i, components[i]);
  return v;
}

Form one_form(ChartPtr chart, const std::vector<Expr>& components) {
  Form v(chart, 1);
  if (static_cast<int>(components.size()) != chart->dim()) throw Error("1-form needs one component per coordinate");
  for (int i = 0; i < chart->dim(); ++i) v.set(IndexMask{1} << i, components[i]);
  return v;
}

namespace {

template <Variance V>
Antisym<V> wedge_impl(const Antisym<V>& a, const Antisym<V>& b) {
  require_same_chart(a.chart(), b.chart());
  Antisym<V> out(a.chart(), a.grade() + b.grade());
  for (const auto& [ma, ea] : a.components()) {
    for (const auto& [mb, eb] : b.components()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      out.add(ma | mb, (ea * eb).scaled(GaussRat(s)));
    }
  }
  return out;
}

// Laplace expansion of det[m[row][col]] over the first `n` rows.
Expr determinant(std::vector<std::vector<Expr>> m) {
  const std::size_t n = m.size();
  if (n == 0) return Expr(1);
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Expr total;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<Expr>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Expr> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(std::move(row));
    }
    Expr term = m[0][c] * determinant(std::move(minor));
    total = (c % 2 == 0) ? total + term : total - term;
  }
  return total;
}

template <Variance V, Variance W>
Expr evaluate_impl(const Antisym<V>& t, const std::vector<Antisym<W>>& args) {
  if (static_cast<int>(args.size()) != t.grade()) throw Error("wrong number of arguments for evaluation");
  for (const auto& a : args) {
    require_same_chart(t.chart(), a.chart());
    if (a.grade() != 1) throw Error("evaluation arguments must have grade 1");
  }
  Expr total;
  for (const auto& [m, e] : t.components()) {
    auto idx = mask_indices(m);
    std::vector<std::vector<Expr>> mat(idx.size(), std::vector<Expr>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t c = 0; c < args.size(); ++c) mat[r][c] = args[c].at(IndexMask{1} << idx[r]);
    }
    total += e * determinant(std::move(mat));
  }
  return total;
}

}  // namespace

MultiVector wedge(const MultiVector& a, const MultiVector& b) { return wedge_impl(a, b); }
Form wedge(const Form& a, const Form& b) { return wedge_impl(a, b); }

Form exterior_derivative(const Form& eta) {
  const auto& sig = eta.sig();
  Form out(eta.chart(), eta.grade() + 1);
  for (const auto& [m, e] : eta.components()) {
    for (int j = 0; j < sig.dim(); ++j) {
      IndexMask bit = IndexMask{1} << j;
      if (m & bit) continue;
      Expr de = e.differentiate(j, sig);
      if (de.is_zero()) continue;
      out.add(m | bit, de.scaled(GaussRat(wedge_sign(bit, m))));
    }
  }
  return out;
}

Form differential(const ChartPtr& chart, const Expr& f) { return exterior_derivative(Form::scalar(chart, f)); }

Expr pairing(const Form& alpha, const MultiVector& x) {
  require_same_chart(alpha.chart(), x.chart());
  if (alpha.grade() != 1 || x.grade() != 1) throw Error("pairing needs a 1-form and a vector field");
  Expr total;
  for (const auto& [m, e] : alpha.components()) total += e * x.at(m);
  return total;
}

Expr apply_vector(const MultiVector& x, const Expr& f) {
  if (x.grade() != 1) throw Error("expected a vector field");
  Expr total;
  for (const auto& [m, e] : x.components()) total += e * f.differentiate(std::countr_zero(m), x.sig());
  return total;
}

Expr evaluate(const MultiVector& p, const std::vector<Form>& alphas) { return evaluate_impl(p, alphas); }
Expr evaluate(const Form& eta, const std::vector<MultiVector>& xs) { return evaluate_impl(eta, xs); }

namespace {
// Lambda^sharp(dx^a) for every a.
std::vector<MultiVector> sharp_basis(const MultiVector& lambda) {
  if (lambda.grade() != 2) throw Error("expected a bivector");
  std::vector<MultiVector> out(lambda.dim(), MultiVector(lambda.chart(), 1));
  for (const auto& [m, e] : lambda.components()) {
    auto idx = mask_indices(m);
    out[idx[0]].add(IndexMask{1} << idx[1], e);
    out[idx[1]].add(IndexMask{1} << idx[0], -e);
  }
  return out;
}
}  // namespace

MultiVector sharp(const MultiVector& lambda, const Form& eta) {
  require_same_chart(lambda.chart(), eta.chart());
  if (eta.grade() == 0) return MultiVector::scalar(eta.chart(), eta.value());
  auto basis = sharp_basis(lambda);
  MultiVector out(eta.chart(), eta.grade());
  for (const auto& [m, e] : eta.components()) {
    auto idx = mask_indices(m);
    MultiVector w = basis[idx[0]];
    for (std::size_t k = 1; k < idx.size(); ++k) w = wedge(w, basis[idx[k]]);
    out += w.times(e);
  }
  return out;
}

Form interior_product(const MultiVector& x, const Form& eta) {
  require_same_chart(x.chart(), eta.chart());
  if (x.grade() != 1) throw Error("interior product needs a vector field");
  if (eta.grade() == 0) return Form(eta.chart(), 0);
  Form out(eta.chart(), eta.grade() - 1);
  for (const auto& [m, e] : eta.components()) {
    auto idx = mask_indices(m);
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      Expr xi = x.at(IndexMask{1} << idx[pos]);
      if (xi.is_zero()) continue;
      Expr term = e * xi;
      out.add(m & ~(IndexMask{1} << idx[pos]), pos % 2 == 0 ? term : -term);
    }
  }
  return out;
}

Form contract_two(const Form& phi, const MultiVector& x, const MultiVector& y) {
  return interior_product(y, interior_product(x, phi));
}

MultiVector schouten_bracket(const MultiVector& p, const MultiVector& q) {
  require_same_chart(p.chart(), q.chart());
  const auto& sig = p.sig();
  const int pg = p.grade(), qg = q.grade();
  if (pg + qg - 1 < 0) return MultiVector(p.chart(), 0);
  MultiVector out(p.chart(), pg + qg - 1);
  // sum_i (d_r A / d theta_i) ^ (d_i B), with the right derivative of
  // theta_I at position m carrying (-1)^(|I|-1-m)
  auto half = [&](const MultiVector& a, const MultiVector& b, int sign) {
    for (const auto& [ma, ea] : a.components()) {
      auto idx = mask_indices(ma);
      for (std::size_t pos = 0; pos < idx.size(); ++pos) {
        const int i = idx[pos];
        const IndexMask rest = ma & ~(IndexMask{1} << i);
        const int s = ((a.grade() - 1 - static_cast<int>(pos)) % 2 == 0 ? 1 : -1) * sign;
        for (const auto& [mb, eb] : b.components()) {
          int ws = wedge_sign(rest, mb);
          if (ws == 0) continue;
          Expr db = eb.differentiate(i, sig);
          if (db.is_zero()) continue;
          out.add(rest | mb, (ea * db).scaled(GaussRat(s * ws)));
        }
      }
    }
  };
  half(p, q, 1);
  half(q, p, ((pg - 1) * (qg - 1)) % 2 == 0 ? -1 : 1);
  return out;
}

Form lie_derivative(const MultiVector& x, const Form& eta) {
  Form a = interior_product(x, exterior_derivative(eta));
  if (eta.grade() == 0) return a;
  return a + exterior_derivative(interior_product(x, eta));
}

Form koszul_bracket(const MultiVector& lambda, const Form& alpha, const Form& beta) {
  require_same_chart(lambda.chart(), alpha.chart());
  require_same_chart(lambda.chart(), beta.chart());
  if (alpha.grade() != 1 || beta.grade() != 1) throw Error("Koszul bracket acts on 1-forms");
  MultiVector xa = sharp(lambda, alpha);
  MultiVector xb = sharp(lambda, beta);
  return lie_derivative(xa, beta) - lie_derivative(xb, alpha) -
         differential(lambda.chart(), evaluate(lambda, {alpha, beta}));
}

Expr divergence(const MultiVector& x) {
  if (x.grade() != 1) throw Error("divergence needs a vector field");
  Expr total;
  for (const auto& [m, e] : x.components()) total += e.differentiate(std::countr_zero(m), x.sig());
  return total;
}

MultiVector bivector_from_symplectic(const Form& omega0, std::vector<int> coords) {
  if (omega0.grade() != 2) throw Error("expected a 2-form");
  if (coords.empty()) {
    for (int i = 0; i < omega0.dim(); ++i) coords.push_back(i);
  }
  const int n = static_cast<int>(coords.size());
  std::vector<int> local(omega0.dim(), -1);
  for (int a = 0; a < n; ++a) local.at(coords[a]) = a;
  // W_ab with (i_X w)_b = sum_a X^a W_ab; the condition reads Lambda W = -1
  auto w = zero_matrix<GaussRat>(n, n);
  for (const auto& [m, e] : omega0.components()) {
    auto c = e.constant_value();
    if (!c) throw Error("symplectic form must have constant coefficients");
    auto idx = mask_indices(m);
    int a = local[idx[0]], b = local[idx[1]];
    if (a < 0 || b < 0) throw Error("2-form involves coordinates outside the symplectic factor");
    w[a][b] = *c;
    w[b][a] = -*c;
  }
  // rows of Lambda solve W^T x = -e_c; reduce [W^T | -1]
  auto aug = zero_matrix<GaussRat>(n, 2 * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) aug[a][b] = w[b][a];
    aug[a][n + a] = GaussRat(-1);
  }
  auto pivots = rref(aug);
  if (static_cast<int>(pivots.size()) != n || pivots.back() >= static_cast<std::size_t>(n)) {
    throw Error("2-form is degenerate");
  }
  // column n + c of the reduced matrix is row c of Lambda
  MultiVector out(omega0.chart(), 2);
  for (int c = 0; c < n; ++c) {
    for (int a = c + 1; a < n; ++a) {
      out.set((IndexMask{1} << coords[c]) | (IndexMask{1} << coords[a]), Expr(aug[a][n + c]));
    }
  }
  return out;
}

TwistedPoissonCheck check_twisted_poisson(const MultiVector& lambda, const Form& phi) {
  require_same_chart(lambda.chart(), phi.chart());
  if (lambda.grade() != 2 || phi.grade() != 3) throw Error("expected a bivector and a 3-form");
  TwistedPoissonCheck out;
  out.closed = exterior_derivative(phi);
  out.structure = schouten_bracket(lambda, lambda).times(Expr(GaussRat(Rational(1, 2)))) - sharp(lambda, phi);
  return out;
}

TwistedPoissonStructure::TwistedPoissonStructure(MultiVector lambda, Form phi) {
  auto check = check_twisted_poisson(lambda, phi);
  if (!check.ok()) throw Error("(Lambda, phi) is not a twisted Poisson structure");
  lambda_ = std::move(lambda);
  phi_ = std::move(phi);
  verified_ = true;
}

TwistedPoissonStructure TwistedPoissonStructure::unchecked(MultiVector lambda, Form phi) {
  require_same_chart(lambda.chart(), phi.chart());
  if (lambda.grade() != 2 || phi.grade() != 3) throw Error("expected a bivector and a 3-form");
  TwistedPoissonStructure s;
  s.lambda_ = std::move(lambda);
  s.phi_ = std::move(phi);
  return s;
}

Form twisted_bracket(const TwistedPoissonStructure& s, const Form& alpha, const Form& beta) {
  Form k = koszul_bracket(s.lambda(), alpha, beta);
  if (s.phi().is_zero()) return k;
  return k + contract_two(s.phi(), sharp(s.lambda(), alpha), sharp(s.lambda(), beta));
}

MultiVector del_phi(const TwistedPoissonStructure& s, const MultiVector& p) {
  require_same_chart(s.chart(), p.chart());
  const auto& chart = s.chart();
  const auto& sig = *chart;
  const int n = sig.dim();
  const int k = p.grade();
  if (k + 1 > n) return MultiVector(chart, k + 1);

  auto anchors = sharp_basis(s.lambda());
  // {dx^a, dx^b}^phi for a < b
  std::vector<std::vector<Form>> brackets(n, std::vector<Form>(n));
  if (k >= 1) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        brackets[a][b] = twisted_bracket(s, Form::basis(chart, {a}), Form::basis(chart, {b}));
      }
    }
  }

  MultiVector out(chart, k + 1);
  for (IndexMask j = 0; j < (IndexMask{1} << n); ++j) {
    if (mask_grade(j) != k + 1) continue;
    auto idx = mask_indices(j);
    Expr total;
    for (int i = 0; i <= k; ++i) {
      Expr pi = p.at(j & ~(IndexMask{1} << idx[i]));
      if (pi.is_zero()) continue;
      Expr term = apply_vector(anchors[idx[i]], pi);
      total = (i % 2 == 0) ? total + term : total - term;
    }
    for (int a = 0; a <= k; ++a) {
      for (int b = a + 1; b <= k; ++b) {
        const Form& br = brackets[idx[a]][idx[b]];
        IndexMask rest = j & ~(IndexMask{1} << idx[a]) & ~(IndexMask{1} << idx[b]);
        Expr term;
        // P(gamma, dx^rest) = sum_c gamma_c P(dx^c, dx^rest)
        for (const auto& [mc, gc] : br.components()) {
          int ws = wedge_sign(mc, rest);
          if (ws == 0) continue;
          Expr pc = p.at(mc | rest);
          if (pc.is_zero()) continue;
          term += (gc * pc).scaled(GaussRat(ws));
        }
        // (-1)^(i+j) with 1-based positions equals (-1)^(a+b)
        total = ((a + b) % 2 == 0) ? total + term : total - term;
      }
    }
    out.set(j, total);
  }
  return out;
}

MultiVector hamiltonian_vector(const MultiVector& lambda, const Expr& f) {
  return sharp(lambda, differential(lambda.chart(), f));
}

Expr function_bracket(const TwistedPoissonStructure& s, const Expr& f, const Expr& g) {
  const auto& c = s.chart();
  return evaluate(s.lambda(), {differential(c, f), differential(c, g)});
}

Expr jacobiator(const TwistedPoissonStructure& s, const Expr& f, const Expr& g, const Expr& h) {
  const auto& c = s.chart();
  auto br = [&](const Expr& a, const Expr& b) { return function_bracket(s, a, b); };
  Expr cyclic = br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g));
  return cyclic - evaluate(sharp(s.lambda(), s.phi()), {differential(c, f), differential(c, g), differential(c, h)});
}

}  // namespace tpq
