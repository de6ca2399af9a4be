#include "tpq/liealg.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "tpq/linalg.hpp"

namespace tpq {

namespace {

constexpr int kMaxAlgebraDim = 30;

std::vector<Rational> zero_vector(int n) { return std::vector<Rational>(n, Rational(0)); }

bool all_zero(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

}  // namespace

LieAlgebraModel::LieAlgebraModel(std::vector<std::string> names,
                                 const std::map<std::pair<int, int>, std::vector<Rational>>& brackets)
    : names_(std::move(names)) {
  const int n = dim();
  if (n == 0) throw Error("Lie algebra needs at least one basis element");
  if (n > kMaxAlgebraDim) throw Error("Lie algebra dimension exceeds " + std::to_string(kMaxAlgebraDim));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (names_[i] == names_[j]) throw Error("duplicate basis name '" + names_[i] + "'");
    }
  }
  c_.assign(n, std::vector<std::vector<Rational>>(n, zero_vector(n)));
  for (const auto& [ij, v] : brackets) {
    auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= n || j >= n) throw Error("bracket index out of range");
    if (static_cast<int>(v.size()) != n) throw Error("bracket vector has wrong length");
    if (i == j) {
      if (!all_zero(v)) throw Error("structure constants are not antisymmetric");
      continue;
    }
    if (i > j) throw Error("brackets must be given for i < j");
    c_[i][j] = v;
    for (int k = 0; k < n; ++k) c_[j][i][k] = -v[k];
  }
  // Jacobi: [[a,b],c] + [[b,c],a] + [[c,a],b] = 0
  auto bracket_vec = [&](const std::vector<Rational>& x, int c) {
    auto out = zero_vector(n);
    for (int m = 0; m < n; ++m) {
      if (sgn(x[m]) == 0) continue;
      for (int l = 0; l < n; ++l) out[l] += x[m] * c_[m][c][l];
    }
    return out;
  };
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        auto s = bracket_vec(c_[a][b], c);
        auto t = bracket_vec(c_[b][c], a);
        auto u = bracket_vec(c_[c][a], b);
        for (int l = 0; l < n; ++l) s[l] += t[l] + u[l];
        if (!all_zero(s)) {
          throw Error("Jacobi identity fails on (" + names_[a] + ", " + names_[b] + ", " + names_[c] + ")");
        }
      }
    }
  }
}

std::optional<int> LieAlgebraModel::index(std::string_view name) const {
  for (int i = 0; i < dim(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

LieAlgebraModel build_gl_subalgebra(const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.empty() || cols.empty()) throw Error("empty index set");
  for (int v : rows) {
    if (v < 1 || v > 9) throw Error("matrix indices must lie in 1..9");
  }
  for (int v : cols) {
    if (v < 1 || v > 9) throw Error("matrix indices must lie in 1..9");
  }
  std::vector<std::pair<int, int>> entries;
  std::vector<std::string> names;
  for (int a : rows) {
    for (int b : cols) {
      if (std::find(entries.begin(), entries.end(), std::pair{a, b}) != entries.end()) {
        throw Error("repeated matrix index");
      }
      entries.emplace_back(a, b);
      names.push_back("e" + std::to_string(a) + std::to_string(b));
    }
  }
  const int n = static_cast<int>(entries.size());
  auto locate = [&](int a, int b) {
    auto it = std::find(entries.begin(), entries.end(), std::pair{a, b});
    if (it == entries.end()) {
      throw Error("span is not closed under the commutator: e" + std::to_string(a) + std::to_string(b) +
                  " is missing");
    }
    return static_cast<int>(it - entries.begin());
  };
  std::map<std::pair<int, int>, std::vector<Rational>> brackets;
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      auto [a, b] = entries[x];
      auto [c, d] = entries[y];
      auto v = zero_vector(n);
      if (b == c) v[locate(a, d)] += 1;
      if (d == a) v[locate(c, b)] -= 1;
      if (!all_zero(v)) brackets[{x, y}] = std::move(v);
    }
  }
  return LieAlgebraModel(std::move(names), brackets);
}

// --- exterior algebra ------------------------------------------------------

template <Variance V>
AlgAntisym<V>::AlgAntisym(int dim, int grade) : dim_(dim), grade_(grade) {
  if (grade < 0) throw Error("negative grade");
}

template <Variance V>
AlgAntisym<V> AlgAntisym<V>::basis(int dim, std::vector<int> indices) {
  AlgAntisym out(dim, static_cast<int>(indices.size()));
  int sign = 1;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= dim) throw Error("basis index out of range");
    for (std::size_t j = i + 1; j < indices.size(); ++j) {
      if (indices[i] == indices[j]) return out;
      if (indices[i] > indices[j]) sign = -sign;
    }
  }
  std::sort(indices.begin(), indices.end());
  out.comps_[indices_mask(indices)] = Rational(sign);
  return out;
}

template <Variance V>
AlgAntisym<V> AlgAntisym<V>::scalar(int dim, const Rational& value) {
  AlgAntisym out(dim, 0);
  out.set(0, value);
  return out;
}

template <Variance V>
Rational AlgAntisym<V>::at(IndexMask m) const {
  auto it = comps_.find(m);
  return it == comps_.end() ? Rational(0) : it->second;
}

template <Variance V>
void AlgAntisym<V>::set(IndexMask m, const Rational& v) {
  if (mask_grade(m) != grade_) throw Error("component grade mismatch");
  if (dim_ < 32 && (m >> dim_) != 0) throw Error("component index out of range");
  if (sgn(v) == 0) {
    comps_.erase(m);
  } else {
    Rational& slot = comps_[m];
    slot = v;
    slot.canonicalize();
  }
}

template <Variance V>
void AlgAntisym<V>::add(IndexMask m, const Rational& v) {
  if (sgn(v) == 0) return;
  set(m, at(m) + v);
}

template <Variance V>
AlgAntisym<V> AlgAntisym<V>::operator-() const {
  AlgAntisym out = *this;
  for (auto& [m, v] : out.comps_) v = -v;
  return out;
}

template <Variance V>
AlgAntisym<V>& AlgAntisym<V>::operator+=(const AlgAntisym& o) {
  if (o.comps_.empty()) return *this;
  if (comps_.empty()) {
    *this = o;
    return *this;
  }
  if (o.grade_ != grade_ || o.dim_ != dim_) throw Error("grade mismatch in sum");
  for (const auto& [m, v] : o.comps_) add(m, v);
  return *this;
}

template <Variance V>
AlgAntisym<V> AlgAntisym<V>::scaled(const Rational& q) const {
  if (sgn(q) == 0) return AlgAntisym(dim_, grade_);
  AlgAntisym out = *this;
  for (auto& [m, v] : out.comps_) {
    v *= q;
    v.canonicalize();
  }
  return out;
}

template <Variance V>
std::string AlgAntisym<V>::to_string(const std::vector<std::string>& names) const {
  if (comps_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, v] : comps_) {
    Rational mag = abs(v);
    if (first) {
      if (sgn(v) < 0) os << '-';
    } else {
      os << (sgn(v) < 0 ? " - " : " + ");
    }
    first = false;
    std::string basis;
    for (int i : mask_indices(m)) {
      if (!basis.empty()) basis += '^';
      basis += names.at(i);
      if constexpr (V == Variance::Covariant) basis += '*';
    }
    if (basis.empty()) {
      os << tpq::to_string(mag);
    } else if (mag == 1) {
      os << basis;
    } else {
      os << tpq::to_string(mag) << '*' << basis;
    }
  }
  return os.str();
}

template class AlgAntisym<Variance::Contravariant>;
template class AlgAntisym<Variance::Covariant>;

namespace {

template <Variance V>
AlgAntisym<V> wedge_impl(const AlgAntisym<V>& a, const AlgAntisym<V>& b) {
  if (a.dim() != b.dim() && !a.is_zero() && !b.is_zero()) throw Error("dimension mismatch");
  AlgAntisym<V> out(std::max(a.dim(), b.dim()), a.grade() + b.grade());
  for (const auto& [ma, va] : a.components()) {
    for (const auto& [mb, vb] : b.components()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      out.add(ma | mb, s * va * vb);
    }
  }
  return out;
}

Rational det(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(m[r][c]) == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return d;
}

template <Variance V, Variance W>
Rational evaluate_impl(const AlgAntisym<V>& t, const std::vector<AlgAntisym<W>>& args) {
  if (static_cast<int>(args.size()) != t.grade()) throw Error("wrong number of arguments for evaluation");
  for (const auto& a : args) {
    if (a.grade() != 1 && !a.is_zero()) throw Error("evaluation arguments must have grade 1");
  }
  Rational total = 0;
  for (const auto& [m, v] : t.components()) {
    auto idx = mask_indices(m);
    std::vector<std::vector<Rational>> mat(idx.size(), std::vector<Rational>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t c = 0; c < args.size(); ++c) mat[r][c] = args[c].at(IndexMask{1} << idx[r]);
    }
    total += v * det(std::move(mat));
  }
  return total;
}

std::vector<AlgMultiVector> sharp_basis(const AlgMultiVector& r) {
  if (r.grade() != 2 && !r.is_zero()) throw Error("expected a bivector");
  std::vector<AlgMultiVector> out(r.dim(), AlgMultiVector(r.dim(), 1));
  for (const auto& [m, v] : r.components()) {
    auto idx = mask_indices(m);
    out[idx[0]].add(IndexMask{1} << idx[1], v);
    out[idx[1]].add(IndexMask{1} << idx[0], -v);
  }
  return out;
}

// [e_i, e_j] as a grade-1 element.
AlgMultiVector bracket_vector(const LieAlgebraModel& g, int i, int j) {
  AlgMultiVector out(g.dim(), 1);
  const auto& c = g.bracket(i, j);
  for (int k = 0; k < g.dim(); ++k) out.add(IndexMask{1} << k, c[k]);
  return out;
}

}  // namespace

AlgMultiVector alg_wedge(const AlgMultiVector& a, const AlgMultiVector& b) { return wedge_impl(a, b); }
AlgForm alg_wedge(const AlgForm& a, const AlgForm& b) { return wedge_impl(a, b); }

AlgForm alg_interior(const AlgMultiVector& x, const AlgForm& eta) {
  if (x.grade() != 1) throw Error("interior product needs a grade-1 element");
  if (eta.grade() == 0) return AlgForm(eta.dim(), 0);
  AlgForm out(eta.dim(), eta.grade() - 1);
  for (const auto& [m, v] : eta.components()) {
    auto idx = mask_indices(m);
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      Rational xi = x.at(IndexMask{1} << idx[pos]);
      if (sgn(xi) == 0) continue;
      Rational term = v * xi;
      out.add(m & ~(IndexMask{1} << idx[pos]), pos % 2 == 0 ? term : Rational(-term));
    }
  }
  return out;
}

Rational alg_evaluate(const AlgMultiVector& p, const std::vector<AlgForm>& alphas) { return evaluate_impl(p, alphas); }
Rational alg_evaluate(const AlgForm& eta, const std::vector<AlgMultiVector>& xs) { return evaluate_impl(eta, xs); }

AlgMultiVector alg_sharp(const AlgMultiVector& r, const AlgForm& eta) {
  if (eta.grade() == 0) return AlgMultiVector::scalar(eta.dim(), eta.at(0));
  auto basis = sharp_basis(r);
  AlgMultiVector out(eta.dim(), eta.grade());
  for (const auto& [m, v] : eta.components()) {
    auto idx = mask_indices(m);
    AlgMultiVector w = basis[idx[0]];
    for (std::size_t k = 1; k < idx.size(); ++k) w = alg_wedge(w, basis[idx[k]]);
    out += w.scaled(v);
  }
  return out;
}

AlgForm ce_differential(const LieAlgebraModel& g, const AlgForm& xi) {
  const int n = g.dim();
  if (xi.dim() != n && !xi.is_zero()) throw Error("form does not belong to this algebra");
  AlgForm out(n, xi.grade() + 1);
  if (xi.grade() == 0) return out;
  // d e^k* = -sum_{i<j} c^k_ij e^i* ^ e^j*
  std::vector<AlgForm> d1(n, AlgForm(n, 2));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& c = g.bracket(i, j);
      for (int k = 0; k < n; ++k) {
        if (sgn(c[k]) != 0) d1[k].add((IndexMask{1} << i) | (IndexMask{1} << j), -c[k]);
      }
    }
  }
  for (const auto& [m, v] : xi.components()) {
    auto idx = mask_indices(m);
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      // e^{j0} ^ ... ^ d e^{jpos} ^ ... with sign (-1)^pos
      AlgForm left = AlgForm::scalar(n, Rational(1));
      for (std::size_t q = 0; q < pos; ++q) left = alg_wedge(left, AlgForm::basis(n, {idx[q]}));
      AlgForm term = alg_wedge(left, d1[idx[pos]]);
      for (std::size_t q = pos + 1; q < idx.size(); ++q) term = alg_wedge(term, AlgForm::basis(n, {idx[q]}));
      out += term.scaled(pos % 2 == 0 ? v : Rational(-v));
    }
  }
  return out;
}

AlgForm alg_lie_derivative(const LieAlgebraModel& g, const AlgMultiVector& x, const AlgForm& eta) {
  AlgForm a = alg_interior(x, ce_differential(g, eta));
  if (eta.grade() == 0) return a;
  return a + ce_differential(g, alg_interior(x, eta));
}

AlgMultiVector algebraic_schouten(const LieAlgebraModel& g, const AlgMultiVector& p, const AlgMultiVector& q) {
  const int n = g.dim();
  const int pg = p.grade(), qg = q.grade();
  if (pg == 0 || qg == 0) return AlgMultiVector(n, std::max(pg + qg - 1, 0));
  AlgMultiVector out(n, pg + qg - 1);
  // [x1^..^xp, y1^..^yq] = sum (-1)^(i+j) [xi, yj] ^ (x without xi) ^ (y without yj)
  for (const auto& [mp, vp] : p.components()) {
    auto ip = mask_indices(mp);
    for (const auto& [mq, vq] : q.components()) {
      auto iq = mask_indices(mq);
      for (std::size_t a = 0; a < ip.size(); ++a) {
        std::vector<int> prest;
        for (std::size_t k = 0; k < ip.size(); ++k) {
          if (k != a) prest.push_back(ip[k]);
        }
        AlgMultiVector xr = AlgMultiVector::basis(n, prest);
        for (std::size_t b = 0; b < iq.size(); ++b) {
          AlgMultiVector br = bracket_vector(g, ip[a], iq[b]);
          if (br.is_zero()) continue;
          std::vector<int> rest;
          for (std::size_t k = 0; k < iq.size(); ++k) {
            if (k != b) rest.push_back(iq[k]);
          }
          AlgMultiVector term = alg_wedge(alg_wedge(br, xr), AlgMultiVector::basis(n, rest));
          Rational coef = vp * vq;
          out += term.scaled((a + b) % 2 == 0 ? coef : Rational(-coef));
        }
      }
    }
  }
  return out;
}

AlgTwistedCheck check_twisted_structure(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi) {
  if (r.grade() != 2) throw Error("r must be a bivector");
  if (phi.grade() != 3) throw Error("phi must be a 3-form");
  AlgTwistedCheck out;
  out.closed = ce_differential(g, phi);
  out.structure = algebraic_schouten(g, r, r).scaled(Rational(1, 2)) - alg_sharp(r, phi);
  return out;
}

std::vector<IndexMask> masks_of_grade(int dim, int grade) {
  std::vector<IndexMask> out;
  if (grade < 0 || grade > dim) return out;
  for (IndexMask m = 0; m < (IndexMask{1} << dim); ++m) {
    if (mask_grade(m) == grade) out.push_back(m);
  }
  return out;
}

std::vector<AlgForm> closed_two_forms(const LieAlgebraModel& g) {
  const int n = g.dim();
  auto cols = masks_of_grade(n, 2);
  auto rows = masks_of_grade(n, 3);
  Matrix<Rational> m = zero_matrix<Rational>(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    AlgForm basis(n, 2);
    basis.set(cols[c], 1);
    AlgForm d = ce_differential(g, basis);
    for (std::size_t r = 0; r < rows.size(); ++r) m[r][c] = d.at(rows[r]);
  }
  std::vector<AlgForm> out;
  for (const auto& v : nullspace(m, cols.size())) {
    AlgForm f(n, 2);
    for (std::size_t c = 0; c < cols.size(); ++c) f.set(cols[c], v[c]);
    out.push_back(std::move(f));
  }
  return out;
}

AlgForm alg_twisted_bracket(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi, const AlgForm& a,
                            const AlgForm& b) {
  if (a.grade() != 1 || b.grade() != 1) throw Error("the bracket acts on 1-forms");
  AlgMultiVector xa = alg_sharp(r, a);
  AlgMultiVector xb = alg_sharp(r, b);
  AlgForm out = alg_lie_derivative(g, xa, b) - alg_lie_derivative(g, xb, a);
  if (!phi.is_zero()) out += alg_interior(xb, alg_interior(xa, phi));
  return out;
}

AlgMultiVector algebraic_del_phi(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi,
                                 const AlgMultiVector& p) {
  const int n = g.dim();
  const int k = p.grade();
  AlgMultiVector out(n, k + 1);
  if (k == 0 || k + 1 > n) return out;
  std::vector<std::vector<AlgForm>> brackets(n, std::vector<AlgForm>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      brackets[a][b] = alg_twisted_bracket(g, r, phi, AlgForm::basis(n, {a}), AlgForm::basis(n, {b}));
    }
  }
  for (IndexMask j : masks_of_grade(n, k + 1)) {
    auto idx = mask_indices(j);
    Rational total = 0;
    for (int a = 0; a <= k; ++a) {
      for (int b = a + 1; b <= k; ++b) {
        const AlgForm& br = brackets[idx[a]][idx[b]];
        IndexMask rest = j & ~(IndexMask{1} << idx[a]) & ~(IndexMask{1} << idx[b]);
        Rational term = 0;
        for (const auto& [mc, gc] : br.components()) {
          int ws = wedge_sign(mc, rest);
          if (ws == 0) continue;
          term += ws * gc * p.at(mc | rest);
        }
        if ((a + b) % 2 == 0) {
          total += term;
        } else {
          total -= term;
        }
      }
    }
    out.set(j, total);
  }
  return out;
}

namespace {

std::string parameter_name(const std::string& basis_name) {
  if (basis_name.size() > 1 && basis_name[0] == 'e') return "lambda" + basis_name.substr(1);
  return "lambda_" + basis_name;
}

}  // namespace

std::string SymbolicExpansion::to_string(const std::vector<std::string>& names) const {
  if (components.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, e] : components) {
    if (!first) os << " + ";
    first = false;
    std::string basis;
    for (int i : mask_indices(m)) {
      if (!basis.empty()) basis += '^';
      basis += names.at(i);
    }
    os << '(' << e.to_string(*parameters) << ")*" << basis;
  }
  return os.str();
}

SymbolicExpansion prequantization_expansion(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi) {
  const int n = g.dim();
  std::vector<std::string> params;
  for (const auto& name : g.names()) params.push_back(parameter_name(name));
  SymbolicExpansion out;
  out.parameters = make_chart(params, {}, {}, std::max(ChartSignature::kDefaultMaxDim, n));
  std::map<IndexMask, Expr> comps;
  for (const auto& [m, v] : r.components()) comps[m] += Expr(GaussRat(v));
  for (int i = 0; i < n; ++i) {
    AlgMultiVector d = algebraic_del_phi(g, r, phi, AlgMultiVector::basis(n, {i}));
    for (const auto& [m, v] : d.components()) comps[m] += Expr::coordinate(i).scaled(GaussRat(v));
  }
  for (auto& [m, e] : comps) {
    if (!e.is_zero()) out.components.emplace(m, e);
  }
  return out;
}

PrequantizationSolution solve_prequantization(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi) {
  const int n = g.dim();
  PrequantizationSolution out;
  out.closed_basis = closed_two_forms(g);
  out.certificate_rows = masks_of_grade(n, 2);
  const auto& rows = out.certificate_rows;
  // columns: del_phi(e_i) for Z, then -r#(Phi_j) for Phi; right side -r
  std::vector<AlgMultiVector> columns;
  for (int i = 0; i < n; ++i) columns.push_back(algebraic_del_phi(g, r, phi, AlgMultiVector::basis(n, {i})));
  for (const auto& f : out.closed_basis) columns.push_back(-alg_sharp(r, f));
  Matrix<Rational> a = zero_matrix<Rational>(rows.size(), columns.size());
  std::vector<Rational> b(rows.size());
  for (std::size_t row = 0; row < rows.size(); ++row) {
    for (std::size_t c = 0; c < columns.size(); ++c) a[row][c] = columns[c].at(rows[row]);
    b[row] = -r.at(rows[row]);
  }
  auto sol = solve_or_certify(a, b, columns.size());
  out.z = AlgMultiVector(n, 1);
  out.big_phi = AlgForm(n, 2);
  if (sol.solution) {
    out.solvable = true;
    const auto& x = *sol.solution;
    for (int i = 0; i < n; ++i) out.z.add(IndexMask{1} << i, x[i]);
    for (std::size_t j = 0; j < out.closed_basis.size(); ++j) out.big_phi += out.closed_basis[j].scaled(x[n + j]);
  } else {
    out.certificate = *sol.certificate;
  }
  return out;
}

bool verify_certificate(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi,
                        const PrequantizationSolution& s) {
  if (s.solvable || s.certificate.size() != s.certificate_rows.size()) return false;
  auto apply = [&](const AlgMultiVector& v) {
    Rational total = 0;
    for (std::size_t k = 0; k < s.certificate_rows.size(); ++k) total += s.certificate[k] * v.at(s.certificate_rows[k]);
    return total;
  };
  const int n = g.dim();
  for (int i = 0; i < n; ++i) {
    if (sgn(apply(algebraic_del_phi(g, r, phi, AlgMultiVector::basis(n, {i})))) != 0) return false;
  }
  for (const auto& f : closed_two_forms(g)) {
    if (sgn(apply(alg_sharp(r, f))) != 0) return false;
  }
  return sgn(apply(r)) != 0;
}

std::vector<std::vector<Rational>> del_phi_matrix(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi,
                                                  int k) {
  const int n = g.dim();
  auto cols = masks_of_grade(n, k);
  auto rows = masks_of_grade(n, k + 1);
  Matrix<Rational> m = zero_matrix<Rational>(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    AlgMultiVector basis(n, k);
    basis.set(cols[c], 1);
    AlgMultiVector d = algebraic_del_phi(g, r, phi, basis);
    for (std::size_t row = 0; row < rows.size(); ++row) m[row][c] = d.at(rows[row]);
  }
  return m;
}

int ltp_cohomology(const LieAlgebraModel& g, const AlgMultiVector& r, const AlgForm& phi, int k) {
  const int n = g.dim();
  if (k < 0 || k > n) throw Error("degree out of range");
  const auto cols = masks_of_grade(n, k).size();
  const std::size_t rank_out = k < n ? rank(del_phi_matrix(g, r, phi, k)) : 0;
  const std::size_t rank_in = k > 0 ? rank(del_phi_matrix(g, r, phi, k - 1)) : 0;
  return static_cast<int>(cols - rank_out - rank_in);
}

namespace corpus {

Example6 example6() {
  LieAlgebraModel g = build_gl_subalgebra({1, 2}, {1, 2, 3});
  const int n = g.dim();
  auto idx = [&](const char* name) { return *g.index(name); };
  AlgMultiVector r = AlgMultiVector::basis(n, {idx("e11"), idx("e22")}) +
                     AlgMultiVector::basis(n, {idx("e13"), idx("e23")});
  AlgForm phi = -alg_wedge(AlgForm::basis(n, {idx("e11")}) + AlgForm::basis(n, {idx("e22")}),
                           AlgForm::basis(n, {idx("e13"), idx("e23")}));
  return {std::move(g), std::move(r), std::move(phi)};
}

}  // namespace corpus

}  // namespace tpq
