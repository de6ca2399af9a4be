#include "tpq/expr.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>

#include "expr_internal.hpp"

namespace tpq {

// ---------------------------------------------------------------------------
// Chart signature

namespace {
bool reserved_name(std::string_view s) { return s == "i" || s == "pi" || s == "exp" || s == "D"; }

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(s[0])) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}
}  // namespace

ChartSignature::ChartSignature(std::vector<std::string> coordinates,
                               std::vector<std::pair<std::string, std::string>> conjugate_pairs,
                               std::vector<OpaqueSymbol> opaque, int max_dim)
    : coords_(std::move(coordinates)), opaque_(std::move(opaque)), max_dim_(max_dim) {
  if (dim() > max_dim_) {
    throw Error("chart dimension " + std::to_string(dim()) + " exceeds the maximum " +
                std::to_string(max_dim_));
  }
  if (dim() > 30) throw Error("chart dimension above 30 is not supported");
  std::set<std::string, std::less<>> seen;
  auto claim = [&](const std::string& name) {
    if (!valid_identifier(name)) throw Error("invalid identifier '" + name + "'");
    if (reserved_name(name)) throw Error("'" + name + "' is a reserved name");
    if (!seen.insert(name).second) throw Error("duplicate name '" + name + "'");
  };
  for (const auto& c : coords_) claim(c);
  for (const auto& s : opaque_) claim(s.name);

  conj_.resize(coords_.size());
  for (int i = 0; i < dim(); ++i) conj_[i] = i;
  for (const auto& [a, b] : conjugate_pairs) {
    auto ia = coordinate_index(a);
    auto ib = coordinate_index(b);
    if (!ia || !ib) throw Error("conjugate pair (" + a + ", " + b + ") names an undeclared coordinate");
    if (*ia == *ib || conj_[*ia] != *ia || conj_[*ib] != *ib) {
      throw Error("conjugation must be an involution; bad pair (" + a + ", " + b + ")");
    }
    conj_[*ia] = *ib;
    conj_[*ib] = *ia;
  }
  for (auto& s : opaque_) {
    std::sort(s.depends.begin(), s.depends.end());
    s.depends.erase(std::unique(s.depends.begin(), s.depends.end()), s.depends.end());
    for (int d : s.depends) {
      if (d < 0 || d >= dim()) throw Error("opaque symbol '" + s.name + "' depends on an undeclared coordinate");
    }
    if (s.real) {
      // a real function of z must also depend on zbar
      for (int d : s.depends) {
        if (!std::binary_search(s.depends.begin(), s.depends.end(), conj_[d])) {
          throw Error("real opaque symbol '" + s.name + "' must depend on conjugate coordinate pairs jointly");
        }
      }
    }
  }
}

std::optional<int> ChartSignature::coordinate_index(std::string_view name) const {
  for (int i = 0; i < dim(); ++i) {
    if (coords_[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> ChartSignature::conjugate_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (int i = 0; i < dim(); ++i) {
    if (conj_[i] > i) out.emplace_back(coords_[i], coords_[conj_[i]]);
  }
  return out;
}

std::optional<int> ChartSignature::opaque_index(std::string_view name) const {
  for (int i = 0; i < static_cast<int>(opaque_.size()); ++i) {
    if (opaque_[i].name == name) return i;
  }
  return std::nullopt;
}

bool ChartSignature::depends(int symbol, int coord) const {
  const auto& d = opaque_.at(symbol).depends;
  return std::binary_search(d.begin(), d.end(), coord);
}

bool operator==(const ChartSignature& a, const ChartSignature& b) {
  if (a.coords_ != b.coords_ || a.conj_ != b.conj_ || a.opaque_.size() != b.opaque_.size()) return false;
  for (std::size_t i = 0; i < a.opaque_.size(); ++i) {
    const auto& x = a.opaque_[i];
    const auto& y = b.opaque_[i];
    if (x.name != y.name || x.depends != y.depends || x.real != y.real) return false;
  }
  return true;
}

ChartPtr make_chart(std::vector<std::string> coordinates,
                    std::vector<std::pair<std::string, std::string>> conjugate_pairs,
                    std::vector<OpaqueSymbol> opaque, int max_dim) {
  return std::make_shared<const ChartSignature>(std::move(coordinates), std::move(conjugate_pairs),
                                                std::move(opaque), max_dim);
}

bool same_chart(const ChartPtr& a, const ChartPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------------------
// Intern tables

namespace detail {
namespace {

class AtomTable {
 public:
  std::uint32_t intern(const AtomData& a) {
    {
      std::shared_lock lock(mu_);
      auto it = ids_.find(a);
      if (it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto [it, inserted] = ids_.try_emplace(a, static_cast<std::uint32_t>(atoms_.size()));
    if (inserted) atoms_.push_back(a);
    return it->second;
  }

  const AtomData& get(std::uint32_t id) {
    std::shared_lock lock(mu_);
    return atoms_[id];
  }

  std::uint32_t extended(std::uint32_t id, int coord) {
    {
      std::shared_lock lock(mu_);
      auto it = extend_.find({id, coord});
      if (it != extend_.end()) return it->second;
    }
    AtomData a = get(id);
    a.jet.insert(std::upper_bound(a.jet.begin(), a.jet.end(), coord), coord);
    std::uint32_t out = intern(a);
    std::unique_lock lock(mu_);
    extend_[{id, coord}] = out;
    return out;
  }

 private:
  std::shared_mutex mu_;
  std::deque<AtomData> atoms_;
  std::map<AtomData, std::uint32_t> ids_;
  std::map<std::pair<std::uint32_t, int>, std::uint32_t> extend_;
};

class ExpTable {
 public:
  ExpTable() {
    args_.emplace_back();
    ids_.emplace(ExpArgument{}, 0);
  }

  std::uint32_t intern(const ExpArgument& a) {
    {
      std::shared_lock lock(mu_);
      auto it = ids_.find(a);
      if (it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto [it, inserted] = ids_.try_emplace(a, static_cast<std::uint32_t>(args_.size()));
    if (inserted) args_.push_back(a);
    return it->second;
  }

  const ExpArgument& get(std::uint32_t id) {
    std::shared_lock lock(mu_);
    return args_[id];
  }

 private:
  std::shared_mutex mu_;
  std::deque<ExpArgument> args_;
  std::map<ExpArgument, std::uint32_t> ids_;
};

AtomTable& atoms() {
  static AtomTable table;
  return table;
}

ExpTable& exps() {
  static ExpTable table;
  return table;
}

}  // namespace

std::uint32_t intern_atom(const AtomData& a) { return atoms().intern(a); }
const AtomData& atom_data(std::uint32_t id) { return atoms().get(id); }
std::uint32_t jet_extended(std::uint32_t id, int coord) { return atoms().extended(id, coord); }
std::uint32_t intern_exp(const ExpArgument& arg) { return exps().intern(arg); }
const ExpArgument& exp_data(std::uint32_t id) { return exps().get(id); }

bool operator<(const Monomial& a, const Monomial& b) {
  if (a.exp_arg != b.exp_arg) return a.exp_arg < b.exp_arg;
  const auto n = std::min(a.factors.size(), b.factors.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.factors[i];
    const auto& y = b.factors[i];
    if (x.atom != y.atom) return x.atom < y.atom;
    if (x.power != y.power) return x.power < y.power;
  }
  return a.factors.size() < b.factors.size();
}

namespace {

ExpArgument add_arguments(const ExpArgument& a, const ExpArgument& b) {
  ExpArgument out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      Rational q = a[i].second + b[j].second;
      if (sgn(q) != 0) out.emplace_back(a[i].first, std::move(q));
      ++i;
      ++j;
    }
  }
  return out;
}

std::uint32_t multiply_exp(std::uint32_t a, std::uint32_t b) {
  if (a == 0) return b;
  if (b == 0) return a;
  return intern_exp(add_arguments(exp_data(a), exp_data(b)));
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].atom < b.factors[j].atom)) {
      out.factors.push_back(a.factors[i++]);
    } else if (i == a.factors.size() || b.factors[j].atom < a.factors[i].atom) {
      out.factors.push_back(b.factors[j++]);
    } else {
      const int p = a.factors[i].power + b.factors[j].power;
      if (p != 0) out.factors.push_back({a.factors[i].atom, p});
      ++i;
      ++j;
    }
  }
  out.exp_arg = multiply_exp(a.exp_arg, b.exp_arg);
  return out;
}

Monomial with_factor(Monomial m, std::uint32_t atom, int power) {
  Monomial single;
  single.factors.push_back({atom, power});
  return multiply(m, single);
}

}  // namespace
}  // namespace detail

using detail::Factor;
using detail::Monomial;
using detail::Term;

// ---------------------------------------------------------------------------
// Expr construction and arithmetic

Expr::Expr(long v) : Expr(GaussRat(v)) {}

Expr::Expr(const GaussRat& c) {
  if (!c.is_zero()) {
    terms_ = std::make_shared<const std::vector<Term>>(std::vector<Term>{Term{Monomial{}, c}});
  }
}

Expr::Expr(std::vector<Term> sorted_terms) {
  if (!sorted_terms.empty()) terms_ = std::make_shared<const std::vector<Term>>(std::move(sorted_terms));
}

Expr Expr::from_unsorted(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.mono < b.mono; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
  return Expr(std::move(out));
}

std::span<const Term> Expr::terms() const {
  if (!terms_) return {};
  return {terms_->data(), terms_->size()};
}

Expr Expr::coordinate(int index) {
  Monomial m;
  m.factors.push_back({detail::intern_atom({AtomKind::Coordinate, index, {}}), 1});
  return Expr(std::vector<Term>{Term{std::move(m), GaussRat(1)}});
}

Expr Expr::jet(int symbol, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  Monomial m;
  m.factors.push_back({detail::intern_atom({AtomKind::Jet, symbol, std::move(indices)}), 1});
  return Expr(std::vector<Term>{Term{std::move(m), GaussRat(1)}});
}

Expr Expr::pi() {
  Monomial m;
  m.factors.push_back({detail::intern_atom({AtomKind::Pi, 0, {}}), 1});
  return Expr(std::vector<Term>{Term{std::move(m), GaussRat(1)}});
}

Expr Expr::imag_unit() { return Expr(GaussRat::imag_unit()); }

std::optional<ExpArgument> Expr::as_linear_argument() const {
  ExpArgument out;
  for (const auto& t : terms()) {
    if (!t.coeff.is_real() || t.mono.exp_arg != 0 || t.mono.factors.size() != 1) return std::nullopt;
    const auto& f = t.mono.factors.front();
    if (f.power != 1) return std::nullopt;
    const auto& a = detail::atom_data(f.atom);
    if (a.kind == AtomKind::Coordinate) {
      out.emplace_back(ExpGenerator{false, a.index}, t.coeff.re());
    } else if (a.kind == AtomKind::Jet && a.jet.empty()) {
      out.emplace_back(ExpGenerator{true, a.index}, t.coeff.re());
    } else {
      return std::nullopt;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

Expr Expr::exp(const Expr& arg) {
  if (arg.is_zero()) return Expr(1);
  auto lin = arg.as_linear_argument();
  if (!lin) {
    throw Error("exp argument must be a rational-linear combination of coordinates and opaque symbols");
  }
  Monomial m;
  m.exp_arg = detail::intern_exp(*lin);
  return Expr(std::vector<Term>{Term{std::move(m), GaussRat(1)}});
}

bool Expr::is_constant() const {
  return is_zero() || (terms_->size() == 1 && terms_->front().mono.factors.empty() &&
                       terms_->front().mono.exp_arg == 0);
}

std::optional<GaussRat> Expr::constant_value() const {
  if (is_zero()) return GaussRat(0);
  if (!is_constant()) return std::nullopt;
  return terms_->front().coeff;
}

Expr Expr::operator-() const { return scaled(GaussRat(-1)); }

Expr Expr::scaled(const GaussRat& c) const {
  if (c.is_zero() || is_zero()) return {};
  std::vector<Term> out(terms_->begin(), terms_->end());
  for (auto& t : out) t.coeff *= c;
  return Expr(std::move(out));
}

class ExprAccess {
 public:
  static Expr make(std::vector<Term> sorted) { return Expr(std::move(sorted)); }
  static Expr make_unsorted(std::vector<Term> terms) { return Expr::from_unsorted(std::move(terms)); }
};

namespace {
Expr merge(const Expr& a, const Expr& b, bool subtract) {
  auto ta = a.terms();
  auto tb = b.terms();
  std::vector<Term> out;
  out.reserve(ta.size() + tb.size());
  std::size_t i = 0, j = 0;
  while (i < ta.size() || j < tb.size()) {
    if (j == tb.size() || (i < ta.size() && ta[i].mono < tb[j].mono)) {
      out.push_back(ta[i++]);
    } else if (i == ta.size() || tb[j].mono < ta[i].mono) {
      out.push_back(tb[j]);
      if (subtract) out.back().coeff = -out.back().coeff;
      ++j;
    } else {
      GaussRat c = subtract ? ta[i].coeff - tb[j].coeff : ta[i].coeff + tb[j].coeff;
      if (!c.is_zero()) out.push_back(Term{ta[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return ExprAccess::make(std::move(out));
}
}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return merge(a, b, false);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  return merge(a, b, true);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Term> out;
  out.reserve(a.term_count() * b.term_count());
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) {
      out.push_back(Term{detail::multiply(x.mono, y.mono), x.coeff * y.coeff});
    }
  }
  return Expr::from_unsorted(std::move(out));
}

Expr Expr::inverse() const {
  if (!is_monomial()) {
    throw Error(is_zero() ? "division by zero" : "division by a non-monomial expression");
  }
  const Term& t = terms_->front();
  Monomial m;
  for (const auto& f : t.mono.factors) m.factors.push_back({f.atom, -f.power});
  if (t.mono.exp_arg != 0) {
    ExpArgument neg = detail::exp_data(t.mono.exp_arg);
    for (auto& [g, q] : neg) q = -q;
    m.exp_arg = detail::intern_exp(neg);
  }
  return Expr(std::vector<Term>{Term{std::move(m), GaussRat(1) / t.coeff}});
}

Expr operator/(const Expr& a, const Expr& b) { return a * b.inverse(); }

bool operator==(const Expr& a, const Expr& b) {
  auto ta = a.terms();
  auto tb = b.terms();
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (!(ta[i].mono == tb[i].mono) || !(ta[i].coeff == tb[i].coeff)) return false;
  }
  return true;
}

Expr Expr::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  Expr result(1);
  Expr base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

bool is_zero(const Expr& e) { return e.is_zero(); }

// ---------------------------------------------------------------------------
// Calculus

Expr Expr::differentiate(int coord, const ChartSignature& chart) const {
  if (coord < 0 || coord >= chart.dim()) throw Error("unknown coordinate index " + std::to_string(coord));
  std::vector<Term> out;
  for (const auto& t : terms()) {
    const auto& fs = t.mono.factors;
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const auto& a = detail::atom_data(fs[k].atom);
      std::optional<std::uint32_t> inner;  // derivative atom, nullopt means derivative 1
      if (a.kind == AtomKind::Coordinate) {
        if (a.index != coord) continue;
      } else if (a.kind == AtomKind::Jet) {
        if (!chart.depends(a.index, coord)) continue;
        inner = detail::jet_extended(fs[k].atom, coord);
      } else {
        continue;
      }
      Monomial m;
      m.exp_arg = t.mono.exp_arg;
      m.factors = fs;
      if (fs[k].power == 1) {
        m.factors.erase(m.factors.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        m.factors[k].power -= 1;
      }
      if (inner) m = detail::with_factor(std::move(m), *inner, 1);
      out.push_back(Term{std::move(m), t.coeff * GaussRat(fs[k].power)});
    }
    if (t.mono.exp_arg != 0) {
      for (const auto& [g, q] : detail::exp_data(t.mono.exp_arg)) {
        if (!g.is_symbol) {
          if (g.index == coord) out.push_back(Term{t.mono, t.coeff * GaussRat(q)});
        } else if (chart.depends(g.index, coord)) {
          std::uint32_t j = detail::intern_atom({AtomKind::Jet, g.index, {coord}});
          out.push_back(Term{detail::with_factor(t.mono, j, 1), t.coeff * GaussRat(q)});
        }
      }
    }
  }
  return from_unsorted(std::move(out));
}

Expr differentiate(const Expr& e, std::string_view coord, const ChartSignature& chart) {
  auto idx = chart.coordinate_index(coord);
  if (!idx) throw Error("unknown coordinate '" + std::string(coord) + "'");
  return e.differentiate(*idx, chart);
}

Expr Expr::conjugate(const ChartSignature& chart) const {
  std::vector<Term> out;
  out.reserve(term_count());
  for (const auto& t : terms()) {
    Monomial m;
    for (const auto& f : t.mono.factors) {
      detail::AtomData a = detail::atom_data(f.atom);
      if (a.kind == AtomKind::Coordinate) {
        a.index = chart.conjugate_of(a.index);
      } else if (a.kind == AtomKind::Jet) {
        if (!chart.opaque().at(a.index).real) {
          throw Error("conjugation of non-real opaque symbol '" + chart.opaque()[a.index].name +
                      "' is not supported");
        }
        for (int& j : a.jet) j = chart.conjugate_of(j);
        std::sort(a.jet.begin(), a.jet.end());
      }
      m.factors.push_back({detail::intern_atom(a), f.power});
    }
    std::sort(m.factors.begin(), m.factors.end(), [](const Factor& x, const Factor& y) { return x.atom < y.atom; });
    if (t.mono.exp_arg != 0) {
      ExpArgument arg = detail::exp_data(t.mono.exp_arg);
      for (auto& [g, q] : arg) {
        if (g.is_symbol) {
          if (!chart.opaque().at(g.index).real) {
            throw Error("conjugation of non-real opaque symbol '" + chart.opaque()[g.index].name +
                        "' is not supported");
          }
        } else {
          g.index = chart.conjugate_of(g.index);
        }
      }
      std::sort(arg.begin(), arg.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      m.exp_arg = detail::intern_exp(arg);
    }
    out.push_back(Term{std::move(m), t.coeff.conj()});
  }
  return from_unsorted(std::move(out));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string generator_name(const ExpGenerator& g, const ChartSignature& chart) {
  return g.is_symbol ? chart.opaque().at(g.index).name : chart.coordinate(g.index);
}

std::string join_signed(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (!parts[i].empty() && parts[i].front() == '-') {
      out += " - " + parts[i].substr(1);
    } else {
      out += " + " + parts[i];
    }
  }
  return out;
}

std::string scaled_text(const GaussRat& c, const std::string& body) {
  if (body.empty()) return c.str();
  if (c.is_one()) return body;
  if (c == GaussRat(-1)) return "-" + body;
  return c.str() + "*" + body;
}

std::string argument_text(const ExpArgument& arg, const ChartSignature& chart) {
  std::vector<std::string> parts;
  for (const auto& [g, q] : arg) parts.push_back(scaled_text(GaussRat(q), generator_name(g, chart)));
  return join_signed(parts);
}

std::string atom_text(const detail::AtomData& a, const ChartSignature& chart) {
  switch (a.kind) {
    case AtomKind::Coordinate:
      return chart.coordinate(a.index);
    case AtomKind::Pi:
      return "pi";
    case AtomKind::Jet: {
      const auto& name = chart.opaque().at(a.index).name;
      if (a.jet.empty()) return name;
      std::string out = "D[" + name;
      for (int j : a.jet) out += "," + chart.coordinate(j);
      return out + "]";
    }
  }
  return {};
}

struct PrintKey {
  std::vector<std::pair<detail::AtomData, int>> factors;
  ExpArgument arg;
  bool operator<(const PrintKey& o) const {
    if (factors != o.factors) return factors < o.factors;
    return arg < o.arg;
  }
};

}  // namespace

std::string Expr::to_string(const ChartSignature& chart) const {
  std::vector<std::pair<PrintKey, const Term*>> keyed;
  for (const auto& t : terms()) {
    PrintKey k;
    for (const auto& f : t.mono.factors) k.factors.emplace_back(detail::atom_data(f.atom), f.power);
    std::sort(k.factors.begin(), k.factors.end());
    if (t.mono.exp_arg != 0) k.arg = detail::exp_data(t.mono.exp_arg);
    keyed.emplace_back(std::move(k), &t);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::string> parts;
  for (const auto& [key, t] : keyed) {
    std::string body;
    for (const auto& [atom, power] : key.factors) {
      if (!body.empty()) body += "*";
      body += atom_text(atom, chart);
      if (power != 1) body += "^" + std::to_string(power);
    }
    if (!key.arg.empty()) {
      if (!body.empty()) body += "*";
      body += "exp(" + argument_text(key.arg, chart) + ")";
    }
    parts.push_back(scaled_text(t->coeff, body));
  }
  return join_signed(parts);
}

}  // namespace tpq
