#include "tpq/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "tpq/corpus.hpp"
#include "tpq/linalg.hpp"
#include "tpq/toml.hpp"

namespace tpq::cli {

const std::vector<std::string> kCommands{"check-structure", "check-prequant",  "solve-prequant-lie", "check-polarization",
                                         "membership",      "h0-residual",     "quantum-op",         "cohomology-lie",
                                         "jacobiator",      "chainmap",        "run-example"};
const std::vector<std::string> kExamples{"ex1", "ex2", "ex3", "ex4", "ex6", "quant51"};

namespace {

constexpr int kMaxCohomologyDim = 12;

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// "i,j,k", 1-based and strictly increasing, exactly `grade` entries
IndexMask parse_key(std::string_view key, int dim, int grade) {
  std::vector<int> idx;
  std::string cur;
  auto flush = [&] {
    std::string t = trim(cur);
    cur.clear();
    if (t.empty()) throw Error("empty index in key \"" + std::string(key) + "\"");
    for (char c : t) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw Error("bad index '" + t + "' in key \"" + std::string(key) + "\"");
    }
    int i = std::stoi(t);
    if (i < 1 || i > dim) throw Error("index " + t + " out of range 1.." + std::to_string(dim));
    idx.push_back(i - 1);
  };
  if (grade == 0 && trim(key).empty()) return 0;
  for (char c : key) {
    if (c == ',') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (idx[k] <= idx[k - 1]) throw Error("indices must be strictly increasing in key \"" + std::string(key) + "\"");
  }
  if (static_cast<int>(idx.size()) != grade) {
    throw Error("key \"" + std::string(key) + "\" has " + std::to_string(idx.size()) + " indices, expected " +
                std::to_string(grade));
  }
  return indices_mask(idx);
}

Rational parse_rational(const toml::Value& v) {
  if (v.is_int()) return Rational(static_cast<long>(v.as_int()));
  const std::string t = trim(v.as_string());
  try {
    Rational q(t);
    q.canonicalize();
    if (q.get_den() == 0) throw Error("zero denominator");
    return q;
  } catch (const std::invalid_argument&) {
    throw Error("not a rational number: '" + t + "'");
  }
}

template <class T>
T parse_antisym(std::string_view text, const ChartPtr& chart, int grade) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '{' || t.back() != '}') throw Error("expected {key: expr; ...}, got '" + t + "'");
  T out(chart, grade);
  std::string body = t.substr(1, t.size() - 2);
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : body) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ';' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  std::set<IndexMask> seen;
  for (const auto& p : parts) {
    if (trim(p).empty()) continue;
    auto colon = p.find(':');
    std::string key = colon == std::string::npos ? std::string() : p.substr(0, colon);
    std::string expr = colon == std::string::npos ? p : p.substr(colon + 1);
    if (colon == std::string::npos && grade != 0) throw Error("missing 'key:' in '" + trim(p) + "'");
    IndexMask m = parse_key(key, chart->dim(), grade);
    if (!seen.insert(m).second) throw Error("duplicate key \"" + trim(key) + "\"");
    out.add(m, parse_expr(expr, *chart));
  }
  return out;
}

template <class T>
T tensor_table(const toml::Table& t, const ChartPtr& chart, int grade) {
  T out(chart, grade);
  for (const auto& e : t.entries) {
    try {
      IndexMask m = parse_key(e.key, chart->dim(), grade);
      out.add(m, parse_expr(e.value.as_string(), *chart));
    } catch (const Error& err) {
      throw Error("line " + std::to_string(e.value.line) + ": [" + t.name() + "] " + err.what());
    }
  }
  return out;
}

AlgForm alg_table_form(const toml::Table& t, int dim, int grade) {
  AlgForm out(dim, grade);
  for (const auto& e : t.entries) {
    try {
      IndexMask m = parse_key(e.key, dim, grade);
      out.add(m, parse_rational(e.value));
    } catch (const Error& err) {
      throw Error("line " + std::to_string(e.value.line) + ": [" + t.name() + "] " + err.what());
    }
  }
  return out;
}

AlgMultiVector alg_table_multivector(const toml::Table& t, int dim, int grade) {
  AlgMultiVector out(dim, grade);
  for (const auto& e : t.entries) {
    try {
      IndexMask m = parse_key(e.key, dim, grade);
      out.add(m, parse_rational(e.value));
    } catch (const Error& err) {
      throw Error("line " + std::to_string(e.value.line) + ": [" + t.name() + "] " + err.what());
    }
  }
  return out;
}

void only_keys(const toml::Table& t, std::initializer_list<std::string_view> allowed) {
  for (const auto& e : t.entries) {
    if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
      throw Error("line " + std::to_string(e.value.line) + ": unknown key '" + e.key + "' in [" + t.name() + "]");
    }
  }
}

template <class F>
auto at_line(int line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const toml::ParseError&) {
    throw;
  } catch (const Error& e) {
    std::string what = e.what();
    if (what.rfind("line ", 0) == 0) throw;
    throw Error("line " + std::to_string(line) + ": " + what);
  }
}

ChartPtr parse_chart(const toml::Document& doc, int max_dim) {
  const toml::Table* t = doc.find("chart");
  if (!t) return nullptr;
  only_keys(*t, {"coordinates", "conjugate_pairs", "max_dim"});
  const toml::Value* coords = t->find("coordinates");
  if (!coords) throw Error("line " + std::to_string(t->line) + ": [chart] needs coordinates");
  auto names = coords->as_strings();
  std::vector<std::pair<std::string, std::string>> pairs;
  if (const auto* p = t->find("conjugate_pairs")) {
    for (const auto& pr : p->as_array()) {
      auto two = pr.as_strings();
      if (two.size() != 2) throw Error("line " + std::to_string(pr.line) + ": a conjugate pair has two names");
      pairs.emplace_back(two[0], two[1]);
    }
  }
  int md = std::max(ChartSignature::kDefaultMaxDim, static_cast<int>(names.size()));
  if (const auto* m = t->find("max_dim")) md = static_cast<int>(m->as_int());
  if (max_dim > 0) md = max_dim;
  std::vector<OpaqueSymbol> opaque;
  for (const auto* o : doc.children("chart.opaque")) {
    only_keys(*o, {"depends", "real"});
    OpaqueSymbol sym;
    sym.name = o->path.back();
    if (const auto* d = o->find("depends")) {
      for (const auto& v : d->as_array()) {
        const std::string& c = v.as_string();
        auto it = std::find(names.begin(), names.end(), c);
        if (it == names.end()) {
          throw Error("line " + std::to_string(v.line) + ": opaque '" + sym.name + "' depends on undeclared coordinate '" +
                      c + "'");
        }
        sym.depends.push_back(static_cast<int>(it - names.begin()));
      }
    }
    std::sort(sym.depends.begin(), sym.depends.end());
    if (const auto* r = o->find("real")) sym.real = r->as_bool();
    opaque.push_back(std::move(sym));
  }
  return at_line(t->line, [&] { return make_chart(names, pairs, opaque, md); });
}

std::optional<LieSection> parse_lie(const toml::Document& doc) {
  const toml::Table* t = doc.find("lie");
  if (!t) return std::nullopt;
  only_keys(*t, {"basis", "gl_rows", "gl_cols"});
  std::optional<LieAlgebraModel> alg;
  const auto* rows = t->find("gl_rows");
  const auto* cols = t->find("gl_cols");
  const auto* basis = t->find("basis");
  if (rows || cols) {
    if (!rows || !cols || basis) throw Error("line " + std::to_string(t->line) + ": [lie] needs gl_rows and gl_cols, or basis");
    auto ints = [](const toml::Value& v) {
      std::vector<int> out;
      for (const auto& x : v.as_array()) out.push_back(static_cast<int>(x.as_int()));
      return out;
    };
    alg = at_line(t->line, [&] { return build_gl_subalgebra(ints(*rows), ints(*cols)); });
    if (doc.find("lie.brackets")) throw Error("[lie.brackets] conflicts with the gl shorthand");
  } else {
    if (!basis) throw Error("line " + std::to_string(t->line) + ": [lie] needs basis or gl_rows/gl_cols");
    auto names = basis->as_strings();
    const int n = static_cast<int>(names.size());
    std::map<std::pair<int, int>, std::vector<Rational>> br;
    if (const auto* b = doc.find("lie.brackets")) {
      for (const auto& e : b->entries) {
        at_line(e.value.line, [&] {
          IndexMask m = parse_key(e.key, n, 2);
          auto idx = mask_indices(m);
          std::vector<Rational> c;
          for (const auto& x : e.value.as_array()) c.push_back(parse_rational(x));
          if (static_cast<int>(c.size()) != n) throw Error("bracket \"" + e.key + "\" needs " + std::to_string(n) + " coefficients");
          br[{idx[0], idx[1]}] = std::move(c);
          return 0;
        });
      }
    }
    alg = at_line(t->line, [&] { return LieAlgebraModel(names, br); });
  }
  const int n = alg->dim();
  AlgMultiVector r(n, 2);
  AlgForm phi(n, 3);
  if (const auto* rt = doc.find("lie.r")) r = alg_table_multivector(*rt, n, 2);
  if (const auto* pt = doc.find("lie.phi")) phi = alg_table_form(*pt, n, 3);
  return LieSection{std::move(*alg), std::move(r), std::move(phi)};
}

Candidates parse_candidates(const toml::Table& t, const ChartPtr& chart) {
  only_keys(t, {"Z", "Phi", "chi", "g", "pairs", "gamma"});
  Candidates c;
  const auto& sig = *chart;
  for (const auto& e : t.entries) {
    at_line(e.value.line, [&] {
      if (e.key == "Z") c.z = parse_multivector(e.value.as_string(), chart, 1);
      if (e.key == "Phi") c.big_phi = parse_form(e.value.as_string(), chart, 2);
      if (e.key == "chi") {
        for (const auto& s : e.value.as_strings()) c.chi.push_back(parse_expr(s, sig));
      }
      if (e.key == "g") {
        for (const auto& s : e.value.as_strings()) c.g.push_back(parse_expr(s, sig));
      }
      if (e.key == "gamma") {
        for (const auto& s : e.value.as_strings()) c.gamma.push_back(parse_form(s, chart, 1));
      }
      if (e.key == "pairs") {
        for (const auto& p : e.value.as_array()) {
          auto two = p.as_strings();
          if (two.size() != 2) throw Error("a pair has two entries");
          c.pairs.emplace_back(parse_expr(two[0], sig), parse_expr(two[1], sig));
        }
      }
      return 0;
    });
  }
  return c;
}

const std::set<std::string> kSections{"chart",         "bivector",      "form1",     "form2",     "form3",
                                      "bundle",        "bundle.omega",  "bundle.z",  "polarization", "lie",
                                      "lie.brackets",  "lie.r",         "lie.phi",   "candidates"};

std::string rational_text(const Rational& q) { return tpq::to_string(q); }

template <class T>
void write_tensor(std::ostringstream& os, const std::string& name, const T& a) {
  os << "\n[" << name << "]\n";
  for (const auto& [m, e] : a.components()) os << toml::quote(mask_key(m)) << " = " << toml::quote(e.to_string(a.sig())) << "\n";
}

template <class T>
std::string antisym_text(const T& a) {
  return a.chart() ? a.to_string() : "{}";
}

std::string string_array(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + toml::quote(v[i]);
  return out + "]";
}

bool same_algebra(const LieAlgebraModel& a, const LieAlgebraModel& b) {
  if (a.names() != b.names()) return false;
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < a.dim(); ++j) {
      if (a.bracket(i, j) != b.bracket(i, j)) return false;
    }
  }
  return true;
}

bool same_chart_ptr(const ChartPtr& a, const ChartPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

// ---------------------------------------------------------------------------
// command helpers

const TwistedPoissonStructure& need(const std::optional<TwistedPoissonStructure>& s) {
  if (!s) throw Error("missing [bivector]");
  return *s;
}

std::string coform_label(const Form& a) {
  if (a.components().size() == 1) {
    const auto& [m, e] = *a.components().begin();
    if (mask_grade(m) == 1 && e == Expr(1)) return "d" + a.sig().coordinate(mask_indices(m)[0]);
  }
  return a.to_string();
}

// small polynomials for randomized commands, independent of the test generators
class Sampler {
 public:
  Sampler(ChartPtr chart, std::uint64_t seed) : chart_(std::move(chart)), rng_(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  Expr poly(int terms = 3) {
    Expr e;
    for (int k = 0; k < terms; ++k) {
      Expr m(GaussRat(Rational(pick(7) - 3, pick(3) + 1)));
      int deg = pick(3);
      for (int d = 0; d < deg; ++d) m *= Expr::coordinate(pick(chart_->dim()));
      e += m;
    }
    return e;
  }
  Form form(int grade) {
    Form out(chart_, grade);
    if (grade == 0) return Form::scalar(chart_, poly());
    for (int k = 0; k < 2; ++k) {
      std::vector<int> idx;
      for (int i = 0; i < chart_->dim(); ++i) idx.push_back(i);
      std::shuffle(idx.begin(), idx.end(), rng_);
      idx.resize(grade);
      out += Form::basis(chart_, idx).times(poly());
    }
    return out;
  }

 private:
  ChartPtr chart_;
  std::mt19937_64 rng_;
};

void add_all(Report& rep, const std::string& prefix, const auto& tensor) {
  for (const auto& [m, e] : tensor.components()) rep.add(prefix + " " + mask_key(m), e, tensor.sig());
}

void twisted_residuals(Report& rep, const MultiVector& lambda, const Form& phi, const std::string& prefix = "") {
  auto c = check_twisted_poisson(lambda, phi);
  add_all(rep, prefix + "d phi", c.closed);
  add_all(rep, prefix + "1/2[L,L] - L#(phi)", c.structure);
}

void prequant_residuals(Report& rep, const TwistedPoissonStructure& s, const MultiVector& z, const Form& big_phi,
                        const std::string& prefix = "") {
  auto c = check_prequantization(s, z, big_phi);
  add_all(rep, prefix + "d Phi", c.closed);
  add_all(rep, prefix + "L + del_phi Z - L#(Phi)", c.residual);
  rep.assumptions.push_back(std::string("integrality: ") + PrequantizationCheck::integrality);
}

void require_twisted(const TwistedPoissonStructure& s) {
  if (!check_twisted_poisson(s.lambda(), s.phi()).ok()) {
    throw Error("(Lambda, phi) is not twisted Poisson; run check-structure for residuals");
  }
}

Polarization polarization_of(const StructureFile& f, const TwistedPoissonStructure& s) {
  if (!f.polarization) throw Error("missing [polarization]");
  return Polarization::unchecked(s, *f.polarization, f.complement);
}

void polarization_residuals(Report& rep, const Polarization& p, const std::string& prefix = "") {
  const auto& g = p.generators();
  const auto& sig = *p.structure().chart();
  auto chk = check_polarization(p);
  const std::size_t per = g.size() < 2 ? 0 : chk.closure.size() / (g.size() * (g.size() - 1) / 2);
  std::size_t pair = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j, ++pair) {
      const std::string tag = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      rep.add(prefix + "isotropy " + tag, chk.isotropy[pair], sig);
      for (std::size_t c = 0; c < per; ++c) {
        rep.add(prefix + "closure " + tag + " along " + coform_label(p.complement()[c]), chk.closure[pair * per + c], sig);
      }
    }
  }
}

void membership_residuals(Report& rep, const Polarization& p, const Form& gamma, const std::string& tag) {
  auto res = membership_residual(p, gamma);
  const auto& sig = *p.structure().chart();
  const std::size_t per = p.complement().size();
  for (std::size_t k = 0; k < p.generators().size(); ++k) {
    for (std::size_t c = 0; c < per; ++c) {
      rep.add(tag + " {., " + coform_label(p.generators()[k]) + "} along " + coform_label(p.complement()[c]),
              res[k * per + c], sig);
    }
  }
}

void pair_residuals(Report& rep, const Polarization& p, const Expr& g1, const Expr& g2) {
  const auto& sig = *p.structure().chart();
  const std::string tag = "pair(" + g1.to_string(sig) + ", " + g2.to_string(sig) + ")";
  auto r = quantizable_pair_check(p, g1, g2);
  if (r.status == PairCheck::Status::Diagonal || r.status == PairCheck::Status::NotInP) {
    rep.status = Status::Error;
    rep.message += (rep.message.empty() ? "" : "; ") + tag + ": " + r.message;
    return;
  }
  const std::size_t per = p.complement().size();
  for (std::size_t k = 0; k < r.residuals.size(); ++k) {
    rep.add(tag + " {., " + coform_label(p.generators()[k / per]) + "} along " + coform_label(p.complement()[k % per]),
            r.residuals[k], sig);
  }
}

void h0_residual_lines(Report& rep, const LineBundleModel& b, const Polarization& p, const Expr& chi,
                       const std::string& tag) {
  auto res = h0_residuals(b, p, chi);
  for (std::size_t k = 0; k < res.size(); ++k) rep.add(tag + " D_" + coform_label(p.generators()[k]), res[k], *b.chart());
}

LineBundleModel bundle_of(const StructureFile& f, const TwistedPoissonStructure& s) {
  if (!f.has_bundle) return LineBundleModel(s);
  return LineBundleModel(s, f.omega, f.z);
}

const LieSection& need_lie(const StructureFile& f) {
  if (!f.lie) throw Error("missing [lie]");
  return *f.lie;
}

void lie_structure_residuals(Report& rep, const LieSection& l) {
  auto c = check_twisted_structure(l.algebra, l.r, l.phi);
  for (const auto& [m, v] : c.closed.components()) rep.add("d phi " + mask_key(m), rational_text(v));
  for (const auto& [m, v] : c.structure.components()) rep.add("1/2[r,r] - r#(phi) " + mask_key(m), rational_text(v));
}

void solve_lie(Report& rep, const LieSection& l, bool expect_unsolvable) {
  const auto& names = l.algebra.names();
  auto c = check_twisted_structure(l.algebra, l.r, l.phi);
  if (!c.ok()) throw Error("(r, phi) is not a twisted structure on the algebra");
  auto closed = closed_two_forms(l.algebra);
  rep.values.emplace_back("closed 2-forms dim", std::to_string(closed.size()));
  rep.values.emplace_back("r + del_phi(Z)", prequantization_expansion(l.algebra, l.r, l.phi).to_string(names));
  auto sol = solve_prequantization(l.algebra, l.r, l.phi);
  rep.assumptions.push_back(std::string("integrality: ") + PrequantizationCheck::integrality);
  if (sol.solvable) {
    rep.values.emplace_back("Z", sol.z.to_string(names));
    rep.values.emplace_back("Phi", sol.big_phi.to_string(names));
    AlgMultiVector res = l.r + algebraic_del_phi(l.algebra, l.r, l.phi, sol.z) - alg_sharp(l.r, sol.big_phi);
    for (const auto& [m, v] : res.components()) rep.add("witness r + del_phi Z - r#(Phi) " + mask_key(m), rational_text(v));
    for (const auto& [m, v] : ce_differential(l.algebra, sol.big_phi).components()) {
      rep.add("witness d Phi " + mask_key(m), rational_text(v));
    }
    if (expect_unsolvable) rep.add("prequantization equation", "solvable");
    else rep.message = "prequantizable: witness verified";
    return;
  }
  if (!verify_certificate(l.algebra, l.r, l.phi, sol)) throw Error("internal: infeasibility certificate failed to verify");
  Rational on_r = 0;
  std::string cert;
  for (std::size_t k = 0; k < sol.certificate.size(); ++k) {
    if (sgn(sol.certificate[k]) == 0) continue;
    on_r += sol.certificate[k] * l.r.at(sol.certificate_rows[k]);
    if (!cert.empty()) cert += "; ";
    auto idx = mask_indices(sol.certificate_rows[k]);
    cert += names[idx[0]] + "^" + names[idx[1]] + ": " + rational_text(sol.certificate[k]);
  }
  rep.values.emplace_back("certificate", "{" + cert + "}");
  rep.message = "not prequantizable: certificate annihilates del_phi(g) and r#(closed 2-forms) but not r";
  if (!expect_unsolvable) rep.add("certificate(r)", rational_text(on_r));
}

void cohomology(Report& rep, const LieSection& l) {
  const int n = l.algebra.dim();
  if (n > kMaxCohomologyDim) throw Error("cohomology-lie is limited to dimension " + std::to_string(kMaxCohomologyDim));
  lie_structure_residuals(rep, l);
  for (int k = 0; k + 2 <= n; ++k) {
    auto a = del_phi_matrix(l.algebra, l.r, l.phi, k);
    auto b = del_phi_matrix(l.algebra, l.r, l.phi, k + 1);
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = 0; j < (a.empty() ? 0 : a[0].size()); ++j) {
        Rational s = 0;
        for (std::size_t m = 0; m < a.size(); ++m) s += b[i][m] * a[m][j];
        if (sgn(s) != 0) {
          rep.add("del_phi^2 grade " + std::to_string(k) + " (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                  rational_text(s));
        }
      }
    }
  }
  if (!rep.residuals.empty()) return;  // H is meaningless without del_phi^2 = 0
  for (int k = 0; k <= n; ++k) rep.values.emplace_back("H^" + std::to_string(k), std::to_string(ltp_cohomology(l.algebra, l.r, l.phi, k)));
}

void jacobiator_lines(Report& rep, const TwistedPoissonStructure& s, const Options& opt) {
  const auto& c = s.chart();
  const auto& sig = *c;
  const int n = c->dim();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        rep.add("J(" + sig.coordinate(i) + "," + sig.coordinate(j) + "," + sig.coordinate(k) + ")",
                jacobiator(s, Expr::coordinate(i), Expr::coordinate(j), Expr::coordinate(k)), sig);
      }
    }
  }
  Sampler gen(c, opt.seed);
  for (int t = 0; t < opt.trials; ++t) {
    Expr f = gen.poly(), g = gen.poly(), h = gen.poly();
    rep.add("J(trial " + std::to_string(t + 1) + ")", jacobiator(s, f, g, h), sig);
  }
  rep.values.emplace_back("trials", std::to_string(opt.trials));
}

void chainmap_lines(Report& rep, const TwistedPoissonStructure& s, const Options& opt) {
  const auto& c = s.chart();
  const int n = c->dim();
  auto one = [&](const Form& eta, const std::string& tag) {
    MultiVector d = del_phi(s, sharp(s.lambda(), eta)) + sharp(s.lambda(), exterior_derivative(eta));
    add_all(rep, "del_phi L#(" + tag + ") + L#(d " + tag + ")", d);
  };
  for (int i = 0; i < n; ++i) one(Form::basis(c, {i}).times(Expr::coordinate(i)), "x" + std::to_string(i + 1) + " dx" + std::to_string(i + 1));
  Sampler gen(c, opt.seed);
  for (int t = 0; t < opt.trials; ++t) one(gen.form(gen.pick(std::min(n, 4))), "trial " + std::to_string(t + 1));
  rep.values.emplace_back("trials", std::to_string(opt.trials));
}

// ---------------------------------------------------------------------------
// corpus runs

void run_ex1(Report& rep) {
  auto e = corpus::example1();
  twisted_residuals(rep, e.lambda, e.phi);
  add_all(rep, "L#(phi)", sharp(e.lambda, e.phi));
}

void run_ex2(Report& rep, int n) {
  auto e = corpus::example2(n);
  twisted_residuals(rep, e.lambda, e.phi);
  TwistedPoissonStructure s(e.lambda, e.phi);
  const auto& c = e.chart;
  Form big = e.omega0.times(e.f) - exterior_derivative(e.alpha).times(e.f) - wedge(e.alpha, differential(c, e.f));
  add_all(rep, "L + del_phi(L0#alpha) - L0#(f w0 - f d alpha - alpha^df)", e.lambda + del_phi(s, e.z) - sharp(e.lambda0, big));
}

void run_ex3(Report& rep, int n) {
  auto e = corpus::example3(n, true);
  twisted_residuals(rep, e.lambda, e.phi, "opaque f: ");
  auto z = corpus::example3(n, false);
  TwistedPoissonStructure s(z.lambda, z.phi);
  prequant_residuals(rep, s, z.z, z.big_phi, "f = 0: ");
}

void run_ex4(Report& rep, int n, const Options& opt) {
  auto e = corpus::example4(n);
  twisted_residuals(rep, e.lambda, e.phi);
  TwistedPoissonStructure s(e.lambda, e.phi);
  prequant_residuals(rep, s, e.z, Form(e.chart, 2));
  LineBundleModel b(s, Form(), e.z);
  Sampler gen(e.chart, opt.seed);
  for (int t = 0; t < opt.trials; ++t) {
    Expr f = gen.poly(), g = gen.poly(), sec = gen.poly() + Expr(1);
    rep.add("homomorphism trial " + std::to_string(t + 1), homomorphism_residual(b, f, g, sec), *e.chart);
  }
}

void run_ex6(Report& rep) {
  auto e = corpus::example6();
  LieSection l{e.algebra, e.r, e.phi};
  lie_structure_residuals(rep, l);
  solve_lie(rep, l, true);
  if (rep.residuals.empty()) rep.message = "not prequantizable, certificate verified";
  for (int k = 0; k <= e.algebra.dim(); ++k) {
    rep.values.emplace_back("H^" + std::to_string(k), std::to_string(ltp_cohomology(e.algebra, e.r, e.phi, k)));
  }
}

void run_quant51(Report& rep, int n) {
  auto q = corpus::quant51(n);
  const auto& c = q.chart;
  const auto& sig = *c;
  twisted_residuals(rep, q.lambda, q.phi);
  TwistedPoissonStructure s(q.lambda, q.phi);
  Polarization p(s, q.polarization, q.complement);
  polarization_residuals(rep, p);
  LineBundleModel b(s);
  const Expr t = Expr::coordinate(q.t());
  const Expr et = Expr::exp(t);
  const GaussRat half(Rational(1, 2));
  for (int k = 0; k < n; ++k) {
    Form dz = Form::basis(c, {q.z(k)});
    Expr expect = (et * q.f.differentiate(q.zb(k), sig)).scaled(GaussRat(Rational(0), Rational(2)));
    rep.add("div L#(dz" + std::to_string(k + 1) + ") - 2i e^t f_zb", divergence(sharp(q.lambda, dz)) - expect, sig);
  }
  Expr g1 = q.f + t;
  membership_residuals(rep, p, differential(c, g1), "g=" + g1.to_string(sig));
  pair_residuals(rep, p, g1, g1.scaled(GaussRat(2)) + Expr(3));
  // e^{t/2} as stated does not solve the reduced equation; e^{-t/2} does
  const std::vector<Expr> chis{Expr::exp(q.f.scaled(half)), Expr::exp(t.scaled(-half))};
  for (const auto& chi : chis) {
    const std::string tag = "chi=" + chi.to_string(sig);
    h0_residual_lines(rep, b, p, chi, tag);
    h0_residual_lines(rep, b, p, quantum_operator(b, g1, chi), "ghat(" + tag + ")");
  }
  rep.message = "H0 members verified: exp(f/2), exp(-t/2); exp(t/2) leaves the residual listed under values";
  Expr stated = Expr::exp(t.scaled(half));
  auto res = h0_residuals(b, p, stated);
  for (std::size_t k = 0; k < res.size(); ++k) {
    rep.values.emplace_back("chi=" + stated.to_string(sig) + " D_" + coform_label(p.generators()[k]) + " (not a solution)",
                            res[k].to_string(sig));
  }
}

}  // namespace

// ---------------------------------------------------------------------------

TwistedPoissonStructure StructureFile::structure() const {
  if (!bivector) throw Error("missing [bivector]");
  return TwistedPoissonStructure::unchecked(*bivector, forms[3] ? *forms[3] : Form(chart, 3));
}

bool operator==(const StructureFile& a, const StructureFile& b) {
  if (!same_chart_ptr(a.chart, b.chart)) return false;
  if (a.bivector != b.bivector || a.forms != b.forms) return false;
  if (a.has_bundle != b.has_bundle || !(a.omega == b.omega) || !(a.z == b.z)) return false;
  if (a.polarization != b.polarization || a.complement != b.complement) return false;
  if (a.lie.has_value() != b.lie.has_value()) return false;
  if (a.lie && (!same_algebra(a.lie->algebra, b.lie->algebra) || !(a.lie->r == b.lie->r) || !(a.lie->phi == b.lie->phi))) {
    return false;
  }
  const auto &ca = a.candidates, &cb = b.candidates;
  return ca.z == cb.z && ca.big_phi == cb.big_phi && ca.chi == cb.chi && ca.g == cb.g && ca.pairs == cb.pairs &&
         ca.gamma == cb.gamma;
}

Form parse_form(std::string_view text, const ChartPtr& chart, int grade) { return parse_antisym<Form>(text, chart, grade); }

MultiVector parse_multivector(std::string_view text, const ChartPtr& chart, int grade) {
  return parse_antisym<MultiVector>(text, chart, grade);
}

StructureFile parse_structure(std::string_view text, int max_dim) {
  toml::Document doc = toml::parse(text);
  if (!doc.tables.front().entries.empty()) {
    const auto& e = doc.tables.front().entries.front();
    throw Error("line " + std::to_string(e.value.line) + ": key '" + e.key + "' outside any section");
  }
  for (const auto& t : doc.tables) {
    if (t.path.empty()) continue;
    const std::string name = t.name();
    if (kSections.count(name) == 0 && name.rfind("chart.opaque.", 0) != 0) {
      throw Error("line " + std::to_string(t.line) + ": unknown section [" + name + "]");
    }
  }
  StructureFile f;
  f.chart = parse_chart(doc, max_dim);
  f.lie = parse_lie(doc);
  bool chart_sections = false;
  for (const auto& t : doc.tables) {
    if (!t.path.empty() && t.path[0] != "chart" && t.path[0] != "lie") chart_sections = true;
  }
  if (!f.chart && (!f.lie || chart_sections)) throw Error("missing [chart]");
  if (!f.chart) return f;
  const auto& chart = f.chart;
  if (const auto* t = doc.find("bivector")) f.bivector = tensor_table<MultiVector>(*t, chart, 2);
  for (int k = 1; k <= 3; ++k) {
    if (const auto* t = doc.find("form" + std::to_string(k))) f.forms[k] = tensor_table<Form>(*t, chart, k);
  }
  f.omega = Form(chart, 1);
  f.z = MultiVector(chart, 1);
  if (const auto* t = doc.find("bundle")) {
    only_keys(*t, {});
    f.has_bundle = true;
  }
  if (const auto* t = doc.find("bundle.omega")) {
    f.omega = tensor_table<Form>(*t, chart, 1);
    f.has_bundle = true;
  }
  if (const auto* t = doc.find("bundle.z")) {
    f.z = tensor_table<MultiVector>(*t, chart, 1);
    f.has_bundle = true;
  }
  if (const auto* t = doc.find("polarization")) {
    only_keys(*t, {"generators", "complement"});
    std::vector<Form> gens;
    if (const auto* g = t->find("generators")) {
      for (const auto& v : g->as_array()) gens.push_back(at_line(v.line, [&] { return parse_form(v.as_string(), chart, 1); }));
    }
    if (const auto* c = t->find("complement")) {
      for (const auto& v : c->as_array()) {
        f.complement.push_back(at_line(v.line, [&] { return parse_form(v.as_string(), chart, 1); }));
      }
    }
    f.polarization = std::move(gens);
  }
  if (const auto* t = doc.find("candidates")) f.candidates = parse_candidates(*t, chart);
  return f;
}

StructureFile load_structure(const std::string& path, int max_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_structure(ss.str(), max_dim);
}

std::string save_structure(const StructureFile& s) {
  std::ostringstream os;
  if (s.chart) {
    const auto& c = *s.chart;
    os << "[chart]\ncoordinates = " << string_array(c.coordinates()) << "\n";
    auto pairs = c.conjugate_pairs();
    if (!pairs.empty()) {
      os << "conjugate_pairs = [";
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        os << (i ? ", " : "") << string_array({pairs[i].first, pairs[i].second});
      }
      os << "]\n";
    }
    os << "max_dim = " << c.max_dim() << "\n";
    for (const auto& o : c.opaque()) {
      std::vector<std::string> deps;
      for (int d : o.depends) deps.push_back(c.coordinate(d));
      os << "\n[chart.opaque." << toml::key(o.name) << "]\ndepends = " << string_array(deps) << "\nreal = "
         << (o.real ? "true" : "false") << "\n";
    }
    if (s.bivector) write_tensor(os, "bivector", *s.bivector);
    for (int k = 1; k <= 3; ++k) {
      if (s.forms[k]) write_tensor(os, "form" + std::to_string(k), *s.forms[k]);
    }
    if (s.has_bundle) {
      os << "\n[bundle]\n";
      if (!s.omega.is_zero()) write_tensor(os, "bundle.omega", s.omega);
      if (!s.z.is_zero()) write_tensor(os, "bundle.z", s.z);
    }
    if (s.polarization) {
      std::vector<std::string> g, cp;
      for (const auto& a : *s.polarization) g.push_back(antisym_text(a));
      for (const auto& a : s.complement) cp.push_back(antisym_text(a));
      os << "\n[polarization]\ngenerators = " << string_array(g) << "\n";
      if (!cp.empty()) os << "complement = " << string_array(cp) << "\n";
    }
  }
  if (s.lie) {
    const auto& a = s.lie->algebra;
    os << "\n[lie]\nbasis = " << string_array(a.names()) << "\n\n[lie.brackets]\n";
    for (int i = 0; i < a.dim(); ++i) {
      for (int j = i + 1; j < a.dim(); ++j) {
        const auto& b = a.bracket(i, j);
        if (std::all_of(b.begin(), b.end(), [](const Rational& q) { return sgn(q) == 0; })) continue;
        std::vector<std::string> v;
        for (const auto& q : b) v.push_back(rational_text(q));
        os << toml::quote(std::to_string(i + 1) + "," + std::to_string(j + 1)) << " = " << string_array(v) << "\n";
      }
    }
    os << "\n[lie.r]\n";
    for (const auto& [m, q] : s.lie->r.components()) os << toml::quote(mask_key(m)) << " = " << toml::quote(rational_text(q)) << "\n";
    os << "\n[lie.phi]\n";
    for (const auto& [m, q] : s.lie->phi.components()) os << toml::quote(mask_key(m)) << " = " << toml::quote(rational_text(q)) << "\n";
  }
  const auto& cd = s.candidates;
  if (s.chart && !cd.empty()) {
    const auto& sig = *s.chart;
    auto exprs = [&](const std::vector<Expr>& v) {
      std::vector<std::string> out;
      for (const auto& e : v) out.push_back(e.to_string(sig));
      return string_array(out);
    };
    os << "\n[candidates]\n";
    if (cd.z) os << "Z = " << toml::quote(antisym_text(*cd.z)) << "\n";
    if (cd.big_phi) os << "Phi = " << toml::quote(antisym_text(*cd.big_phi)) << "\n";
    if (!cd.chi.empty()) os << "chi = " << exprs(cd.chi) << "\n";
    if (!cd.g.empty()) os << "g = " << exprs(cd.g) << "\n";
    if (!cd.gamma.empty()) {
      std::vector<std::string> v;
      for (const auto& a : cd.gamma) v.push_back(antisym_text(a));
      os << "gamma = " << string_array(v) << "\n";
    }
    if (!cd.pairs.empty()) {
      os << "pairs = [";
      for (std::size_t i = 0; i < cd.pairs.size(); ++i) {
        os << (i ? ", " : "") << string_array({cd.pairs[i].first.to_string(sig), cd.pairs[i].second.to_string(sig)});
      }
      os << "]\n";
    }
  }
  return os.str();
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
  }
  return "error";
}

void Report::add(const std::string& where, const Expr& e, const ChartSignature& chart) {
  if (!e.is_zero()) residuals.push_back({where, e.to_string(chart)});
}

void Report::add(const std::string& where, const std::string& text) { residuals.push_back({where, text}); }

void Report::settle() {
  if (status == Status::Error) return;
  status = residuals.empty() ? Status::Pass : Status::Fail;
}

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["status"] = to_string(r.status);
  j["residuals"] = nlohmann::ordered_json::array();
  for (const auto& x : r.residuals) j["residuals"].push_back({{"where", x.where}, {"expr", x.expr}});
  j["assumptions"] = r.assumptions;
  j["values"] = nlohmann::ordered_json::array();
  for (const auto& [k, v] : r.values) j["values"].push_back({{"name", k}, {"value", v}});
  j["message"] = r.message;
  j["millis"] = r.millis;
  return j;
}

int exit_code(const Report& r) {
  switch (r.status) {
    case Status::Pass: return 0;
    case Status::Fail: return 1;
    case Status::Error: return 2;
  }
  return 2;
}

Report run_on_structure(const std::string& command, const StructureFile& f, const Options& opt) {
  Report rep;
  rep.check = command;
  std::optional<TwistedPoissonStructure> s;
  if (f.bivector) s = f.structure();
  const auto& cd = f.candidates;
  if (command == "check-structure") {
    const auto& st = need(s);
    twisted_residuals(rep, st.lambda(), st.phi());
  } else if (command == "check-prequant") {
    const auto& st = need(s);
    require_twisted(st);
    MultiVector z = cd.z ? *cd.z : f.z;
    if (!cd.z && !f.has_bundle) throw Error("missing Z: give [candidates] Z or [bundle.z]");
    Form big = cd.big_phi ? *cd.big_phi : (f.forms[2] ? *f.forms[2] : Form(f.chart, 2));
    prequant_residuals(rep, st, z, big);
  } else if (command == "solve-prequant-lie") {
    solve_lie(rep, need_lie(f), false);
  } else if (command == "check-polarization") {
    const auto& st = need(s);
    polarization_residuals(rep, polarization_of(f, st));
  } else if (command == "membership") {
    const auto& st = need(s);
    Polarization p = polarization_of(f, st);
    if (cd.g.empty() && cd.gamma.empty() && cd.pairs.empty()) throw Error("membership needs [candidates] g, gamma or pairs");
    for (const auto& g : cd.g) membership_residuals(rep, p, differential(f.chart, g), "g=" + g.to_string(*f.chart));
    for (const auto& a : cd.gamma) membership_residuals(rep, p, a, "gamma=" + a.to_string());
    for (const auto& [g1, g2] : cd.pairs) pair_residuals(rep, p, g1, g2);
  } else if (command == "h0-residual") {
    const auto& st = need(s);
    Polarization p = polarization_of(f, st);
    if (cd.chi.empty()) throw Error("h0-residual needs [candidates] chi");
    LineBundleModel b = bundle_of(f, st);
    for (const auto& chi : cd.chi) h0_residual_lines(rep, b, p, chi, "chi=" + chi.to_string(*f.chart));
  } else if (command == "quantum-op") {
    const auto& st = need(s);
    if (cd.chi.empty() || cd.g.empty()) throw Error("quantum-op needs [candidates] g and chi");
    LineBundleModel b = bundle_of(f, st);
    std::optional<Polarization> p;
    if (f.polarization) p = polarization_of(f, st);
    const auto& sig = *f.chart;
    for (const auto& g : cd.g) {
      for (const auto& chi : cd.chi) {
        const std::string tag = "ghat(chi) g=" + g.to_string(sig) + " chi=" + chi.to_string(sig);
        Expr out = quantum_operator(b, g, chi);
        rep.values.emplace_back(tag, out.to_string(sig));
        if (!p) continue;
        auto in = h0_residuals(b, *p, chi);
        if (std::all_of(in.begin(), in.end(), [](const Expr& e) { return e.is_zero(); })) {
          h0_residual_lines(rep, b, *p, out, tag);
        } else {
          rep.values.emplace_back(tag + " input", "not in H0, preservation not checked");
        }
      }
    }
  } else if (command == "cohomology-lie") {
    cohomology(rep, need_lie(f));
  } else if (command == "jacobiator") {
    jacobiator_lines(rep, need(s), opt);
  } else if (command == "chainmap") {
    chainmap_lines(rep, need(s), opt);
  } else {
    throw Error("unknown command '" + command + "'");
  }
  rep.settle();
  return rep;
}

Report run_example(const std::string& name, const Options& opt) {
  Report rep;
  rep.check = "run-example " + name;
  if (opt.n < 1) throw Error("--n must be positive");
  if (name == "ex1") {
    run_ex1(rep);
  } else if (name == "ex2") {
    run_ex2(rep, opt.n);
  } else if (name == "ex3") {
    run_ex3(rep, opt.n);
  } else if (name == "ex4") {
    run_ex4(rep, opt.n, opt);
  } else if (name == "ex6") {
    run_ex6(rep);
  } else if (name == "quant51") {
    run_quant51(rep, opt.n);
  } else {
    throw Error("unknown example '" + name + "' (known: ex1, ex2, ex3, ex4, ex6, quant51)");
  }
  rep.settle();
  return rep;
}

Report run_command(const std::string& command, const std::string& target, const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  try {
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
      throw Error("unknown command '" + command + "'");
    }
    if (command == "run-example") {
      rep = run_example(target, opt);
    } else {
      rep = run_on_structure(command, load_structure(target, opt.max_dim), opt);
    }
  } catch (const std::exception& e) {
    rep = Report{};
    rep.check = command;
    rep.status = Status::Error;
    rep.message = e.what();
  }
  if (opt.timing) {
    rep.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  }
  return rep;
}

}  // namespace tpq::cli
