#include <cctype>
#include <set>

#include "tpq/expr.hpp"

namespace tpq {
namespace {

class Parser {
 public:
  Parser(std::string_view text, const ChartSignature& chart) : s_(text), chart_(chart) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e += term();
      } else if (accept('-')) {
        e -= term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e *= unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = unary();
        if (!d.is_monomial()) {
          pos_ = at;
          fail(d.is_zero() ? "division by zero" : "division by a non-monomial expression");
        }
        e = e / d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr b = base();
    if (!accept('^')) return b;
    bool paren = accept('(');
    bool neg = accept('-');
    long n = integer();
    if (paren) expect(')');
    if (n > 10000) fail("exponent too large");
    if (neg) {
      if (!b.is_monomial()) fail(b.is_zero() ? "division by zero" : "negative power of a non-monomial expression");
      n = -n;
    }
    return b.pow(static_cast<int>(n));
  }

  long integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ - start > 6) fail("exponent too large");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }

  std::string identifier() {
    skip();
    std::size_t start = pos_;
    auto ok = [&](char c, bool first) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
             (!first && std::isdigit(static_cast<unsigned char>(c)));
    };
    while (pos_ < s_.size() && ok(s_[pos_], pos_ == start)) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(s_.substr(start, pos_ - start));
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string digits(s_.substr(start, pos_ - start));
    Rational value{mpz_class(digits.empty() ? "0" : digits)};
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string frac(s_.substr(fs, pos_ - fs));
      if (!frac.empty()) {
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        value += Rational(mpz_class(frac), scale);
        value.canonicalize();
      }
    }
    return Expr(GaussRat(value));
  }

  int coordinate_name() {
    std::size_t at = pos_;
    std::string name = identifier();
    auto idx = chart_.coordinate_index(name);
    if (!idx) {
      pos_ = at;
      skip();
      fail("unknown coordinate '" + name + "'");
    }
    return *idx;
  }

  Expr base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    std::size_t at = pos_;
    std::string name = identifier();
    if (name == "i") return Expr::imag_unit();
    if (name == "pi") return Expr::pi();
    if (name == "exp") {
      expect('(');
      std::size_t arg_at = pos_;
      Expr arg = expr();
      expect(')');
      if (!arg.is_zero() && !arg.as_linear_argument()) {
        pos_ = arg_at;
        skip();
        fail("exp argument must be rational-linear in coordinates and opaque symbols");
      }
      return Expr::exp(arg);
    }
    if (name == "D") {
      expect('[');
      std::size_t sym_at = pos_;
      std::string sym = identifier();
      auto si = chart_.opaque_index(sym);
      if (!si) {
        pos_ = sym_at;
        skip();
        fail("unknown opaque symbol '" + sym + "'");
      }
      std::vector<int> idx;
      while (accept(',')) idx.push_back(coordinate_name());
      expect(']');
      if (idx.empty()) fail("D[...] needs at least one coordinate");
      for (int k : idx) {
        // derivative along a coordinate the symbol ignores
        if (!chart_.depends(*si, k)) return Expr();
      }
      return Expr::jet(*si, idx);
    }
    if (auto idx = chart_.coordinate_index(name)) return Expr::coordinate(*idx);
    if (auto si = chart_.opaque_index(name)) {
      if (accept('(')) {
        std::set<int> args;
        if (!accept(')')) {
          do {
            args.insert(coordinate_name());
          } while (accept(','));
          expect(')');
        }
        const auto& dep = chart_.opaque()[*si].depends;
        if (args != std::set<int>(dep.begin(), dep.end())) {
          pos_ = at;
          fail("arguments of '" + name + "' do not match its declared dependencies");
        }
      }
      return Expr::jet(*si);
    }
    pos_ = at;
    fail("unknown identifier '" + name + "'");
  }

  std::string_view s_;
  const ChartSignature& chart_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, const ChartSignature& chart) { return Parser(text, chart).parse(); }

}  // namespace tpq
