#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tpq/scalar.hpp"

namespace tpq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class ChartMismatch : public Error {
 public:
  ChartMismatch() : Error("chart mismatch") {}
};

/// A smooth function of some coordinates, never given a closed form.
struct OpaqueSymbol {
  std::string name;
  std::vector<int> depends;  // sorted coordinate indices
  bool real = true;
};

/// Coordinate names, the conjugation involution on them, and the opaque
/// function symbols a chart knows about.
class ChartSignature {
 public:
  static constexpr int kDefaultMaxDim = 8;

  /// `conjugate_pairs` names (z, zbar) pairs; every other coordinate is real.
  ChartSignature(std::vector<std::string> coordinates,
                 std::vector<std::pair<std::string, std::string>> conjugate_pairs = {},
                 std::vector<OpaqueSymbol> opaque = {}, int max_dim = kDefaultMaxDim);

  int dim() const { return static_cast<int>(coords_.size()); }
  int max_dim() const { return max_dim_; }
  const std::vector<std::string>& coordinates() const { return coords_; }
  const std::string& coordinate(int i) const { return coords_.at(i); }
  std::optional<int> coordinate_index(std::string_view name) const;
  int conjugate_of(int coord) const { return conj_.at(coord); }
  bool is_real_coordinate(int coord) const { return conj_.at(coord) == coord; }
  std::vector<std::pair<std::string, std::string>> conjugate_pairs() const;

  const std::vector<OpaqueSymbol>& opaque() const { return opaque_; }
  std::optional<int> opaque_index(std::string_view name) const;
  bool depends(int symbol, int coord) const;

  friend bool operator==(const ChartSignature& a, const ChartSignature& b);

 private:
  std::vector<std::string> coords_;
  std::vector<int> conj_;
  std::vector<OpaqueSymbol> opaque_;
  int max_dim_;
};

using ChartPtr = std::shared_ptr<const ChartSignature>;

ChartPtr make_chart(std::vector<std::string> coordinates,
                    std::vector<std::pair<std::string, std::string>> conjugate_pairs = {},
                    std::vector<OpaqueSymbol> opaque = {},
                    int max_dim = ChartSignature::kDefaultMaxDim);

bool same_chart(const ChartPtr& a, const ChartPtr& b);

enum class AtomKind : std::uint8_t { Coordinate = 0, Jet = 1, Pi = 2 };

/// Generator allowed inside an exponential: a coordinate or a degree-0
/// opaque symbol.
struct ExpGenerator {
  bool is_symbol = false;
  int index = 0;
  friend auto operator<=>(const ExpGenerator&, const ExpGenerator&) = default;
};

/// Rational-linear combination of exponential generators, sorted, no zero
/// coefficients. The empty argument is the constant 0.
using ExpArgument = std::vector<std::pair<ExpGenerator, Rational>>;

namespace detail {
struct Factor {
  std::uint32_t atom;
  std::int32_t power;
  friend bool operator==(const Factor&, const Factor&) = default;
};

struct Monomial {
  std::vector<Factor> factors;  // sorted by atom id, nonzero powers
  std::uint32_t exp_arg = 0;    // 0 means no exponential factor
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

bool operator<(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  GaussRat coeff;
};
}  // namespace detail

/// Exact symbolic scalar: a finite sum of Gaussian-rational multiples of
/// Laurent monomials in coordinates, jets and pi, each times at most one
/// exponential of a rational-linear argument. The representation is
/// canonical, so structural equality is mathematical equality.
class Expr {
 public:
  Expr() = default;
  Expr(long v);             // NOLINT(google-explicit-constructor)
  Expr(const GaussRat& c);  // NOLINT(google-explicit-constructor)

  static Expr coordinate(int index);
  /// Jet of opaque symbol `symbol` differentiated along `indices` (any order).
  static Expr jet(int symbol, std::vector<int> indices = {});
  static Expr pi();
  static Expr imag_unit();
  /// exp(arg); throws unless arg is rational-linear in coordinates and
  /// degree-0 opaque symbols with no constant part.
  static Expr exp(const Expr& arg);

  bool is_zero() const { return !terms_ || terms_->empty(); }
  bool is_constant() const;
  std::optional<GaussRat> constant_value() const;
  bool is_monomial() const { return terms_ && terms_->size() == 1; }
  std::size_t term_count() const { return terms_ ? terms_->size() : 0; }

  Expr operator-() const;
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  /// Division is only defined by a single-term expression.
  friend Expr operator/(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b);

  Expr scaled(const GaussRat& c) const;
  /// Multiplicative inverse of a single-term expression.
  Expr inverse() const;
  Expr pow(int n) const;

  Expr differentiate(int coord, const ChartSignature& chart) const;
  Expr conjugate(const ChartSignature& chart) const;

  /// Canonical text, parseable back under the same chart.
  std::string to_string(const ChartSignature& chart) const;

  /// If this is exp-free and rational-linear without constant part, returns
  /// the corresponding exponential argument.
  std::optional<ExpArgument> as_linear_argument() const;

  std::span<const detail::Term> terms() const;

 private:
  explicit Expr(std::vector<detail::Term> sorted_terms);
  static Expr from_unsorted(std::vector<detail::Term> terms);

  std::shared_ptr<const std::vector<detail::Term>> terms_;

  friend class ExprAccess;
};

bool is_zero(const Expr& e);

Expr parse_expr(std::string_view text, const ChartSignature& chart);

/// Differentiation by coordinate name.
Expr differentiate(const Expr& e, std::string_view coord, const ChartSignature& chart);

/// Evaluates `e` in GF(p^2), p = 2^61 - 1, with i^2 = -1 and independent
/// pseudo-random values for every coordinate, jet, pi and exponential
/// generator. Deterministic in (e, seed).
struct ProbeValue {
  std::uint64_t re = 0;
  std::uint64_t im = 0;
  friend bool operator==(const ProbeValue&, const ProbeValue&) = default;
};
ProbeValue numeric_value(const Expr& e, std::uint64_t seed);

/// True iff the probe evaluates `e` to zero.
bool numeric_probe(const Expr& e, std::uint64_t seed);

}  // namespace tpq
