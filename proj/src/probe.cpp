#include <map>

#include "expr_internal.hpp"
#include "tpq/expr.hpp"

namespace tpq {
namespace {

constexpr std::uint64_t kP = (std::uint64_t{1} << 61) - 1;
// every exponent denominator must divide this
constexpr long kExpDenominator = 720720;

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kP ? s - kP : s;
}
std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kP - b; }
std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(x & kP);
  std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
  return add(lo, hi);
}

std::uint64_t reduce(const mpz_class& z) {
  mpz_class r = z % mpz_class(static_cast<unsigned long>(kP));
  if (r < 0) r += static_cast<unsigned long>(kP);
  return r.get_ui();
}

std::uint64_t pow_fp(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

struct F2 {
  std::uint64_t re = 0, im = 0;
  F2 operator+(const F2& o) const { return {add(re, o.re), add(im, o.im)}; }
  F2 operator*(const F2& o) const {
    return {sub(mul(re, o.re), mul(im, o.im)), add(mul(re, o.im), mul(im, o.re))};
  }
  bool zero() const { return re == 0 && im == 0; }
  F2 inverse() const {
    if (zero()) throw Error("probe hit a zero denominator");
    std::uint64_t n = add(mul(re, re), mul(im, im));
    std::uint64_t ni = pow_fp(n, kP - 2);
    return {mul(re, ni), mul(sub(0, im), ni)};
  }
  F2 pow(long e) const {
    F2 base = e < 0 ? inverse() : *this;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    F2 r{1, 0};
    while (k) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }
};

F2 rational(const Rational& q) {
  std::uint64_t den = reduce(q.get_den());
  if (den == 0) throw Error("probe hit a zero denominator");
  return {mul(reduce(q.get_num()), pow_fp(den, kP - 2)), 0};
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Random nonzero field element keyed by structural data, so values do not
// depend on intern order.
F2 random_element(std::uint64_t seed, std::uint64_t kind, int index, const std::vector<int>& jet) {
  std::uint64_t state = seed * 0x2545f4914f6cdd1dULL + kind;
  splitmix(state);
  state ^= static_cast<std::uint64_t>(index) * 0x9e3779b97f4a7c15ULL;
  for (int j : jet) {
    splitmix(state);
    state ^= static_cast<std::uint64_t>(j + 1) * 0xd1b54a32d192ed03ULL;
  }
  F2 v{splitmix(state) % kP, splitmix(state) % kP};
  if (v.zero()) v.re = 1;
  return v;
}

class Evaluator {
 public:
  explicit Evaluator(std::uint64_t seed) : seed_(seed) {}

  F2 atom(std::uint32_t id) {
    auto it = atoms_.find(id);
    if (it != atoms_.end()) return it->second;
    const auto& a = detail::atom_data(id);
    F2 v = random_element(seed_, static_cast<std::uint64_t>(a.kind), a.index, a.jet);
    atoms_.emplace(id, v);
    return v;
  }

  F2 exponential(std::uint32_t id) {
    auto it = exps_.find(id);
    if (it != exps_.end()) return it->second;
    F2 v{1, 0};
    for (const auto& [g, q] : detail::exp_data(id)) {
      Rational scaled = q * kExpDenominator;
      if (scaled.get_den() != 1 || !scaled.get_num().fits_slong_p()) {
        throw Error("exponent " + q.get_str() + " is outside the probe's supported range");
      }
      // w_g plays the role of exp(g / kExpDenominator)
      F2 w = random_element(seed_, g.is_symbol ? 11 : 10, g.index, {});
      v = v * w.pow(scaled.get_num().get_si());
    }
    exps_.emplace(id, v);
    return v;
  }

 private:
  std::uint64_t seed_;
  std::map<std::uint32_t, F2> atoms_;
  std::map<std::uint32_t, F2> exps_;
};

}  // namespace

ProbeValue numeric_value(const Expr& e, std::uint64_t seed) {
  Evaluator ev(seed);
  F2 total;
  for (const auto& t : e.terms()) {
    F2 v{rational(t.coeff.re()).re, rational(t.coeff.im()).re};
    for (const auto& f : t.mono.factors) v = v * ev.atom(f.atom).pow(f.power);
    if (t.mono.exp_arg != 0) v = v * ev.exponential(t.mono.exp_arg);
    total = total + v;
  }
  return {total.re, total.im};
}

bool numeric_probe(const Expr& e, std::uint64_t seed) {
  ProbeValue v = numeric_value(e, seed);
  return v.re == 0 && v.im == 0;
}

}  // namespace tpq
