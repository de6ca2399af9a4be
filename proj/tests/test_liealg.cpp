#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "tpq/liealg.hpp"

namespace tpq {
template <Variance V>
void PrintTo(const AlgAntisym<V>& a, std::ostream* os) {
  std::vector<std::string> names;
  for (int i = 0; i < std::max(a.dim(), 1); ++i) names.push_back("e" + std::to_string(i + 1));
  *os << a.to_string(names);
}
}  // namespace tpq

namespace {

using namespace tpq;

// --- oracles ---------------------------------------------------------------

using IntMatrix = std::vector<std::vector<long>>;

IntMatrix elementary(int n, int a, int b) {
  IntMatrix m(n, std::vector<long>(n, 0));
  m[a - 1][b - 1] = 1;
  return m;
}

IntMatrix commutator(const IntMatrix& x, const IntMatrix& y) {
  const std::size_t n = x.size();
  IntMatrix out(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) out[i][j] += x[i][k] * y[k][j] - y[i][k] * x[k][j];
    }
  }
  return out;
}

int permutation_sign(std::vector<int> p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] > p[j]) sign = -sign;
    }
  }
  return sign;
}

// xi(v_1, ..., v_k) as a sum over permutations.
Rational evaluate_oracle(const AlgForm& xi, const std::vector<std::vector<Rational>>& vs) {
  Rational total = 0;
  for (const auto& [m, c] : xi.components()) {
    auto idx = mask_indices(m);
    std::vector<int> perm(idx.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      Rational prod = c * permutation_sign(perm);
      for (std::size_t r = 0; r < idx.size(); ++r) prod *= vs[perm[r]][idx[r]];
      total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return total;
}

std::vector<Rational> unit(int n, int i) {
  std::vector<Rational> v(n, Rational(0));
  v[i] = 1;
  return v;
}

// d xi(x_0, ..., x_k) = sum_{a<b} (-1)^(a+b) xi([x_a, x_b], x_0, ...^...^..., x_k)
AlgForm ce_oracle(const LieAlgebraModel& g, const AlgForm& xi) {
  const int n = g.dim();
  const int k = xi.grade();
  AlgForm out(n, k + 1);
  for (IndexMask m : masks_of_grade(n, k + 1)) {
    auto idx = mask_indices(m);
    Rational total = 0;
    for (int a = 0; a <= k; ++a) {
      for (int b = a + 1; b <= k; ++b) {
        std::vector<std::vector<Rational>> args{g.bracket(idx[a], idx[b])};
        for (int c = 0; c <= k; ++c) {
          if (c != a && c != b) args.push_back(unit(n, idx[c]));
        }
        Rational v = evaluate_oracle(xi, args);
        total += (a + b) % 2 == 0 ? v : Rational(-v);
      }
    }
    out.set(m, total);
  }
  return out;
}

// Rank of a rational matrix with integer-cleared rows, computed mod p.
std::size_t rank_mod_p(const std::vector<std::vector<Rational>>& m) {
  constexpr long long p = 1000003;
  std::vector<std::vector<long long>> a;
  for (const auto& row : m) {
    std::vector<long long> r;
    for (const auto& q : row) {
      mpz_class pm(static_cast<long>(p));
      long long num = mpz_class(q.get_num() % pm).get_si();
      long long den = mpz_class(q.get_den() % pm).get_si();
      // den^(p-2) mod p
      long long inv = 1, base = ((den % p) + p) % p, e = p - 2;
      while (e) {
        if (e & 1) inv = inv * base % p;
        base = base * base % p;
        e >>= 1;
      }
      r.push_back(((num % p + p) % p) * inv % p);
    }
    a.push_back(std::move(r));
  }
  if (a.empty()) return 0;
  std::size_t rank = 0;
  const std::size_t cols = a[0].size();
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    long long inv = 1, base = a[rank][c], e = p - 2;
    while (e) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      long long f = a[r][c] * inv % p;
      for (std::size_t k = c; k < cols; ++k) a[r][k] = ((a[r][k] - f * a[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

// Dense CE matrix on grade k built from the oracle differential.
std::vector<std::vector<Rational>> ce_matrix_oracle(const LieAlgebraModel& g, int k) {
  auto cols = masks_of_grade(g.dim(), k);
  auto rows = masks_of_grade(g.dim(), k + 1);
  std::vector<std::vector<Rational>> m(rows.size(), std::vector<Rational>(cols.size(), Rational(0)));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    AlgForm b(g.dim(), k);
    b.set(cols[c], 1);
    AlgForm d = ce_oracle(g, b);
    for (std::size_t r = 0; r < rows.size(); ++r) m[r][c] = d.at(rows[r]);
  }
  return m;
}

class AlgGen {
 public:
  explicit AlgGen(std::uint64_t seed) : rng_(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  Rational coefficient() {
    Rational q(pick(9) - 4, pick(3) + 1);
    q.canonicalize();
    return q;
  }

  template <Variance V>
  AlgAntisym<V> element(int dim, int grade) {
    AlgAntisym<V> out(dim, grade);
    auto masks = masks_of_grade(dim, grade);
    if (masks.empty()) return out;
    int terms = pick(3) + 1;
    for (int t = 0; t < terms; ++t) out.add(masks[pick(static_cast<int>(masks.size()))], coefficient());
    return out;
  }
  AlgMultiVector vec(int dim, int grade) { return element<Variance::Contravariant>(dim, grade); }
  AlgForm form(int dim, int grade) { return element<Variance::Covariant>(dim, grade); }

  LieAlgebraModel algebra() {
    switch (pick(4)) {
      case 0: return build_gl_subalgebra({1, 2}, {1, 2});
      case 1: return build_gl_subalgebra({1, 2}, {1, 2, 3});
      case 2: return build_gl_subalgebra({1}, {1, 2, 3});
      default: return build_gl_subalgebra({1, 2, 3}, {1, 2, 3});
    }
  }

 private:
  std::mt19937_64 rng_;
};

LieAlgebraModel abelian(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("a" + std::to_string(i));
  return LieAlgebraModel(names, {});
}

int idx(const LieAlgebraModel& g, const char* name) { return *g.index(name); }

AlgForm dual(const LieAlgebraModel& g, std::initializer_list<const char*> names) {
  std::vector<int> ids;
  for (const char* n : names) ids.push_back(idx(g, n));
  return AlgForm::basis(g.dim(), ids);
}

AlgMultiVector vec(const LieAlgebraModel& g, std::initializer_list<const char*> names) {
  std::vector<int> ids;
  for (const char* n : names) ids.push_back(idx(g, n));
  return AlgMultiVector::basis(g.dim(), ids);
}

// Mutual containment of spans, by rank.
bool same_span(const std::vector<AlgForm>& a, const std::vector<AlgForm>& b, int dim) {
  auto masks = masks_of_grade(dim, 2);
  auto rows = [&](const std::vector<AlgForm>& fs) {
    std::vector<std::vector<Rational>> m;
    for (const auto& f : fs) {
      std::vector<Rational> r;
      for (auto mk : masks) r.push_back(f.at(mk));
      m.push_back(r);
    }
    return m;
  };
  auto ra = rows(a), rb = rows(b), rab = ra;
  rab.insert(rab.end(), rb.begin(), rb.end());
  auto r1 = rank_mod_p(ra), r2 = rank_mod_p(rb), r12 = rank_mod_p(rab);
  return r1 == r12 && r2 == r12;
}

// --- examples --------------------------------------------------------------

TEST(LieAlg, GlSubalgebraMatchesMatrixCommutators) {
  for (auto [rows, cols] : std::vector<std::pair<std::vector<int>, std::vector<int>>>{
           {{1, 2}, {1, 2, 3}}, {{1, 2, 3}, {1, 2, 3}}, {{1}, {1, 2, 3}}, {{1, 2}, {1, 2}}}) {
    auto g = build_gl_subalgebra(rows, cols);
    std::vector<IntMatrix> mats;
    for (int a : rows) {
      for (int b : cols) mats.push_back(elementary(3, a, b));
    }
    for (int i = 0; i < g.dim(); ++i) {
      for (int j = 0; j < g.dim(); ++j) {
        IntMatrix expect = commutator(mats[i], mats[j]);
        IntMatrix got(3, std::vector<long>(3, 0));
        for (int k = 0; k < g.dim(); ++k) {
          long c = g.bracket(i, j)[k].get_num().get_si();
          EXPECT_EQ(g.bracket(i, j)[k].get_den(), 1);
          for (int r = 0; r < 3; ++r) {
            for (int s = 0; s < 3; ++s) got[r][s] += c * mats[k][r][s];
          }
        }
        EXPECT_EQ(got, expect) << g.names()[i] << ", " << g.names()[j];
      }
    }
  }
}

TEST(LieAlg, GlSubalgebraExamples) {
  auto g = build_gl_subalgebra({1, 2}, {1, 2, 3});
  EXPECT_EQ(g.dim(), 6);
  EXPECT_EQ(g.names(), (std::vector<std::string>{"e11", "e12", "e13", "e21", "e22", "e23"}));
  std::vector<Rational> expect(6, Rational(0));
  expect[idx(g, "e11")] = 1;
  expect[idx(g, "e22")] = -1;
  EXPECT_EQ(g.bracket(idx(g, "e12"), idx(g, "e21")), expect);

  auto one = build_gl_subalgebra({1}, {1});
  EXPECT_EQ(one.dim(), 1);
  EXPECT_EQ(build_gl_subalgebra({1, 2, 3}, {1, 2, 3}).dim(), 9);
  // rows x cols spans are always closed; only bad indices are rejected
  EXPECT_NO_THROW(build_gl_subalgebra({1, 2}, {2, 3}));
  EXPECT_THROW(build_gl_subalgebra({0}, {1}), Error);
  EXPECT_THROW(build_gl_subalgebra({1, 1}, {1}), Error);
  EXPECT_THROW(build_gl_subalgebra({}, {1}), Error);
}

TEST(LieAlg, ConstructorRejectsJacobiFailure) {
  // [a,b] = c, [b,c] = a, [a,c] = a violates Jacobi
  std::map<std::pair<int, int>, std::vector<Rational>> br{
      {{0, 1}, {0, 0, 1}}, {{1, 2}, {1, 0, 0}}, {{0, 2}, {1, 0, 0}}};
  EXPECT_THROW(LieAlgebraModel({"a", "b", "c"}, br), Error);
  std::map<std::pair<int, int>, std::vector<Rational>> so3{
      {{0, 1}, {0, 0, 1}}, {{1, 2}, {1, 0, 0}}, {{0, 2}, {0, -1, 0}}};
  EXPECT_NO_THROW(LieAlgebraModel({"a", "b", "c"}, so3));
  EXPECT_THROW(LieAlgebraModel({"a", "a"}, {}), Error);
}

TEST(LieAlg, CeDifferentialExamples) {
  auto ex = corpus::example6();
  const auto& g = ex.algebra;
  EXPECT_TRUE(ce_differential(g, ex.phi).is_zero());
  EXPECT_TRUE(ce_differential(g, dual(g, {"e12", "e21"})).is_zero());
  // d e12* = -(e11* - e22*) ^ e12*
  AlgForm expect = -alg_wedge(dual(g, {"e11"}) - dual(g, {"e22"}), dual(g, {"e12"}));
  EXPECT_EQ(ce_differential(g, dual(g, {"e12"})), expect);
  auto ab = abelian(4);
  AlgGen gen(3);
  for (int k = 0; k < 4; ++k) EXPECT_TRUE(ce_differential(ab, gen.form(4, k)).is_zero());
}

TEST(LieAlg, SchoutenExamples) {
  auto ex = corpus::example6();
  const auto& g = ex.algebra;
  EXPECT_EQ(algebraic_schouten(g, vec(g, {"e11"}), vec(g, {"e12"})), vec(g, {"e12"}));
  auto chk = check_twisted_structure(g, ex.r, ex.phi);
  EXPECT_TRUE(chk.ok()) << chk.structure.to_string(g.names());
  auto ab = abelian(3);
  AlgGen gen(5);
  EXPECT_TRUE(algebraic_schouten(ab, gen.vec(3, 2), gen.vec(3, 2)).is_zero());
  EXPECT_TRUE(check_twisted_structure(ab, gen.vec(3, 2), AlgForm(3, 3)).ok());
  // dropping the twist breaks the structure equation
  EXPECT_FALSE(check_twisted_structure(g, ex.r, AlgForm(6, 3)).ok());
}

TEST(LieAlg, ClosedTwoFormsOfExample6) {
  auto ex = corpus::example6();
  const auto& g = ex.algebra;
  auto closed = closed_two_forms(g);
  for (const auto& f : closed) EXPECT_TRUE(ce_differential(g, f).is_zero());
  // independent count: nullity of the oracle CE matrix
  auto m = ce_matrix_oracle(g, 2);
  EXPECT_EQ(closed.size(), 15 - rank_mod_p(m));
  EXPECT_EQ(closed.size(), 5u);

  std::vector<AlgForm> listed{alg_wedge(dual(g, {"e11"}) - dual(g, {"e22"}), dual(g, {"e12"})),
                              alg_wedge(dual(g, {"e11"}) - dual(g, {"e22"}), dual(g, {"e21"})),
                              dual(g, {"e12", "e21"})};
  // the three listed forms are closed and annihilated by r#, but the closed
  // space also contains d e13* and d e23*
  for (const auto& f : listed) {
    EXPECT_TRUE(ce_differential(g, f).is_zero());
    EXPECT_TRUE(alg_sharp(ex.r, f).is_zero());
  }
  auto with_exact = listed;
  with_exact.push_back(ce_differential(g, dual(g, {"e13"})));
  with_exact.push_back(ce_differential(g, dual(g, {"e23"})));
  EXPECT_TRUE(same_span(closed, with_exact, 6));
  EXPECT_FALSE(same_span(closed, listed, 6));
  EXPECT_FALSE(alg_sharp(ex.r, ce_differential(g, dual(g, {"e13"}))).is_zero());
}

TEST(LieAlg, ClosedTwoFormsOtherAlgebras) {
  EXPECT_EQ(closed_two_forms(abelian(5)).size(), 10u);
  auto gl2 = build_gl_subalgebra({1, 2}, {1, 2});
  EXPECT_EQ(closed_two_forms(gl2).size(), 6 - rank_mod_p(ce_matrix_oracle(gl2, 2)));
}

TEST(LieAlg, Example6Expansion) {
  auto ex = corpus::example6();
  const auto& g = ex.algebra;
  auto e = prequantization_expansion(g, ex.r, ex.phi);
  const auto& p = *e.parameters;
  auto coef = [&](const char* a, const char* b) {
    auto it = e.components.find(indices_mask({idx(g, a), idx(g, b)}));
    return it == e.components.end() ? std::string("0") : it->second.to_string(p);
  };
  EXPECT_EQ(coef("e11", "e12"), "-lambda12");
  EXPECT_EQ(coef("e11", "e13"), "-lambda13");
  EXPECT_EQ(coef("e11", "e21"), "lambda21");
  EXPECT_EQ(coef("e11", "e22"), "1");
  EXPECT_EQ(coef("e12", "e22"), "lambda12");
  EXPECT_EQ(coef("e21", "e22"), "-lambda21");
  EXPECT_EQ(coef("e22", "e23"), "lambda23");
  // the displayed expansion has 1 - lambda12 + lambda21 here; the direct
  // computation gives 1 (see the acceptance report)
  EXPECT_EQ(coef("e13", "e23"), "1");
  EXPECT_EQ(e.components.size(), 8u);
}

TEST(LieAlg, Example6IsNotPrequantizable) {
  auto ex = corpus::example6();
  auto s = solve_prequantization(ex.algebra, ex.r, ex.phi);
  EXPECT_FALSE(s.solvable);
  EXPECT_TRUE(verify_certificate(ex.algebra, ex.r, ex.phi, s));
}

TEST(LieAlg, SolverTrivialAndExactCases) {
  auto gl2 = build_gl_subalgebra({1, 2}, {1, 2});
  auto s = solve_prequantization(gl2, AlgMultiVector(4, 2), AlgForm(4, 3));
  EXPECT_TRUE(s.solvable);
  EXPECT_TRUE(s.z.is_zero());
  EXPECT_TRUE(s.big_phi.is_zero());

  // exact: r = del(X) with phi = 0 on the affine algebra, where [r, r] = 0
  auto aff = build_gl_subalgebra({1}, {1, 2});
  AlgMultiVector r = AlgMultiVector::basis(2, {0, 1});
  AlgForm zero3(2, 3);
  AlgMultiVector x = AlgMultiVector::basis(2, {0});
  AlgMultiVector dx = algebraic_del_phi(aff, r, zero3, x);
  ASSERT_FALSE(dx.is_zero());
  AlgMultiVector exact_r = dx;
  // del depends on r itself, so search X against the structure exact_r
  auto sol = solve_prequantization(aff, exact_r, zero3);
  ASSERT_TRUE(sol.solvable);
  AlgMultiVector lhs = exact_r + algebraic_del_phi(aff, exact_r, zero3, sol.z);
  EXPECT_EQ(lhs, alg_sharp(exact_r, sol.big_phi));
}

TEST(LieAlg, CohomologyExamples) {
  auto ab = abelian(4);
  const int binom[] = {1, 4, 6, 4, 1};
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(ltp_cohomology(ab, AlgMultiVector(4, 2), AlgForm(4, 3), k), binom[k]);

  auto ex = corpus::example6();
  const auto& g = ex.algebra;
  int euler = 0;
  for (int k = 0; k <= 6; ++k) {
    auto out = k < 6 ? rank_mod_p(del_phi_matrix(g, ex.r, ex.phi, k)) : 0;
    auto in = k > 0 ? rank_mod_p(del_phi_matrix(g, ex.r, ex.phi, k - 1)) : 0;
    int expect = static_cast<int>(masks_of_grade(6, k).size() - out - in);
    EXPECT_EQ(ltp_cohomology(g, ex.r, ex.phi, k), expect) << k;
    euler += (k % 2 == 0 ? 1 : -1) * expect;
  }
  EXPECT_EQ(euler, 0);
  EXPECT_EQ(ltp_cohomology(g, ex.r, ex.phi, 2), 2);
}

TEST(LieAlg, Printing) {
  auto ex = corpus::example6();
  EXPECT_EQ(ex.r.to_string(ex.algebra.names()), "e11^e22 + e13^e23");
  EXPECT_EQ(ex.phi.to_string(ex.algebra.names()), "-e11*^e13*^e23* + e13*^e22*^e23*");
}

// --- properties ------------------------------------------------------------

TEST(LieAlgProperty, CeDifferentialMatchesOracleAndSquaresToZero) {
  AlgGen gen(11);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = gen.algebra();
    int k = gen.pick(std::min(g.dim(), 4));
    AlgForm xi = gen.form(g.dim(), k);
    AlgForm d = ce_differential(g, xi);
    ASSERT_EQ(d, ce_oracle(g, xi)) << trial;
    ASSERT_TRUE(ce_differential(g, d).is_zero()) << trial;
  }
}

TEST(LieAlgProperty, SchoutenAntisymmetryLeibnizJacobi) {
  AlgGen gen(12);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = gen.pick(2) == 0 ? build_gl_subalgebra({1, 2}, {1, 2, 3}) : build_gl_subalgebra({1, 2}, {1, 2});
    const int n = g.dim();
    int p = gen.pick(3) + 1, q = gen.pick(3) + 1, s = gen.pick(2) + 1;
    auto P = gen.vec(n, p), Q = gen.vec(n, q), R = gen.vec(n, s);
    auto PQ = algebraic_schouten(g, P, Q);
    auto QP = algebraic_schouten(g, Q, P);
    ASSERT_EQ(PQ, ((p - 1) * (q - 1)) % 2 == 0 ? -QP : QP) << trial;
    auto lhs = algebraic_schouten(g, P, alg_wedge(Q, R));
    auto rhs = alg_wedge(PQ, R);
    auto second = alg_wedge(Q, algebraic_schouten(g, P, R));
    rhs += ((p - 1) * q) % 2 == 0 ? second : -second;
    ASSERT_EQ(lhs, rhs) << trial;
    // graded Jacobi with suspended degrees
    auto sgn = [](int a) { return a % 2 == 0 ? 1 : -1; };
    auto j1 = algebraic_schouten(g, P, algebraic_schouten(g, Q, R)).scaled(sgn((p - 1) * (s - 1)));
    auto j2 = algebraic_schouten(g, Q, algebraic_schouten(g, R, P)).scaled(sgn((q - 1) * (p - 1)));
    auto j3 = algebraic_schouten(g, R, algebraic_schouten(g, P, Q)).scaled(sgn((s - 1) * (q - 1)));
    ASSERT_TRUE((j1 + j2 + j3).is_zero()) << trial;
  }
}

TEST(LieAlgProperty, LieDerivativeIsCoadjoint) {
  // L_x eta(y_1..y_k) = -sum eta(y_1, .., [x, y_i], .., y_k)
  AlgGen gen(13);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = gen.algebra();
    const int n = g.dim();
    int k = gen.pick(3) + 1;
    int x = gen.pick(n);
    AlgForm eta = gen.form(n, k);
    AlgForm got = alg_lie_derivative(g, AlgMultiVector::basis(n, {x}), eta);
    for (IndexMask m : masks_of_grade(n, k)) {
      auto ys = mask_indices(m);
      Rational expect = 0;
      for (int i = 0; i < k; ++i) {
        std::vector<std::vector<Rational>> args;
        for (int j = 0; j < k; ++j) args.push_back(j == i ? g.bracket(x, ys[j]) : unit(n, ys[j]));
        expect -= evaluate_oracle(eta, args);
      }
      ASSERT_EQ(got.at(m), expect) << trial;
    }
  }
}

TEST(LieAlgProperty, DelPhiIsSchoutenWhenUntwisted) {
  // with phi = 0, del P = [r, P] for Poisson r
  AlgGen gen(14);
  auto aff = build_gl_subalgebra({1}, {1, 2, 3});
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    // bivectors in span{e12, e13} commute with themselves
    AlgMultiVector r = AlgMultiVector::basis(3, {1, 2}).scaled(gen.coefficient());
    r += alg_wedge(AlgMultiVector::basis(3, {0}), AlgMultiVector::basis(3, {1})).scaled(gen.coefficient());
    if (!algebraic_schouten(aff, r, r).is_zero()) continue;
    auto P = gen.vec(3, gen.pick(3));
    ASSERT_EQ(algebraic_del_phi(aff, r, AlgForm(3, 3), P), algebraic_schouten(aff, r, P)) << trial;
    ++checked;
  }
  auto gl2 = build_gl_subalgebra({1, 2}, {1, 2});
  for (int trial = 0; trial < 30; ++trial) {
    AlgMultiVector r = alg_wedge(gen.vec(4, 1), gen.vec(4, 1));
    auto P = gen.vec(4, gen.pick(3) + 1);
    if (!algebraic_schouten(gl2, r, r).is_zero()) continue;
    ASSERT_EQ(algebraic_del_phi(gl2, r, AlgForm(4, 3), P), algebraic_schouten(gl2, r, P)) << trial;
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(LieAlgProperty, DelPhiSquaresToZeroOnScaledExample6) {
  auto ex = corpus::example6();
  AlgGen gen(15);
  for (int trial = 0; trial < 30; ++trial) {
    Rational c = gen.coefficient();
    if (sgn(c) == 0) continue;
    AlgMultiVector r = ex.r.scaled(c);
    AlgForm phi = ex.phi.scaled(1 / c);
    ASSERT_TRUE(check_twisted_structure(ex.algebra, r, phi).ok());
    auto P = gen.vec(6, gen.pick(5));
    auto d = algebraic_del_phi(ex.algebra, r, phi, P);
    ASSERT_TRUE(algebraic_del_phi(ex.algebra, r, phi, d).is_zero()) << trial;
  }
  // negative control: without the twist del^2 != 0 somewhere
  bool nonzero = false;
  for (int i = 0; i < 6 && !nonzero; ++i) {
    auto d = algebraic_del_phi(ex.algebra, ex.r, AlgForm(6, 3), AlgMultiVector::basis(6, {i}));
    nonzero = !algebraic_del_phi(ex.algebra, ex.r, AlgForm(6, 3), d).is_zero();
  }
  EXPECT_TRUE(nonzero);
}

TEST(LieAlgProperty, SolverSoundness) {
  AlgGen gen(16);
  int solved = 0, certified = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto g = gen.pick(2) == 0 ? build_gl_subalgebra({1, 2}, {1, 2}) : build_gl_subalgebra({1}, {1, 2, 3});
    const int n = g.dim();
    auto r = gen.vec(n, 2);
    auto phi = gen.pick(2) == 0 ? AlgForm(n, 3) : gen.form(n, 3);
    auto s = solve_prequantization(g, r, phi);
    if (s.solvable) {
      ++solved;
      ASSERT_TRUE(ce_differential(g, s.big_phi).is_zero());
      ASSERT_EQ(r + algebraic_del_phi(g, r, phi, s.z), alg_sharp(r, s.big_phi)) << trial;
    } else {
      ++certified;
      ASSERT_TRUE(verify_certificate(g, r, phi, s)) << trial;
    }
  }
  EXPECT_GT(solved, 0);
  EXPECT_GT(certified, 0);
}

TEST(LieAlgProperty, SharpAndEvaluateConventions) {
  AlgGen gen(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5;
    auto r = gen.vec(n, 2);
    auto a = gen.form(n, 1), b = gen.form(n, 1);
    // <b, r#a> = r(a, b)
    Rational pair = 0;
    auto ra = alg_sharp(r, a);
    for (int i = 0; i < n; ++i) pair += b.at(IndexMask{1} << i) * ra.at(IndexMask{1} << i);
    ASSERT_EQ(pair, alg_evaluate(r, {a, b}));
    auto phi = gen.form(n, 3);
    auto x = gen.vec(n, 1), y = gen.vec(n, 1), z = gen.vec(n, 1);
    auto contracted = alg_interior(y, alg_interior(x, phi));
    ASSERT_EQ(alg_evaluate(contracted, {z}), alg_evaluate(phi, {x, y, z}));
    std::vector<std::vector<Rational>> args;
    for (const auto* v : {&x, &y, &z}) {
      std::vector<Rational> col;
      for (int i = 0; i < n; ++i) col.push_back(v->at(IndexMask{1} << i));
      args.push_back(col);
    }
    ASSERT_EQ(alg_evaluate(phi, {x, y, z}), evaluate_oracle(phi, args));
  }
}

}  // namespace
