#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ratsurf/abelian.hpp"

using namespace ratsurf;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, Int lo, Int hi) {
  std::uniform_int_distribution<Int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST(Sigma, GroupLaws) {
  SigmaModel g(2, 6);
  EXPECT_EQ(g.order(), 12);
  EXPECT_EQ(g.make(-1, 7), (GroupElement{1, 1}));
  for (const auto& x : g.elements()) {
    EXPECT_EQ(g.add(x, g.neg(x)), g.zero());
    EXPECT_EQ(g.scale(g.element_order(x), x), g.zero());
    for (const auto& y : g.elements()) EXPECT_EQ(g.add(x, y), g.add(y, x));
  }
  for (Int n = 1; n <= 7; ++n) EXPECT_EQ(static_cast<Int>(g.torsion(n).size()), g.torsion_count(n));
  EXPECT_EQ(oracle::error_code([] { SigmaModel(2, 3); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(oracle::error_code([] { SigmaModel(0, 3); }), ErrorCode::InvalidArgument);
}

TEST(Sigma, TupleWalkIsExhaustive) {
  SigmaModel g(2, 2);
  std::set<std::vector<GroupElement>> seen;
  g.for_each_tuple(3, [&](const std::vector<GroupElement>& t) { seen.insert(t); });
  EXPECT_EQ(seen.size(), 64u);
}

TEST(SmithForm, FactorisationAndDivisibility) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    auto a = random_matrix(rng, r, c, -6, 6);
    auto snf = smith_normal_form(a);
    EXPECT_EQ(snf.U * snf.S * snf.V, a);
    EXPECT_EQ(snf.U_inv * a * snf.V_inv, snf.S);
    EXPECT_EQ(std::abs(determinant(snf.U)), 1);
    EXPECT_EQ(std::abs(determinant(snf.V)), 1);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) EXPECT_EQ(snf.S(i, j), 0);
    for (std::size_t k = 0; k + 1 < snf.diagonal.size(); ++k) {
      Int d = snf.diagonal[k], e = snf.diagonal[k + 1];
      EXPECT_GE(d, 0);
      if (d == 0) EXPECT_EQ(e, 0);
      else EXPECT_EQ(e % d, 0);
    }
    EXPECT_EQ(snf.rank, rank(a));
  }
}

TEST(SmithForm, DiagonalMatchesDeterminantalDivisors) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_matrix(rng, 3, 4, -5, 5);
    auto snf = smith_normal_form(a);
    Int prod = 1;
    for (std::size_t k = 1; k <= 3; ++k) {
      prod *= snf.diagonal[k - 1];
      EXPECT_EQ(prod, oracle::determinantal_divisor(a, k)) << a;
    }
  }
}

TEST(SmithForm, KernelBasis) {
  IntMatrix a(2, 4, {1, 2, 3, 4, 2, 4, 6, 9});
  auto ker = integer_kernel(a);
  EXPECT_EQ(ker.size(), 2u);
  for (const auto& v : ker)
    for (Int x : a * v) EXPECT_EQ(x, 0);
}

TEST(GroupSolve, MatchesBruteForce) {
  std::mt19937_64 rng(23);
  const std::pair<Int, Int> groups[] = {{1, 5}, {2, 2}, {2, 4}, {3, 3}, {1, 12}, {5, 5}, {1, 25}};
  for (auto [m1, m2] : groups) {
    SigmaModel g(m1, m2);
    for (int trial = 0; trial < 12; ++trial) {
      std::size_t k = 1 + static_cast<std::size_t>(trial % 3);
      std::size_t rows = 1 + static_cast<std::size_t>(trial % 2) + (k > 1 ? 1 : 0);
      auto a = random_matrix(rng, rows, k, -4, 4);
      std::vector<GroupElement> x;
      std::uniform_int_distribution<Int> d1(0, m1 - 1), d2(0, m2 - 1);
      for (std::size_t i = 0; i < k; ++i) x.push_back(g.make(d1(rng), d2(rng)));
      // Half the right-hand sides come from a real solution, half are random.
      std::vector<GroupElement> rhs = apply_group_matrix(a, x, g);
      if (trial % 2)
        for (auto& r : rhs) r = g.make(d1(rng), d2(rng));
      auto want = oracle::brute_solve(a, rhs, g);
      auto sol = solve_group_system(a, rhs, g);
      EXPECT_EQ(sol.solvable, !want.empty());
      if (!sol.solvable) continue;
      ASSERT_TRUE(sol.enumerated);
      EXPECT_EQ(sol.kernel_size, static_cast<Int>(want.size()));
      EXPECT_EQ(std::set<std::vector<GroupElement>>(sol.all.begin(), sol.all.end()), want);
      EXPECT_EQ(sol.all.size(), want.size()) << "duplicates in enumeration";
    }
  }
}

TEST(GroupSolve, KernelSizeFromDiagonal) {
  // Solutions of A y = 0 over Z/m number prod gcd(d_i, m) times m^(cols - rank).
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_matrix(rng, 2, 3, -6, 6);
    SigmaModel g(1, 6);
    auto snf = smith_normal_form(a);
    Int expect = 1;
    for (std::size_t j = 0; j < 3; ++j) expect *= j < snf.diagonal.size() ? std::gcd(snf.diagonal[j], Int{6}) : 6;
    auto sol = solve_group_system(a, {g.zero(), g.zero()}, g);
    EXPECT_EQ(sol.kernel_size, expect);
  }
}

TEST(GroupSolve, CapStopsEnumeration) {
  SigmaModel g(5, 5);
  IntMatrix a(1, 4, {1, 0, 0, 0});
  auto sol = solve_group_system(a, {g.zero()}, g, 10);
  EXPECT_TRUE(sol.solvable);
  EXPECT_FALSE(sol.enumerated);
  EXPECT_EQ(sol.kernel_size, 25 * 25 * 25);
}

TEST(Curve, PointCountMatchesBruteForce) {
  for (Int p : {5, 7, 11, 13, 17, 23, 29}) {
    for (Int a = 0; a < 4; ++a)
      for (Int b = 1; b < 4; ++b) {
        if (mod(4 * a * a * a + 27 * b * b, p) == 0) continue;
        WeierstrassCurve c(p, a, b);
        EXPECT_EQ(static_cast<Int>(c.points().size()), oracle::brute_curve_count(p, a, b)) << p << " " << a << " " << b;
      }
  }
}

TEST(Curve, EncodingIsAHomomorphism) {
  for (auto [p, a, b] : {std::array<Int, 3>{5, 1, 1}, {7, 0, 1}, {13, 2, 3}, {11, 1, 0}, {17, 0, 3}}) {
    auto wg = weierstrass_group(p, a, b);
    EXPECT_EQ(wg.sigma.order(), oracle::brute_curve_count(p, a, b));
    EXPECT_EQ(wg.sigma.m2() % wg.sigma.m1(), 0);
    for (const auto& [u, gu] : wg.encode)
      for (const auto& [v, gv] : wg.encode) EXPECT_EQ(wg.encode.at(wg.curve.add(u, v)), wg.sigma.add(gu, gv));
  }
}

TEST(Curve, Rejections) {
  EXPECT_EQ(oracle::error_code([] { WeierstrassCurve(7, 0, 0); }), ErrorCode::SingularCurve);
  EXPECT_EQ(oracle::error_code([] { WeierstrassCurve(9, 1, 1); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(oracle::error_code([] { WeierstrassCurve(2, 1, 1); }), ErrorCode::InvalidArgument);
}
