#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ppad/exact_linear.hpp"
#include "ppad/reductions.hpp"
#include "ppad/solvers.hpp"

namespace ppad {
namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

BimatrixGame random_bimatrix(std::uint64_t seed, std::size_t n, std::size_t m, long range = 5) {
  std::mt19937_64 rng(seed);
  Matrix r(n, m), c(n, m);
  for (auto& v : r.data) v = static_cast<long>(rng() % (2 * range + 1)) - range;
  for (auto& v : c.data) v = static_cast<long>(rng() % (2 * range + 1)) - range;
  return BimatrixGame(std::move(r), std::move(c));
}

// Closed-form equilibria of a 2x2 game: pure profiles by inspection plus the
// interior point from the two indifference equations.
std::set<MixedProfile> reference_2x2(const BimatrixGame& g) {
  const Matrix& a = g.row_payoffs();
  const Matrix& b = g.col_payoffs();
  std::set<MixedProfile> out;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      if (a(i, j) >= a(1 - i, j) && b(i, j) >= b(i, 1 - j)) out.insert(MixedProfile::pure({2, 2}, {i, j}));
    }
  }
  const Rational dx = b(0, 0) - b(0, 1) - b(1, 0) + b(1, 1);
  const Rational dy = a(0, 0) - a(1, 0) - a(0, 1) + a(1, 1);
  if (dx != 0 && dy != 0) {
    const Rational x = (b(1, 1) - b(1, 0)) / dx;  // row weight on action 0
    const Rational y = (a(1, 1) - a(0, 1)) / dy;  // column weight on action 0
    if (x > 0 && x < 1 && y > 0 && y < 1) out.insert(MixedProfile{{{x, 1 - x}, {y, 1 - y}}});
  }
  return out;
}

TEST(SupportSolve, StagHunt) {
  const auto g = fixture_stag_hunt();
  const auto pure = solve_support(g, {{0}, {0}});
  ASSERT_TRUE(pure);
  EXPECT_EQ(pure->profile, MixedProfile::pure({2, 2}, {0, 0}));
  EXPECT_FALSE(pure->degenerate);
  const auto mixed = solve_support(g, {{0, 1}, {0, 1}});
  ASSERT_TRUE(mixed);
  EXPECT_EQ(mixed->profile, (MixedProfile{{{q(1, 8), q(7, 8)}, {q(1, 8), q(7, 8)}}}));
  EXPECT_FALSE(solve_support(g, {{0}, {1}}));
  EXPECT_THROW(solve_support(g, {{}, {0}}), ShapeError);
  EXPECT_THROW(solve_support(g, {{2}, {0}}), ShapeError);
}

TEST(SupportSolve, RockPaperScissors) {
  const auto g = fixture_rps();
  EXPECT_FALSE(solve_support(g, {{0}, {0}}));
  EXPECT_FALSE(solve_support(g, {{0, 1}, {0, 1}}));
  const auto full = solve_support(g, {{0, 1, 2}, {0, 1, 2}});
  ASSERT_TRUE(full);
  EXPECT_EQ(full->profile, MixedProfile::uniform({3, 3}));
}

TEST(SupportSolve, DegenerateSupportFlagged) {
  // All-zero payoffs: every support pair has a continuum of solutions.
  const BimatrixGame flat(Matrix(2, 2), Matrix(2, 2));
  const auto sol = solve_support(flat, {{0, 1}, {0, 1}});
  ASSERT_TRUE(sol);
  EXPECT_TRUE(sol->degenerate);
  EXPECT_EQ(sol->profile, MixedProfile::pure({2, 2}, {1, 1}));
  EXPECT_TRUE(verify_nash(flat.to_normal_form(), sol->profile).accepted);
}

TEST(SupportEnumeration, FixtureCounts) {
  EXPECT_EQ(support_enumeration(fixture_rps()), std::vector<MixedProfile>{MixedProfile::uniform({3, 3})});
  EXPECT_EQ(support_enumeration(fixture_matching_pennies()),
            std::vector<MixedProfile>{MixedProfile::uniform({2, 2})});
  const auto stag = support_enumeration(fixture_stag_hunt());
  const std::vector<MixedProfile> expected{MixedProfile::pure({2, 2}, {1, 1}),
                                           MixedProfile{{{q(1, 8), q(7, 8)}, {q(1, 8), q(7, 8)}}},
                                           MixedProfile::pure({2, 2}, {0, 0})};
  EXPECT_EQ(stag, expected);
  EXPECT_EQ(support_enumeration(fixture_gmp(3)).size(), 1U);
  EXPECT_THROW(support_enumeration(random_bimatrix(1, 9, 2)), CapExceeded);
}

TEST(Generic, Classification) {
  EXPECT_TRUE(is_generic(fixture_stag_hunt()));
  EXPECT_FALSE(is_generic(BimatrixGame(Matrix(2, 2, {1, 1, 1, 1}), Matrix(2, 2, {1, 1, 1, 1}))));
  EXPECT_FALSE(is_generic(BimatrixGame(Matrix(2, 2, {1, 0, 0, 1}), Matrix(2, 2, {2, 2, 0, 1}))));
}

TEST(LemkeHowson, StagHuntEveryLabel) {
  const auto g = fixture_stag_hunt();
  const auto all = support_enumeration(g);
  const std::set<MixedProfile> eqs(all.begin(), all.end());
  std::set<MixedProfile> reached;
  for (std::size_t label = 0; label < 4; ++label) {
    const auto r = lemke_howson(g, label);
    EXPECT_TRUE(verify_nash(g.to_normal_form(), r.profile).accepted);
    EXPECT_TRUE(eqs.count(r.profile)) << "label " << label;
    reached.insert(r.profile);
  }
  EXPECT_EQ(reached.size(), 2U);
  EXPECT_FALSE(reached.count(MixedProfile{{{q(1, 8), q(7, 8)}, {q(1, 8), q(7, 8)}}}));
  EXPECT_THROW(lemke_howson(g, 4), ShapeError);
}

TEST(LemkeHowson, PenniesReachUniform) {
  const auto g = fixture_gmp(2);
  for (std::size_t label = 0; label < 4; ++label) {
    EXPECT_EQ(lemke_howson(g, label).profile, MixedProfile::uniform({2, 2}));
  }
}

TEST(LemkeHowson, RandomFourByFourSeed23) {
  const auto g = random_bimatrix(23, 4, 4);
  const auto all = support_enumeration(g);
  const std::set<MixedProfile> eqs(all.begin(), all.end());
  for (std::size_t label = 0; label < 8; ++label) {
    const auto r = lemke_howson(g, label, {true, true});
    EXPECT_TRUE(eqs.count(r.profile)) << "label " << label;
    EXPECT_TRUE(verify_nash(g.to_normal_form(), r.profile).accepted);
    EXPECT_EQ(r.path.size(), r.pivots + 1);
    const std::set<std::vector<std::size_t>> distinct(r.path.begin(), r.path.end());
    EXPECT_EQ(distinct.size(), r.path.size()) << "label " << label;
  }
}

TEST(LemkeHowson, TiesNeedLexicographicRule) {
  const BimatrixGame g(Matrix(2, 2, {1, 1, 1, 1}), Matrix(2, 2, {1, 1, 1, 1}));
  EXPECT_THROW(lemke_howson(g, 0, {false, false}), DegeneracyError);
  const auto r = lemke_howson(g, 0);
  EXPECT_TRUE(verify_nash(g.to_normal_form(), r.profile).accepted);
}

TEST(Approx, RockPaperScissorsTrace) {
  const auto g = fixture_rps().to_normal_form();
  const auto r = approx_nash(g);
  EXPECT_EQ(r.guarantee, q(1, 2));
  // Player 1 commits half to rock; player 2 answers paper; player 1 puts the
  // rest on scissors.
  EXPECT_EQ(r.profile, (MixedProfile{{{q(1, 2), q(0), q(1, 2)}, {q(0), q(1), q(0)}}}));
  const auto verdict = verify_nash(r.rescaled, r.profile, r.guarantee);
  EXPECT_FALSE(verdict.accepted);
  EXPECT_EQ(verdict.max_violation, q(1, 2));
  EXPECT_EQ(approximation_regret(r.rescaled, r.profile), q(1, 2));
}

TEST(Approx, DominantActionsVerifyExactly) {
  const auto g = BimatrixGame(Matrix(2, 2, {5, 3, 1, 0}), Matrix(2, 2, {5, 1, 3, 0})).to_normal_form();
  const auto r = approx_nash(g);
  EXPECT_EQ(r.profile, MixedProfile::pure({2, 2}, {0, 0}));
  EXPECT_TRUE(verify_nash(g, r.profile).accepted);
}

TEST(Approx, ThreePlayersSeedFive) {
  std::mt19937_64 rng(5);
  std::vector<Rational> pay(8 * 3);
  for (auto& v : pay) v = static_cast<long>(rng() % 11) - 5;
  const NormalFormGame g({2, 2, 2}, pay);
  const auto r = approx_nash(g, 5);
  EXPECT_EQ(r.guarantee, q(2, 3));
  check_profile(g, r.profile);
  EXPECT_EQ(serialize_profile(approx_nash(g, 5).profile), serialize_profile(r.profile));
  EXPECT_GE(*std::max_element(r.profile[0].begin(), r.profile[0].end()), q(2, 3));
  EXPECT_GE(*std::max_element(r.profile[1].begin(), r.profile[1].end()), q(1, 2));
  EXPECT_LE(approximation_regret(r.rescaled, r.profile), r.guarantee);
}

TEST(Approx, RescaleMapsOntoUnitInterval) {
  const auto g = fixture_rps().to_normal_form();
  const auto s = rescale_payoffs(g);
  EXPECT_EQ(s.payoff(0, std::uint64_t{1}), 0);  // rock vs paper, -1 -> 0
  EXPECT_EQ(s.payoff(0, std::uint64_t{0}), q(1, 2));
  const NormalFormGame flat({2, 2}, std::vector<Rational>(8, Rational(3)));
  const auto scaled_flat = rescale_payoffs(flat);
  for (const auto& v : scaled_flat.payoffs()) EXPECT_EQ(v, 0);
}

// The reported equilibria all verify; on 2x2 games they coincide with the
// closed form, and on random nondegenerate games the count is odd.
TEST(Properties, EnumerationSoundAndComplete) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const auto g = random_bimatrix(seed, 2, 2, 4);
    const auto all = support_enumeration(g);
    for (const auto& p : all) EXPECT_TRUE(verify_nash(g.to_normal_form(), p).accepted);
    if (is_generic(g)) {
      EXPECT_EQ(std::set<MixedProfile>(all.begin(), all.end()), reference_2x2(g)) << "seed " << seed;
    }
  }
  int generic = 0;
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const auto g = random_bimatrix(seed, 2 + seed % 3, 2 + (seed / 3) % 3, 20);
    if (!is_generic(g)) continue;
    ++generic;
    EXPECT_EQ(support_enumeration(g).size() % 2, 1U) << "seed " << seed;
  }
  EXPECT_GT(generic, 10);
}

// Every Lemke-Howson endpoint is in the enumerated set.
TEST(Properties, LemkeHowsonEndpointsEnumerated) {
  for (std::uint64_t seed = 200; seed < 225; ++seed) {
    const auto g = random_bimatrix(seed, 3, 2 + seed % 3);
    const auto all = support_enumeration(g);
    const std::set<MixedProfile> eqs(all.begin(), all.end());
    for (std::size_t label = 0; label < g.rows() + g.cols(); ++label) {
      EXPECT_TRUE(eqs.count(lemke_howson(g, label).profile)) << "seed " << seed << " label " << label;
    }
  }
}

// Regret on the rescaled game stays within 1 - 1/k.
TEST(Properties, ApproxRegretWithinGuarantee) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t k = 2 + trial % 3;
    std::vector<std::size_t> counts(k);
    std::uint64_t profiles = 1;
    for (auto& n : counts) profiles *= (n = 2 + rng() % 2);
    std::vector<Rational> pay(profiles * k);
    for (auto& v : pay) v = static_cast<long>(rng() % 9) - 4;
    const NormalFormGame g(counts, pay);
    const auto r = approx_nash(g, trial % 2 ? std::optional<std::uint64_t>(trial) : std::nullopt);
    check_profile(g, r.profile);
    EXPECT_LE(approximation_regret(r.rescaled, r.profile), r.guarantee) << "trial " << trial;
  }
}

// Simplex optimum and lexmin against enumeration of every basis.
TEST(Linear, SimplexMatchesBasisEnumeration) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 2, cols = 4;
    Matrix a(rows, cols);
    for (auto& v : a.data) v = static_cast<long>(rng() % 7) - 2;
    std::vector<Rational> b{Rational(static_cast<long>(rng() % 5)), Rational(static_cast<long>(rng() % 5))};
    std::vector<Rational> c(cols);
    for (auto& v : c) v = static_cast<long>(rng() % 5);  // non-negative costs keep the LP bounded
    std::optional<Rational> best;
    std::set<std::vector<Rational>> vertices;
    for (std::size_t i = 0; i < cols; ++i) {
      for (std::size_t j = i + 1; j < cols; ++j) {
        Matrix aug(rows, 3);
        for (std::size_t r = 0; r < rows; ++r) {
          aug(r, 0) = a(r, i);
          aug(r, 1) = a(r, j);
          aug(r, 2) = b[r];
        }
        const auto red = linear::rref(aug);
        if (!red.consistent || !red.unique()) continue;
        const auto s = red.particular();
        if (s[0] < 0 || s[1] < 0) continue;
        std::vector<Rational> z(cols, Rational(0));
        z[i] = s[0];
        z[j] = s[1];
        vertices.insert(z);
        const Rational cost = c[i] * s[0] + c[j] * s[1];
        if (!best || cost < *best) best = cost;
      }
    }
    const auto lp = linear::lp_minimize(a, b, c);
    if (!best) continue;  // the enumeration misses rank-deficient corner cases
    ASSERT_EQ(lp.status, linear::LpStatus::Optimal) << "trial " << trial;
    EXPECT_EQ(lp.value, *best) << "trial " << trial;
    const auto lex = linear::lexmin(a, b, {0, 1, 2, 3});
    ASSERT_TRUE(lex);
    EXPECT_EQ(*lex, *vertices.begin()) << "trial " << trial;
  }
}

}  // namespace
}  // namespace ppad
