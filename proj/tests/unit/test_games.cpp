#include <gtest/gtest.h>

#include <random>

#include "ppad/games.hpp"

namespace ppad {
namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

// Reference deviation payoff by recursion over the opponents' actions,
// reading payoffs through the profile-vector accessor.
Rational reference_deviation(const NormalFormGame& g, const MixedProfile& prof, std::size_t player,
                             std::size_t action) {
  std::vector<std::size_t> s(g.players());
  s[player] = action;
  Rational total = 0;
  auto rec = [&](auto&& self, std::size_t r, const Rational& w) -> void {
    if (r == g.players()) {
      total += w * g.payoff(player, std::span<const std::size_t>(s));
      return;
    }
    if (r == player) return self(self, r + 1, w);
    for (std::size_t a = 0; a < g.actions(r); ++a) {
      s[r] = a;
      self(self, r + 1, w * prof[r][a]);
    }
  };
  rec(rec, 0, Rational(1));
  return total;
}

NormalFormGame rps() {
  return BimatrixGame(Matrix(3, 3, {0, -1, 1, 1, 0, -1, -1, 1, 0}), Matrix(3, 3, {0, 1, -1, -1, 0, 1, 1, -1, 0}))
      .to_normal_form();
}

NormalFormGame stag_hunt() {
  return BimatrixGame(Matrix(2, 2, {8, 0, 1, 1}), Matrix(2, 2, {8, 1, 0, 1})).to_normal_form();
}

NormalFormGame gmp3() {
  return BimatrixGame(Matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}), Matrix(3, 3, {-1, 0, 0, 0, -1, 0, 0, 0, -1}))
      .to_normal_form();
}

NormalFormGame random_game(std::mt19937_64& rng, std::vector<std::size_t> counts) {
  std::uint64_t profiles = 1;
  for (auto n : counts) profiles *= n;
  std::vector<Rational> pay(profiles * counts.size());
  for (auto& p : pay) p = static_cast<long>(rng() % 7) - 3;
  return NormalFormGame(std::move(counts), std::move(pay));
}

MixedProfile random_profile(std::mt19937_64& rng, const NormalFormGame& g) {
  MixedProfile p;
  for (std::size_t i = 0; i < g.players(); ++i) {
    std::vector<long> w(g.actions(i));
    long total = 0;
    for (auto& x : w) {
      x = rng() % 3 == 0 ? 0 : static_cast<long>(rng() % 5);
      total += x;
    }
    if (total == 0) {
      w[rng() % w.size()] = 1;
      total = 1;
    }
    std::vector<Rational> row;
    for (auto x : w) row.push_back(q(x, total));
    p.strategies.push_back(row);
  }
  return p;
}

TEST(Payoffs, RockPaperScissors) {
  const auto g = rps();
  const auto uni = MixedProfile::uniform(g.action_counts());
  EXPECT_EQ(expected_payoff(g, uni, 0), 0);
  EXPECT_EQ(expected_payoff(g, uni, 1), 0);
  const auto rock_paper = MixedProfile::pure(g.action_counts(), {0, 1});
  EXPECT_EQ(expected_payoff(g, rock_paper, 0), -1);
  EXPECT_EQ(expected_payoff(g, rock_paper, 1), 1);
}

TEST(Payoffs, StagHunt) {
  const auto g = stag_hunt();
  const auto both_stag = MixedProfile::pure(g.action_counts(), {0, 0});
  EXPECT_EQ(expected_payoff(g, both_stag, 0), 8);
  EXPECT_EQ(expected_payoff(g, both_stag, 1), 8);
}

TEST(Deviation, HandComputedValues) {
  EXPECT_EQ(pure_deviation_payoff(rps(), MixedProfile::uniform({3, 3}), 0, 0), 0);
  const auto g = stag_hunt();
  EXPECT_EQ(pure_deviation_payoff(g, MixedProfile::pure({2, 2}, {1, 1}), 0, 0), 0);
  EXPECT_EQ(pure_deviation_payoff(g, MixedProfile::pure({2, 2}, {1, 1}), 0, 1), 1);
  EXPECT_EQ(pure_deviation_payoff(gmp3(), MixedProfile::uniform({3, 3}), 0, 2), q(1, 3));
  EXPECT_THROW(pure_deviation_payoff(g, MixedProfile::uniform({2, 2}), 0, 2), ShapeError);
}

TEST(Verify, RockPaperScissors) {
  const auto g = rps();
  const auto uni = verify_nash(g, MixedProfile::uniform({3, 3}));
  EXPECT_TRUE(uni.accepted);
  EXPECT_EQ(uni.max_violation, 0);
  const auto rock = verify_nash(g, MixedProfile::pure({3, 3}, {0, 0}));
  EXPECT_FALSE(rock.accepted);
  EXPECT_EQ(rock.max_violation, 1);
  EXPECT_TRUE(verify_nash(g, MixedProfile::pure({3, 3}, {0, 0}), 1).accepted);
}

TEST(Verify, StagHuntEquilibria) {
  const auto g = stag_hunt();
  EXPECT_TRUE(verify_nash(g, MixedProfile::pure({2, 2}, {0, 0})).accepted);
  EXPECT_TRUE(verify_nash(g, MixedProfile::pure({2, 2}, {1, 1})).accepted);
  // Indifference: 8p = 1 for both players.
  const MixedProfile mixed{{{q(1, 8), q(7, 8)}, {q(1, 8), q(7, 8)}}};
  EXPECT_TRUE(verify_nash(g, mixed).accepted);
  const auto off = verify_nash(g, MixedProfile::pure({2, 2}, {0, 1}));
  EXPECT_FALSE(off.accepted);
  EXPECT_EQ(off.max_violation, 7);  // column player gains 8 - 1 by hunting stag
}

TEST(Verify, RejectsMalformedProfiles) {
  const auto g = stag_hunt();
  EXPECT_THROW(verify_nash(g, MixedProfile{{{q(1, 2), q(1, 3)}, {q(1), q(0)}}}), ValidityError);
  EXPECT_THROW(verify_nash(g, MixedProfile{{{q(3, 2), q(-1, 2)}, {q(1), q(0)}}}), ValidityError);
  EXPECT_THROW(verify_nash(g, MixedProfile::uniform({3, 2})), ShapeError);
  EXPECT_THROW(verify_nash(g, MixedProfile::uniform({2, 2}), q(-1)), ValidityError);
}

TEST(BestResponse, Sets) {
  EXPECT_EQ(best_response_set(rps(), MixedProfile::uniform({3, 3}), 0), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(best_response_set(rps(), MixedProfile::pure({3, 3}, {0, 0}), 0), (std::vector<std::size_t>{1}));
  const MixedProfile mixed{{{q(1, 8), q(7, 8)}, {q(1, 8), q(7, 8)}}};
  EXPECT_EQ(best_response_set(stag_hunt(), mixed, 1), (std::vector<std::size_t>{0, 1}));
}

TEST(Regret, MeasuresBestGain) {
  EXPECT_EQ(approximation_regret(rps(), MixedProfile::pure({3, 3}, {0, 0})), 1);
  EXPECT_EQ(approximation_regret(rps(), MixedProfile::uniform({3, 3})), 0);
}

TEST(Construction, ShapesAndCaps) {
  EXPECT_THROW(NormalFormGame({2}, {q(0), q(0)}), ShapeError);
  EXPECT_THROW(NormalFormGame({2, 1}, {q(0), q(0), q(0), q(0)}), ShapeError);
  EXPECT_THROW(NormalFormGame({2, 2}, std::vector<Rational>(7)), ShapeError);
  EXPECT_THROW(NormalFormGame({1000, 1000}, {}), CapExceeded);
  const auto g = stag_hunt();
  EXPECT_EQ(g.index_of(std::vector<std::size_t>{1, 0}), 2U);
  EXPECT_EQ(g.profile_at(3), (std::vector<std::size_t>{1, 1}));
  const auto back = BimatrixGame::from_normal_form(g);
  EXPECT_EQ(back.row_payoffs()(0, 0), 8);
  EXPECT_EQ(back.col_payoffs()(0, 1), 1);
}

TEST(Format, GameAndProfileRoundTrip) {
  std::mt19937_64 rng(3);
  auto g = random_game(rng, {2, 3, 2});
  std::vector<Rational> pay = g.payoffs();
  pay[4] = q(-7, 3);
  g = NormalFormGame(g.action_counts(), pay);
  const std::string text = serialize_game(g);
  EXPECT_EQ(text.substr(0, 23), "GAME k=3\nACTIONS 2 3 2\n");
  const auto back = parse_game(text);
  EXPECT_EQ(back.payoffs(), g.payoffs());
  EXPECT_EQ(serialize_game(back), text);

  const MixedProfile p{{{q(1, 3), q(2, 3)}, {q(0), q(1, 2), q(1, 2)}, {q(1), q(0)}}};
  EXPECT_EQ(parse_profile(serialize_profile(p)), p);
}

TEST(Format, Errors) {
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_EQ(parse_rational("-6/4"), q(-3, 2));
  EXPECT_THROW(parse_game("GAME k=2\nACTIONS 2 2\n0 0 : 1 1\n0 1 : 1/0 1\n1 0 : 0 0\n1 1 : 0 0\n"), FormatError);
  EXPECT_THROW(parse_game("GAME k=2\nACTIONS 2 2\n0 0 : 1 1\n1 0 : 1 1\n0 1 : 0 0\n1 1 : 0 0\n"), FormatError);
  EXPECT_THROW(parse_game("GAME k=2\nACTIONS 2 2\n0 0 : 1 1\n"), FormatError);
  EXPECT_THROW(parse_profile("PROFILE\n1/2 x\n"), FormatError);
}

// Deviation payoffs agree with the recursive reference on random games.
TEST(Properties, DeviationMatchesReference) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_game(rng, {2 + rng() % 2, 2 + rng() % 3, 2 + rng() % 2});
    const auto p = random_profile(rng, g);
    for (std::size_t i = 0; i < g.players(); ++i) {
      const auto dev = deviation_payoffs(g, p, i);
      for (std::size_t j = 0; j < g.actions(i); ++j) EXPECT_EQ(dev[j], reference_deviation(g, p, i, j));
    }
  }
}

// Accepted at eps = 0 exactly when every supported action is a best
// response; raising eps never turns an accept into a reject and the
// violation drops by exactly eps until it reaches zero.
TEST(Properties, SupportBestResponseAndEpsMonotone) {
  std::mt19937_64 rng(12);
  int accepted = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_game(rng, {2, 2 + rng() % 2, 2});
    const auto p = trial % 2 ? random_profile(rng, g)
                             : MixedProfile::pure(g.action_counts(), {rng() % 2, rng() % g.actions(1), rng() % 2});
    bool supported_best = true;
    for (std::size_t i = 0; i < g.players(); ++i) {
      const auto br = best_response_set(g, p, i);
      for (std::size_t j = 0; j < g.actions(i); ++j) {
        if (p[i][j] != 0 && std::find(br.begin(), br.end(), j) == br.end()) supported_best = false;
      }
    }
    const auto v0 = verify_nash(g, p);
    EXPECT_EQ(v0.accepted, supported_best);
    accepted += v0.accepted;
    for (const Rational& eps : {q(1, 4), q(1), q(3)}) {
      const auto v = verify_nash(g, p, eps);
      if (v0.accepted) {
        EXPECT_TRUE(v.accepted);
      }
      const Rational expected = v0.max_violation > eps ? Rational(v0.max_violation - eps) : Rational(0);
      EXPECT_EQ(v.max_violation, expected);
    }
  }
  EXPECT_GT(accepted, 0);
}

// Expected payoff is linear in each player's own strategy.
TEST(Properties, Multilinearity) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_game(rng, {3, 2, 2});
    const auto a = random_profile(rng, g);
    auto b = random_profile(rng, g);
    const std::size_t who = rng() % 3;
    for (std::size_t r = 0; r < 3; ++r) {
      if (r != who) b.strategies[r] = a.strategies[r];
    }
    const Rational lambda = q(1 + rng() % 4, 5);
    MixedProfile mix = a;
    for (std::size_t j = 0; j < g.actions(who); ++j) {
      mix.strategies[who][j] = lambda * a[who][j] + (1 - lambda) * b[who][j];
    }
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(expected_payoff(g, mix, i),
                lambda * expected_payoff(g, a, i) + (1 - lambda) * expected_payoff(g, b, i));
    }
  }
}

// Adding a constant to a player's payoffs or scaling them by a positive
// factor leaves the exact verdict unchanged.
TEST(Properties, AffineInvariance) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = random_game(rng, {2, 3});
    const auto p = trial % 3 ? random_profile(rng, g) : MixedProfile::pure({2, 3}, {rng() % 2, rng() % 3});
    std::vector<Rational> pay = g.payoffs();
    const Rational shift = q(static_cast<long>(rng() % 9) - 4, 3);
    const Rational scale = q(1 + rng() % 5, 2);
    for (std::size_t k = 0; k < pay.size(); ++k) pay[k] = k % 2 == 0 ? Rational(pay[k] + shift) : Rational(pay[k] * scale);
    const NormalFormGame h(g.action_counts(), pay);
    EXPECT_EQ(verify_nash(g, p).accepted, verify_nash(h, p).accepted);
  }
}

}  // namespace
}  // namespace ppad
