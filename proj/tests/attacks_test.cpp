// Copyright 2026 The qpqleak Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpqleak/attacks.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "test_util.hpp"

namespace qpqleak {
namespace {

using testing::three_sigma;

constexpr int kSamples = 1'000'000;

TEST(HbcGuessTest, PassThroughAndBasisGuess) {
  const RawBitRecord conclusive{1, Basis::diagonal, State::x_plus, {State::x_plus, State::z0}, Bit{1}};
  const auto g1 = hbc_guess_raw(conclusive);
  EXPECT_EQ(g1.bit, 1);
  EXPECT_EQ(g1.kind, GuessKind::known);

  const RawBitRecord inconclusive{0, Basis::diagonal, State::x_plus, {State::z0, State::x_plus}, std::nullopt};
  const auto g2 = hbc_guess_raw(inconclusive);
  EXPECT_EQ(g2.bit, 1);
  EXPECT_EQ(g2.kind, GuessKind::guessed);
}

TEST(HbcGuessTest, InconclusiveGuessRightTwoThirds) {
  RandomStream rng(20);
  int seen = 0, right = 0;
  while (seen < kSamples) {
    const auto rec = transmit_one(rng);
    if (rec.conclusive()) continue;
    ++seen;
    right += hbc_guess_raw(rec).bit == rec.bob_bit;
  }
  EXPECT_NEAR(right / double(seen), 2.0 / 3.0, three_sigma(2.0 / 3.0, seen));
}

TEST(HbcLikelihoodTest, DeterministicAndOneGuessCases) {
  const RawBitRecord c0{0, Basis::diagonal, State::x_minus, {State::z0, State::x_plus}, Bit{0}};
  const RawBitRecord c1{1, Basis::rectilinear, State::z1, {State::x_minus, State::z0}, Bit{1}};
  const RawBitRecord guess_diag{0, Basis::diagonal, State::x_plus, {State::z0, State::x_plus}, std::nullopt};

  const std::vector<RawBitRecord> all_known{c0, c1, c1};
  const auto l = hbc_round_likelihood(all_known, 3);
  EXPECT_EQ(l.l0, 1.0);
  EXPECT_EQ(l.l1, 0.0);

  const std::vector<RawBitRecord> one_guess{c0, c0, guess_diag};
  const auto g = hbc_round_likelihood(one_guess, 3);
  EXPECT_NEAR(g.l1, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(g.l0, 1.0 / 3.0, 1e-15);

  EXPECT_THROW(hbc_round_likelihood(one_guess, 2), std::invalid_argument);
}

// The XOR guess conditioned on j guessed constituents is right with q_correct(j).
TEST(HbcLikelihoodTest, ConditionalCorrectnessMatchesFormula) {
  RandomStream rng(21);
  constexpr int k = 3;
  std::array<int, k + 1> count{}, right{};
  std::vector<RawBitRecord> recs;
  for (int trial = 0; trial < kSamples; ++trial) {
    run_raw_round(k, rng, recs);
    const auto obs = hbc_observe(recs);
    Bit truth = 0;
    for (const auto& r : recs) truth ^= r.bob_bit;
    ++count[obs.uncertain];
    right[obs.uncertain] += obs.guess == truth;
    const auto like = hbc_round_likelihood(recs, k);
    ASSERT_NEAR(like.l0 + like.l1, 1.0, 1e-15);
  }
  for (int j = 0; j <= k; ++j) {
    const double q = analytics::q_correct(j);
    const double band = j == 0 ? 0.0 : three_sigma(q, count[j]);
    EXPECT_NEAR(right[j] / double(count[j]), q, band) << "j=" << j;
  }
}

TEST(MedSampleTest, CorrectnessFrequency) {
  for (int k : {1, 6}) {
    RandomStream rng(22 + k);
    const double q = analytics::med_correct_final(k);
    int right = 0;
    for (int i = 0; i < kSamples; ++i) {
      const Bit truth = rng.bit();
      const auto l = med_round_sample(k, truth, rng);
      ASSERT_NEAR(l.l0 + l.l1, 1.0, 1e-15);
      const Bit guess = l.l1 > l.l0 ? 1 : 0;
      right += guess == truth;
    }
    EXPECT_NEAR(right / double(kSamples), q, three_sigma(q, kSamples)) << "k=" << k;
  }
  EXPECT_NEAR(analytics::med_correct_final(6), 0.5625, 1e-12);
  EXPECT_NEAR(analytics::med_correct_final(1), 0.853553, 1e-6);
}

TEST(UdSampleTest, ConclusiveFrequencyAndDirection) {
  for (int k : {1, 6}) {
    RandomStream rng(30 + k);
    const double p = analytics::info_ud_single(k);
    int conclusive = 0;
    for (int i = 0; i < kSamples; ++i) {
      const Bit truth = rng.bit();
      const auto l = ud_round_sample(k, truth, rng);
      const Belief prior{0.2 + 0.6 * rng.uniform01()};
      const Belief post = bayes_update(prior, l);
      const double prior_truth = truth ? prior.p1() : prior.p0;
      const double post_truth = truth ? post.p1() : post.p0;
      if (l.l0 != 0.5) {
        ++conclusive;
        ASSERT_EQ(post_truth, 1.0);
      } else {
        ASSERT_EQ(post.p0, prior.p0);
      }
      ASSERT_GE(post_truth, prior_truth);
    }
    EXPECT_NEAR(conclusive / double(kSamples), p, three_sigma(p, kSamples)) << "k=" << k;
  }
}

TEST(BayesTest, Examples) {
  EXPECT_DOUBLE_EQ(bayes_update({0.5}, {0.5, 0.5}).p0, 0.5);
  EXPECT_NEAR(bayes_update({0.5}, {2.0 / 3.0, 1.0 / 3.0}).p0, 2.0 / 3.0, 1e-15);
  EXPECT_THROW(bayes_update({1.0}, {0.0, 1.0}), DegenerateUpdate);
  EXPECT_THROW(bayes_update({0.0}, {1.0, 0.0}), DegenerateUpdate);
}

TEST(BayesTest, OrderIndependentAndInRange) {
  RandomStream rng(40);
  for (int i = 0; i < 20000; ++i) {
    const Belief prior{rng.uniform01()};
    const double a = rng.uniform01(), b = rng.uniform01();
    const RoundLikelihood l1{a, 1 - a}, l2{b, 1 - b};
    const Belief x = bayes_update(bayes_update(prior.clamped(), l1).clamped(), l2);
    const Belief y = bayes_update(bayes_update(prior.clamped(), l2).clamped(), l1);
    ASSERT_GE(x.p0, 0.0);
    ASSERT_LE(x.p0, 1.0);
    ASSERT_NEAR(x.p0, y.p0, 1e-12);
  }
}

TEST(DefenseCombineTest, Examples) {
  const std::vector<RoundLikelihood> two_thirds{{2.0 / 3, 1.0 / 3}, {2.0 / 3, 1.0 / 3}};
  EXPECT_NEAR(defense_combine(two_thirds).l0, 5.0 / 9.0, 1e-15);

  const std::vector<RoundLikelihood> one_blind{{0.9, 0.1}, {0.5, 0.5}, {1.0, 0.0}};
  EXPECT_EQ(defense_combine(one_blind).l0, 0.5);

  const std::vector<RoundLikelihood> certain{{1.0, 0.0}, {1.0, 0.0}};
  EXPECT_EQ(defense_combine(certain).l0, 1.0);

  const std::vector<RoundLikelihood> one{{1.0, 0.0}};
  EXPECT_THROW(defense_combine(one), std::invalid_argument);
  const std::vector<RoundLikelihood> four(4);
  EXPECT_THROW(defense_combine(four), std::invalid_argument);
}

TEST(DefenseCombineTest, MatchesJointEnumeration) {
  const std::array<double, 7> qs{0.0, 1.0 / 3, 0.5, 5.0 / 9, 2.0 / 3, 7.0 / 8, 1.0};
  for (double a : qs)
    for (double b : qs) {
      const std::vector<RoundLikelihood> two{{a, 1 - a}, {b, 1 - b}};
      EXPECT_NEAR(defense_combine(two).l0, oracle::xor_zero(two), 1e-15);
      for (double c : qs) {
        const std::vector<RoundLikelihood> three{{a, 1 - a}, {b, 1 - b}, {c, 1 - c}};
        EXPECT_NEAR(defense_combine(three).l0, oracle::xor_zero(three), 1e-15);
      }
    }
}

TEST(ItemLikelihoodTest, CipherBitFlipsOrientation) {
  const RoundLikelihood key{0.8, 0.2};
  EXPECT_EQ(item_likelihood(key, 0).l0, 0.8);
  EXPECT_EQ(item_likelihood(key, 1).l0, 0.2);
}

// ---------------------------------------------------------------------------
// Multi-round simulation

ExperimentConfig small_config(AttackKind attack, int rounds, long long n = 4000) {
  ExperimentConfig c;
  c.k = 6;
  c.n = n;
  c.rounds = rounds;
  c.trials = 1;
  c.attack = attack;
  c.seed = 7;
  return c;
}

TEST(MultiRoundTest, MedTrajectoryMatchesAnalytic) {
  auto cfg = small_config(AttackKind::med, 100, 5000);
  constexpr int kTrials = 8;
  std::vector<TrialTrajectory> runs;
  for (int t = 0; t < kTrials; ++t) runs.push_back(run_multi_round(cfg, static_cast<std::uint64_t>(t)));
  for (int m : {1, 10, 100}) {
    double sum = 0.0, ss = 0.0;
    for (const auto& r : runs) sum += r.attack[static_cast<std::size_t>(m - 1)];
    const double mean = sum / kTrials;
    for (const auto& r : runs) ss += std::pow(r.attack[static_cast<std::size_t>(m - 1)] - mean, 2);
    const double se = std::sqrt(ss / (kTrials - 1) / kTrials);
    const double exact = analytics::info_med_multi(6, m);
    // Round 1 has no spread: every item holds exactly 1 - H(q).
    EXPECT_NEAR(mean, exact, std::max(3.0 * se, 1e-12)) << "m=" << m;
  }
}

TEST(MultiRoundTest, DominanceOrdering) {
  const auto med = run_multi_round(small_config(AttackKind::med, 300), 0);
  const auto ud = run_multi_round(small_config(AttackKind::ud, 300), 0);
  const auto hbc = run_multi_round(small_config(AttackKind::hbc, 300), 0);
  for (std::size_t r = 0; r < 300; ++r) {
    EXPECT_GE(med.attack[r], ud.attack[r]) << r;
    EXPECT_GE(hbc.attack[r], hbc.honest[r]) << r;
  }
  // UD vs honest at the end, where Monte Carlo noise is small relative to the gap.
  EXPECT_GT(ud.attack.back(), ud.honest.back());
}

TEST(MultiRoundTest, HonestFractionTracksAnalytic) {
  const auto run = run_multi_round(small_config(AttackKind::hbc, 400, 8000), 0);
  const double p = analytics::info_honest_multi(6, 400, 8000);
  EXPECT_NEAR(run.honest.back(), p, three_sigma(p, 8000));
}

TEST(MultiRoundTest, DefenseSeriesPresentOnlyWhenDefended) {
  auto cfg = small_config(AttackKind::med, 20, 500);
  EXPECT_TRUE(run_multi_round(cfg, 0).defense.empty());
  cfg.defense_segments = 2;
  const auto run = run_multi_round(cfg, 0);
  ASSERT_EQ(run.defense.size(), 20u);
  EXPECT_LT(run.defense.back(), run.attack.back());

  cfg.attack = AttackKind::hbc;
  cfg.defense_segments = 3;
  const auto hbc = run_multi_round(cfg, 0);
  ASSERT_EQ(hbc.defense.size(), 20u);
  for (double v : hbc.defense) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(MultiRoundTest, PaperLiteralModeIsAtLeastAsInformative) {
  auto cfg = small_config(AttackKind::hbc, 200, 2000);
  const auto faithful = run_multi_round(cfg, 0);
  cfg.sim_mode = SimMode::paper_literal;
  const auto literal = run_multi_round(cfg, 0);
  EXPECT_GT(literal.attack.back(), faithful.attack.back());
  // Both modes see the same transcripts, hence the same honest knowledge.
  EXPECT_EQ(literal.honest, faithful.honest);
}

TEST(MultiRoundTest, SameTrialSameResult) {
  const auto cfg = small_config(AttackKind::hbc, 30, 1000);
  const auto a = run_multi_round(cfg, 3);
  const auto b = run_multi_round(cfg, 3);
  EXPECT_EQ(a.attack, b.attack);
  EXPECT_EQ(a.honest, b.honest);
  EXPECT_NE(run_multi_round(cfg, 4).attack, a.attack);
}

TEST(MultiRoundTest, InvalidConfigThrows) {
  auto cfg = small_config(AttackKind::med, 10);
  cfg.defense_segments = 4;
  EXPECT_THROW(run_multi_round(cfg, 0), std::invalid_argument);
  cfg.defense_segments = 1;
  cfg.k = 0;
  EXPECT_THROW(run_multi_round(cfg, 0), std::invalid_argument);
}

}  // namespace
}  // namespace qpqleak
