#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "neuronpg/reward.hpp"

using namespace neuronpg;

namespace {

Grid<SpikeCount> grid_from(const std::vector<std::vector<SpikeCount>>& rows) {
  Grid<SpikeCount> g(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) g(r, c) = rows[r][c];
  return g;
}

std::vector<SpikeCount> random_counts(Stream& rng, std::size_t n, double rate) {
  std::vector<SpikeCount> out(n);
  for (auto& x : out) x = poisson(rate, rng);
  return out;
}

}  // namespace

// ---- coincidence

TEST(Coincidence, SilentTrainGivesZeros) {
  const std::vector<SpikeCount> zero(6, 0), other{1, 2, 0, 3, 1, 1};
  for (double g : coincidence_reward_trace(zero, other)) EXPECT_EQ(g, 0.0);
  for (double g : coincidence_reward_trace(zero, zero)) {
    EXPECT_EQ(g, 0.0);
    EXPECT_TRUE(std::isfinite(g));
  }
}

TEST(Coincidence, HandExample) {
  const std::vector<SpikeCount> a{1, 2}, b{2, 1};
  const auto g = coincidence_reward_trace(a, b);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_DOUBLE_EQ(g[0], 2.0 / 1.5);
  EXPECT_DOUBLE_EQ(g[1], 2.0 / 1.5);
  EXPECT_NEAR(g[0] + g[1], 2.6666666666666665, 1e-15);
}

TEST(Coincidence, HomogeneousOfDegreeOne) {
  Stream rng(4, Purpose::Bench, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_counts(rng, 40, 1.3), b = random_counts(rng, 40, 0.8);
    const auto g = coincidence_reward_trace(a, b);
    for (SpikeCount c : {2u, 3u, 7u}) {
      std::vector<SpikeCount> ca(a), cb(b);
      for (auto& x : ca) x *= c;
      for (auto& x : cb) x *= c;
      const auto gc = coincidence_reward_trace(ca, cb);
      for (std::size_t t = 0; t < g.size(); ++t) ASSERT_NEAR(gc[t], c * g[t], 1e-12 * (1.0 + gc[t]));
    }
  }
}

TEST(Coincidence, Errors) {
  EXPECT_THROW(coincidence_reward_trace(std::vector<SpikeCount>{1}, std::vector<SpikeCount>{1, 2}),
               std::invalid_argument);
  EXPECT_THROW(coincidence_reward_trace(std::vector<SpikeCount>{}, std::vector<SpikeCount>{}),
               std::invalid_argument);
}

// ---- spike penalty

TEST(SpikePenalty, Examples) {
  EXPECT_EQ(spike_penalty_trace(std::vector<SpikeCount>{3, 0, 1}, -1.0), (std::vector<double>{-3.0, 0.0, -1.0}));
  for (double x : spike_penalty_trace(std::vector<SpikeCount>(4, 0), -1.0)) EXPECT_EQ(x, 0.0);
  for (double x : spike_penalty_trace(std::vector<SpikeCount>{5, 9, 2}, 0.0)) EXPECT_EQ(x, 0.0);
}

// ---- pattern correlation

TEST(PatternCorrelation, IdenticalPatternsGiveOne) {
  const auto p = grid_from({{0, 3, 1, 0}, {2, 0, 0, 1}, {1, 1, 4, 0}, {0, 0, 2, 2}});
  const auto g = pattern_correlation_reward_trace(p, p, 2);
  for (double x : g) EXPECT_NEAR(x, 1.0, 1e-12);
}

TEST(PatternCorrelation, AffineAntiCorrelationGivesMinusOne) {
  // observed = 10 - 2 * intended, row-wise, every bin
  const auto in = grid_from({{0, 1, 2}, {1, 2, 0}, {3, 0, 1}, {2, 2, 2}});
  Grid<SpikeCount> obs(4, 3);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t t = 0; t < 3; ++t) obs(k, t) = 10 - 2 * in(k, t);
  // Window 1 only, so each bin compares a single-bin pattern.
  const auto g = pattern_correlation_reward_trace(in, obs, 1);
  for (double x : g) EXPECT_NEAR(x, -1.0, 1e-12);
}

TEST(PatternCorrelation, ConstantPatternsGiveZero) {
  const auto a = grid_from({{2, 2}, {2, 2}, {2, 2}});
  const auto b = grid_from({{1, 0}, {3, 1}, {0, 2}});
  for (double x : pattern_correlation_reward_trace(a, b, 5)) EXPECT_EQ(x, 0.0);
  for (double x : pattern_correlation_reward_trace(a, a, 5)) EXPECT_EQ(x, 0.0);
}

TEST(PatternCorrelation, TrailingWindowSums) {
  // Check bin 3 against a direct Pearson of 2-bin window sums.
  const auto a = grid_from({{1, 0, 2, 3}, {0, 4, 1, 0}, {2, 2, 0, 1}});
  const auto b = grid_from({{0, 1, 1, 2}, {3, 0, 2, 2}, {1, 1, 1, 0}});
  const auto g = pattern_correlation_reward_trace(a, b, 2);
  const std::vector<double> sa{5, 1, 1}, sb{3, 4, 1};
  EXPECT_NEAR(g[3], pearson(sa, sb), 1e-14);
  const std::vector<double> pa{1, 0, 2}, pb{0, 3, 1};
  EXPECT_NEAR(g[0], pearson(pa, pb), 1e-14);
}

TEST(PatternCorrelation, BoundsAndAffineInvariance) {
  Stream rng(6, Purpose::Bench, 0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(12), y(12), z(12);
    for (std::size_t k = 0; k < 12; ++k) {
      x[k] = static_cast<double>(poisson(2.0, rng));
      y[k] = static_cast<double>(poisson(2.0, rng)) + 0.5 * x[k];
      z[k] = 3.5 * y[k] + 11.0;
    }
    const double r = pearson(x, y);
    ASSERT_GE(r, -1.0);
    ASSERT_LE(r, 1.0);
    ASSERT_NEAR(pearson(x, z), r, 1e-12);
  }
}

TEST(PatternCorrelation, Errors) {
  EXPECT_THROW(pattern_correlation_reward_trace(Grid<SpikeCount>(3, 4), Grid<SpikeCount>(2, 4), 2),
               std::invalid_argument);
  EXPECT_THROW(pattern_correlation_reward_trace(Grid<SpikeCount>(3, 4), Grid<SpikeCount>(3, 4), 0),
               std::invalid_argument);
}

// ---- per-neuron assembly

TEST(Assemble, ZeroGlobalWeightLeavesPenaltyOnly) {
  RewardSpec spec;
  spec.global_weight = 0.0;
  const auto counts = grid_from({{1, 2, 0}, {2, 1, 3}, {0, 0, 5}});
  const auto r = assemble_reward_trace(spec, counts);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(r(i, t), -static_cast<double>(counts(i, t)));
}

TEST(Assemble, CoincidencePlusPenaltyHandExample) {
  RewardSpec spec;
  spec.global = CoincidenceReward{0, 1};
  const auto r = assemble_reward_trace(spec, grid_from({{1, 2}, {2, 1}}));
  EXPECT_NEAR(r(0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r(0, 1), -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r(1, 0), 4.0 / 3.0 - 2.0, 1e-15);
}

TEST(Assemble, LinearInWeights) {
  Stream rng(8, Purpose::Bench, 0);
  Grid<SpikeCount> counts(4, 30);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t t = 0; t < 30; ++t) counts(i, t) = poisson(1.5, rng);
  auto with = [&](double gw, double pen) {
    RewardSpec s;
    s.global = CoincidenceReward{2, 3};
    s.global_weight = gw;
    s.spike_penalty = pen;
    return assemble_reward_trace(s, counts);
  };
  const auto g1 = with(1.0, 0.0), p1 = with(0.0, -1.0), mix = with(2.5, -0.75);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t t = 0; t < 30; ++t) EXPECT_NEAR(mix(i, t), 2.5 * g1(i, t) + 0.75 * p1(i, t), 1e-12);
}

TEST(Assemble, SilentNetworkIsAllZero) {
  RewardSpec spec;
  const auto r = assemble_reward_trace(spec, Grid<SpikeCount>(3, 50, 0));
  for (double x : r.data()) {
    EXPECT_EQ(x, 0.0);
    EXPECT_TRUE(std::isfinite(x));
  }
}

TEST(Assemble, DecompositionRoutesEachGroup) {
  // Group A watches neurons 0/1, group B watches 2/3; the two pairs fire in
  // disjoint bins, so the group traces have disjoint support.
  const auto counts = grid_from({{2, 2, 0, 0}, {1, 3, 0, 0}, {0, 0, 1, 2}, {0, 0, 4, 1}});
  RewardSpec spec;
  spec.spike_penalty = 0.0;
  spec.decomposition = std::vector<RewardGroup>{{{0, 1, 4}, CoincidenceReward{0, 1}},
                                                {{2, 3}, CoincidenceReward{2, 3}}};
  Grid<SpikeCount> five(5, 4, 0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t t = 0; t < 4; ++t) five(i, t) = counts(i, t);
  const auto r = assemble_reward_trace(spec, five);
  const auto ga = coincidence_reward_trace(counts.row(0), counts.row(1));
  const auto gb = coincidence_reward_trace(counts.row(2), counts.row(3));
  for (std::size_t t = 0; t < 4; ++t) {
    EXPECT_EQ(r(0, t), ga[t]);
    EXPECT_EQ(r(1, t), ga[t]);
    EXPECT_EQ(r(4, t), ga[t]);
    EXPECT_EQ(r(2, t), gb[t]);
    EXPECT_EQ(r(3, t), gb[t]);
    EXPECT_EQ(ga[t] * gb[t], 0.0);
  }
}

TEST(Assemble, PatternGroupsUseTheirEncoderSubsets) {
  EncoderCounts enc{grid_from({{1, 0, 3}, {0, 2, 1}, {4, 1, 0}, {0, 0, 2}}),
                    grid_from({{1, 0, 3}, {0, 2, 1}, {0, 3, 1}, {2, 2, 0}})};
  RewardSpec spec;
  spec.spike_penalty = 0.0;
  PatternCorrelationReward low{{0, 1}, {0, 1}, 1}, high{{2, 3}, {2, 3}, 1};
  spec.decomposition = std::vector<RewardGroup>{{{0}, low}, {{1}, high}};
  const auto r = assemble_reward_trace(spec, Grid<SpikeCount>(2, 3, 0), &enc);
  const auto gl = pattern_correlation_reward_trace(detail::select_rows(enc.intended, {0, 1}),
                                                   detail::select_rows(enc.observed, {0, 1}), 1);
  const auto gh = pattern_correlation_reward_trace(detail::select_rows(enc.intended, {2, 3}),
                                                   detail::select_rows(enc.observed, {2, 3}), 1);
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_EQ(r(0, t), gl[t]);
    EXPECT_EQ(r(1, t), gh[t]);
  }
  EXPECT_NE(gl, gh);
}

TEST(Assemble, DecompositionMustPartition) {
  EXPECT_THROW(validate_decomposition({{{0, 1}, CoincidenceReward{}}}, 3), std::invalid_argument);
  EXPECT_THROW(validate_decomposition({{{0, 1}, CoincidenceReward{}}, {{1, 2}, CoincidenceReward{}}}, 3),
               std::invalid_argument);
  EXPECT_THROW(validate_decomposition({{{0, 3}, CoincidenceReward{}}}, 3), std::invalid_argument);
  EXPECT_NO_THROW(validate_decomposition({{{2, 0}, CoincidenceReward{}}, {{1}, CoincidenceReward{}}}, 3));
}

TEST(Assemble, PatternRewardNeedsEncoders) {
  RewardSpec spec;
  spec.global = PatternCorrelationReward{};
  EXPECT_THROW(assemble_reward_trace(spec, Grid<SpikeCount>(2, 3)), std::invalid_argument);
}
