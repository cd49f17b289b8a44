#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "aoi/closed_form.hpp"
#include "aoi/mdp_solver.hpp"
#include "aoi/simulator.hpp"

namespace aoi {
namespace {

SimConfig config(std::uint64_t counted, std::uint64_t seed, std::uint64_t burn_in = 10'000) {
  SimConfig cfg;
  cfg.horizon = counted + burn_in;
  cfg.burn_in = burn_in;
  cfg.seed = seed;
  return cfg;
}

TEST(CounterRng, Deterministic) {
  CounterRng a(42);
  CounterRng b(42);
  CounterRng other(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != other.next();
  }
  EXPECT_TRUE(differs);
}

TEST(CounterRng, UniformMoments) {
  CounterRng rng(7);
  const int n = 200'000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum_sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sum_sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 0.002);
}

TEST(Simulate, SameSeedSameResult) {
  const auto params = SystemParams::make(0.5, 0.5, 1.0);
  const auto a = simulate(params, ThresholdPolicy::at(3), config(100'000, 9));
  const auto b = simulate(params, ThresholdPolicy::at(3), config(100'000, 9));
  EXPECT_EQ(a.age_sum, b.age_sum);
  EXPECT_EQ(a.stores, b.stores);
  EXPECT_EQ(a.age_histogram, b.age_histogram);
  EXPECT_EQ(a.avg_cost, b.avg_cost);
  const auto c = simulate(params, ThresholdPolicy::at(3), config(100'000, 10));
  EXPECT_NE(a.age_sum, c.age_sum);
}

TEST(Simulate, Accounting) {
  const auto params = SystemParams::make(0.3, 0.7, 2.0);
  const auto stats = simulate(params, ThresholdPolicy::at(4), config(200'000, 3, 5'000));
  EXPECT_EQ(stats.slots_counted, 200'000u);
  EXPECT_EQ(stats.seed, 3u);
  EXPECT_EQ(std::accumulate(stats.age_histogram.begin(), stats.age_histogram.end(), std::uint64_t{0}),
            stats.slots_counted);
  EXPECT_EQ(stats.age_histogram.at(0), 0u);
  std::uint64_t weighted = 0;
  for (std::size_t v = 0; v < stats.age_histogram.size(); ++v) weighted += v * stats.age_histogram[v];
  EXPECT_EQ(weighted, stats.age_sum);
  EXPECT_DOUBLE_EQ(stats.avg_age, static_cast<double>(stats.age_sum) / stats.slots_counted);
  EXPECT_DOUBLE_EQ(stats.storage_rate, static_cast<double>(stats.stores) / stats.slots_counted);
  EXPECT_NEAR(stats.avg_cost, stats.avg_age + params.c * stats.storage_rate, 1e-12);
}

TEST(Simulate, NeverStorePolicy) {
  const auto params = SystemParams::make(0.5, 0.5, 5.0);
  const auto stats = simulate(params, ThresholdPolicy::never(), config(2'000'000, 1));
  EXPECT_EQ(stats.stores, 0u);
  EXPECT_EQ(stats.storage_rate, 0.0);
  EXPECT_NEAR(stats.avg_cost, 4.0, 0.04);
}

TEST(Simulate, MatchesClosedFormCost) {
  const auto params = SystemParams::make(0.5, 0.5, 1.0);
  const auto stats = simulate(params, ThresholdPolicy::at(3), config(2'000'000, 5));
  EXPECT_NEAR(stats.avg_cost / average_cost(params, ThresholdPolicy::at(3)), 1.0, 0.01);
}

TEST(Simulate, StorageRateMatchesTailMass) {
  const auto params = SystemParams::make(0.2, 0.8, 2.0);
  const auto stats = simulate(params, ThresholdPolicy::at(3), config(2'000'000, 11));
  const double expected = params.p * stationary_distribution(params, 3).tail_mass();
  EXPECT_NEAR(stats.storage_rate, expected, 4.0 * std::sqrt(expected / 2e6));
}

TEST(Simulate, AcceptsTabularPolicy) {
  const auto params = SystemParams::make(0.5, 0.5, 2.0);
  SolverOptions options;
  options.v_max = 300;
  const auto solution = relative_value_iteration(params, options);
  const auto tabular = simulate(params, solution.policy, config(50'000, 4));
  const auto threshold = simulate(params, ThresholdPolicy::at(5), config(50'000, 4));
  EXPECT_EQ(tabular.age_histogram, threshold.age_histogram);
  EXPECT_EQ(tabular.stores, threshold.stores);
}

TEST(Simulate, RejectsBurnInCoveringHorizon) {
  SimConfig cfg;
  cfg.horizon = 100;
  cfg.burn_in = 100;
  EXPECT_THROW(simulate(SystemParams::make(0.5, 0.5, 1.0), ThresholdPolicy::never(), cfg), std::invalid_argument);
}

TEST(EmpiricalAgeDistribution, SumsToOneFromAgeOne) {
  const auto params = SystemParams::make(0.5, 0.5, 1.0);
  const auto stats = simulate(params, ThresholdPolicy::at(3), config(100'000, 2));
  const auto pmf = empirical_age_distribution(stats);
  EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(pmf[0], static_cast<double>(stats.age_histogram[1]) / stats.slots_counted);
}

TEST(EmpiricalAgeDistribution, RatioAtThreshold) {
  const auto params = SystemParams::make(0.5, 0.5, 1.0);
  const int t = 4;
  const auto stats = simulate(params, ThresholdPolicy::at(t), config(4'000'000, 8));
  const double n_t = static_cast<double>(stats.age_histogram[t]);
  const double n_next = static_cast<double>(stats.age_histogram[t + 1]);
  const double ratio = n_next / n_t;
  // Delta-method standard error of a ratio of counts, treating them as independent Poisson counts.
  const double se = ratio * std::sqrt(1.0 / n_t + 1.0 / n_next);
  EXPECT_NEAR(ratio, 1.0 - params.pq(), 3.0 * se);
}

TEST(EmpiricalAgeDistribution, CloseToStationaryPmf) {
  const auto params = SystemParams::make(0.2, 0.8, 2.0);
  const auto stats = simulate(params, ThresholdPolicy::at(3), config(2'000'000, 6));
  const auto pmf = empirical_age_distribution(stats);
  const auto exact = stationary_distribution(params, 3).truncated_pmf(static_cast<int>(pmf.size()));
  double tv = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) tv += std::abs(pmf[i] - exact[i]);
  EXPECT_LT(tv / 2.0, 0.01);
}

TEST(Pool, MergesCounts) {
  const auto params = SystemParams::make(0.5, 0.5, 1.0);
  std::vector<SimStats> runs;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) runs.push_back(simulate(params, ThresholdPolicy::at(3), config(50'000, seed)));
  const auto pooled = pool(runs, params.c);
  EXPECT_EQ(pooled.total.slots_counted, 150'000u);
  EXPECT_EQ(pooled.total.age_sum, runs[0].age_sum + runs[1].age_sum + runs[2].age_sum);
  EXPECT_NEAR(pooled.total.avg_cost, (runs[0].avg_cost + runs[1].avg_cost + runs[2].avg_cost) / 3.0, 1e-12);
  EXPECT_GT(pooled.avg_cost_se, 0.0);
  EXPECT_THROW(pool(std::vector<SimStats>{}, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace aoi
