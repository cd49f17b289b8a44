#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "aoi/mdp_solver.hpp"
#include "aoi/model.hpp"
#include "aoi/threshold.hpp"

namespace aoi {

/// Counter-based generator: the i-th draw is a SplitMix64 finalizer of
/// (key, i), so a run is fully determined by its seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct SimConfig {
  std::uint64_t horizon = 1'000'000;  // total slots, burn-in included
  std::uint64_t seed = 1;
  std::uint64_t burn_in = 10'000;
};

using SimPolicy = std::variant<ThresholdPolicy, TabularPolicy>;

struct SimStats {
  std::uint64_t seed = 0;
  std::uint64_t slots_counted = 0;
  std::uint64_t age_sum = 0;
  std::uint64_t stores = 0;
  double avg_cost = 0.0;
  double avg_age = 0.0;
  double storage_rate = 0.0;
  /// age_histogram[v] counts slots with age v; index 0 is unused.
  std::vector<std::uint64_t> age_histogram;
};

/// Slot-level simulation from age 1 with an empty buffer. Every slot draws
/// the arrival and then the delivery outcome, whether or not a transmission
/// happens. Per-slot cost is the current age plus c when storing.
/// Throws std::logic_error if a dynamics invariant is broken.
SimStats simulate(const SystemParams& params, const SimPolicy& policy, const SimConfig& config);

/// Histogram normalized to a pmf over ages 1..max (index 0 is age 1).
std::vector<double> empirical_age_distribution(const SimStats& stats);

struct PooledStats {
  SimStats total;          // merged counts; seed is 0
  double avg_cost_se = 0;  // standard error of the per-run avg_cost
};

PooledStats pool(std::span<const SimStats> runs, double storage_cost);

}  // namespace aoi
