#include "aoi/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aoi {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

void finalize(SimStats& stats, double storage_cost) {
  const double n = static_cast<double>(stats.slots_counted);
  stats.avg_age = static_cast<double>(stats.age_sum) / n;
  stats.storage_rate = static_cast<double>(stats.stores) / n;
  stats.avg_cost = stats.avg_age + storage_cost * stats.storage_rate;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed) : key_(mix64(seed ^ kGolden)) {}

std::uint64_t CounterRng::next() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

SimStats simulate(const SystemParams& params, const SimPolicy& policy, const SimConfig& config) {
  if (config.horizon <= config.burn_in) {
    throw std::invalid_argument("horizon must exceed burn_in");
  }
  const auto decide = [&](int age, bool fresh, bool buffered) {
    if (!fresh) return false;
    if (const auto* t = std::get_if<ThresholdPolicy>(&policy)) return t->stores(age, fresh);
    return std::get<TabularPolicy>(policy).at(State{age, fresh, buffered}) == Action::kStore;
  };

  CounterRng rng(config.seed);
  SimStats stats;
  stats.seed = config.seed;
  stats.age_histogram.assign(64, 0);

  int age = 1;
  bool buffered = false;
  for (std::uint64_t t = 0; t < config.horizon; ++t) {
    const bool fresh = rng.uniform() < params.p;
    const bool delivered = rng.uniform() < params.q;
    const bool store = decide(age, fresh, buffered);
    if (store && !fresh) throw std::logic_error("stored without a fresh arrival");

    if (t >= config.burn_in) {
      ++stats.slots_counted;
      stats.age_sum += static_cast<std::uint64_t>(age);
      stats.stores += store ? 1 : 0;
      if (static_cast<std::size_t>(age) >= stats.age_histogram.size()) {
        stats.age_histogram.resize(static_cast<std::size_t>(age) * 2, 0);
      }
      ++stats.age_histogram[static_cast<std::size_t>(age)];
    }

    int next_age = age + 1;
    if (fresh) {
      if (delivered) next_age = 1;
    } else if (buffered) {
      if (delivered) next_age = 2;
    }
    if (next_age != age + 1 && next_age != 1 && next_age != 2) {
      throw std::logic_error("age dropped to " + std::to_string(next_age));
    }
    age = next_age;
    // A stored packet lives for exactly the next slot.
    buffered = store;
  }

  while (stats.age_histogram.size() > 1 && stats.age_histogram.back() == 0) {
    stats.age_histogram.pop_back();
  }
  finalize(stats, params.c);
  return stats;
}

std::vector<double> empirical_age_distribution(const SimStats& stats) {
  if (stats.slots_counted == 0) throw std::invalid_argument("no counted slots");
  std::vector<double> pmf;
  if (stats.age_histogram.size() > 1) pmf.reserve(stats.age_histogram.size() - 1);
  const double n = static_cast<double>(stats.slots_counted);
  for (std::size_t v = 1; v < stats.age_histogram.size(); ++v) {
    pmf.push_back(static_cast<double>(stats.age_histogram[v]) / n);
  }
  return pmf;
}

PooledStats pool(std::span<const SimStats> runs, double storage_cost) {
  if (runs.empty()) throw std::invalid_argument("no runs to pool");
  PooledStats out;
  SimStats& total = out.total;
  for (const auto& run : runs) {
    total.slots_counted += run.slots_counted;
    total.age_sum += run.age_sum;
    total.stores += run.stores;
    if (run.age_histogram.size() > total.age_histogram.size()) {
      total.age_histogram.resize(run.age_histogram.size(), 0);
    }
    for (std::size_t v = 0; v < run.age_histogram.size(); ++v) {
      total.age_histogram[v] += run.age_histogram[v];
    }
  }
  finalize(total, storage_cost);
  if (runs.size() > 1) {
    double mean = 0.0;
    for (const auto& run : runs) mean += run.avg_cost;
    mean /= static_cast<double>(runs.size());
    double ss = 0.0;
    for (const auto& run : runs) ss += (run.avg_cost - mean) * (run.avg_cost - mean);
    const double k = static_cast<double>(runs.size());
    out.avg_cost_se = std::sqrt(ss / (k - 1.0) / k);
  }
  return out;
}

}  // namespace aoi
