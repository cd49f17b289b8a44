#include "aoi/threshold_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aoi/closed_form.hpp"

namespace aoi {

int Bracket::first() const { return static_cast<int>(std::floor(lower)) + 1; }

int Bracket::last() const { return static_cast<int>(std::ceil(upper)) - 1; }

std::string_view to_string(SearchMethod method) {
  switch (method) {
    case SearchMethod::kBracket:
      return "algorithm1";
    case SearchMethod::kBruteForce:
      return "brute_force";
  }
  return "unknown";
}

int max_resolvable_threshold(const SystemParams& params) {
  // exp(-746) is below the smallest subnormal double.
  const double limit = 2.0 + std::ceil(746.0 / -std::log1p(-params.pq()));
  return static_cast<int>(std::min(limit, static_cast<double>(std::numeric_limits<int>::max() / 2)));
}

Bracket candidate_bracket(const SystemParams& params) {
  // Stationary points of the cost satisfy
  //   (1-pq)^(t-2) = (L / shrink) (t + 1/L + gap_offset/slope),  L = ln(1-pq),
  // and the left side lies in (0, 1] for t >= 2.
  const auto k = cost_decomposition(params);
  const double shift = k.gap_offset / k.slope;
  const double lo = (k.shrink - 1.0) / k.log_decay - shift;
  const double hi = -1.0 / k.log_decay - shift;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DegenerateBracket("bracket endpoints are not finite");
  }
  return Bracket{std::max(2.0, lo), std::max(2.0, hi)};
}

namespace {

class Scan {
 public:
  explicit Scan(const SystemParams& params) : params_(params) {}

  void consider(int threshold) {
    ++evaluated_;
    const double gap = cost_gap(params_, threshold);
    if (!best_ || gap < best_gap_ || (gap == best_gap_ && threshold < *best_)) {
      best_ = threshold;
      best_gap_ = gap;
    }
  }

  OptimizeResult finish(SearchMethod method, std::optional<Bracket> bracket) const {
    ++evaluated_;  // never-store
    const double never = never_store_cost(params_);
    const double cost = best_ ? never + best_gap_ : never;
    if (!best_ || !(cost < never)) {
      return OptimizeResult{ThresholdPolicy::never(), never, bracket, evaluated_, method};
    }
    return OptimizeResult{ThresholdPolicy::at(*best_), cost, bracket, evaluated_, method};
  }

 private:
  const SystemParams& params_;
  std::optional<int> best_;
  double best_gap_ = 0.0;
  mutable int evaluated_ = 0;
};

}  // namespace

OptimizeResult find_optimal_threshold(const SystemParams& params) {
  Bracket bracket{};
  try {
    bracket = candidate_bracket(params);
  } catch (const DegenerateBracket&) {
    return brute_force_threshold(params);
  }
  Scan scan(params);
  scan.consider(2);
  const double cap = max_resolvable_threshold(params);
  const int from = static_cast<int>(std::max(3.0, std::floor(std::min(bracket.lower, cap))));
  const int to = static_cast<int>(std::min(std::ceil(bracket.upper), cap));
  for (int t = from; t <= to; ++t) scan.consider(t);
  return scan.finish(SearchMethod::kBracket, bracket);
}

OptimizeResult brute_force_threshold(const SystemParams& params, int v_search) {
  if (v_search < 2) {
    throw std::invalid_argument("v_search must be >= 2, got " + std::to_string(v_search));
  }
  Scan scan(params);
  for (int t = 2; t <= v_search; ++t) scan.consider(t);
  return scan.finish(SearchMethod::kBruteForce, std::nullopt);
}

}  // namespace aoi
