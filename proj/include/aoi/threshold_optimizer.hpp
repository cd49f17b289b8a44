#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>

#include "aoi/model.hpp"
#include "aoi/threshold.hpp"

namespace aoi {

class DegenerateBracket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Necessary condition for a stationary point of the real-valued threshold
/// cost: lower < t < upper. Both ends are already clamped below by 2.
struct Bracket {
  double lower;
  double upper;

  /// Integers strictly inside (lower, upper); first > last when empty.
  int first() const;
  int last() const;
  bool empty() const { return first() > last(); }
};

/// Throws DegenerateBracket if the bracket ends are not finite.
Bracket candidate_bracket(const SystemParams& params);

enum class SearchMethod { kBracket, kBruteForce };
std::string_view to_string(SearchMethod method);

struct OptimizeResult {
  ThresholdPolicy threshold;
  double cost;
  std::optional<Bracket> bracket;
  int candidates_evaluated;
  SearchMethod method;
};

/// Evaluates the cost at t = 2, at every integer within one of the bracket
/// (an integer minimum sits within one of a stationary point), and at the
/// never-store policy. Ties go to the smaller threshold. The never-store
/// policy is returned when no finite candidate is strictly cheaper in double
/// precision. Falls back to brute_force_threshold on DegenerateBracket.
OptimizeResult find_optimal_threshold(const SystemParams& params);

inline constexpr int kDefaultSearchLimit = 500;

/// Exhaustive scan over t in [2, v_search] plus never-store, same tie rules.
OptimizeResult brute_force_threshold(const SystemParams& params,
                                     int v_search = kDefaultSearchLimit);

/// Largest threshold whose cost differs from never-store in double range;
/// beyond it (1-pq)^(t-2) underflows and the policies are identical.
int max_resolvable_threshold(const SystemParams& params);

}  // namespace aoi
