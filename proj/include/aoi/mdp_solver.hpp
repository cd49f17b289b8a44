#pragma once

#include <variant>
#include <vector>

#include "aoi/model.hpp"
#include "aoi/threshold.hpp"

namespace aoi {

enum class ValueKind { kDiscounted, kBias };

/// Value function on the age-truncated state space, indexed by state_index().
struct ValueTable {
  int v_max = 0;
  ValueKind kind = ValueKind::kBias;
  double alpha = 1.0;  // discount factor; 1 for bias tables
  std::vector<double> values;

  double at(const State& s) const { return values[state_index(s)]; }
  double& at(const State& s) { return values[state_index(s)]; }
};

struct TabularPolicy {
  int v_max = 0;
  std::vector<Action> actions;

  /// Ages beyond v_max use the action at v_max.
  Action at(const State& s) const;
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  // sup-norm (discounted) or span (bias) of the last update
  double gain = 0.0;      // average cost; bias solves only
  bool converged = false;
  bool monotone_iterates = true;  // discounted: every iterate >= the previous one
};

struct SolverOptions {
  int v_max = 2000;
  double tol = 1e-10;
  int max_iter = 1'000'000;
  /// Storing is allowed in states with a fresh packet and age >= min_store_age.
  /// The default restricts decisions to the threshold class (t >= 2); use 1
  /// for the unrestricted model.
  int min_store_age = 2;
};

struct DiscountedSolution {
  ValueTable values;
  SolveReport report;
};

struct AverageCostSolution {
  ValueTable bias;
  TabularPolicy policy;
  SolveReport report;
};

/// Value iteration from V = 0 with ages capped at v_max (an age at the cap
/// stays there until a delivery). Stops on sup-norm change < tol; the report
/// says whether that happened within max_iter.
DiscountedSolution discounted_value_iteration(const SystemParams& params, double alpha,
                                              const SolverOptions& options = {});

/// Relative value iteration anchored at state (1,1,1). Stops on span of the
/// update < tol. Gain is the Bellman update evaluated at the anchor.
AverageCostSolution relative_value_iteration(const SystemParams& params,
                                             const SolverOptions& options = {});

/// Argmin over legal actions; ties go to kDrop.
TabularPolicy greedy_policy(const SystemParams& params, const ValueTable& values,
                            int min_store_age = 2);

struct MonotonicityViolation {
  bool fresh;
  bool buffered;
  int age;  // V(age+1, fresh, buffered) < V(age, fresh, buffered) - tol
  double drop;
};

/// Adjacent-age comparisons for each (fresh, buffered); the cap age is excluded.
std::vector<MonotonicityViolation> check_monotone_in_age(const ValueTable& values,
                                                         double tol = 1e-10);

/// Ages v (1 <= v <= v_max-3) where
///   V(v+2,0,1) - V(v+2,0,0) > V(v+1,0,1) - V(v+1,0,0) + tol.
std::vector<int> check_switch_inequality(const ValueTable& values, double tol = 1e-9);

struct NotThreshold {
  int age;  // first age that breaks the switching structure
  friend bool operator==(const NotThreshold&, const NotThreshold&) = default;
};

using ThresholdExtraction = std::variant<ThresholdPolicy, NotThreshold>;

/// Least t such that the policy stores for every fresh state with age >= t
/// (both buffer flags) and for none below. A policy storing at age 1 is
/// reported as NotThreshold{1}.
ThresholdExtraction extract_threshold(const TabularPolicy& policy);

}  // namespace aoi
