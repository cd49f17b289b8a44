#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aoi::validation {

struct CheckResult {
  std::string id;
  std::string title;
  bool passed = false;
  /// Informational lines are reported but never affect the verdict.
  bool informational = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Reduced grids and shorter simulations.
  bool quick = false;
  /// Progress messages, if non-null.
  std::ostream* log = nullptr;
  /// Check ids to run ("1", "2a", ..., "8"); empty runs all.
  std::vector<std::string> only;
};

CheckResult check_stationary_vs_chain(const AcceptanceOptions& options);
CheckResult check_cost_series(const AcceptanceOptions& options);
CheckResult check_cost_at_two(const AcceptanceOptions& options);
CheckResult check_cost_limit(const AcceptanceOptions& options);
CheckResult check_optimizer_agreement(const AcceptanceOptions& options);
/// Returns the verdict line followed by one informational line about the
/// unrestricted action set.
std::vector<CheckResult> check_mdp_structure(const AcceptanceOptions& options);
CheckResult check_simulation(const AcceptanceOptions& options);
CheckResult check_sweep_monotone(const AcceptanceOptions& options);
CheckResult check_degenerate_costs(const AcceptanceOptions& options);
CheckResult check_simulation_determinism(const AcceptanceOptions& options);

/// The checks selected by options.only, in order.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options);

/// "[PASS] id title: detail (1.23 s)"; informational lines use "[INFO]".
std::string format_check(const CheckResult& result);

/// Every id accepted by AcceptanceOptions::only.
std::vector<std::string> check_ids();

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace aoi::validation
