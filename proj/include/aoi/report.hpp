#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aoi/model.hpp"
#include "aoi/simulator.hpp"
#include "aoi/threshold.hpp"
#include "aoi/threshold_optimizer.hpp"

namespace aoi {

inline constexpr const char* kToolVersion = "0.3.0";

/// One optimizer run as emitted by `aoi optimize`.
struct RunRecord {
  SystemParams params{};
  ThresholdPolicy v_star = ThresholdPolicy::never();
  double cost = 0.0;
  SearchMethod method = SearchMethod::kBracket;
  std::optional<Bracket> bracket;
  std::string timestamp;  // empty unless requested
  std::string tool_version = kToolVersion;

  static RunRecord from(const SystemParams& params, const OptimizeResult& result);

  friend bool operator==(const RunRecord& a, const RunRecord& b);
};

/// JSON with full double precision; parse_json(to_json(r)) == r.
std::string to_json(const RunRecord& record);
RunRecord parse_json(const std::string& text);

/// CSV header and row (12 significant digits).
std::string run_record_csv_header();
std::string to_csv_row(const RunRecord& record);

/// 12-significant-digit rendering used by every CSV writer.
std::string format_csv_number(double value);

/// `aoi simulate` output: one row per run plus a pooled row.
std::string simulation_csv(std::span<const SimStats> runs, double storage_cost);

struct SweepRow {
  double axis_value;
  ThresholdPolicy v_star;
  double cost;
};

std::string sweep_csv(std::span<const SweepRow> rows);

}  // namespace aoi
