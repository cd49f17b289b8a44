#include "aoi/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace aoi {

using nlohmann::json;

RunRecord RunRecord::from(const SystemParams& params, const OptimizeResult& result) {
  RunRecord r;
  r.params = params;
  r.v_star = result.threshold;
  r.cost = result.cost;
  r.method = result.method;
  r.bracket = result.bracket;
  return r;
}

bool operator==(const RunRecord& a, const RunRecord& b) {
  const bool same_bracket =
      a.bracket.has_value() == b.bracket.has_value() &&
      (!a.bracket || (a.bracket->lower == b.bracket->lower && a.bracket->upper == b.bracket->upper));
  return a.params.p == b.params.p && a.params.q == b.params.q && a.params.c == b.params.c &&
         a.v_star == b.v_star && a.cost == b.cost && a.method == b.method && same_bracket &&
         a.timestamp == b.timestamp && a.tool_version == b.tool_version;
}

std::string to_json(const RunRecord& record) {
  json j;
  j["p"] = record.params.p;
  j["q"] = record.params.q;
  j["c"] = record.params.c;
  if (record.v_star.is_never()) {
    j["v_star"] = record.v_star.to_string();
  } else {
    j["v_star"] = record.v_star.value();
  }
  j["cost"] = record.cost;
  j["method"] = std::string(to_string(record.method));
  j["bracket"] = record.bracket ? json::array({record.bracket->lower, record.bracket->upper}) : json();
  j["timestamp"] = record.timestamp;
  j["tool_version"] = record.tool_version;
  return j.dump();
}

RunRecord parse_json(const std::string& text) {
  const json j = json::parse(text);
  RunRecord r;
  r.params = SystemParams::make(j.at("p").get<double>(), j.at("q").get<double>(),
                                j.at("c").get<double>());
  const auto& v_star = j.at("v_star");
  r.v_star = v_star.is_string() ? ThresholdPolicy::parse(v_star.get<std::string>())
                                : ThresholdPolicy::at(v_star.get<int>());
  r.cost = j.at("cost").get<double>();
  const auto method = j.at("method").get<std::string>();
  if (method == to_string(SearchMethod::kBracket)) {
    r.method = SearchMethod::kBracket;
  } else if (method == to_string(SearchMethod::kBruteForce)) {
    r.method = SearchMethod::kBruteForce;
  } else {
    throw std::invalid_argument("unknown method '" + method + "'");
  }
  const auto& bracket = j.at("bracket");
  if (!bracket.is_null()) r.bracket = Bracket{bracket.at(0).get<double>(), bracket.at(1).get<double>()};
  r.timestamp = j.at("timestamp").get<std::string>();
  r.tool_version = j.at("tool_version").get<std::string>();
  return r;
}

std::string format_csv_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string run_record_csv_header() {
  return "p,q,c,v_star,cost,method,bracket_lower,bracket_upper,timestamp,tool_version";
}

std::string to_csv_row(const RunRecord& r) {
  std::ostringstream out;
  out << format_csv_number(r.params.p) << ',' << format_csv_number(r.params.q) << ','
      << format_csv_number(r.params.c) << ',' << r.v_star.to_string() << ','
      << format_csv_number(r.cost) << ',' << to_string(r.method) << ',';
  if (r.bracket) {
    out << format_csv_number(r.bracket->lower) << ',' << format_csv_number(r.bracket->upper);
  } else {
    out << ',';
  }
  out << ',' << r.timestamp << ',' << r.tool_version;
  return out.str();
}

std::string simulation_csv(std::span<const SimStats> runs, double storage_cost) {
  std::ostringstream out;
  out << "seed,slots_counted,avg_cost,avg_age,storage_rate,avg_cost_se\n";
  for (const auto& run : runs) {
    out << run.seed << ',' << run.slots_counted << ',' << format_csv_number(run.avg_cost) << ','
        << format_csv_number(run.avg_age) << ',' << format_csv_number(run.storage_rate) << ",\n";
  }
  const auto pooled = pool(runs, storage_cost);
  out << "pooled," << pooled.total.slots_counted << ',' << format_csv_number(pooled.total.avg_cost)
      << ',' << format_csv_number(pooled.total.avg_age) << ','
      << format_csv_number(pooled.total.storage_rate) << ','
      << format_csv_number(pooled.avg_cost_se) << '\n';
  return out.str();
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "axis_value,v_star,cost\n";
  for (const auto& row : rows) {
    out << format_csv_number(row.axis_value) << ',' << row.v_star.to_string() << ','
        << format_csv_number(row.cost) << '\n';
  }
  return out.str();
}

}  // namespace aoi
