#pragma once

#include <optional>
#include <string>

namespace aoi {

/// Switching policy: store a fresh packet iff its age is at least the
/// threshold. The never-store policy is a first-class value.
class ThresholdPolicy {
 public:
  /// Throws std::invalid_argument for thresholds below 2.
  static ThresholdPolicy at(int threshold);
  static ThresholdPolicy never() { return ThresholdPolicy{}; }

  bool is_never() const { return !threshold_.has_value(); }
  /// Precondition: !is_never().
  int value() const { return *threshold_; }

  bool stores(int age, bool fresh) const { return fresh && threshold_ && age >= *threshold_; }

  /// "inf" for the never-store policy, the decimal threshold otherwise.
  std::string to_string() const;
  /// Inverse of to_string(); throws std::invalid_argument.
  static ThresholdPolicy parse(const std::string& text);

  friend bool operator==(const ThresholdPolicy&, const ThresholdPolicy&) = default;

 private:
  ThresholdPolicy() = default;
  std::optional<int> threshold_;
};

}  // namespace aoi
