#include "aoi/threshold.hpp"

#include <charconv>
#include <stdexcept>

namespace aoi {

ThresholdPolicy ThresholdPolicy::at(int threshold) {
  if (threshold < 2) {
    throw std::invalid_argument("threshold must be >= 2, got " + std::to_string(threshold));
  }
  ThresholdPolicy policy;
  policy.threshold_ = threshold;
  return policy;
}

std::string ThresholdPolicy::to_string() const {
  return threshold_ ? std::to_string(*threshold_) : std::string("inf");
}

ThresholdPolicy ThresholdPolicy::parse(const std::string& text) {
  if (text == "inf" || text == "never") return never();
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("threshold must be an integer >= 2 or 'inf', got '" + text + "'");
  }
  return at(value);
}

}  // namespace aoi
