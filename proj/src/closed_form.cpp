#include "aoi/closed_form.hpp"

#include <cmath>
#include <string>

namespace aoi {

NearDegenerateRoots::NearDegenerateRoots(double discriminant)
    : std::runtime_error("near-degenerate recurrence roots, discriminant " +
                         std::to_string(discriminant)),
      discriminant_(discriminant) {}

namespace {

// 1 + (1-p)(1-q): the factor by which buffered deliveries stretch the tail.
double tail_stretch(const SystemParams& params) {
  return 1.0 + (1.0 - params.p) * (1.0 - params.q);
}

double coupling(const SystemParams& params) {
  return (1.0 - params.p) * params.p * (1.0 - params.q) * params.q;
}

}  // namespace

TailRoots recurrence_roots(const SystemParams& params) {
  const double sum = 1.0 - params.pq();
  const double product = coupling(params);
  const double disc = sum * sum - 4.0 * product;
  if (!(disc >= kMinDiscriminant)) throw NearDegenerateRoots(disc);
  const double r2 = 0.5 * (sum + std::sqrt(disc));
  // Smaller root through the product avoids cancellation.
  const double r1 = product / r2;
  return TailRoots{r1, r2, disc};
}

StationaryDist stationary_distribution(const SystemParams& params, int threshold) {
  if (threshold < 2) {
    throw std::invalid_argument("threshold must be >= 2, got " + std::to_string(threshold));
  }
  StationaryDist dist;
  dist.threshold_ = threshold;
  dist.roots_ = recurrence_roots(params);
  const double a = params.pq();
  const double decay = 1.0 - a;
  const double stretch = tail_stretch(params);
  dist.pq_ = a;
  dist.log_decay_ = std::log1p(-a);
  dist.tail_factor_ = 1.0 / (a * stretch);

  const double x = std::exp((threshold - 2) * dist.log_decay_);
  const double shrink = 1.0 - 1.0 / stretch;
  dist.h1_ = a;
  dist.h2_ = decay * a / (1.0 - shrink * x);
  dist.h_threshold_ = x * dist.h2_;

  const auto& r = dist.roots_;
  dist.w1_ = (r.r2 - decay) / (r.r2 - r.r1);
  dist.w2_ = (decay - r.r1) / (r.r2 - r.r1);
  return dist;
}

double StationaryDist::at(int age) const {
  if (age < 1) return 0.0;
  if (age == 1) return h1_;
  if (age <= threshold_) return std::exp((age - 2) * log_decay_) * h2_;
  const int i = age - threshold_;
  return h_threshold_ * (w1_ * std::pow(roots_.r1, i) + w2_ * std::pow(roots_.r2, i));
}

double StationaryDist::tail_mass() const { return h_threshold_ * tail_factor_; }

std::vector<double> StationaryDist::truncated_pmf(int v_max) const {
  std::vector<double> pmf;
  pmf.reserve(v_max > 0 ? static_cast<std::size_t>(v_max) : 0);
  for (int v = 1; v <= v_max; ++v) pmf.push_back(at(v));
  return pmf;
}

double tail_mass(const SystemParams& params, double h_threshold) {
  return h_threshold / (params.pq() * tail_stretch(params));
}

CostConstants cost_constants(const SystemParams& params) {
  const auto roots = recurrence_roots(params);
  const double p = params.p;
  const double q = params.q;
  const double c = params.c;
  const double a = params.pq();
  const double a2 = a * a;
  const double stretch = tail_stretch(params);
  const double r1 = roots.r1;
  const double r2 = roots.r2;

  CostConstants k{};
  k.d = c / (q * stretch) + (r2 - 1.0 + a) * r1 / ((r2 - r1) * (1.0 - r1) * (1.0 - r1)) +
        (1.0 - r1 - a) * r2 / ((r2 - r1) * (1.0 - r2) * (1.0 - r2));
  k.d1 = (a2 + a + 1.0) / a2;
  k.d2 = (1.0 / a) * (1.0 / stretch - 1.0);
  k.d3 = (k.d + k.d * (1.0 - p) * (1.0 - q)) / stretch - (1.0 - a + a2) / a2;
  k.d4 = (k.d1 * (2.0 - (a + 1.0) / (a * stretch)) + 2.0 / (a * stretch)) / k.d2 + 2.0;
  k.d5 = 2.0 - (1.0 / stretch) * ((a + 1.0) / a);
  return k;
}

CostDecomposition cost_decomposition(const SystemParams& params) {
  const double a = params.pq();
  const double a2 = a * a;
  const double stretch = tail_stretch(params);
  CostDecomposition k{};
  k.d = cost_constants(params).d;
  k.head = (1.0 + a) / a2;
  k.slope = (1.0 / stretch - 1.0) / a;
  k.offset = k.d - (1.0 - a) / a2;
  k.shrink = 1.0 - 1.0 / stretch;
  k.gap_offset = k.offset + k.shrink * k.head;
  k.log_decay = std::log1p(-a);
  return k;
}

double cost_gap(const SystemParams& params, int threshold) {
  if (threshold < 2) {
    throw std::invalid_argument("threshold must be >= 2, got " + std::to_string(threshold));
  }
  const auto k = cost_decomposition(params);
  const double a = params.pq();
  const double x = std::exp((threshold - 2) * k.log_decay);
  return (1.0 - a) * a * x * (k.slope * threshold + k.gap_offset) / (1.0 - k.shrink * x);
}

double never_store_cost(const SystemParams& params) { return 1.0 / params.pq(); }

double average_cost(const SystemParams& params, const ThresholdPolicy& policy) {
  if (policy.is_never()) return never_store_cost(params);
  return never_store_cost(params) + cost_gap(params, policy.value());
}

double min_threshold_cost(const SystemParams& params) {
  const double a = params.pq();
  const double stretch = tail_stretch(params);
  const double h2 = (1.0 - a) * a * stretch;
  return a + (cost_constants(params).d + 2.0 / (a * stretch)) * h2;
}

double average_cost_slot_charge(const SystemParams& params, const ThresholdPolicy& policy) {
  if (policy.is_never()) return never_store_cost(params);
  const auto dist = stationary_distribution(params, policy.value());
  return average_cost(params, policy) + params.c * (1.0 - params.p) * dist.tail_mass();
}

}  // namespace aoi
