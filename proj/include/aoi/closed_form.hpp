#pragma once

#include <stdexcept>
#include <vector>

#include "aoi/model.hpp"
#include "aoi/threshold.hpp"

namespace aoi {

/// Raised when the characteristic quadratic of the above-threshold
/// recurrence has (numerically) coincident roots.
class NearDegenerateRoots : public std::runtime_error {
 public:
  explicit NearDegenerateRoots(double discriminant);
  double discriminant() const { return discriminant_; }

 private:
  double discriminant_;
};

inline constexpr double kMinDiscriminant = 1e-12;

/// Roots of x^2 - (1-pq)x + (1-p)p(1-q)q = 0, r1 < r2.
struct TailRoots {
  double r1;
  double r2;
  double discriminant;
};

TailRoots recurrence_roots(const SystemParams& params);

/// Stationary age distribution of the chain induced by a finite threshold.
///
/// Below the threshold the pmf decays geometrically with ratio 1-pq from h2;
/// from the threshold on it follows the two-root recurrence
///   h[t+i] = (1-pq) h[t+i-1] - (1-p)p(1-q)q h[t+i-2],   i >= 2,
/// with h[t+1] = (1-pq) h[t]. Age 1 always has mass pq.
class StationaryDist {
 public:
  int threshold() const { return threshold_; }
  double h1() const { return h1_; }
  double h2() const { return h2_; }
  const TailRoots& roots() const { return roots_; }
  /// Coefficients of h[t+i] = (w1 r1^i + w2 r2^i) h[t], valid for i >= 0.
  double tail_weight1() const { return w1_; }
  double tail_weight2() const { return w2_; }

  /// h_age for any age >= 1 (0 for age < 1).
  double at(int age) const;
  /// Mass at ages >= threshold, summed in closed form.
  double tail_mass() const;
  /// h_1..h_v_max (index 0 is age 1); not renormalized.
  std::vector<double> truncated_pmf(int v_max) const;

 private:
  friend StationaryDist stationary_distribution(const SystemParams&, int);
  StationaryDist() = default;

  int threshold_ = 2;
  double pq_ = 0.0;
  double log_decay_ = 0.0;  // ln(1-pq)
  double h1_ = 0.0;
  double h2_ = 0.0;
  double h_threshold_ = 0.0;
  double tail_factor_ = 0.0;  // 1 / (pq (1 + (1-p)(1-q)))
  TailRoots roots_{};
  double w1_ = 0.0;
  double w2_ = 0.0;
};

/// Throws std::invalid_argument for threshold < 2; propagates NearDegenerateRoots.
StationaryDist stationary_distribution(const SystemParams& params, int threshold);

/// Sum of h[t+i] over i >= 0 given h[t].
double tail_mass(const SystemParams& params, double h_threshold);

/// Constants of the original closed-form derivation, evaluated verbatim.
/// d and d2 are shared with CostDecomposition; d1, d3, d4, d5 belong to a
/// derivation whose age-1 mass and head normalization disagree with the
/// chain, so they are kept for reporting only.
struct CostConstants {
  double d;
  double d1;
  double d2;
  double d3;
  double d4;
  double d5;
};

CostConstants cost_constants(const SystemParams& params);

/// Coefficients of the threshold cost
///   f(t) = pq + h2(t) * (head + x (slope t + offset)),   x = (1-pq)^(t-2),
///   h2(t) = (1-pq) pq / (1 - shrink x),
/// equivalently f(t) = 1/(pq) + (1-pq) pq x (slope t + gap_offset) / (1 - shrink x).
struct CostDecomposition {
  double d;           // tail cost per unit h[t], beyond the age term
  double head;        // (1+pq)/(pq)^2
  double slope;       // (1/(1+(1-p)(1-q)) - 1)/pq, always negative
  double offset;      // d - (1-pq)/(pq)^2
  double shrink;      // 1 - 1/(1+(1-p)(1-q))
  double gap_offset;  // offset + shrink * head
  double log_decay;   // ln(1-pq)
};

CostDecomposition cost_decomposition(const SystemParams& params);

/// Long-run average of age plus storage cost. Storing happens in above-threshold
/// slots with a fresh arrival, so each such slot is charged c*p.
double average_cost(const SystemParams& params, const ThresholdPolicy& policy);

/// average_cost(policy) - average_cost(never). Accurate even when the
/// difference is far below the resolution of the cost itself.
double cost_gap(const SystemParams& params, int threshold);

/// Average cost of the never-store policy: the age is geometric, mean 1/(pq).
double never_store_cost(const SystemParams& params);

/// Threshold-2 cost through its own closed form (second route for f(2)).
double min_threshold_cost(const SystemParams& params);

/// Variant that charges c in every above-threshold slot instead of c*p.
/// Reported next to average_cost for comparison; not used for optimization.
double average_cost_slot_charge(const SystemParams& params, const ThresholdPolicy& policy);

}  // namespace aoi
