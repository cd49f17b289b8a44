#pragma once

// Reference computations that do not share code paths with the closed forms.

#include <vector>

#include "aoi/model.hpp"

namespace aoi::validation {

/// Stationary age pmf of the chain on (age, fresh, buffered) induced by the
/// threshold policy, built from the transition kernel with ages capped at
/// v_max and solved as a sparse linear system. Index 0 is age 1.
std::vector<double> truncated_chain_age_pmf(const SystemParams& params, int threshold, int v_max);

/// Sum of h_v (v + c p 1{v >= t}) over the stationary pmf, term by term,
/// until the tail terms vanish.
double series_average_cost(const SystemParams& params, int threshold);

/// h[t+i] for i = 0..count-1 by iterating the two-term recurrence from
/// h[t] and h[t+1] = (1-pq) h[t].
std::vector<double> forward_recursion_tail(const SystemParams& params, double h_threshold, int count);

}  // namespace aoi::validation
