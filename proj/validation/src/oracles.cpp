#include "aoi/validation/oracles.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aoi/closed_form.hpp"

namespace aoi::validation {

std::vector<double> truncated_chain_age_pmf(const SystemParams& params, int threshold,
                                            int v_max) {
  const auto states = enumerate_states(v_max);
  const auto n = static_cast<Eigen::Index>(states.size());

  // Solve pi (P - I) = 0 with the first balance equation replaced by sum(pi) = 1.
  // The matrix is assembled untransposed (row = source state) so that the
  // dense inflows into ages 1 and 2 and the normalization are dense columns,
  // which the column ordering moves out of the way; the solve runs on the
  // transposed factorization.
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(states.size() * 6);
  for (const auto& s : states) {
    const auto from = static_cast<Eigen::Index>(state_index(s));
    const Action a = (s.fresh && s.age >= threshold) ? Action::kStore : Action::kDrop;
    for (const auto& e : transition(params, s, a)) {
      State next = e.next;
      next.age = std::min(next.age, v_max);
      const auto to = static_cast<Eigen::Index>(state_index(next));
      if (to != 0) entries.emplace_back(from, to, e.prob);
    }
    if (from != 0) entries.emplace_back(from, from, -1.0);
    entries.emplace_back(from, 0, 1.0);
  }
  Eigen::SparseMatrix<double> system(n, n);
  system.setFromTriplets(entries.begin(), entries.end());
  system.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) throw std::runtime_error("chain factorization failed");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  const Eigen::VectorXd pi = lu.transpose().solve(rhs);
  if (lu.info() != Eigen::Success) throw std::runtime_error("chain solve failed");

  std::vector<double> pmf(static_cast<std::size_t>(v_max), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    pmf[static_cast<std::size_t>(state_at(static_cast<std::size_t>(i)).age - 1)] += pi(i);
  }
  return pmf;
}

double series_average_cost(const SystemParams& params, int threshold) {
  const auto dist = stationary_distribution(params, threshold);
  const double charge = params.c * params.p;
  double total = 0.0;
  for (int v = 1; v < threshold; ++v) total += v * dist.at(v);
  for (int v = threshold;; ++v) {
    const double h = dist.at(v);
    total += (v + charge) * h;
    if (v > threshold + 10 && (v + charge) * h < 1e-20 * total) break;
  }
  return total;
}

std::vector<double> forward_recursion_tail(const SystemParams& params, double h_threshold,
                                           int count) {
  const double decay = 1.0 - params.pq();
  const double coupling = (1.0 - params.p) * params.p * (1.0 - params.q) * params.q;
  std::vector<double> h;
  h.reserve(static_cast<std::size_t>(std::max(count, 2)));
  h.push_back(h_threshold);
  h.push_back(decay * h_threshold);
  while (static_cast<int>(h.size()) < count) {
    const std::size_t i = h.size();
    h.push_back(decay * h[i - 1] - coupling * h[i - 2]);
  }
  h.resize(static_cast<std::size_t>(std::max(count, 0)));
  return h;
}

}  // namespace aoi::validation
