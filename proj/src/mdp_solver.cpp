#include "aoi/mdp_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aoi {

Action TabularPolicy::at(const State& s) const {
  State capped = s;
  capped.age = std::min(s.age, v_max);
  return actions[state_index(capped)];
}

namespace {

struct Row {
  double cost = 0.0;
  int size = 0;
  std::array<int, 4> next{};
  std::array<double, 4> prob{};

  double value(const std::vector<double>& v, double beta) const {
    double acc = 0.0;
    for (int i = 0; i < size; ++i) acc += prob[i] * v[next[i]];
    return cost + beta * acc;
  }
};

// Truncated kernel: rows for kDrop on every state, kStore where legal.
struct CompiledMdp {
  int v_max;
  std::vector<Row> drop;
  std::vector<Row> store;
  std::vector<char> can_store;

  CompiledMdp(const SystemParams& params, int v_max_in, int min_store_age) : v_max(v_max_in) {
    const auto states = enumerate_states(v_max);
    drop.resize(states.size());
    store.resize(states.size());
    can_store.assign(states.size(), 0);
    for (std::size_t i = 0; i < states.size(); ++i) {
      const State& s = states[i];
      drop[i] = compile(params, s, Action::kDrop);
      if (s.fresh && s.age >= min_store_age) {
        store[i] = compile(params, s, Action::kStore);
        can_store[i] = 1;
      }
    }
  }

  Row compile(const SystemParams& params, const State& s, Action a) const {
    Row row;
    row.cost = stage_cost(params, s, a);
    for (const auto& e : transition(params, s, a)) {
      State next = e.next;
      next.age = std::min(next.age, v_max);
      const int idx = static_cast<int>(state_index(next));
      int slot = 0;
      while (slot < row.size && row.next[slot] != idx) ++slot;
      if (slot == row.size) {
        row.next[row.size] = idx;
        row.prob[row.size] = 0.0;
        ++row.size;
      }
      row.prob[slot] += e.prob;
    }
    return row;
  }

  // Returns the minimizing value; *stores set when kStore is strictly better.
  double bellman(std::size_t i, const std::vector<double>& v, double beta, bool* stores) const {
    const double keep = drop[i].value(v, beta);
    if (can_store[i]) {
      const double put = store[i].value(v, beta);
      if (put < keep) {
        if (stores) *stores = true;
        return put;
      }
    }
    if (stores) *stores = false;
    return keep;
  }
};

void check_options(const SolverOptions& options) {
  if (options.v_max < 2) {
    throw std::invalid_argument("v_max must be >= 2, got " + std::to_string(options.v_max));
  }
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (options.min_store_age < 1) throw std::invalid_argument("min_store_age must be >= 1");
}

TabularPolicy greedy_from(const CompiledMdp& mdp, const std::vector<double>& v, double beta) {
  TabularPolicy policy;
  policy.v_max = mdp.v_max;
  policy.actions.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool stores = false;
    mdp.bellman(i, v, beta, &stores);
    policy.actions[i] = stores ? Action::kStore : Action::kDrop;
  }
  return policy;
}

}  // namespace

DiscountedSolution discounted_value_iteration(const SystemParams& params, double alpha,
                                              const SolverOptions& options) {
  check_options(options);
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  const CompiledMdp mdp(params, options.v_max, options.min_store_age);
  const std::size_t n = mdp.drop.size();

  DiscountedSolution out;
  out.values = ValueTable{options.v_max, ValueKind::kDiscounted, alpha, std::vector<double>(n, 0.0)};
  std::vector<double>& v = out.values.values;
  std::vector<double> next(n);
  SolveReport& report = out.report;
  while (report.iterations < options.max_iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = mdp.bellman(i, v, alpha, nullptr);
      if (next[i] < v[i]) report.monotone_iterates = false;
      change = std::max(change, std::abs(next[i] - v[i]));
    }
    v.swap(next);
    ++report.iterations;
    report.residual = change;
    if (change < options.tol) {
      report.converged = true;
      break;
    }
  }
  return out;
}

AverageCostSolution relative_value_iteration(const SystemParams& params,
                                             const SolverOptions& options) {
  check_options(options);
  const CompiledMdp mdp(params, options.v_max, options.min_store_age);
  const std::size_t n = mdp.drop.size();
  const std::size_t anchor = state_index(State{1, true, true});

  std::vector<double> h(n, 0.0);
  std::vector<double> next(n);
  SolveReport report;
  while (report.iterations < options.max_iter) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = mdp.bellman(i, h, 1.0, nullptr);
      const double diff = next[i] - h[i];
      lo = std::min(lo, diff);
      hi = std::max(hi, diff);
    }
    report.gain = next[anchor];
    for (auto& x : next) x -= report.gain;
    h.swap(next);
    ++report.iterations;
    report.residual = hi - lo;
    if (report.residual < options.tol) {
      report.converged = true;
      break;
    }
  }

  AverageCostSolution out;
  out.policy = greedy_from(mdp, h, 1.0);
  out.bias = ValueTable{options.v_max, ValueKind::kBias, 1.0, std::move(h)};
  out.report = report;
  return out;
}

TabularPolicy greedy_policy(const SystemParams& params, const ValueTable& values,
                            int min_store_age) {
  const CompiledMdp mdp(params, values.v_max, min_store_age);
  const double beta = values.kind == ValueKind::kDiscounted ? values.alpha : 1.0;
  return greedy_from(mdp, values.values, beta);
}

std::vector<MonotonicityViolation> check_monotone_in_age(const ValueTable& values, double tol) {
  std::vector<MonotonicityViolation> out;
  for (const bool fresh : {false, true}) {
    for (const bool buffered : {false, true}) {
      for (int v = 1; v + 1 < values.v_max; ++v) {
        const double lower = values.at(State{v, fresh, buffered});
        const double upper = values.at(State{v + 1, fresh, buffered});
        if (upper < lower - tol) out.push_back({fresh, buffered, v, lower - upper});
      }
    }
  }
  return out;
}

std::vector<int> check_switch_inequality(const ValueTable& values, double tol) {
  const auto buffer_gain = [&](int age) {
    return values.at(State{age, false, true}) - values.at(State{age, false, false});
  };
  std::vector<int> out;
  for (int v = 1; v <= values.v_max - 3; ++v) {
    if (buffer_gain(v + 2) > buffer_gain(v + 1) + tol) out.push_back(v);
  }
  return out;
}

ThresholdExtraction extract_threshold(const TabularPolicy& policy) {
  const auto stores = [&](int age, bool buffered) {
    return policy.at(State{age, true, buffered}) == Action::kStore;
  };
  int first = 0;
  for (int v = 1; v <= policy.v_max && first == 0; ++v) {
    if (stores(v, false) || stores(v, true)) first = v;
  }
  if (first == 0) return ThresholdPolicy::never();
  if (first < 2) return NotThreshold{first};
  for (int v = first; v <= policy.v_max; ++v) {
    if (!stores(v, false) || !stores(v, true)) return NotThreshold{v};
  }
  return ThresholdPolicy::at(first);
}

}  // namespace aoi
