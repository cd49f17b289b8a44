#include "aoi/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aoi {

SystemParams SystemParams::make(double p, double q, double c) {
  if (!(std::isfinite(p) && p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("p must be in (0,1)");
  }
  if (!(std::isfinite(q) && q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("q must be in (0,1)");
  }
  if (!(std::isfinite(c) && c >= 0.0)) {
    throw std::invalid_argument("c must be finite and >= 0");
  }
  return SystemParams{p, q, c};
}

void check_action(const State& s, Action a) {
  if (s.age < 1) {
    throw std::invalid_argument("state age must be >= 1, got " + std::to_string(s.age));
  }
  if (a == Action::kStore && !s.fresh) {
    throw std::invalid_argument("store action requires a fresh packet");
  }
}

namespace {

void push_merged(std::vector<TransitionEntry>& out, const State& next, double prob) {
  if (prob <= 0.0) return;
  for (auto& e : out) {
    if (e.next == next) {
      e.prob += prob;
      return;
    }
  }
  out.push_back({next, prob});
}

}  // namespace

std::vector<TransitionEntry> transition(const SystemParams& params, const State& s, Action a) {
  check_action(s, a);
  std::vector<TransitionEntry> out;
  out.reserve(4);
  const bool stored = a == Action::kStore;
  const double p = params.p;
  const double q = params.q;
  for (const bool next_fresh : {true, false}) {
    const double pf = next_fresh ? p : 1.0 - p;
    if (s.fresh) {
      push_merged(out, State{1, next_fresh, stored}, q * pf);
      push_merged(out, State{s.age + 1, next_fresh, stored}, (1.0 - q) * pf);
    } else if (s.buffered) {
      push_merged(out, State{2, next_fresh, false}, q * pf);
      push_merged(out, State{s.age + 1, next_fresh, false}, (1.0 - q) * pf);
    } else {
      push_merged(out, State{s.age + 1, next_fresh, false}, pf);
    }
  }
  return out;
}

double stage_cost(const SystemParams& params, const State& s, Action a) {
  check_action(s, a);
  const double v = s.age;
  double next_age = v + 1.0;
  if (s.fresh) {
    next_age = params.q * 1.0 + (1.0 - params.q) * (v + 1.0);
  } else if (s.buffered) {
    next_age = params.q * 2.0 + (1.0 - params.q) * (v + 1.0);
  }
  return (a == Action::kStore ? params.c : 0.0) + next_age;
}

std::vector<State> enumerate_states(int v_max) {
  if (v_max < 2) {
    throw std::invalid_argument("v_max must be >= 2, got " + std::to_string(v_max));
  }
  std::vector<State> states;
  states.reserve(static_cast<std::size_t>(v_max) * 4);
  for (int v = 1; v <= v_max; ++v) {
    for (const bool fresh : {false, true}) {
      for (const bool buffered : {false, true}) {
        states.push_back(State{v, fresh, buffered});
      }
    }
  }
  return states;
}

}  // namespace aoi
