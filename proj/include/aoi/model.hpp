#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace aoi {

/// Problem instance: per-slot arrival probability p, per-slot delivery
/// probability q over the erasure channel, and the cost c paid per stored packet.
struct SystemParams {
  double p;
  double q;
  double c;

  /// Validates the ranges (0 < p < 1, 0 < q < 1, c >= 0, all finite).
  /// Throws std::invalid_argument naming the offending field.
  static SystemParams make(double p, double q, double c);

  double pq() const { return p * q; }
};

/// MDP state: instantaneous age, fresh-packet flag, buffer flag.
struct State {
  int age;
  bool fresh;
  bool buffered;

  friend bool operator==(const State&, const State&) = default;
};

enum class Action : std::uint8_t { kDrop = 0, kStore = 1 };

struct TransitionEntry {
  State next;
  double prob;
};

/// Throws std::invalid_argument if a is kStore while s.fresh is false, or
/// if s.age < 1.
void check_action(const State& s, Action a);

/// Untruncated transition kernel. At most four entries, zero-probability
/// outcomes omitted, coinciding outcomes merged.
std::vector<TransitionEntry> transition(const SystemParams& params, const State& s, Action a);

/// Storage charge plus expected next-slot age.
double stage_cost(const SystemParams& params, const State& s, Action a);

/// All states with 1 <= age <= v_max, ordered by age, then fresh, then buffered.
std::vector<State> enumerate_states(int v_max);

/// Position of s in enumerate_states(v_max); s.age must be in [1, v_max].
inline std::size_t state_index(const State& s) {
  return (static_cast<std::size_t>(s.age - 1) << 2) | (static_cast<std::size_t>(s.fresh) << 1) |
         static_cast<std::size_t>(s.buffered);
}

inline State state_at(std::size_t index) {
  return State{static_cast<int>(index >> 2) + 1, ((index >> 1) & 1U) != 0, (index & 1U) != 0};
}

}  // namespace aoi
