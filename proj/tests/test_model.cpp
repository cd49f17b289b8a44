#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <tuple>

#include "aoi/model.hpp"

namespace aoi {
namespace {

const SystemParams kGrid[] = {
    {0.2, 0.2, 0.5}, {0.2, 0.8, 2.0}, {0.5, 0.5, 1.0}, {0.3, 0.7, 2.0}, {0.8, 0.2, 10.0}, {0.9, 0.95, 0.0},
};

std::vector<std::pair<State, Action>> legal_pairs(int v_max) {
  std::vector<std::pair<State, Action>> out;
  for (const auto& s : enumerate_states(v_max)) {
    out.emplace_back(s, Action::kDrop);
    if (s.fresh) out.emplace_back(s, Action::kStore);
  }
  return out;
}

double prob_of(const std::vector<TransitionEntry>& entries, const State& next) {
  for (const auto& e : entries) {
    if (e.next == next) return e.prob;
  }
  return 0.0;
}

TEST(SystemParams, AcceptsInteriorValues) {
  const auto params = SystemParams::make(0.3, 0.7, 0.0);
  EXPECT_DOUBLE_EQ(params.pq(), 0.21);
}

TEST(SystemParams, RejectsOutOfRange) {
  EXPECT_THROW(SystemParams::make(0.0, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(SystemParams::make(1.0, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(SystemParams::make(0.5, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(SystemParams::make(0.5, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(SystemParams::make(0.5, 0.5, -1e-9), std::invalid_argument);
  EXPECT_THROW(SystemParams::make(0.5, 0.5, std::nan("")), std::invalid_argument);
  EXPECT_THROW(SystemParams::make(0.5, 0.5, HUGE_VAL), std::invalid_argument);
}

TEST(Transition, StoreFromFreshState) {
  const auto params = SystemParams::make(0.3, 0.7, 2.0);
  const auto entries = transition(params, {5, true, false}, Action::kStore);
  EXPECT_NEAR(prob_of(entries, {1, true, true}), 0.21, 1e-15);
  EXPECT_NEAR(prob_of(entries, {1, false, true}), 0.49, 1e-15);
  EXPECT_NEAR(prob_of(entries, {6, true, true}), 0.09, 1e-15);
  EXPECT_NEAR(prob_of(entries, {6, false, true}), 0.21, 1e-15);
}

TEST(Transition, IdleStateAdvancesAgeSurely) {
  for (const auto& params : kGrid) {
    for (int v = 1; v <= 6; ++v) {
      const auto entries = transition(params, {v, false, false}, Action::kDrop);
      ASSERT_EQ(entries.size(), 2u);
      EXPECT_DOUBLE_EQ(prob_of(entries, {v + 1, true, false}), params.p);
      EXPECT_DOUBLE_EQ(prob_of(entries, {v + 1, false, false}), 1.0 - params.p);
    }
  }
}

TEST(Transition, BufferedPacketDeliversToAgeTwo) {
  const auto params = SystemParams::make(0.4, 0.6, 1.0);
  const auto entries = transition(params, {7, false, true}, Action::kDrop);
  EXPECT_NEAR(prob_of(entries, {2, true, false}), 0.6 * 0.4, 1e-15);
  EXPECT_NEAR(prob_of(entries, {8, false, false}), 0.4 * 0.6, 1e-15);
}

TEST(Transition, AgeOneDeliveryMergesOutcomes) {
  // At age 1 a delivered buffered packet and a failed slot both lead to age 2.
  const auto params = SystemParams::make(0.4, 0.6, 1.0);
  const auto entries = transition(params, {1, false, true}, Action::kDrop);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_NEAR(prob_of(entries, {2, true, false}), 0.4, 1e-15);
  EXPECT_NEAR(prob_of(entries, {2, false, false}), 0.6, 1e-15);
}

TEST(Transition, ProbabilitiesSumToOne) {
  for (const auto& params : kGrid) {
    for (const auto& [s, a] : legal_pairs(30)) {
      double total = 0.0;
      for (const auto& e : transition(params, s, a)) {
        EXPECT_GT(e.prob, 0.0);
        EXPECT_LE(e.prob, 1.0);
        total += e.prob;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(Transition, FreshStatesIgnoreBuffer) {
  for (const auto& params : kGrid) {
    for (int v = 1; v <= 20; ++v) {
      for (const auto a : {Action::kDrop, Action::kStore}) {
        const auto with = transition(params, {v, true, true}, a);
        const auto without = transition(params, {v, true, false}, a);
        ASSERT_EQ(with.size(), without.size());
        for (const auto& e : with) EXPECT_DOUBLE_EQ(prob_of(without, e.next), e.prob);
      }
    }
  }
}

TEST(Transition, NextFreshFlagIsBernoulliP) {
  for (const auto& params : kGrid) {
    for (const auto& [s, a] : legal_pairs(15)) {
      double fresh = 0.0;
      for (const auto& e : transition(params, s, a)) {
        if (e.next.fresh) fresh += e.prob;
      }
      EXPECT_NEAR(fresh, params.p, 1e-12);
    }
  }
}

TEST(Transition, NextBufferFlagIsTheAction) {
  const auto params = SystemParams::make(0.5, 0.5, 1.0);
  for (const auto& [s, a] : legal_pairs(10)) {
    for (const auto& e : transition(params, s, a)) EXPECT_EQ(e.next.buffered, a == Action::kStore);
  }
}

TEST(Transition, StoreWithoutFreshPacketIsRejected) {
  const auto params = SystemParams::make(0.5, 0.5, 1.0);
  EXPECT_THROW(transition(params, {3, false, false}, Action::kStore), std::invalid_argument);
  EXPECT_THROW(transition(params, {0, true, false}, Action::kDrop), std::invalid_argument);
  EXPECT_NO_THROW(check_action({3, true, false}, Action::kStore));
}

TEST(StageCost, StoreWithFreshPacket) {
  for (const double p : {0.1, 0.5, 0.9}) {
    const auto params = SystemParams::make(p, 0.7, 2.0);
    EXPECT_NEAR(stage_cost(params, {5, true, false}, Action::kStore), 4.5, 1e-12);
    EXPECT_NEAR(stage_cost(params, {5, true, true}, Action::kStore), 4.5, 1e-12);
  }
}

TEST(StageCost, IdleState) {
  for (const auto& params : kGrid) {
    for (int v = 1; v < 50; ++v) EXPECT_DOUBLE_EQ(stage_cost(params, {v, false, false}, Action::kDrop), v + 1.0);
  }
}

TEST(StageCost, BufferedPacket) {
  const auto params = SystemParams::make(0.3, 0.5, 0.0);
  EXPECT_NEAR(stage_cost(params, {4, false, true}, Action::kDrop), 3.5, 1e-12);
}

TEST(StageCost, StoringAddsExactlyC) {
  for (const auto& params : kGrid) {
    for (int v = 1; v <= 40; ++v) {
      for (const bool b : {false, true}) {
        const State s{v, true, b};
        EXPECT_NEAR(stage_cost(params, s, Action::kStore) - stage_cost(params, s, Action::kDrop), params.c,
                    1e-12);
      }
    }
  }
}

TEST(StageCost, MatchesExpectedNextAge) {
  for (const auto& params : kGrid) {
    for (const auto& [s, a] : legal_pairs(12)) {
      double expected = a == Action::kStore ? params.c : 0.0;
      for (const auto& e : transition(params, s, a)) expected += e.prob * e.next.age;
      EXPECT_NEAR(stage_cost(params, s, a), expected, 1e-12);
    }
  }
}

TEST(EnumerateStates, SmallestTruncation) {
  const auto states = enumerate_states(2);
  ASSERT_EQ(states.size(), 8u);
  EXPECT_EQ(states.front(), (State{1, false, false}));
  EXPECT_EQ(states.back(), (State{2, true, true}));
}

TEST(EnumerateStates, CountAndUniqueness) {
  const auto states = enumerate_states(100);
  EXPECT_EQ(states.size(), 400u);
  std::set<std::tuple<int, bool, bool>> seen;
  for (const auto& s : states) seen.emplace(s.age, s.fresh, s.buffered);
  EXPECT_EQ(seen.size(), states.size());
}

TEST(EnumerateStates, IndexRoundTrip) {
  const auto states = enumerate_states(50);
  for (std::size_t i = 0; i < states.size(); ++i) {
    EXPECT_EQ(state_index(states[i]), i);
    EXPECT_EQ(state_at(i), states[i]);
  }
}

TEST(EnumerateStates, RejectsTinyTruncation) {
  EXPECT_THROW(enumerate_states(1), std::invalid_argument);
  EXPECT_THROW(enumerate_states(0), std::invalid_argument);
}

}  // namespace
}  // namespace aoi
