#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "doctest.h"
#include "guandan/encode.h"
#include "test_util.h"

namespace guandan {
namespace {

using testing::Make;
using testing::RandomPlayer;
using testing::Single;

int Sum(const std::int8_t* p, int n) { return std::accumulate(p, p + n, 0); }

MatchRecord RandomMatch(std::uint64_t seed) {
  RandomPlayer a(seed), b(seed + 1), c(seed + 2), d(seed + 3);
  std::array<Player*, 4> players = {&a, &b, &c, &d};
  return RunMatch(players, seed);
}

// Checks the block structure of one observation; returns "" when valid.
std::string CheckObservation(const Observation& o, const Round& round,
                             const MatchState& match, int seat) {
  for (int i = 0; i < 5 * kNumCardKinds; ++i) {
    if (o[i] < 0 || o[i] > 2) return "card count out of range";
  }
  for (int b = 0; b < 4; ++b) {
    const std::int8_t* a = o.data() + obs::kLastAction + b * kActionDim;
    const int types = Sum(a + kNumCardKinds, kNumComboTypes);
    const int ranks = Sum(a + kNumCardKinds + kNumComboTypes, kNumRanks);
    const int cards = Sum(a, kNumCardKinds);
    if (!((types == 1 && ranks == 1 && cards > 0) ||
          (types == 0 && ranks == 0 && cards == 0))) {
      return "malformed action block";
    }
  }
  for (int b = 0; b < 3; ++b) {
    const std::int8_t* h = o.data() + obs::kLeftRemaining + b * kCountOneHot;
    if (Sum(h, kCountOneHot) != 1 || *std::min_element(h, h + kCountOneHot) < 0) {
      return "count block is not one-hot";
    }
  }
  for (int b = 0; b < 3; ++b) {
    const std::int8_t* h = o.data() + obs::kLevels + b * kNumNormalRanks;
    if (Sum(h, kNumNormalRanks) != 1) return "level block is not one-hot";
  }
  const int level = RankIndex(round.level().rank());
  if (o[obs::kLevels + 2 * kNumNormalRanks + level] != 1) return "wrong round level";
  if (o[obs::kLevels + RankIndex(match.team_levels[TeamOf(seat)])] != 1) {
    return "wrong own team level";
  }
  for (int r = 0; r < kNumNormalRanks; ++r) {
    const int w = o[obs::kWilds + r];
    if (r != level && w != 0) return "wild count outside the level slot";
    if (w < 0 || w > 2) return "wild count out of range";
  }
  if (o[obs::kWilds + level] != round.hand(seat)[WildCardId(round.level())]) {
    return "wrong wild count";
  }
  return "";
}

TEST_CASE("dimensions") {
  CHECK(kObservationDim == 5 * 54 + 4 * 79 + 3 * 28 + 39 + 13);
  CHECK(kActionDim == 79);
  CHECK(kTrajectoryRecordSize == 9 + 4 * (722 + 79 + 1));
}

TEST_CASE("action encoding") {
  ActionVector pass = EncodeAction(Combination::Pass());
  CHECK(std::all_of(pass.begin(), pass.end(), [](auto v) { return v == 0; }));

  ActionVector s2 = EncodeAction(Single("S2"));
  CHECK(Sum(s2.data(), kActionDim) == 3);
  CHECK(s2[CardIdFromCode("S2")] == 1);
  CHECK(s2[54 + static_cast<int>(ComboType::kSingle)] == 1);
  CHECK(s2[64 + RankIndex(Rank::kTwo)] == 1);

  ActionVector jb = EncodeAction(
      Make(ComboType::kJokerBomb, Rank::kRedJoker, {"SB", "SB", "HR", "HR"}));
  CHECK(jb[52] == 2);
  CHECK(jb[53] == 2);
  CHECK(jb[54 + static_cast<int>(ComboType::kJokerBomb)] == 1);
  CHECK(jb[64 + 14] == 1);
  CHECK(Sum(jb.data(), kActionDim) == 6);
}

TEST_CASE("observation at round start") {
  MatchState m = StartMatch(3);
  Round r = StartRound(m);
  for (int s = 0; s < kNumSeats; ++s) {
    Observation o = EncodeObservation(r, m, s);
    CHECK(CheckObservation(o, r, m, s) == "");
    CHECK(Sum(o.data() + obs::kHand, 54) == 27);
    CHECK(Sum(o.data() + obs::kUnseen, 54) == 81);
    CHECK(Sum(o.data() + obs::kPlayedLeft, 3 * 54) == 0);
    CHECK(Sum(o.data() + obs::kLastAction, 4 * 79) == 0);
    CHECK(o[obs::kLeftRemaining + 27] == 1);
    CHECK(o[obs::kLevels + 0] == 1);
    CHECK(o[obs::kLevels + 13] == 1);
    CHECK(o[obs::kLevels + 26] == 1);
  }
}

TEST_CASE("neighbour blocks follow seating") {
  Round r = testing::MakeRound({testing::Hand({"S3", "S9"}), testing::Hand({"S4", "S8"}),
                                testing::Hand({"S5", "S7"}), testing::Hand({"S6", "ST"})},
                               0);
  MatchState m = StartMatch(0);
  r.Apply(0, Single("S3"));
  r.Apply(1, Single("S4"));
  Observation o = EncodeObservation(r, m, 2);
  // Seat 1 played just before seat 2: left neighbour and latest action.
  CHECK(o[obs::kPlayedLeft + CardIdFromCode("S4")] == 1);
  CHECK(o[obs::kPlayedPartner + CardIdFromCode("S3")] == 1);
  CHECK(o[obs::kLastAction + CardIdFromCode("S4")] == 1);
  CHECK(o[obs::kLeftAction + CardIdFromCode("S4")] == 1);
  CHECK(o[obs::kPartnerAction + CardIdFromCode("S3")] == 1);
  CHECK(Sum(o.data() + obs::kRightAction, 79) == 0);
  CHECK(o[obs::kRightRemaining + 2] == 1);
  CHECK(o[obs::kLeftRemaining + 1] == 1);
  r.Apply(2, Combination::Pass());
  o = EncodeObservation(r, m, 3);
  CHECK(Sum(o.data() + obs::kLastAction, 79) == 0);
  CHECK(Sum(o.data() + obs::kLeftAction, 79) == 0);
}

class StateSampler : public ReplayObserver {
 public:
  void BeforeStep(std::size_t, const RecordStep& step, const Round& round,
                  const MatchState& match) override {
    for (int s = 0; s < kNumSeats; ++s) {
      Observation o = EncodeObservation(round, match, s);
      auto err = CheckObservation(o, round, match, s);
      if (!err.empty()) failures.push_back(err);
      // Partition: unseen equals what the other seats hold or have in
      // transit; everything else is in hands or played.
      for (int id = 0; id < kNumCardKinds; ++id) {
        int played_total = o[obs::kPlayedLeft + id] + o[obs::kPlayedPartner + id] +
                           o[obs::kPlayedRight + id];
        int others = 0;
        for (int t = 0; t < kNumSeats; ++t) {
          if (t != s) others += round.hand(t)[id];
        }
        if (round.phase() == Phase::kPlay && o[obs::kUnseen + id] != others) {
          failures.push_back("unseen differs from the other hands");
        }
        if (o[obs::kHand + id] + o[obs::kUnseen + id] + played_total > 2) {
          failures.push_back("partition overflow");
        }
      }
    }
    if (step.phase == Phase::kPlay) {
      auto legal = round.LegalActions();
      std::set<ActionVector> seen;
      for (const auto& a : legal) seen.insert(EncodeAction(a));
      if (seen.size() != legal.size()) failures.push_back("encoding collision");
    }
    ++states;
  }
  std::vector<std::string> failures;
  std::size_t states = 0;
};

TEST_CASE("observation invariants over sampled states") {
  StateSampler sampler;
  for (std::uint64_t seed = 100; seed < 104; ++seed) Replay(RandomMatch(seed), &sampler);
  CHECK(sampler.states > 500);
  CHECK(sampler.failures.empty());
  if (!sampler.failures.empty()) MESSAGE(sampler.failures.front());
}

TEST_CASE("hidden hands do not leak into observations") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    MatchState m = StartMatch(seed);
    Deal deal = ShuffleDeal(MixSeed(seed, 0));
    Rng first(MixSeed(seed, 1));
    Round real(Level(m.round_level), deal, std::nullopt, first);
    Rng pick(seed);
    std::vector<std::pair<int, Combination>> actions;
    const int steps = 8 + static_cast<int>(pick.Uniform(40));
    for (int i = 0; i < steps && !real.IsOver(); ++i) {
      auto legal = real.LegalActions();
      auto a = legal[pick.Uniform(legal.size())];
      actions.emplace_back(real.current_seat(), a);
      real.Apply(real.current_seat(), a);
    }
    if (real.IsOver()) continue;
    const int viewer = static_cast<int>(seed % kNumSeats);

    // Reshuffle the cards the opponents still conceal, keeping counts.
    std::vector<int> pool;
    for (int s = 0; s < kNumSeats; ++s) {
      if (s != viewer) {
        auto ids = real.hand(s).ToIds();
        pool.insert(pool.end(), ids.begin(), ids.end());
      }
    }
    ShuffleCards(pool, pick);
    Deal alt = deal;
    std::size_t next = 0;
    for (int s = 0; s < kNumSeats; ++s) {
      if (s == viewer) continue;
      CardCounts h;
      for (const auto& [seat, a] : actions) {
        if (seat == s) {
          for (int i = 0; i < a.size; ++i) h.Add(a.cards[i]);
        }
      }
      for (int k = 0; k < real.hand(s).Total(); ++k) h.Add(pool[next++]);
      alt.hands[s] = h;
    }
    Rng second(MixSeed(seed, 1));
    Round shadow(Level(m.round_level), alt, std::nullopt, second);
    for (const auto& [seat, a] : actions) shadow.Apply(seat, a);
    CHECK(EncodeObservation(shadow, m, viewer) == EncodeObservation(real, m, viewer));
  }
}

TEST_CASE("rewards mirror settlement") {
  std::array<int, 4> order = {0, 1, 2, 3};
  do {
    for (Rank level : {Rank::kTwo, Rank::kKing, Rank::kAce}) {
      RoundResult r = ScoreRound(order, level);
      CHECK(AssignRewards(r) == r.rewards);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(AssignRewards(ScoreRound({0, 2, 1, 3}, Rank::kFive)) ==
        std::array<int, 4>{3, -3, 3, -3});
  CHECK(AssignRewards(ScoreRound({1, 0, 2, 3}, Rank::kAce)) ==
        std::array<int, 4>{0, 0, 0, 0});
  CHECK(AssignRewards(ScoreRound({1, 0, 3, 2}, Rank::kNine)) ==
        std::array<int, 4>{-2, 2, -2, 2});
}

TEST_CASE("trajectory export") {
  MatchRecord record = RandomMatch(8);
  std::stringstream out;
  const std::size_t n = ExportTrajectories(record, out);
  CHECK(n == record.steps.size());
  const std::string bytes = out.str();

  std::stringstream again;
  ExportTrajectories(record, again);
  CHECK(again.str() == bytes);

  std::stringstream in(bytes);
  std::vector<TransitionRecord> transitions;
  TrajectoryHeader header = ReadTrajectories(in, &transitions);
  CHECK(header.records == n);
  CHECK(header.seed == record.seed);
  REQUIRE(transitions.size() == n);

  std::size_t round = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = transitions[i];
    CHECK(t.step == i);
    CHECK(t.seat == record.steps[i].seat);
    CHECK(t.actions[t.seat] == EncodeAction(record.steps[i].action));
    for (int s = 0; s < kNumSeats; ++s) {
      if (s != t.seat) CHECK(Sum(t.actions[s].data(), kActionDim) == 0);
    }
    if (t.terminal) {
      REQUIRE(round < record.rounds.size());
      CHECK(t.rewards == record.rounds[round].rewards);
      CHECK(std::accumulate(t.rewards.begin(), t.rewards.end(), 0) == 0);
      CHECK(t.terminal == (round + 1 == record.rounds.size() ? 2 : 1));
      ++round;
    } else {
      CHECK(t.rewards == std::array<int, 4>{});
    }
  }
  CHECK(round == record.rounds.size());
}

TEST_CASE("export rejects a corrupt record") {
  MatchRecord record = RandomMatch(9);
  record.steps[3].state_hash ^= 0xff;
  std::stringstream out;
  try {
    ExportTrajectories(record, out);
    FAIL("expected a mismatch");
  } catch (const ReplayMismatch& e) {
    CHECK(e.step() == 3);
  }
}

}  // namespace
}  // namespace guandan
