#ifndef GUANDAN_ENCODE_H_
#define GUANDAN_ENCODE_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "guandan/engine.h"

namespace guandan {

constexpr int kActionDim = kNumCardKinds + kNumComboTypes + kNumRanks;  // 79
constexpr int kCountOneHot = kHandSize + 1;                               // 28
constexpr int kLevelDim = 3 * kNumNormalRanks;                            // 39
constexpr int kObservationDim = 5 * kNumCardKinds + 4 * kActionDim +
                                3 * kCountOneHot + kLevelDim + kNumNormalRanks;
static_assert(kObservationDim == 722);

// Block offsets within an observation.
namespace obs {
constexpr int kHand = 0;
constexpr int kUnseen = kHand + kNumCardKinds;
constexpr int kPlayedLeft = kUnseen + kNumCardKinds;
constexpr int kPlayedPartner = kPlayedLeft + kNumCardKinds;
constexpr int kPlayedRight = kPlayedPartner + kNumCardKinds;
constexpr int kLastAction = kPlayedRight + kNumCardKinds;
constexpr int kLeftAction = kLastAction + kActionDim;
constexpr int kPartnerAction = kLeftAction + kActionDim;
constexpr int kRightAction = kPartnerAction + kActionDim;
constexpr int kLeftRemaining = kRightAction + kActionDim;
constexpr int kPartnerRemaining = kLeftRemaining + kCountOneHot;
constexpr int kRightRemaining = kPartnerRemaining + kCountOneHot;
constexpr int kLevels = kRightRemaining + kCountOneHot;
constexpr int kWilds = kLevels + kLevelDim;
static_assert(kWilds + kNumNormalRanks == kObservationDim);
}  // namespace obs

using Observation = std::array<std::int8_t, kObservationDim>;
using ActionVector = std::array<std::int8_t, kActionDim>;

// The seat that acted just before `seat` plays to its left; the next seat
// to act is on its right.
constexpr int LeftOf(int seat) { return (seat + 3) % kNumSeats; }
constexpr int RightOf(int seat) { return NextSeat(seat); }

// 54 card counts, then a one-hot over the ten combination types, then a
// one-hot over the 15 key ranks. Pass is all zeros.
ActionVector EncodeAction(const Combination& action);
void EncodeActionInto(const Combination& action, std::int8_t* out);

// Observation of `seat`: own hand, unseen cards, cards played this round by
// the left, partner and right seats, the latest action and each neighbour's
// latest action, their remaining counts, the three levels and the wild
// count. Only public history and the seat's own hand are read.
Observation EncodeObservation(const Round& round, const MatchState& match,
                              int seat);
void EncodeObservationInto(const Round& round, const MatchState& match,
                           int seat, std::int8_t* out);

std::array<int, kNumSeats> AssignRewards(const RoundResult& result);

// Trajectory stream: one JSON header line, then one fixed-size binary
// record per applied action. Record layout, all little-endian:
//   u32 step, u16 round, u8 phase, u8 acting seat, u8 terminal,
//   then per seat: 722 x i8 observation, 79 x i8 action (zero unless the
//   seat acted), i8 reward.
// terminal is 1 on the last action of a round and 2 on the last of the
// match; rewards are non-zero only on those records.
constexpr std::size_t kTrajectoryRecordSize =
    4 + 2 + 1 + 1 + 1 + kNumSeats * (kObservationDim + kActionDim + 1);

struct TransitionRecord {
  std::uint32_t step = 0;
  int round_index = 0;
  Phase phase = Phase::kPlay;
  int seat = 0;
  int terminal = 0;
  std::array<Observation, kNumSeats> observations{};
  std::array<ActionVector, kNumSeats> actions{};
  std::array<int, kNumSeats> rewards{};
};

// Replays `record` and writes its trajectory stream. Throws ReplayMismatch
// on a corrupt record. Returns the number of transitions written.
std::size_t ExportTrajectories(const MatchRecord& record, std::ostream& os);

struct TrajectoryHeader {
  int version = 0;
  std::uint64_t seed = 0;
  std::size_t records = 0;
};

// Reads a stream written by ExportTrajectories.
TrajectoryHeader ReadTrajectories(std::istream& is,
                                  std::vector<TransitionRecord>* out);

}  // namespace guandan

#endif  // GUANDAN_ENCODE_H_
