#ifndef GUANDAN_ENGINE_H_
#define GUANDAN_ENGINE_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "guandan/cards.h"
#include "guandan/combos.h"

namespace guandan {

// Seats 0..3; play proceeds counterclockwise, seat s -> s + 1. Teammates
// sit opposite: seats 0 and 2 are team 0, seats 1 and 3 team 1.
constexpr int TeamOf(int seat) { return seat % 2; }
constexpr int NextSeat(int seat) { return (seat + 1) % kNumSeats; }
constexpr int PartnerOf(int seat) { return (seat + 2) % kNumSeats; }

enum class Phase : std::uint8_t { kTribute, kBackTribute, kPlay, kSettled };
enum class Role : std::uint8_t { kBanker, kFollower, kThird, kDweller };

std::string_view PhaseName(Phase p);
Phase PhaseFromName(std::string_view name);

// Out-of-turn and illegal actions. The state is unchanged when thrown.
class RuleError : public std::runtime_error {
 public:
  enum class Code { kOutOfTurn, kIllegalAction, kInvalidState };
  RuleError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct Transfer {
  int from = 0;
  int to = 0;
  int card = 0;
  friend bool operator==(const Transfer&, const Transfer&) = default;
};

struct HistoryEntry {
  int seat = 0;
  Phase phase = Phase::kPlay;
  Combination action;
};

// Broadcastable consequences of starting a round or applying an action.
struct Event {
  enum class Kind { kPlay, kAntiTribute, kTributeResult, kBackResult, kRoundOver };
  Kind kind = Kind::kPlay;
  // kPlay
  int seat = -1;
  Combination action;
  int greater_seat = -1;
  Combination greater_action;
  // kTributeResult / kBackResult
  std::vector<Transfer> transfers;
  // kAntiTribute
  std::vector<int> anti_seats;
  // kRoundOver: all four seats, Banker first.
  std::array<int, kNumSeats> order{};
};

// Counting from the revealer (who counts as 1) counterclockwise by the face
// value of the revealed card: 2..10, J=11, Q=12, K=13, A=1.
int FirstLeaderFromReveal(int revealer, Rank revealed);

// Cut-and-reveal: a random revealer turns up cards at random cut positions
// until a non-joker appears.
int DetermineFirstLeader(std::span<const int> deck_order, Rng& rng);

// Previous-round finishing information needed by the tribute phase.
using RoleMap = std::array<Role, kNumSeats>;

// Finishing order (Banker first) from a role map.
std::array<int, kNumSeats> OrderFromRoles(const RoleMap& roles);

// Tribute pairings for a round after `roles`, before cards are known:
// the paying seats, in the order they are asked to act.
std::vector<int> TributePayers(const RoleMap& roles);

// Routes chosen tribute cards to receivers. One payer pays the Banker. Two
// payers: the higher card goes to the Banker and the other to the
// Follower; on equal ranks the payer first reached counterclockwise from
// the Banker goes to the Banker. The first element's payer leads.
std::vector<Transfer> RouteTributes(const RoleMap& roles,
                                    std::span<const Transfer> paid,
                                    Level level);

class Round {
 public:
  // Deals `deal` at `level`. Without previous roles this is a first round
  // and the leader is found by cut-and-reveal using `rng`. Otherwise the
  // tribute phase opens, or is waived on anti-tribute with the Banker
  // leading.
  Round(Level level, const Deal& deal, const std::optional<RoleMap>& previous,
        Rng& rng);

  Level level() const { return level_; }
  Phase phase() const { return phase_; }
  bool IsOver() const { return phase_ == Phase::kSettled; }
  int current_seat() const { return current_; }
  const CardCounts& hand(int seat) const { return hands_[seat]; }
  int greater_seat() const { return greater_seat_; }
  const std::optional<Combination>& greater_action() const {
    return greater_action_;
  }
  int consecutive_passes() const { return passes_; }
  const std::vector<int>& finish_order() const { return finish_order_; }
  const std::vector<HistoryEntry>& history() const { return history_; }
  const std::vector<Transfer>& tribute_ledger() const { return ledger_; }
  const std::vector<Event>& opening_events() const { return opening_events_; }
  bool finished(int seat) const { return finished_[seat]; }

  // Back-tribute context for the current seat: who paid it and which card.
  std::optional<Transfer> PendingTributeFor(int seat) const;

  // Legal actions of the current seat. Tribute and back-tribute actions are
  // single-card combinations.
  std::vector<Combination> LegalActions() const;
  void LegalActionsInto(std::vector<Combination>& out) const;

  // Applies `action` for `seat`; throws RuleError without changing state.
  std::vector<Event> Apply(int seat, const Combination& action);

  // Finishing order of all four seats (Banker first); requires IsOver().
  std::array<int, kNumSeats> FullOrder() const;
  RoleMap Roles() const;

  // Empty when every structural invariant holds, otherwise a description.
  std::string CheckInvariants() const;
  std::uint64_t StateHash() const;

 private:
  void ApplyTribute(int seat, const Combination& action,
                    std::vector<Event>& events);
  void ApplyBack(int seat, const Combination& action,
                 std::vector<Event>& events);
  void ApplyPlay(int seat, const Combination& action,
                 std::vector<Event>& events);
  void BeginPlay(int leader);
  int NextActive(int seat) const;
  int ActiveCount() const;
  void FinishRound(std::vector<Event>& events);

  Level level_;
  Phase phase_ = Phase::kPlay;
  std::array<CardCounts, kNumSeats> hands_;
  std::array<bool, kNumSeats> finished_{};
  int current_ = 0;
  int greater_seat_ = -1;
  std::optional<Combination> greater_action_;
  int passes_ = 0;
  std::vector<int> finish_order_;
  std::array<int, kNumSeats> full_order_{};
  std::vector<HistoryEntry> history_;
  std::vector<Transfer> ledger_;
  std::vector<Event> opening_events_;

  // Tribute bookkeeping.
  std::optional<RoleMap> previous_;
  std::vector<int> pending_;          // seats still to act in this phase
  std::vector<Transfer> in_transit_;  // chosen but undelivered cards
  std::vector<Transfer> routed_;      // payer -> receiver, Banker first
};

struct MatchState {
  std::uint64_t seed = 0;
  std::array<Rank, 2> team_levels{Rank::kTwo, Rank::kTwo};
  Rank round_level = Rank::kTwo;
  std::array<int, 2> a_strikes{};
  std::optional<RoleMap> last_round_roles;
  int round_index = 0;
  bool terminated = false;
  std::optional<int> winning_team;
};

struct RoundResult {
  RoleMap roles{};
  std::array<int, kNumSeats> order{};
  Rank round_level = Rank::kTwo;
  int winning_team = 0;
  int level_delta = 0;
  std::array<int, kNumSeats> rewards{};
  bool match_over = false;
  std::array<Rank, 2> team_levels_after{};
};

MatchState StartMatch(std::uint64_t seed);

// Deals the next round of `match`. Throws RuleError(kInvalidState) once the
// match has terminated.
Round StartRound(const MatchState& match);

// Level delta (3/2/1) and rewards for a finishing order. Rewards are zero
// when played at level A with the Banker's partner finishing last.
RoundResult ScoreRound(const std::array<int, kNumSeats>& order,
                       Rank round_level);

// Scores `round`, advances levels, applies the level-A strike rule and
// decides termination. Throws RuleError(kInvalidState) if unfinished.
RoundResult SettleRound(const Round& round, MatchState& match);
// SettleRound for a known finishing order of all four seats.
RoundResult SettleOrder(const std::array<int, kNumSeats>& order,
                        MatchState& match);

// Chooses an index into `legal` for the current seat of `round`.
class Player {
 public:
  virtual ~Player() = default;
  virtual int SelectAction(const Round& round, const MatchState& match,
                           int seat, std::span<const Combination> legal) = 0;
};

struct RecordStep {
  int round_index = 0;
  int seat = 0;
  Phase phase = Phase::kPlay;
  Combination action;
  std::array<int, kNumSeats> hand_sizes{};
  std::uint64_t state_hash = 0;
};

struct MatchRecord {
  std::uint64_t seed = 0;
  std::vector<RecordStep> steps;
  std::vector<RoundResult> rounds;
  std::array<Rank, 2> final_levels{};
  int winning_team = -1;
};

// An agent picked an index outside its legal list.
class AgentFault : public std::runtime_error {
 public:
  AgentFault(int seat, const std::string& what)
      : std::runtime_error(what), seat_(seat) {}
  int seat() const { return seat_; }

 private:
  int seat_;
};

class ReplayMismatch : public std::runtime_error {
 public:
  ReplayMismatch(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct RunOptions {
  // Abort with std::runtime_error after this many applied actions.
  std::size_t max_steps = 1'000'000;
  // Run Round::CheckInvariants after every action.
  bool check_invariants = false;
};

// Plays a full match. `players[s]` acts for seat s.
MatchRecord RunMatch(std::span<Player* const, kNumSeats> players,
                     std::uint64_t seed, const RunOptions& options = {});

// Hooks for Replay; called with the state before each recorded action and
// after each settled round.
class ReplayObserver {
 public:
  virtual ~ReplayObserver() = default;
  virtual void BeforeStep(std::size_t /*index*/, const RecordStep& /*step*/,
                          const Round& /*round*/,
                          const MatchState& /*match*/) {}
  virtual void AfterRound(const Round& /*round*/, const RoundResult& /*result*/,
                          const MatchState& /*match*/) {}
};

// Re-executes `record` from its seed, checking seat, legality, hand sizes
// and state hash at every step and the round results. Throws ReplayMismatch
// naming the first divergent step.
MatchState Replay(const MatchRecord& record, ReplayObserver* observer = nullptr);

// Line-delimited JSON: a header line (format, version, seed), one line per
// step, one line per settled round, and a trailer with the final result.
void WriteRecord(const MatchRecord& record, std::ostream& os);
// Throws std::runtime_error on malformed input.
MatchRecord ReadRecord(std::istream& is);

}  // namespace guandan

#endif  // GUANDAN_ENGINE_H_
