#ifndef GUANDAN_HARNESS_H_
#define GUANDAN_HARNESS_H_

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "guandan/engine.h"

namespace guandan {

// Runs job(i) for i in [0, count) on `workers` threads. Jobs must not share
// state; callers store results by index.
void ParallelFor(std::size_t count, int workers, const std::function<void(std::size_t)>& job);

// Per-match seed used by every batch runner.
std::uint64_t MatchSeed(std::uint64_t master, std::size_t index);

struct EvalOptions {
  std::string team_a;
  std::string team_b;
  int matches = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  // Also play every deal with the teams' seats swapped.
  bool mirrored = false;
};

struct EvalRow {
  std::string team_a;
  std::string team_b;
  bool mirrored = false;  // team_a on seats 1 and 3
  int matches = 0;
  int wins = 0;  // matches won by team_a
  std::int64_t rounds = 0;
  // Rounds by team_a's reward: index 0..6 is -3..+3.
  std::array<std::int64_t, 7> by_reward{};

  std::int64_t RoundsWithReward(int reward) const { return by_reward[reward + 3]; }
  double Percent(int reward) const;
  double WinRate() const;
};

struct EvalReport {
  std::uint64_t seed = 0;
  std::vector<EvalRow> rows;
};

// Throws std::invalid_argument for unknown agent names or matches < 1.
EvalReport Evaluate(const EvalOptions& options);
void WriteEvalTable(const EvalReport& report, std::ostream& os);
void WriteEvalCsv(const EvalReport& report, std::ostream& os);

struct ThroughputRow {
  int envs = 0;
  std::int64_t steps = 0;
  // Applied actions recounted from engine histories; equals `steps`.
  std::int64_t history_steps = 0;
  double seconds = 0;
  double StepsPerHour() const { return seconds > 0 ? steps * 3600.0 / seconds : 0; }
};

struct ThroughputReport {
  std::string machine;
  std::vector<ThroughputRow> rows;  // ascending env count
};

// One thread per environment, each stepping random-agent matches for
// `duration`. Throws std::invalid_argument on a non-positive duration or
// env count.
ThroughputReport Bench(std::vector<int> env_counts, std::chrono::duration<double> duration,
                       std::uint64_t seed);
void WriteThroughputTable(const ThroughputReport& report, std::ostream& os);
void WriteThroughputCsv(const ThroughputReport& report, std::ostream& os);
std::string MachineDescriptor();

struct TimingRow {
  std::string agent;
  std::int64_t selections = 0;
  double seconds = 0;  // inside the agent callback only
  double PerSecond() const { return seconds > 0 ? selections / seconds : 0; }
};

struct TimingReport {
  std::vector<TimingRow> rows;
};

// Each agent plays `matches` matches on all four seats.
TimingReport TimeAgents(const std::vector<std::string>& agents, int matches,
                        std::uint64_t seed);
void WriteTimingTable(const TimingReport& report, std::ostream& os);
void WriteTimingCsv(const TimingReport& report, std::ostream& os);

struct ReplaySummary {
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::vector<RoundResult> rounds;
  std::array<Rank, 2> final_levels{};
  int winning_team = -1;
};

// Reads and re-executes a record file. Throws std::runtime_error on a
// malformed file and ReplayMismatch on divergence.
ReplaySummary ReplayFile(const std::filesystem::path& path);
void WriteReplaySummary(const ReplaySummary& summary, std::ostream& os);

struct SelfPlayOptions {
  std::array<std::string, kNumSeats> agents{"random", "random", "random", "random"};
  int matches = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  std::filesystem::path out;
  bool trajectories = false;  // also write match_N.traj next to each log
};

struct SelfPlayResult {
  std::vector<std::filesystem::path> logs;
  std::int64_t steps = 0;
  std::int64_t rounds = 0;
};

// Writes one record file per match, named match_000000.jsonl onwards.
SelfPlayResult SelfPlay(const SelfPlayOptions& options);

// Plays one match with agents by name, seeded from `seed`.
MatchRecord PlayMatch(const std::array<std::string, kNumSeats>& agents, std::uint64_t seed,
                      const RunOptions& options = {});

}  // namespace guandan

#endif  // GUANDAN_HARNESS_H_
