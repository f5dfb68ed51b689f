#include "guandan/harness.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "guandan/agents.h"
#include "guandan/encode.h"

namespace guandan {
namespace {

constexpr std::string_view kStepNote =
    "step = one applied agent action (play, tribute or back-tribute)";

std::uint64_t AgentSeed(std::uint64_t match_seed, int seat) {
  return MixSeed(match_seed, 0x100 + static_cast<std::uint64_t>(seat));
}

using Clock = std::chrono::steady_clock;

// Uniform choice among legal actions without building an act request.
class UniformPlayer : public Player {
 public:
  explicit UniformPlayer(std::uint64_t seed) : rng_(seed) {}
  int SelectAction(const Round&, const MatchState&, int,
                   std::span<const Combination> legal) override {
    return static_cast<int>(rng_.Uniform(legal.size()));
  }

 private:
  Rng rng_;
};

class TimedPlayer : public Player {
 public:
  explicit TimedPlayer(Agent& agent) : agent_(agent) {}
  int SelectAction(const Round& round, const MatchState& match, int seat,
                   std::span<const Combination> legal) override {
    const ActRequest request = BuildActRequest(round, match, seat, legal);
    const auto start = Clock::now();
    const int index = agent_.OnActRequest(request);
    elapsed_ += Clock::now() - start;
    ++selections_;
    return index;
  }

  std::int64_t selections() const { return selections_; }
  double seconds() const { return std::chrono::duration<double>(elapsed_).count(); }

 private:
  Agent& agent_;
  Clock::duration elapsed_{};
  std::int64_t selections_ = 0;
};

void CheckAgent(const std::string& name) {
  for (const auto& n : AgentNames()) {
    if (n == name) return;
  }
  throw std::invalid_argument("unknown agent: " + name);
}

std::string Percent(double v) { return fmt::format("{:.1f}", v); }

}  // namespace

void ParallelFor(std::size_t count, int workers,
                 const std::function<void(std::size_t)>& job) {
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (n == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < n; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t MatchSeed(std::uint64_t master, std::size_t index) {
  return MixSeed(master, index);
}

MatchRecord PlayMatch(const std::array<std::string, kNumSeats>& agents, std::uint64_t seed,
                      const RunOptions& options) {
  std::array<std::unique_ptr<Agent>, kNumSeats> owned;
  std::array<std::unique_ptr<AgentPlayer>, kNumSeats> players;
  std::array<Player*, kNumSeats> ptrs{};
  for (int s = 0; s < kNumSeats; ++s) {
    owned[s] = MakeAgent(agents[s], AgentSeed(seed, s));
    players[s] = std::make_unique<AgentPlayer>(*owned[s]);
    ptrs[s] = players[s].get();
  }
  return RunMatch(ptrs, seed, options);
}

double EvalRow::Percent(int reward) const {
  return rounds ? 100.0 * RoundsWithReward(reward) / rounds : 0;
}

double EvalRow::WinRate() const { return matches ? 100.0 * wins / matches : 0; }

EvalReport Evaluate(const EvalOptions& options) {
  CheckAgent(options.team_a);
  CheckAgent(options.team_b);
  if (options.matches < 1) throw std::invalid_argument("matches must be at least 1");

  EvalReport report;
  report.seed = options.seed;
  for (bool mirrored : {false, true}) {
    if (mirrored && !options.mirrored) break;
    const int a_team = mirrored ? 1 : 0;
    std::array<std::string, kNumSeats> seats;
    for (int s = 0; s < kNumSeats; ++s) {
      seats[s] = TeamOf(s) == a_team ? options.team_a : options.team_b;
    }

    struct Outcome {
      bool won = false;
      std::array<std::int64_t, 7> by_reward{};
    };
    std::vector<Outcome> outcomes(options.matches);
    ParallelFor(outcomes.size(), options.workers, [&](std::size_t i) {
      const MatchRecord record = PlayMatch(seats, MatchSeed(options.seed, i));
      Outcome& o = outcomes[i];
      o.won = record.winning_team == a_team;
      for (const auto& r : record.rounds) ++o.by_reward[r.rewards[a_team] + 3];
    });

    EvalRow row;
    row.team_a = options.team_a;
    row.team_b = options.team_b;
    row.mirrored = mirrored;
    row.matches = options.matches;
    for (const auto& o : outcomes) {
      row.wins += o.won;
      for (int k = 0; k < 7; ++k) {
        row.by_reward[k] += o.by_reward[k];
        row.rounds += o.by_reward[k];
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

void WriteEvalTable(const EvalReport& report, std::ostream& os) {
  fmt::print(os, "seed {}; tiers are % of rounds by the first team's reward\n", report.seed);
  fmt::print(os, "{:<8} {:<8} {:<6} {:>7} {:>7} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>8}\n",
             "team A", "team B", "seats", "matches", "rounds", "3", "2", "1", "0", "-1", "-2",
             "-3", "win %");
  for (const auto& r : report.rows) {
    fmt::print(os, "{:<8} {:<8} {:<6} {:>7} {:>7}", r.team_a, r.team_b,
               r.mirrored ? "1,3" : "0,2", r.matches, r.rounds);
    for (int reward = 3; reward >= -3; --reward) fmt::print(os, " {:>6}", Percent(r.Percent(reward)));
    fmt::print(os, " {:>8}\n", Percent(r.WinRate()));
  }
}

void WriteEvalCsv(const EvalReport& report, std::ostream& os) {
  os << "team_a,team_b,seats,matches,rounds,pct_3,pct_2,pct_1,pct_0,pct_m1,pct_m2,pct_m3,"
        "win_rate\n";
  for (const auto& r : report.rows) {
    fmt::print(os, "{},{},{},{},{}", r.team_a, r.team_b, r.mirrored ? "1;3" : "0;2",
               r.matches, r.rounds);
    for (int reward = 3; reward >= -3; --reward) fmt::print(os, ",{:.4f}", r.Percent(reward));
    fmt::print(os, ",{:.4f}\n", r.WinRate());
  }
}

std::string MachineDescriptor() {
  std::string model = "unknown cpu";
  std::ifstream cpuinfo("/proc/cpuinfo");
  for (std::string line; std::getline(cpuinfo, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) model = line.substr(colon + 2);
      break;
    }
  }
  return fmt::format("{}; {} hardware threads", model, std::thread::hardware_concurrency());
}

ThroughputReport Bench(std::vector<int> env_counts, std::chrono::duration<double> duration,
                       std::uint64_t seed) {
  if (duration.count() <= 0) throw std::invalid_argument("duration must be positive");
  std::sort(env_counts.begin(), env_counts.end());
  if (env_counts.empty() || env_counts.front() < 1) {
    throw std::invalid_argument("environment counts must be at least 1");
  }

  ThroughputReport report;
  report.machine = MachineDescriptor();
  for (int envs : env_counts) {
    std::vector<std::int64_t> steps(envs), history(envs);
    const auto start = Clock::now();
    const auto deadline =
        start + std::chrono::duration_cast<Clock::duration>(duration);
    std::vector<std::thread> threads;
    for (int e = 0; e < envs; ++e) {
      threads.emplace_back([&, e] {
        const std::uint64_t env_seed = MixSeed(seed, static_cast<std::uint64_t>(e));
        UniformPlayer player(MixSeed(env_seed, ~0ULL));
        std::vector<Combination> legal;
        std::int64_t applied = 0, recorded = 0;
        bool stop = false;
        for (std::uint64_t m = 0; !stop; ++m) {
          MatchState match = StartMatch(MixSeed(env_seed, m));
          while (!match.terminated && !stop) {
            Round round = StartRound(match);
            while (!round.IsOver()) {
              if ((applied & 127) == 0 && Clock::now() >= deadline) {
                stop = true;
                break;
              }
              round.LegalActionsInto(legal);
              const int seat = round.current_seat();
              round.Apply(seat, legal[player.SelectAction(round, match, seat, legal)]);
              ++applied;
            }
            recorded += static_cast<std::int64_t>(round.history().size());
            if (round.IsOver()) SettleRound(round, match);
          }
        }
        steps[e] = applied;
        history[e] = recorded;
      });
    }
    for (auto& t : threads) t.join();
    ThroughputRow row;
    row.envs = envs;
    row.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    for (int e = 0; e < envs; ++e) {
      row.steps += steps[e];
      row.history_steps += history[e];
    }
    report.rows.push_back(row);
  }
  return report;
}

void WriteThroughputTable(const ThroughputReport& report, std::ostream& os) {
  fmt::print(os, "machine: {}\n{}\n", report.machine, kStepNote);
  fmt::print(os, "{:>5} {:>12} {:>9} {:>16}\n", "envs", "steps", "seconds", "steps/hour");
  for (const auto& r : report.rows) {
    fmt::print(os, "{:>5} {:>12} {:>9.2f} {:>16.0f}\n", r.envs, r.steps, r.seconds,
               r.StepsPerHour());
  }
}

void WriteThroughputCsv(const ThroughputReport& report, std::ostream& os) {
  fmt::print(os, "# machine: {}\n# {}\n", report.machine, kStepNote);
  os << "envs,steps,seconds,steps_per_hour\n";
  for (const auto& r : report.rows) {
    fmt::print(os, "{},{},{:.4f},{:.0f}\n", r.envs, r.steps, r.seconds, r.StepsPerHour());
  }
}

TimingReport TimeAgents(const std::vector<std::string>& agents, int matches,
                        std::uint64_t seed) {
  for (const auto& a : agents) CheckAgent(a);
  TimingReport report;
  for (const auto& name : agents) {
    TimingRow row;
    row.agent = name;
    for (int i = 0; i < matches; ++i) {
      const std::uint64_t match_seed = MatchSeed(seed, static_cast<std::size_t>(i));
      std::array<std::unique_ptr<Agent>, kNumSeats> owned;
      std::array<std::unique_ptr<TimedPlayer>, kNumSeats> players;
      std::array<Player*, kNumSeats> ptrs{};
      for (int s = 0; s < kNumSeats; ++s) {
        owned[s] = MakeAgent(name, AgentSeed(match_seed, s));
        players[s] = std::make_unique<TimedPlayer>(*owned[s]);
        ptrs[s] = players[s].get();
      }
      RunMatch(ptrs, match_seed);
      for (const auto& p : players) {
        row.selections += p->selections();
        row.seconds += p->seconds();
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

void WriteTimingTable(const TimingReport& report, std::ostream& os) {
  fmt::print(os, "{:<10} {:>12} {:>10} {:>16}\n", "agent", "selections", "seconds",
             "time steps/s");
  for (const auto& r : report.rows) {
    fmt::print(os, "{:<10} {:>12} {:>10.4f} {:>16.0f}\n", r.agent, r.selections, r.seconds,
               r.PerSecond());
  }
}

void WriteTimingCsv(const TimingReport& report, std::ostream& os) {
  os << "agent,selections,seconds,steps_per_second\n";
  for (const auto& r : report.rows) {
    fmt::print(os, "{},{},{:.6f},{:.1f}\n", r.agent, r.selections, r.seconds, r.PerSecond());
  }
}

ReplaySummary ReplayFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const MatchRecord record = ReadRecord(in);
  const MatchState end = Replay(record);
  ReplaySummary summary;
  summary.seed = record.seed;
  summary.steps = record.steps.size();
  summary.rounds = record.rounds;
  summary.final_levels = end.team_levels;
  summary.winning_team = end.winning_team.value_or(-1);
  return summary;
}

void WriteReplaySummary(const ReplaySummary& s, std::ostream& os) {
  fmt::print(os, "seed {}: {} steps, {} rounds, verified\n", s.seed, s.steps, s.rounds.size());
  for (std::size_t i = 0; i < s.rounds.size(); ++i) {
    const RoundResult& r = s.rounds[i];
    fmt::print(os, "round {:>3}  level {}  order {} {} {} {}  team {} +{}  levels {} {}\n", i,
               RankString(r.round_level), r.order[0], r.order[1], r.order[2], r.order[3],
               r.winning_team, r.level_delta, RankString(r.team_levels_after[0]),
               RankString(r.team_levels_after[1]));
  }
  fmt::print(os, "winner: team {}  final levels {} {}\n", s.winning_team,
             RankString(s.final_levels[0]), RankString(s.final_levels[1]));
}

SelfPlayResult SelfPlay(const SelfPlayOptions& options) {
  for (const auto& a : options.agents) CheckAgent(a);
  if (options.matches < 1) throw std::invalid_argument("matches must be at least 1");
  std::filesystem::create_directories(options.out);

  SelfPlayResult result;
  result.logs.resize(options.matches);
  std::vector<std::int64_t> steps(options.matches), rounds(options.matches);
  ParallelFor(result.logs.size(), options.workers, [&](std::size_t i) {
    const MatchRecord record = PlayMatch(options.agents, MatchSeed(options.seed, i));
    const std::string stem = fmt::format("match_{:06}", i);
    const auto log = options.out / (stem + ".jsonl");
    std::ofstream os(log);
    WriteRecord(record, os);
    if (!os) throw std::runtime_error("cannot write " + log.string());
    if (options.trajectories) {
      std::ofstream traj(options.out / (stem + ".traj"), std::ios::binary);
      ExportTrajectories(record, traj);
      if (!traj) throw std::runtime_error("cannot write trajectories for " + stem);
    }
    result.logs[i] = log;
    steps[i] = static_cast<std::int64_t>(record.steps.size());
    rounds[i] = static_cast<std::int64_t>(record.rounds.size());
  });
  for (std::size_t i = 0; i < steps.size(); ++i) {
    result.steps += steps[i];
    result.rounds += rounds[i];
  }
  return result;
}

}  // namespace guandan
