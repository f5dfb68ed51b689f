// Command-line front end: serve, client, eval, bench, time, replay,
// selfplay, export.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "guandan/encode.h"
#include "guandan/harness.h"
#include "guandan/transport.h"

namespace {

using namespace guandan;

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  int workers = 1;
};

void AddCommon(CLI::App* cmd, Common& c, bool out = true, bool workers = true) {
  cmd->add_option("--seed", c.seed, "master seed")->capture_default_str();
  if (out) cmd->add_option("--out", c.out, "output path");
  if (workers) cmd->add_option("--workers", c.workers, "worker threads")->capture_default_str();
}

// "1..10", "1,2,4,8" or a mix such as "1..4,8".
std::vector<int> ParseCounts(const std::string& text) {
  std::vector<int> counts;
  static const std::regex range(R"((\d+)\.\.(\d+))");
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    std::smatch m;
    if (std::regex_match(part, m, range)) {
      for (int i = std::stoi(m[1]); i <= std::stoi(m[2]); ++i) counts.push_back(i);
    } else {
      counts.push_back(std::stoi(part));
    }
  }
  return counts;
}

// Runs `write` against `path` when one was given.
template <typename F>
void Emit(const std::string& path, F write) {
  if (path.empty()) return;
  std::ofstream os(path);
  write(os);
  if (!os) throw std::runtime_error("cannot write " + path);
  spdlog::info("wrote {}", path);
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* level = std::getenv("GUANDAN_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }

  CLI::App app{"GuanDan simulator"};
  app.require_subcommand(1);

  // serve
  Common serve_common;
  std::string host = "0.0.0.0";
  int port = 23456;
  int ws_port = 23457;
  int threads = 1;
  int timeout_ms = 30'000;
  ServerOptions server_options;
  std::vector<std::string> seat_agents;
  auto* serve = app.add_subcommand("serve", "run the room server");
  AddCommon(serve, serve_common, false, false);
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port, "TCP port, newline-delimited JSON")
      ->envname("GUANDAN_PORT")
      ->capture_default_str();
  serve->add_option("--ws-port", ws_port, "websocket port; -1 disables")->capture_default_str();
  serve->add_option("--max-rooms", server_options.max_rooms)->capture_default_str();
  serve->add_option("--agent", seat_agents,
                    "per seat in order: an agent name, or 'remote' for a connection")
      ->expected(0, kNumSeats);
  serve->add_option("--timeout-ms", timeout_ms, "headless act deadline; 0 disables")
      ->capture_default_str();
  serve->add_option("--threads", threads, "network threads")->capture_default_str();

  // client
  Common client_common;
  ClientOptions client;
  client.port = 23456;
  std::string client_agent = "greedy";
  auto* client_cmd = app.add_subcommand("client", "play over TCP with a built-in agent");
  AddCommon(client_cmd, client_common, false, false);
  client_cmd->add_option("--host", client.host)->capture_default_str();
  client_cmd->add_option("--port", client.port)->envname("GUANDAN_PORT")->capture_default_str();
  client_cmd->add_option("--room", client.room_id, "room to join; 0 creates one")
      ->capture_default_str();
  client_cmd->add_option("--seat", client.seat)->capture_default_str();
  client_cmd->add_option("--rounds", client.rounds, "matches when creating")->capture_default_str();
  client_cmd->add_option("--user", client.user_id)->capture_default_str();
  client_cmd->add_option("--agent", client_agent)->capture_default_str();

  // eval
  Common eval_common;
  EvalOptions eval;
  eval.team_a = "greedy";
  eval.team_b = "random";
  auto* eval_cmd = app.add_subcommand("eval", "pairwise evaluation report");
  AddCommon(eval_cmd, eval_common);
  eval_cmd->add_option("team_a", eval.team_a)->capture_default_str();
  eval_cmd->add_option("team_b", eval.team_b)->capture_default_str();
  eval_cmd->add_option("--matches", eval.matches)->capture_default_str();
  eval_cmd->add_flag("--mirrored", eval.mirrored, "also play with seats swapped");

  // bench
  Common bench_common;
  std::string envs = "1..10";
  double duration = 10;
  auto* bench = app.add_subcommand("bench", "throughput over parallel environments");
  AddCommon(bench, bench_common, true, false);
  bench->add_option("--envs", envs, "environment counts, e.g. 1..10 or 1,2,4")
      ->capture_default_str();
  bench->add_option("--duration", duration, "seconds per point")->capture_default_str();

  // time
  Common time_common;
  std::vector<std::string> timed = {"random", "greedy"};
  int time_matches = 20;
  auto* time_cmd = app.add_subcommand("time", "per-agent selection rate");
  AddCommon(time_cmd, time_common, true, false);
  time_cmd->add_option("agents", timed)->capture_default_str();
  time_cmd->add_option("--matches", time_matches)->capture_default_str();

  // replay
  std::vector<std::string> replay_paths;
  auto* replay = app.add_subcommand("replay", "verify match logs");
  replay->add_option("logs", replay_paths)->required()->check(CLI::ExistingFile);

  // selfplay
  Common self_common;
  SelfPlayOptions self;
  std::vector<std::string> self_agents;
  auto* selfplay = app.add_subcommand("selfplay", "write match logs");
  AddCommon(selfplay, self_common);
  selfplay->add_option("--matches", self.matches)->capture_default_str();
  selfplay->add_option("--agent", self_agents, "per seat, in order")->expected(0, kNumSeats);
  selfplay->add_flag("--trajectories", self.trajectories, "also export trajectories");

  // export
  std::string export_in, export_out;
  auto* export_cmd = app.add_subcommand("export", "trajectories from a match log");
  export_cmd->add_option("log", export_in)->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--out", export_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      server_options.seed = serve_common.seed;
      server_options.headless_timeout = std::chrono::milliseconds(timeout_ms);
      for (std::size_t s = 0; s < seat_agents.size(); ++s) {
        if (seat_agents[s] != "remote") server_options.bots[s] = seat_agents[s];
      }
      Server server(server_options);
      NetworkServer net(server, host, port, ws_port);
      spdlog::info("listening on {}:{} (tcp) and {} (websocket)", host, net.tcp_port(),
                   net.ws_port());
      net.Run(threads);
    } else if (*client_cmd) {
      auto agent = MakeAgent(client_agent, client_common.seed);
      const ClientResult r = RunTcpClient(client, *agent);
      std::cout << "room " << r.room_id << " seat " << r.seat << ": " << r.matches
                << " matches, " << r.actions << " actions";
      if (!r.fault.empty()) std::cout << ", aborted: " << r.fault;
      std::cout << '\n';
      if (!r.last_result.is_null()) std::cout << r.last_result.dump() << '\n';
      return r.fault.empty() ? 0 : 1;
    } else if (*eval_cmd) {
      eval.seed = eval_common.seed;
      eval.workers = eval_common.workers;
      const EvalReport report = Evaluate(eval);
      WriteEvalTable(report, std::cout);
      Emit(eval_common.out, [&](std::ostream& os) { WriteEvalCsv(report, os); });
    } else if (*bench) {
      const ThroughputReport report =
          Bench(ParseCounts(envs), std::chrono::duration<double>(duration), bench_common.seed);
      WriteThroughputTable(report, std::cout);
      Emit(bench_common.out, [&](std::ostream& os) { WriteThroughputCsv(report, os); });
    } else if (*time_cmd) {
      const TimingReport report = TimeAgents(timed, time_matches, time_common.seed);
      WriteTimingTable(report, std::cout);
      Emit(time_common.out, [&](std::ostream& os) { WriteTimingCsv(report, os); });
    } else if (*replay) {
      for (const auto& path : replay_paths) {
        std::cout << path << '\n';
        WriteReplaySummary(ReplayFile(path), std::cout);
      }
    } else if (*selfplay) {
      for (std::size_t s = 0; s < self_agents.size(); ++s) self.agents[s] = self_agents[s];
      self.seed = self_common.seed;
      self.workers = self_common.workers;
      self.out = self_common.out.empty() ? "logs" : self_common.out;
      const SelfPlayResult r = SelfPlay(self);
      std::cout << r.logs.size() << " matches, " << r.rounds << " rounds, " << r.steps
                << " steps written to " << self.out.string() << '\n';
    } else if (*export_cmd) {
      std::ifstream in(export_in);
      const MatchRecord record = ReadRecord(in);
      std::ofstream os(export_out, std::ios::binary);
      const std::size_t n = ExportTrajectories(record, os);
      if (!os) throw std::runtime_error("cannot write " + export_out);
      std::cout << n << " records written to " << export_out << '\n';
    }
  } catch (const ReplayMismatch& e) {
    std::cerr << "replay mismatch at " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
