#ifndef GUANDAN_PROTOCOL_H_
#define GUANDAN_PROTOCOL_H_

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "guandan/agents.h"
#include "guandan/engine.h"

namespace guandan {

using nlohmann::json;

// Server -> client message builders.
namespace msg {
json Beginning(const CardCounts& hand, int seat);
json Play(const Event& play);
json Tribute(const std::vector<Transfer>& result);
json AntiTribute(const std::vector<int>& seats);
json Back(const std::vector<Transfer>& result);
json EpisodeOver(const Round& round);
json GameOver(int cur_times, int setting_times);
json GameResult(int victory, const std::array<Rank, 2>& levels);
json Act(const ActRequest& request);
json Error(std::string_view code, std::string_view message);
json Ack(std::string_view request, int room_id, int seat);

// Client -> server message builders.
json CreateRoom(std::string_view user_id, int rounds, int seat);
json JoinRoom(std::string_view user_id, int room_id, int seat);
// PLAY, TRIBUTE or PAYTRIBUTE answering `request` with action `index`.
json Answer(const ActRequest& request, int room_id, int index);
}  // namespace msg

// Parses an 'act' message. The seat is not part of the message and is left
// at `seat`. Throws std::invalid_argument on malformed input.
ActRequest ParseActRequest(const json& message, int seat);

using ConnectionId = std::uint64_t;

struct Outgoing {
  ConnectionId to = 0;
  json message;
};

enum class ConnectionKind { kHeadless, kBrowser };

struct ServerOptions {
  int max_rooms = 64;
  std::uint64_t seed = 0;
  // Seats filled by in-process agents when a room is created, e.g.
  // {"", "greedy", "greedy", "greedy"}; empty means a remote player.
  std::array<std::string, kNumSeats> bots{};
  // Act deadlines; zero disables.
  std::chrono::milliseconds headless_timeout{30'000};
  std::chrono::milliseconds browser_timeout{0};
};

// Transport-independent room server. Every call returns the messages to
// deliver, in order. Calls are serialized internally, so one Server may be
// shared by several network threads.
class Server {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Server(ServerOptions options);
  ~Server();

  void Connect(ConnectionId id, ConnectionKind kind);
  std::vector<Outgoing> Handle(ConnectionId from, const json& message);
  // Aborts any match the connection takes part in.
  std::vector<Outgoing> Disconnect(ConnectionId id);
  // Faults rooms whose awaited seat has exceeded its deadline.
  std::vector<Outgoing> Expire(Clock::time_point now);

  int active_rooms() const;

 private:
  struct Room;
  struct Bot;

  void HandleLocked(ConnectionId from, const json& message,
                    std::vector<Outgoing>& out);
  void CreateRoom(ConnectionId from, const json& data, std::vector<Outgoing>& out);
  void JoinRoom(ConnectionId from, const json& data, std::vector<Outgoing>& out);
  void Act(ConnectionId from, const std::string& type, const json& data,
           std::vector<Outgoing>& out);
  void BeginMatch(Room& room, std::vector<Outgoing>& out);
  void BeginRound(Room& room, std::vector<Outgoing>& out);
  void FinishRound(Room& room, std::vector<Outgoing>& out);
  void Broadcast(const Room& room, const json& message, std::vector<Outgoing>& out);
  void IssueRequest(Room& room, std::vector<Outgoing>& out);
  void Fault(Room& room, const std::string& reason, std::vector<Outgoing>& out);
  void CloseRoom(int room_id);
  void Deliver(std::vector<Outgoing>& pending, std::vector<Outgoing>& out);
  ConnectionId AddBot(const std::string& name, int room_id, int seat);
  std::chrono::milliseconds TimeoutFor(ConnectionId id) const;

  ServerOptions options_;
  mutable std::mutex mu_;
  int next_room_id_ = 1;
  ConnectionId next_bot_id_ = 1ULL << 62;
  std::map<int, std::unique_ptr<Room>> rooms_;
  std::map<ConnectionId, ConnectionKind> kinds_;
  std::map<ConnectionId, std::pair<int, int>> bound_;  // room, seat
  std::map<ConnectionId, std::unique_ptr<Bot>> bots_;
};

}  // namespace guandan

#endif  // GUANDAN_PROTOCOL_H_
