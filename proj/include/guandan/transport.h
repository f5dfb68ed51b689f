#ifndef GUANDAN_TRANSPORT_H_
#define GUANDAN_TRANSPORT_H_

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "guandan/agents.h"
#include "guandan/protocol.h"

namespace guandan {

// Network bindings for Server: newline-delimited JSON over TCP for headless
// agents and one JSON object per text frame over websocket for browsers.
// A port of 0 binds an ephemeral port; a negative websocket port disables it.
class NetworkServer {
 public:
  NetworkServer(Server& server, const std::string& host, int tcp_port, int ws_port);
  ~NetworkServer();

  NetworkServer(const NetworkServer&) = delete;
  NetworkServer& operator=(const NetworkServer&) = delete;

  int tcp_port() const;
  int ws_port() const;  // -1 when disabled

  // Blocks until Stop().
  void Run(int threads = 1);
  void Stop();

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

struct ClientOptions {
  std::string host = "127.0.0.1";
  int port = 0;
  std::string user_id = "agent";
  // room_id 0 creates a room playing `rounds` matches; otherwise joins it.
  int room_id = 0;
  int rounds = 1;
  int seat = 0;
};

struct ClientResult {
  int room_id = 0;
  int seat = -1;
  int matches = 0;
  int actions = 0;
  std::string fault;     // set when the room was aborted
  nlohmann::json last_result;  // most recent gameResult
};

// Connects, creates or joins a room and answers act requests with `agent`
// until the room finishes. Throws std::runtime_error on connection failure
// or when the server refuses the seat.
ClientResult RunTcpClient(const ClientOptions& options, Agent& agent);

}  // namespace guandan

#endif  // GUANDAN_TRANSPORT_H_
