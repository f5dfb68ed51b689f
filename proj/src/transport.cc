#include "guandan/transport.h"

#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

namespace guandan {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using error_code = boost::system::error_code;

constexpr std::size_t kMaxLine = 1 << 20;
constexpr auto kExpireInterval = std::chrono::milliseconds(250);

class Session : public std::enable_shared_from_this<Session> {
 public:
  virtual ~Session() = default;
  virtual void Send(std::string text) = 0;
  virtual void Close() = 0;
};

}  // namespace

struct NetworkServer::Impl {
  Impl(Server& s, const std::string& host, int tcp_port, int ws_port)
      : server(s),
        tcp_acceptor(io, tcp::endpoint(asio::ip::make_address(host),
                                       static_cast<unsigned short>(tcp_port))),
        expire_timer(io) {
    if (ws_port >= 0) {
      ws_acceptor.emplace(io, tcp::endpoint(asio::ip::make_address(host),
                                            static_cast<unsigned short>(ws_port)));
    }
  }

  ConnectionId Register(const std::shared_ptr<Session>& s, ConnectionKind kind) {
    std::lock_guard lock(mu);
    const ConnectionId id = next_id++;
    sessions[id] = s;
    server.Connect(id, kind);
    return id;
  }

  // Handling and dispatch share one lock so that per-connection message
  // order matches the order the server produced them in.
  void OnMessage(ConnectionId id, std::string_view text) {
    std::lock_guard lock(mu);
    json message = json::parse(text, nullptr, false);
    std::vector<Outgoing> out;
    if (message.is_discarded() || !message.is_object()) {
      out.push_back({id, msg::Error("bad_request", "message is not a JSON object")});
    } else {
      out = server.Handle(id, message);
    }
    DispatchLocked(out);
  }

  void OnClosed(ConnectionId id) {
    std::lock_guard lock(mu);
    if (sessions.erase(id) == 0) return;
    DispatchLocked(server.Disconnect(id));
  }

  void DispatchLocked(const std::vector<Outgoing>& out) {
    for (const auto& o : out) {
      auto it = sessions.find(o.to);
      if (it == sessions.end()) continue;
      if (auto s = it->second.lock()) s->Send(o.message.dump());
    }
  }

  void ScheduleExpire() {
    expire_timer.expires_after(kExpireInterval);
    expire_timer.async_wait([this](error_code ec) {
      if (ec) return;
      {
        std::lock_guard lock(mu);
        DispatchLocked(server.Expire(Server::Clock::now()));
      }
      ScheduleExpire();
    });
  }

  void AcceptTcp();
  void AcceptWs();

  Server& server;
  asio::io_context io;
  tcp::acceptor tcp_acceptor;
  std::optional<tcp::acceptor> ws_acceptor;
  asio::steady_timer expire_timer;
  std::mutex mu;
  ConnectionId next_id = 1;
  std::map<ConnectionId, std::weak_ptr<Session>> sessions;
};

namespace {

class TcpSession : public Session {
 public:
  TcpSession(NetworkServer::Impl& net, tcp::socket socket)
      : net_(net), socket_(std::move(socket)), buf_(kMaxLine) {}

  void Start() {
    id_ = net_.Register(shared_from_this(), ConnectionKind::kHeadless);
    error_code ec;
    const auto peer = socket_.remote_endpoint(ec);
    spdlog::debug("tcp connection {} from {}", id_, ec ? "?" : peer.address().to_string());
    Read();
  }

  void Send(std::string text) override {
    text.push_back('\n');
    asio::post(socket_.get_executor(), [self = Self(), text = std::move(text)]() mutable {
      self->queue_.push_back(std::move(text));
      if (self->queue_.size() == 1) self->Write();
    });
  }

  void Close() override {
    asio::post(socket_.get_executor(), [self = Self()] {
      error_code ignored;
      self->socket_.shutdown(tcp::socket::shutdown_both, ignored);
      self->socket_.close(ignored);
    });
  }

 private:
  std::shared_ptr<TcpSession> Self() {
    return std::static_pointer_cast<TcpSession>(shared_from_this());
  }

  void Read() {
    asio::async_read_until(socket_, buf_, '\n',
                           [self = Self()](error_code ec, std::size_t n) { self->OnRead(ec, n); });
  }

  void OnRead(error_code ec, std::size_t n) {
    if (ec) {
      spdlog::debug("tcp connection {} closed: {}", id_, ec.message());
      net_.OnClosed(id_);
      return;
    }
    std::string line(asio::buffers_begin(buf_.data()),
                     asio::buffers_begin(buf_.data()) + static_cast<std::ptrdiff_t>(n));
    buf_.consume(n);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    if (!line.empty()) net_.OnMessage(id_, line);
    Read();
  }

  void Write() {
    asio::async_write(socket_, asio::buffer(queue_.front()),
                      [self = Self()](error_code ec, std::size_t) {
                        if (ec) return;
                        self->queue_.pop_front();
                        if (!self->queue_.empty()) self->Write();
                      });
  }

  NetworkServer::Impl& net_;
  tcp::socket socket_;
  asio::streambuf buf_;
  std::deque<std::string> queue_;
  ConnectionId id_ = 0;
};

class WsSession : public Session {
 public:
  WsSession(NetworkServer::Impl& net, tcp::socket socket)
      : net_(net), ws_(std::move(socket)) {}

  void Start() {
    ws_.read_message_max(kMaxLine);
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = Self()](error_code ec) {
      if (ec) return;
      self->id_ = self->net_.Register(self, ConnectionKind::kBrowser);
      self->Read();
    });
  }

  void Send(std::string text) override {
    asio::post(ws_.get_executor(), [self = Self(), text = std::move(text)]() mutable {
      self->queue_.push_back(std::move(text));
      if (self->queue_.size() == 1) self->Write();
    });
  }

  void Close() override {
    asio::post(ws_.get_executor(), [self = Self()] {
      self->ws_.async_close(websocket::close_code::normal, [self](error_code) {});
    });
  }

 private:
  std::shared_ptr<WsSession> Self() {
    return std::static_pointer_cast<WsSession>(shared_from_this());
  }

  void Read() {
    ws_.async_read(buf_, [self = Self()](error_code ec, std::size_t) {
      if (ec) {
        self->net_.OnClosed(self->id_);
        return;
      }
      const std::string text = beast::buffers_to_string(self->buf_.data());
      self->buf_.consume(self->buf_.size());
      self->net_.OnMessage(self->id_, text);
      self->Read();
    });
  }

  void Write() {
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()), [self = Self()](error_code ec, std::size_t) {
      if (ec) return;
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->Write();
    });
  }

  NetworkServer::Impl& net_;
  websocket::stream<tcp::socket> ws_;
  beast::flat_buffer buf_;
  std::deque<std::string> queue_;
  ConnectionId id_ = 0;
};

}  // namespace

void NetworkServer::Impl::AcceptTcp() {
  tcp_acceptor.async_accept(asio::make_strand(io), [this](error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<TcpSession>(*this, std::move(socket))->Start();
    AcceptTcp();
  });
}

void NetworkServer::Impl::AcceptWs() {
  ws_acceptor->async_accept(asio::make_strand(io), [this](error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<WsSession>(*this, std::move(socket))->Start();
    AcceptWs();
  });
}

NetworkServer::NetworkServer(Server& server, const std::string& host, int tcp_port,
                             int ws_port)
    : impl_(std::make_unique<Impl>(server, host, tcp_port, ws_port)) {}

NetworkServer::~NetworkServer() { Stop(); }

int NetworkServer::tcp_port() const { return impl_->tcp_acceptor.local_endpoint().port(); }

int NetworkServer::ws_port() const {
  return impl_->ws_acceptor ? impl_->ws_acceptor->local_endpoint().port() : -1;
}

void NetworkServer::Run(int threads) {
  impl_->AcceptTcp();
  if (impl_->ws_acceptor) impl_->AcceptWs();
  impl_->ScheduleExpire();
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back([this] { impl_->io.run(); });
  impl_->io.run();
  for (auto& t : pool) t.join();
}

void NetworkServer::Stop() { impl_->io.stop(); }

ClientResult RunTcpClient(const ClientOptions& options, Agent& agent) {
  asio::io_context io;
  tcp::socket socket(io);
  tcp::resolver resolver(io);
  asio::connect(socket, resolver.resolve(options.host, std::to_string(options.port)));

  auto send = [&](const json& m) {
    std::string line = m.dump();
    line.push_back('\n');
    asio::write(socket, asio::buffer(line));
  };

  ClientResult result;
  result.room_id = options.room_id;
  send(options.room_id == 0
           ? msg::CreateRoom(options.user_id, options.rounds, options.seat)
           : msg::JoinRoom(options.user_id, options.room_id, options.seat));

  asio::streambuf buf(kMaxLine);
  bool seated = false;
  bool last_match = false;
  for (;;) {
    error_code ec;
    const std::size_t n = asio::read_until(socket, buf, '\n', ec);
    if (ec) {
      if (!seated) throw std::runtime_error("connection closed: " + ec.message());
      result.fault = result.fault.empty() ? "connection closed" : result.fault;
      return result;
    }
    std::string line(asio::buffers_begin(buf.data()),
                     asio::buffers_begin(buf.data()) + static_cast<std::ptrdiff_t>(n));
    buf.consume(n);
    const json m = json::parse(line);
    const std::string type = m.value("type", "");
    if (type == "ack") {
      seated = true;
      result.room_id = m.at("roomId").get<int>();
      result.seat = m.at("seatNum").get<int>();
    } else if (type == "error") {
      if (!seated) {
        throw std::runtime_error("server refused: " + m.value("code", "") + ": " +
                                 m.value("message", ""));
      }
      spdlog::warn("server error: {}", m.dump());
    } else if (type == "act") {
      const ActRequest request = ParseActRequest(m, result.seat);
      const int index = agent.OnActRequest(request);
      send(msg::Answer(request, result.room_id, index));
      ++result.actions;
    } else if (type == "notify") {
      agent.OnNotification(m);
      const std::string stage = m.value("stage", "");
      if (stage == "gameOver") {
        if (m.contains("fault")) {
          result.fault = m.at("fault").get<std::string>();
          return result;
        }
        last_match = m.at("curTimes").get<int>() >= m.at("settingTimes").get<int>();
      } else if (stage == "gameResult") {
        ++result.matches;
        result.last_result = m;
        if (last_match) return result;
      }
    }
  }
}

}  // namespace guandan
