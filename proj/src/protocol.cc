#include "guandan/protocol.h"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "guandan/wire.h"

namespace guandan {
namespace msg {
namespace {

json Notify(std::string_view stage) {
  return json{{"type", "notify"}, {"stage", stage}};
}

json WireOrNull(const std::optional<Combination>& action) {
  return action ? ActionToWire(*action, Phase::kPlay) : json(nullptr);
}

json Transfers(const std::vector<Transfer>& result) {
  json list = json::array();
  for (const auto& t : result) list.push_back({t.from, t.to, CardCode(t.card)});
  return list;
}

std::string_view StageName(Phase stage) {
  return stage == Phase::kBackTribute ? "back" : PhaseName(stage);
}

}  // namespace

json Beginning(const CardCounts& hand, int seat) {
  json m = Notify("beginning");
  m["handCards"] = CardsToWire(hand);
  m["myPos"] = seat;
  return m;
}

json Play(const Event& play) {
  json m = Notify("play");
  m["curPos"] = play.seat;
  m["curAction"] = ActionToWire(play.action, Phase::kPlay);
  m["greaterPos"] = play.greater_seat;
  m["greaterAction"] = ActionToWire(play.greater_action, Phase::kPlay);
  return m;
}

json Tribute(const std::vector<Transfer>& result) {
  json m = Notify("tribute");
  m["result"] = Transfers(result);
  return m;
}

json AntiTribute(const std::vector<int>& seats) {
  json m = Notify("anti-tribute");
  m["antiNums"] = seats.size();
  m["antiPos"] = seats;
  return m;
}

json Back(const std::vector<Transfer>& result) {
  json m = Notify("back");
  m["result"] = Transfers(result);
  return m;
}

json EpisodeOver(const Round& round) {
  json m = Notify("episodeOver");
  const auto order = round.FullOrder();
  m["order"] = order;
  m["curRank"] = RankString(round.level().rank());
  json rest = json::array();
  for (int seat : order) {
    if (!round.hand(seat).Empty()) rest.push_back({seat, CardsToWire(round.hand(seat))});
  }
  m["restCards"] = rest;
  return m;
}

json GameOver(int cur_times, int setting_times) {
  json m = Notify("gameOver");
  m["curTimes"] = cur_times;
  m["settingTimes"] = setting_times;
  return m;
}

json GameResult(int victory, const std::array<Rank, 2>& levels) {
  json m = Notify("gameResult");
  m["victory"] = victory;
  m["victoryRank"] = {RankString(levels[0]), RankString(levels[1])};
  return m;
}

json Act(const ActRequest& r) {
  json m = {{"type", "act"}, {"handCards", CardsToWire(r.hand)}};
  if (r.stage == Phase::kPlay) {
    json info = json::array();
    for (int rest : r.rest) info.push_back({{"rest", rest}});
    m["publicInfo"] = info;
  }
  m["selfRank"] = RankString(r.self_rank);
  m["oppoRank"] = RankString(r.oppo_rank);
  m["curRank"] = RankString(r.cur_rank);
  m["stage"] = StageName(r.stage);
  if (r.stage == Phase::kPlay) {
    m["curPos"] = r.cur_pos;
    m["curAction"] = WireOrNull(r.cur_action);
    m["greaterAction"] = WireOrNull(r.greater_action);
    m["greaterPos"] = r.greater_pos;
  }
  if (r.stage == Phase::kBackTribute) {
    m["tributePos"] = r.tribute_pos;
    m["tribute"] = CardCode(r.tribute_card);
  }
  json list = json::array();
  for (const auto& a : r.action_list) list.push_back(ActionToWire(a, r.stage));
  m["actionList"] = list;
  m["indexRange"] = r.index_range();
  return m;
}

json Error(std::string_view code, std::string_view message) {
  return json{{"type", "error"}, {"code", code}, {"message", message}};
}

json Ack(std::string_view request, int room_id, int seat) {
  return json{{"type", "ack"}, {"request", request}, {"roomId", room_id}, {"seatNum", seat}};
}

json CreateRoom(std::string_view user_id, int rounds, int seat) {
  return json{{"type", "CREATE_ROOM"},
              {"data", {{"userId", user_id}, {"round", rounds}, {"seatNum", seat}}}};
}

json JoinRoom(std::string_view user_id, int room_id, int seat) {
  return json{{"type", "JOIN_ROOM"},
              {"data", {{"userId", user_id}, {"roomId", room_id}, {"seatNum", seat}}}};
}

json Answer(const ActRequest& r, int room_id, int index) {
  json data = {{"roomId", room_id}, {"player", r.seat}};
  const char* type = "PLAY";
  if (r.stage == Phase::kTribute) type = "TRIBUTE";
  if (r.stage == Phase::kBackTribute) {
    type = "PAYTRIBUTE";
    data["tributePos"] = r.tribute_pos;
    data["tribute"] = CardCode(r.tribute_card);
  }
  data["act"] = ActionToWire(r.action_list.at(index), r.stage);
  return json{{"type", type}, {"data", data}};
}

}  // namespace msg

namespace {

std::optional<Combination> OptionalAction(const json& j) {
  if (j.is_null()) return std::nullopt;
  return ActionFromWire(j, Phase::kPlay);
}

}  // namespace

ActRequest ParseActRequest(const json& m, int seat) {
  try {
    if (m.at("type") != "act") throw std::invalid_argument("not an act message");
    ActRequest r;
    r.seat = seat;
    r.stage = PhaseFromName(m.at("stage").get<std::string>());
    if (r.stage == Phase::kSettled) throw std::invalid_argument("bad stage");
    std::vector<std::string> codes = m.at("handCards");
    r.hand = CardCounts::FromCodes(codes);
    r.self_rank = RankFromString(m.at("selfRank").get<std::string>());
    r.oppo_rank = RankFromString(m.at("oppoRank").get<std::string>());
    r.cur_rank = RankFromString(m.at("curRank").get<std::string>());
    if (r.stage == Phase::kPlay) {
      const json& info = m.at("publicInfo");
      if (info.size() != kNumSeats) throw std::invalid_argument("publicInfo size");
      for (int s = 0; s < kNumSeats; ++s) r.rest[s] = info[s].at("rest").get<int>();
      r.cur_pos = m.at("curPos").get<int>();
      r.cur_action = OptionalAction(m.at("curAction"));
      r.greater_pos = m.at("greaterPos").get<int>();
      r.greater_action = OptionalAction(m.at("greaterAction"));
    }
    if (r.stage == Phase::kBackTribute) {
      r.tribute_pos = m.at("tributePos").get<int>();
      r.tribute_card = CardIdFromCode(m.at("tribute").get<std::string>());
    }
    for (const auto& a : m.at("actionList")) {
      r.action_list.push_back(ActionFromWire(a, r.stage));
    }
    if (r.action_list.empty() || m.at("indexRange").get<int>() != r.index_range()) {
      throw std::invalid_argument("indexRange does not match actionList");
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed act message: ") + e.what());
  }
}

struct Server::Room {
  int id = 0;
  int setting_times = 1;
  int cur_times = 0;
  std::uint64_t seed = 0;
  std::array<std::optional<ConnectionId>, kNumSeats> seats;
  std::optional<MatchState> match;
  std::optional<Round> round;
  std::vector<Combination> legal;
  int awaiting = -1;
  Clock::time_point asked_at{};

  bool full() const {
    for (const auto& s : seats) {
      if (!s) return false;
    }
    return true;
  }
};

struct Server::Bot {
  std::unique_ptr<Agent> agent;
  int room = 0;
  int seat = 0;
};

namespace {

class RequestError : public std::runtime_error {
 public:
  RequestError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

int IntField(const json& data, const char* name) {
  auto it = data.find(name);
  if (it == data.end() || !it->is_number_integer()) {
    throw RequestError("bad_request", std::string("missing integer field '") + name + "'");
  }
  return it->get<int>();
}

int RoomIdField(const json& data) {
  return data.contains("roomID") && !data.contains("roomId") ? IntField(data, "roomID")
                                                              : IntField(data, "roomId");
}

std::string_view ExpectedType(Phase phase) {
  switch (phase) {
    case Phase::kTribute: return "TRIBUTE";
    case Phase::kBackTribute: return "PAYTRIBUTE";
    default: return "PLAY";
  }
}

}  // namespace

Server::Server(ServerOptions options) : options_(std::move(options)) {
  for (const auto& name : options_.bots) {
    if (!name.empty()) MakeAgent(name, 0);
  }
}
Server::~Server() = default;

void Server::Connect(ConnectionId id, ConnectionKind kind) {
  std::lock_guard lock(mu_);
  kinds_[id] = kind;
}

int Server::active_rooms() const {
  std::lock_guard lock(mu_);
  return static_cast<int>(rooms_.size());
}

std::vector<Outgoing> Server::Handle(ConnectionId from, const json& message) {
  std::lock_guard lock(mu_);
  std::vector<Outgoing> pending, out;
  HandleLocked(from, message, pending);
  Deliver(pending, out);
  return out;
}

void Server::HandleLocked(ConnectionId from, const json& message,
                          std::vector<Outgoing>& out) {
  try {
    if (!message.is_object() || !message.contains("type") || !message["type"].is_string()) {
      throw RequestError("bad_request", "message needs a string 'type'");
    }
    const std::string type = message["type"];
    auto data_it = message.find("data");
    if (data_it == message.end() || !data_it->is_object()) {
      throw RequestError("bad_request", "message needs a 'data' object");
    }
    if (type == "CREATE_ROOM") {
      CreateRoom(from, *data_it, out);
    } else if (type == "JOIN_ROOM") {
      JoinRoom(from, *data_it, out);
    } else if (type == "PLAY" || type == "TRIBUTE" || type == "PAYTRIBUTE") {
      Act(from, type, *data_it, out);
    } else {
      throw RequestError("bad_request", "unknown message type: " + type);
    }
  } catch (const RequestError& e) {
    out.push_back({from, msg::Error(e.code(), e.what())});
  }
}

void Server::CreateRoom(ConnectionId from, const json& data, std::vector<Outgoing>& out) {
  const int rounds = IntField(data, "round");
  const int seat = IntField(data, "seatNum");
  if (rounds < 1) throw RequestError("bad_request", "round must be at least 1");
  if (seat < 0 || seat >= kNumSeats) throw RequestError("bad_request", "seatNum must be 0..3");
  if (bound_.count(from)) throw RequestError("already_seated", "connection already holds a seat");
  if (static_cast<int>(rooms_.size()) >= options_.max_rooms) {
    throw RequestError("room_limit", "too many rooms");
  }
  auto room = std::make_unique<Room>();
  room->id = next_room_id_++;
  room->setting_times = rounds;
  room->seed = MixSeed(options_.seed, static_cast<std::uint64_t>(room->id));
  room->seats[seat] = from;
  bound_[from] = {room->id, seat};
  Room& r = *room;
  rooms_[r.id] = std::move(room);
  out.push_back({from, msg::Ack("CREATE_ROOM", r.id, seat)});
  for (int s = 0; s < kNumSeats; ++s) {
    if (s != seat && !options_.bots[s].empty()) {
      r.seats[s] = AddBot(options_.bots[s], r.id, s);
    }
  }
  if (r.full()) BeginMatch(r, out);
}

void Server::JoinRoom(ConnectionId from, const json& data, std::vector<Outgoing>& out) {
  const int room_id = RoomIdField(data);
  const int seat = IntField(data, "seatNum");
  if (seat < 0 || seat >= kNumSeats) throw RequestError("bad_request", "seatNum must be 0..3");
  auto it = rooms_.find(room_id);
  if (it == rooms_.end()) throw RequestError("unknown_room", "no room " + std::to_string(room_id));
  if (bound_.count(from)) throw RequestError("already_seated", "connection already holds a seat");
  Room& room = *it->second;
  if (room.seats[seat]) throw RequestError("seat_taken", "seat " + std::to_string(seat) + " is taken");
  room.seats[seat] = from;
  bound_[from] = {room.id, seat};
  out.push_back({from, msg::Ack("JOIN_ROOM", room.id, seat)});
  if (room.full()) BeginMatch(room, out);
}

void Server::Act(ConnectionId from, const std::string& type, const json& data,
                 std::vector<Outgoing>& out) {
  const int room_id = RoomIdField(data);
  const int player = IntField(data, "player");
  auto it = rooms_.find(room_id);
  if (it == rooms_.end()) throw RequestError("unknown_room", "no room " + std::to_string(room_id));
  Room& room = *it->second;
  auto bound = bound_.find(from);
  if (bound == bound_.end() || bound->second != std::pair{room_id, player}) {
    throw RequestError("not_your_seat", "connection does not hold seat " + std::to_string(player));
  }
  if (!room.round || room.awaiting < 0) {
    throw RequestError("invalid_state", "no action is expected in this room");
  }
  if (player != room.awaiting) {
    throw RequestError("out_of_turn", "seat " + std::to_string(room.awaiting) + " is to act");
  }
  Round& round = *room.round;
  auto reject = [&](const char* code, const std::string& what) {
    out.push_back({from, msg::Error(code, what)});
    IssueRequest(room, out);
  };
  if (type != ExpectedType(round.phase())) {
    return reject("wrong_stage", "expected " + std::string(ExpectedType(round.phase())));
  }
  Combination action;
  try {
    if (!data.contains("act")) throw std::invalid_argument("missing 'act'");
    action = ActionFromWire(data["act"], round.phase());
  } catch (const std::exception& e) {
    return reject("bad_request", e.what());
  }
  if (round.phase() == Phase::kBackTribute &&
      (data.contains("tributePos") || data.contains("tribute"))) {
    auto pending = round.PendingTributeFor(player);
    if (data.value("tributePos", pending->from) != pending->from ||
        data.value("tribute", CardCode(pending->card)) != CardCode(pending->card)) {
      return reject("illegal_action", "tribute fields do not match the received tribute");
    }
  }
  auto chosen = std::find(room.legal.begin(), room.legal.end(), action);
  if (chosen == room.legal.end()) {
    return reject("illegal_action", "action is not in actionList");
  }
  room.awaiting = -1;
  auto events = round.Apply(player, *chosen);
  bool over = false;
  for (const auto& e : events) {
    switch (e.kind) {
      case Event::Kind::kPlay: Broadcast(room, msg::Play(e), out); break;
      case Event::Kind::kTributeResult: Broadcast(room, msg::Tribute(e.transfers), out); break;
      case Event::Kind::kBackResult: Broadcast(room, msg::Back(e.transfers), out); break;
      case Event::Kind::kAntiTribute: Broadcast(room, msg::AntiTribute(e.anti_seats), out); break;
      case Event::Kind::kRoundOver: over = true; break;
    }
  }
  if (over) {
    FinishRound(room, out);
  } else {
    IssueRequest(room, out);
  }
}

void Server::BeginMatch(Room& room, std::vector<Outgoing>& out) {
  room.match = guandan::StartMatch(MixSeed(room.seed, static_cast<std::uint64_t>(room.cur_times)));
  BeginRound(room, out);
}

void Server::BeginRound(Room& room, std::vector<Outgoing>& out) {
  room.round.emplace(guandan::StartRound(*room.match));
  for (int s = 0; s < kNumSeats; ++s) {
    out.push_back({*room.seats[s], msg::Beginning(room.round->hand(s), s)});
  }
  for (const auto& e : room.round->opening_events()) {
    if (e.kind == Event::Kind::kAntiTribute) Broadcast(room, msg::AntiTribute(e.anti_seats), out);
  }
  IssueRequest(room, out);
}

void Server::FinishRound(Room& room, std::vector<Outgoing>& out) {
  Broadcast(room, msg::EpisodeOver(*room.round), out);
  RoundResult result = SettleRound(*room.round, *room.match);
  if (!result.match_over) {
    BeginRound(room, out);
    return;
  }
  ++room.cur_times;
  Broadcast(room, msg::GameOver(room.cur_times, room.setting_times), out);
  Broadcast(room, msg::GameResult(*room.match->winning_team, room.match->team_levels), out);
  if (room.cur_times < room.setting_times) {
    BeginMatch(room, out);
  } else {
    room.round.reset();
    CloseRoom(room.id);
  }
}

void Server::Broadcast(const Room& room, const json& message, std::vector<Outgoing>& out) {
  for (const auto& s : room.seats) {
    if (s) out.push_back({*s, message});
  }
}

void Server::IssueRequest(Room& room, std::vector<Outgoing>& out) {
  Round& round = *room.round;
  const int seat = round.current_seat();
  round.LegalActionsInto(room.legal);
  out.push_back({*room.seats[seat],
                 msg::Act(BuildActRequest(round, *room.match, seat, room.legal))});
  room.awaiting = seat;
  room.asked_at = Clock::now();
}

void Server::Fault(Room& room, const std::string& reason, std::vector<Outgoing>& out) {
  json m = msg::GameOver(room.cur_times, room.setting_times);
  m["fault"] = reason;
  Broadcast(room, m, out);
  CloseRoom(room.id);
}

void Server::CloseRoom(int room_id) {
  auto it = rooms_.find(room_id);
  if (it == rooms_.end()) return;
  for (const auto& s : it->second->seats) {
    if (!s) continue;
    bound_.erase(*s);
    bots_.erase(*s);
  }
  rooms_.erase(it);
}

ConnectionId Server::AddBot(const std::string& name, int room_id, int seat) {
  const ConnectionId id = next_bot_id_++;
  auto bot = std::make_unique<Bot>();
  bot->agent = MakeAgent(name, MixSeed(options_.seed ^ static_cast<std::uint64_t>(room_id),
                                       static_cast<std::uint64_t>(seat)));
  bot->room = room_id;
  bot->seat = seat;
  bots_[id] = std::move(bot);
  bound_[id] = {room_id, seat};
  return id;
}

void Server::Deliver(std::vector<Outgoing>& pending, std::vector<Outgoing>& out) {
  std::deque<Outgoing> queue(pending.begin(), pending.end());
  while (!queue.empty()) {
    Outgoing o = std::move(queue.front());
    queue.pop_front();
    auto bot = bots_.find(o.to);
    if (bot == bots_.end()) {
      if (o.to < (1ULL << 62)) out.push_back(std::move(o));
      continue;
    }
    if (o.message.value("type", "") != "act") {
      bot->second->agent->OnNotification(o.message);
      continue;
    }
    ActRequest request = ParseActRequest(o.message, bot->second->seat);
    const int index = bot->second->agent->OnActRequest(request);
    std::vector<Outgoing> more;
    HandleLocked(o.to, msg::Answer(request, bot->second->room, index), more);
    queue.insert(queue.end(), more.begin(), more.end());
  }
}

std::chrono::milliseconds Server::TimeoutFor(ConnectionId id) const {
  if (bots_.count(id)) return std::chrono::milliseconds{0};
  auto it = kinds_.find(id);
  if (it != kinds_.end() && it->second == ConnectionKind::kBrowser) {
    return options_.browser_timeout;
  }
  return options_.headless_timeout;
}

std::vector<Outgoing> Server::Disconnect(ConnectionId id) {
  std::lock_guard lock(mu_);
  std::vector<Outgoing> pending, out;
  kinds_.erase(id);
  auto bound = bound_.find(id);
  if (bound != bound_.end()) {
    Room& room = *rooms_.at(bound->second.first);
    const int seat = bound->second.second;
    room.seats[seat].reset();
    bound_.erase(bound);
    if (room.match) {
      Fault(room, "seat " + std::to_string(seat) + " disconnected", pending);
    } else {
      bool humans = false;
      for (const auto& s : room.seats) humans |= s && !bots_.count(*s);
      if (!humans) CloseRoom(room.id);
    }
  }
  Deliver(pending, out);
  return out;
}

std::vector<Outgoing> Server::Expire(Clock::time_point now) {
  std::lock_guard lock(mu_);
  std::vector<Outgoing> pending, out;
  std::vector<int> expired;
  for (const auto& [id, room] : rooms_) {
    if (room->awaiting < 0) continue;
    const auto timeout = TimeoutFor(*room->seats[room->awaiting]);
    if (timeout.count() > 0 && now - room->asked_at > timeout) expired.push_back(id);
  }
  for (int id : expired) {
    Room& room = *rooms_.at(id);
    Fault(room, "seat " + std::to_string(room.awaiting) + " timed out", pending);
  }
  Deliver(pending, out);
  return out;
}

}  // namespace guandan
