#include "guandan/encode.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace guandan {
namespace {

constexpr std::string_view kTrajectoryFormat = "guandan-trajectory";
constexpr int kTrajectoryVersion = 1;

void OneHot(std::int8_t* block, int index) { block[index] = 1; }

template <typename T>
void PutLittle(std::string& buf, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

template <typename T>
T GetLittle(const char*& p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(*p++)) << (8 * i);
  }
  return static_cast<T>(v);
}

void AppendRecord(std::string& buf, const TransitionRecord& r) {
  PutLittle<std::uint32_t>(buf, r.step);
  PutLittle<std::uint16_t>(buf, static_cast<std::uint16_t>(r.round_index));
  PutLittle<std::uint8_t>(buf, static_cast<std::uint8_t>(r.phase));
  PutLittle<std::uint8_t>(buf, static_cast<std::uint8_t>(r.seat));
  PutLittle<std::uint8_t>(buf, static_cast<std::uint8_t>(r.terminal));
  for (int s = 0; s < kNumSeats; ++s) {
    buf.append(reinterpret_cast<const char*>(r.observations[s].data()), kObservationDim);
    buf.append(reinterpret_cast<const char*>(r.actions[s].data()), kActionDim);
    buf.push_back(static_cast<char>(r.rewards[s]));
  }
}

class TrajectoryBuilder : public ReplayObserver {
 public:
  explicit TrajectoryBuilder(std::string& buf) : buf_(buf) {}

  void BeforeStep(std::size_t index, const RecordStep& step, const Round& round,
                  const MatchState& match) override {
    Flush();
    pending_ = TransitionRecord{};
    pending_->step = static_cast<std::uint32_t>(index);
    pending_->round_index = step.round_index;
    pending_->phase = step.phase;
    pending_->seat = step.seat;
    for (int s = 0; s < kNumSeats; ++s) {
      EncodeObservationInto(round, match, s, pending_->observations[s].data());
    }
    EncodeActionInto(step.action, pending_->actions[step.seat].data());
  }

  void AfterRound(const Round&, const RoundResult& result,
                  const MatchState&) override {
    if (!pending_) return;
    pending_->terminal = result.match_over ? 2 : 1;
    pending_->rewards = AssignRewards(result);
    Flush();
  }

  std::size_t count() const { return count_; }

 private:
  void Flush() {
    if (!pending_) return;
    AppendRecord(buf_, *pending_);
    pending_.reset();
    ++count_;
  }

  std::string& buf_;
  std::optional<TransitionRecord> pending_;
  std::size_t count_ = 0;
};

}  // namespace

void EncodeActionInto(const Combination& action, std::int8_t* out) {
  std::fill(out, out + kActionDim, 0);
  if (action.IsPass()) return;
  for (int i = 0; i < action.size; ++i) ++out[action.cards[i]];
  OneHot(out + kNumCardKinds, static_cast<int>(action.type));
  OneHot(out + kNumCardKinds + kNumComboTypes, RankIndex(action.key));
}

ActionVector EncodeAction(const Combination& action) {
  ActionVector v;
  EncodeActionInto(action, v.data());
  return v;
}

void EncodeObservationInto(const Round& round, const MatchState& match,
                           int seat, std::int8_t* out) {
  std::fill(out, out + kObservationDim, 0);
  const CardCounts& hand = round.hand(seat);
  const int left = LeftOf(seat);
  const int partner = PartnerOf(seat);
  const int right = RightOf(seat);

  std::array<std::array<std::int8_t, kNumCardKinds>, kNumSeats> played{};
  const Combination* last = nullptr;
  std::array<const Combination*, kNumSeats> latest{};
  for (const auto& e : round.history()) {
    if (e.phase != Phase::kPlay) continue;
    for (int i = 0; i < e.action.size; ++i) ++played[e.seat][e.action.cards[i]];
    last = &e.action;
    latest[e.seat] = &e.action;
  }

  for (int id = 0; id < kNumCardKinds; ++id) {
    int seen = hand[id];
    for (int s = 0; s < kNumSeats; ++s) seen += played[s][id];
    out[obs::kHand + id] = static_cast<std::int8_t>(hand[id]);
    out[obs::kUnseen + id] = static_cast<std::int8_t>(2 - seen);
    out[obs::kPlayedLeft + id] = played[left][id];
    out[obs::kPlayedPartner + id] = played[partner][id];
    out[obs::kPlayedRight + id] = played[right][id];
  }

  if (last) EncodeActionInto(*last, out + obs::kLastAction);
  const std::array<std::pair<int, int>, 3> neighbours = {
      {{left, obs::kLeftAction}, {partner, obs::kPartnerAction}, {right, obs::kRightAction}}};
  for (auto [s, offset] : neighbours) {
    if (latest[s]) EncodeActionInto(*latest[s], out + offset);
  }

  const std::array<std::pair<int, int>, 3> counts = {
      {{left, obs::kLeftRemaining}, {partner, obs::kPartnerRemaining},
       {right, obs::kRightRemaining}}};
  for (auto [s, offset] : counts) {
    // A Banker briefly holds 28 cards during the tribute exchange.
    OneHot(out + offset, std::min(round.hand(s).Total(), kCountOneHot - 1));
  }

  const int team = TeamOf(seat);
  OneHot(out + obs::kLevels, RankIndex(match.team_levels[team]));
  OneHot(out + obs::kLevels + kNumNormalRanks, RankIndex(match.team_levels[1 - team]));
  const Level level = round.level();
  OneHot(out + obs::kLevels + 2 * kNumNormalRanks, RankIndex(level.rank()));
  out[obs::kWilds + RankIndex(level.rank())] =
      static_cast<std::int8_t>(hand[WildCardId(level)]);
}

Observation EncodeObservation(const Round& round, const MatchState& match,
                              int seat) {
  Observation o;
  EncodeObservationInto(round, match, seat, o.data());
  return o;
}

std::array<int, kNumSeats> AssignRewards(const RoundResult& result) {
  const int banker = result.order[0];
  const Role partner_role = result.roles[PartnerOf(banker)];
  int delta = 0;
  switch (partner_role) {
    case Role::kFollower: delta = 3; break;
    case Role::kThird: delta = 2; break;
    case Role::kDweller: delta = result.round_level == Rank::kAce ? 0 : 1; break;
    case Role::kBanker: break;
  }
  std::array<int, kNumSeats> rewards{};
  for (int s = 0; s < kNumSeats; ++s) {
    rewards[s] = TeamOf(s) == TeamOf(banker) ? delta : -delta;
  }
  return rewards;
}

std::size_t ExportTrajectories(const MatchRecord& record, std::ostream& os) {
  std::string body;
  TrajectoryBuilder builder(body);
  Replay(record, &builder);
  nlohmann::json header = {{"format", kTrajectoryFormat},
                           {"version", kTrajectoryVersion},
                           {"seed", record.seed},
                           {"seats", kNumSeats},
                           {"obsDim", kObservationDim},
                           {"actDim", kActionDim},
                           {"recordBytes", kTrajectoryRecordSize},
                           {"records", builder.count()}};
  os << header.dump() << '\n';
  os.write(body.data(), static_cast<std::streamsize>(body.size()));
  return builder.count();
}

TrajectoryHeader ReadTrajectories(std::istream& is,
                                  std::vector<TransitionRecord>* out) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty trajectory stream");
  nlohmann::json j = nlohmann::json::parse(line);
  if (j.at("format") != kTrajectoryFormat || j.at("obsDim") != kObservationDim ||
      j.at("actDim") != kActionDim ||
      j.at("recordBytes") != kTrajectoryRecordSize) {
    throw std::runtime_error("unsupported trajectory stream");
  }
  TrajectoryHeader header;
  header.version = j.at("version").get<int>();
  header.seed = j.at("seed").get<std::uint64_t>();
  header.records = j.at("records").get<std::size_t>();
  if (!out) return header;
  std::string buf(kTrajectoryRecordSize, '\0');
  for (std::size_t n = 0; n < header.records; ++n) {
    if (!is.read(buf.data(), static_cast<std::streamsize>(buf.size()))) {
      throw std::runtime_error("truncated trajectory stream");
    }
    const char* p = buf.data();
    TransitionRecord r;
    r.step = GetLittle<std::uint32_t>(p);
    r.round_index = GetLittle<std::uint16_t>(p);
    r.phase = static_cast<Phase>(GetLittle<std::uint8_t>(p));
    r.seat = GetLittle<std::uint8_t>(p);
    r.terminal = GetLittle<std::uint8_t>(p);
    for (int s = 0; s < kNumSeats; ++s) {
      std::copy(p, p + kObservationDim, r.observations[s].begin());
      p += kObservationDim;
      std::copy(p, p + kActionDim, r.actions[s].begin());
      p += kActionDim;
      r.rewards[s] = static_cast<std::int8_t>(*p++);
    }
    out->push_back(r);
  }
  return header;
}

}  // namespace guandan
