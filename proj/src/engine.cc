#include "guandan/engine.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "guandan/wire.h"

namespace guandan {
namespace {

constexpr std::array<std::string_view, 4> kPhaseNames = {"tribute", "back",
                                                         "play", "settled"};

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void HashByte(std::uint64_t& h, std::uint8_t b) {
  h ^= b;
  h *= kFnvPrime;
}

void HashInt(std::uint64_t& h, int v) {
  auto u = static_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) HashByte(h, static_cast<std::uint8_t>(u >> (8 * i)));
}

void HashCombination(std::uint64_t& h, const Combination& c) {
  HashByte(h, static_cast<std::uint8_t>(c.type));
  HashByte(h, static_cast<std::uint8_t>(c.key));
  HashByte(h, c.size);
  for (int i = 0; i < c.size; ++i) HashByte(h, c.cards[i]);
}

std::string HexHash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t ParseHexHash(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t h = std::stoull(s, &used, 16);
  if (used != s.size()) throw std::runtime_error("bad state hash: " + s);
  return h;
}

int CountOf(const std::vector<int>& v, int x) {
  return static_cast<int>(std::count(v.begin(), v.end(), x));
}

}  // namespace

std::string_view PhaseName(Phase p) { return kPhaseNames[static_cast<int>(p)]; }

Phase PhaseFromName(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (kPhaseNames[i] == name) return static_cast<Phase>(i);
  }
  throw std::invalid_argument("unknown phase: " + std::string(name));
}

int FirstLeaderFromReveal(int revealer, Rank revealed) {
  if (IsJoker(revealed)) throw std::invalid_argument("jokers are re-cut");
  int value = revealed == Rank::kAce ? 1 : RankIndex(revealed) + 2;
  return (revealer + value - 1) % kNumSeats;
}

int DetermineFirstLeader(std::span<const int> deck_order, Rng& rng) {
  const int revealer = static_cast<int>(rng.Uniform(kNumSeats));
  while (true) {
    int card = deck_order[rng.Uniform(deck_order.size())];
    if (!IsJoker(CardRank(card))) {
      return FirstLeaderFromReveal(revealer, CardRank(card));
    }
  }
}

std::array<int, kNumSeats> OrderFromRoles(const RoleMap& roles) {
  std::array<int, kNumSeats> order{};
  for (int s = 0; s < kNumSeats; ++s) order[static_cast<int>(roles[s])] = s;
  return order;
}

std::vector<int> TributePayers(const RoleMap& roles) {
  auto order = OrderFromRoles(roles);
  const int banker = order[0];
  if (TeamOf(order[1]) == TeamOf(banker)) {
    return {NextSeat(banker), (banker + 3) % kNumSeats};
  }
  return {order[3]};
}

std::vector<Transfer> RouteTributes(const RoleMap& roles,
                                    std::span<const Transfer> paid,
                                    Level level) {
  auto order = OrderFromRoles(roles);
  const int banker = order[0];
  if (paid.size() == 1) return {Transfer{paid[0].from, banker, paid[0].card}};
  if (paid.size() != 2) throw std::invalid_argument("one or two tributes");
  const int va = ElevatedValue(CardRank(paid[0].card), level);
  const int vb = ElevatedValue(CardRank(paid[1].card), level);
  auto distance = [&](int seat) { return (seat - banker + kNumSeats) % kNumSeats; };
  bool first_is_top =
      va != vb ? va > vb : distance(paid[0].from) < distance(paid[1].from);
  const Transfer& top = first_is_top ? paid[0] : paid[1];
  const Transfer& low = first_is_top ? paid[1] : paid[0];
  return {Transfer{top.from, banker, top.card},
          Transfer{low.from, order[1], low.card}};
}

Round::Round(Level level, const Deal& deal,
             const std::optional<RoleMap>& previous, Rng& rng)
    : level_(level), hands_(deal.hands), previous_(previous) {
  if (!previous) {
    BeginPlay(DetermineFirstLeader(deal.deck_order, rng));
    return;
  }
  const int banker = OrderFromRoles(*previous)[0];
  std::vector<int> payers = TributePayers(*previous);
  int red_jokers = 0;
  for (int s : payers) red_jokers += hands_[s][53];
  if (red_jokers == 2) {
    Event anti;
    anti.kind = Event::Kind::kAntiTribute;
    for (int s : payers) {
      if (hands_[s][53] > 0) anti.anti_seats.push_back(s);
    }
    opening_events_.push_back(anti);
    BeginPlay(banker);
    return;
  }
  phase_ = Phase::kTribute;
  pending_ = payers;
  current_ = pending_.front();
}

void Round::BeginPlay(int leader) {
  phase_ = Phase::kPlay;
  current_ = leader;
  greater_seat_ = -1;
  greater_action_.reset();
  passes_ = 0;
}

std::optional<Transfer> Round::PendingTributeFor(int seat) const {
  if (phase_ != Phase::kBackTribute) return std::nullopt;
  for (const auto& t : routed_) {
    if (t.to == seat) return t;
  }
  return std::nullopt;
}

void Round::LegalActionsInto(std::vector<Combination>& out) const {
  switch (phase_) {
    case Phase::kTribute:
      out = LegalTributes(hands_[current_], level_);
      return;
    case Phase::kBackTribute:
      out = LegalBackTributes(hands_[current_], level_);
      return;
    case Phase::kPlay:
      LegalPlaysInto(hands_[current_], greater_action_, level_, out);
      return;
    case Phase::kSettled:
      out.clear();
      return;
  }
}

std::vector<Combination> Round::LegalActions() const {
  std::vector<Combination> out;
  LegalActionsInto(out);
  return out;
}

std::vector<Event> Round::Apply(int seat, const Combination& action) {
  if (phase_ == Phase::kSettled) {
    throw RuleError(RuleError::Code::kInvalidState, "round is over");
  }
  if (seat != current_) {
    throw RuleError(RuleError::Code::kOutOfTurn,
                    "seat " + std::to_string(seat) + " acted out of turn; seat " +
                        std::to_string(current_) + " is to act");
  }
  std::vector<Event> events;
  switch (phase_) {
    case Phase::kTribute: ApplyTribute(seat, action, events); break;
    case Phase::kBackTribute: ApplyBack(seat, action, events); break;
    default: ApplyPlay(seat, action, events); break;
  }
  return events;
}

void Round::ApplyTribute(int seat, const Combination& action,
                         std::vector<Event>& events) {
  auto legal = LegalTributes(hands_[seat], level_);
  if (std::find(legal.begin(), legal.end(), action) == legal.end()) {
    throw RuleError(RuleError::Code::kIllegalAction,
                    "illegal tribute " + action.DebugString());
  }
  const int card = action.cards[0];
  hands_[seat].Remove(card);
  in_transit_.push_back(Transfer{seat, -1, card});
  history_.push_back(HistoryEntry{seat, Phase::kTribute, action});
  pending_.erase(pending_.begin());
  if (!pending_.empty()) {
    current_ = pending_.front();
    return;
  }
  routed_ = RouteTributes(*previous_, in_transit_, level_);
  in_transit_.clear();
  Event result;
  result.kind = Event::Kind::kTributeResult;
  for (const auto& t : routed_) {
    hands_[t.to].Add(t.card);
    ledger_.push_back(t);
    result.transfers.push_back(t);
    pending_.push_back(t.to);
  }
  events.push_back(std::move(result));
  phase_ = Phase::kBackTribute;
  current_ = pending_.front();
}

void Round::ApplyBack(int seat, const Combination& action,
                      std::vector<Event>& events) {
  auto legal = LegalBackTributes(hands_[seat], level_);
  if (std::find(legal.begin(), legal.end(), action) == legal.end()) {
    throw RuleError(RuleError::Code::kIllegalAction,
                    "illegal back-tribute " + action.DebugString());
  }
  const int card = action.cards[0];
  const int payer = PendingTributeFor(seat)->from;
  hands_[seat].Remove(card);
  in_transit_.push_back(Transfer{seat, payer, card});
  history_.push_back(HistoryEntry{seat, Phase::kBackTribute, action});
  pending_.erase(pending_.begin());
  if (!pending_.empty()) {
    current_ = pending_.front();
    return;
  }
  Event result;
  result.kind = Event::Kind::kBackResult;
  for (const auto& t : in_transit_) {
    hands_[t.to].Add(t.card);
    ledger_.push_back(t);
    result.transfers.push_back(t);
  }
  in_transit_.clear();
  events.push_back(std::move(result));
  // The payer of the higher tribute leads.
  BeginPlay(routed_.front().from);
}

int Round::NextActive(int seat) const {
  int s = NextSeat(seat);
  while (finished_[s]) s = NextSeat(s);
  return s;
}

int Round::ActiveCount() const {
  return static_cast<int>(std::count(finished_.begin(), finished_.end(), false));
}

void Round::ApplyPlay(int seat, const Combination& action,
                      std::vector<Event>& events) {
  if (!IsLegalPlay(hands_[seat], greater_action_, level_, action)) {
    throw RuleError(RuleError::Code::kIllegalAction,
                    "illegal play " + action.DebugString());
  }
  history_.push_back(HistoryEntry{seat, Phase::kPlay, action});
  Event played;
  played.kind = Event::Kind::kPlay;
  played.seat = seat;
  played.action = action;

  if (action.IsPass()) {
    ++passes_;
    played.greater_seat = greater_seat_;
    played.greater_action = *greater_action_;
    events.push_back(played);
    const int g = greater_seat_;
    const int responders = ActiveCount() - (finished_[g] ? 0 : 1);
    if (passes_ < responders) {
      current_ = NextActive(seat);
      return;
    }
    // Everyone still holding cards passed: the trick closes.
    int leader = g;
    if (finished_[g]) {
      leader = !finished_[PartnerOf(g)] ? PartnerOf(g) : NextActive(g);
    }
    BeginPlay(leader);
    return;
  }

  for (int i = 0; i < action.size; ++i) hands_[seat].Remove(action.cards[i]);
  greater_seat_ = seat;
  greater_action_ = action;
  passes_ = 0;
  played.greater_seat = seat;
  played.greater_action = action;
  events.push_back(played);
  if (hands_[seat].Empty()) {
    finished_[seat] = true;
    finish_order_.push_back(seat);
    const bool double_win = finish_order_.size() == 2 &&
                            TeamOf(finish_order_[0]) == TeamOf(finish_order_[1]);
    if (finish_order_.size() == 3 || double_win) {
      FinishRound(events);
      return;
    }
  }
  current_ = NextActive(seat);
}

void Round::FinishRound(std::vector<Event>& events) {
  std::vector<int> rest;
  for (int s = 0; s < kNumSeats; ++s) {
    if (!finished_[s]) rest.push_back(s);
  }
  const int banker = finish_order_.front();
  // Fewer cards left ranks higher; ties go to the seat reached first
  // counterclockwise from the Banker.
  std::sort(rest.begin(), rest.end(), [&](int a, int b) {
    if (hands_[a].Total() != hands_[b].Total()) {
      return hands_[a].Total() < hands_[b].Total();
    }
    return (a - banker + kNumSeats) % kNumSeats <
           (b - banker + kNumSeats) % kNumSeats;
  });
  std::size_t i = 0;
  for (int s : finish_order_) full_order_[i++] = s;
  for (int s : rest) full_order_[i++] = s;
  phase_ = Phase::kSettled;
  greater_action_.reset();
  greater_seat_ = -1;
  Event over;
  over.kind = Event::Kind::kRoundOver;
  over.order = full_order_;
  events.push_back(over);
}

std::array<int, kNumSeats> Round::FullOrder() const {
  if (!IsOver()) {
    throw RuleError(RuleError::Code::kInvalidState, "round is not over");
  }
  return full_order_;
}

RoleMap Round::Roles() const {
  auto order = FullOrder();
  RoleMap roles{};
  for (int i = 0; i < kNumSeats; ++i) roles[order[i]] = static_cast<Role>(i);
  return roles;
}

std::string Round::CheckInvariants() const {
  std::array<int, kNumCardKinds> total{};
  for (const auto& h : hands_) {
    if (h.Total() > kHandSize + 1) return "hand larger than 28 cards";
    for (int id = 0; id < kNumCardKinds; ++id) total[id] += h[id];
  }
  for (const auto& e : history_) {
    if (e.phase != Phase::kPlay) continue;
    for (int i = 0; i < e.action.size; ++i) ++total[e.action.cards[i]];
  }
  for (const auto& t : in_transit_) ++total[t.card];
  for (int id = 0; id < kNumCardKinds; ++id) {
    if (total[id] != 2) return "card conservation broken for " + CardCode(id);
  }
  for (int s = 0; s < kNumSeats; ++s) {
    const int seen = CountOf(finish_order_, s);
    if (seen > 1) return "seat finished twice";
    if ((seen == 1) != finished_[s]) return "finish flags out of sync";
    if (phase_ != Phase::kTribute && phase_ != Phase::kBackTribute &&
        finished_[s] != hands_[s].Empty()) {
      return "empty hand not recorded as finished";
    }
  }
  if (greater_action_.has_value() != (greater_seat_ >= 0)) {
    return "greater action and seat disagree";
  }
  if (greater_action_) {
    auto last = std::find_if(history_.rbegin(), history_.rend(),
                             [](const HistoryEntry& e) {
                               return e.phase == Phase::kPlay &&
                                      !e.action.IsPass();
                             });
    if (last == history_.rend() || last->seat != greater_seat_ ||
        !(last->action == *greater_action_)) {
      return "greater action is not the last play";
    }
  }
  if (!IsOver()) {
    if (finished_[current_]) return "finished seat is to act";
    if (phase_ == Phase::kPlay && greater_action_ && passes_ >= ActiveCount()) {
      return "trick should have closed";
    }
  } else {
    std::array<int, kNumSeats> seen{};
    for (int s : full_order_) ++seen[s];
    for (int c : seen) {
      if (c != 1) return "final order is not a permutation";
    }
  }
  return "";
}

std::uint64_t Round::StateHash() const {
  std::uint64_t h = kFnvOffset;
  HashByte(h, static_cast<std::uint8_t>(phase_));
  HashByte(h, static_cast<std::uint8_t>(level_.rank()));
  HashInt(h, current_);
  for (const auto& hand : hands_) {
    for (auto c : hand.raw()) HashByte(h, c);
  }
  HashInt(h, greater_seat_);
  if (greater_action_) HashCombination(h, *greater_action_);
  HashInt(h, passes_);
  for (int s : finish_order_) HashInt(h, s);
  for (const auto& t : in_transit_) {
    HashInt(h, t.from);
    HashInt(h, t.card);
  }
  HashInt(h, static_cast<int>(history_.size()));
  return h;
}

MatchState StartMatch(std::uint64_t seed) {
  MatchState m;
  m.seed = seed;
  return m;
}

Round StartRound(const MatchState& match) {
  if (match.terminated) {
    throw RuleError(RuleError::Code::kInvalidState, "match has terminated");
  }
  const auto index = static_cast<std::uint64_t>(match.round_index);
  Deal deal = ShuffleDeal(MixSeed(match.seed, 2 * index));
  Rng rng(MixSeed(match.seed, 2 * index + 1));
  return Round(Level(match.round_level), deal, match.last_round_roles, rng);
}

RoundResult ScoreRound(const std::array<int, kNumSeats>& order,
                       Rank round_level) {
  RoundResult r;
  r.order = order;
  r.round_level = round_level;
  for (int i = 0; i < kNumSeats; ++i) r.roles[order[i]] = static_cast<Role>(i);
  const int banker = order[0];
  r.winning_team = TeamOf(banker);
  const int partner_pos = static_cast<int>(r.roles[PartnerOf(banker)]);
  r.level_delta = kNumSeats - partner_pos;
  const bool zero = round_level == Rank::kAce && partner_pos == 3;
  for (int s = 0; s < kNumSeats; ++s) {
    const int sign = TeamOf(s) == r.winning_team ? 1 : -1;
    r.rewards[s] = zero ? 0 : sign * r.level_delta;
  }
  return r;
}

RoundResult SettleRound(const Round& round, MatchState& match) {
  if (!round.IsOver()) {
    throw RuleError(RuleError::Code::kInvalidState, "round is not finished");
  }
  return SettleOrder(round.FullOrder(), match);
}

RoundResult SettleOrder(const std::array<int, kNumSeats>& order,
                        MatchState& match) {
  if (match.terminated) {
    throw RuleError(RuleError::Code::kInvalidState, "match has terminated");
  }
  RoundResult r = ScoreRound(order, match.round_level);
  const int win = r.winning_team;
  const int dweller_team = TeamOf(r.order[3]);
  const bool a_round = match.round_level == Rank::kAce;
  const bool winner_at_a = match.team_levels[win] == Rank::kAce;

  for (int t = 0; t < 2; ++t) {
    if (a_round && match.team_levels[t] == Rank::kAce && dweller_team == t) {
      ++match.a_strikes[t];
    }
  }
  if (a_round && winner_at_a && dweller_team != win) {
    match.terminated = true;
    match.winning_team = win;
    r.match_over = true;
  } else {
    const int raised =
        std::min(RankIndex(Rank::kAce),
                 RankIndex(match.team_levels[win]) + r.level_delta);
    match.team_levels[win] = RankFromIndex(raised);
    for (int t = 0; t < 2; ++t) {
      if (match.a_strikes[t] >= 3) {
        match.team_levels[t] = Rank::kTwo;
        match.a_strikes[t] = 0;
      }
    }
    match.round_level = match.team_levels[win];
  }
  match.last_round_roles = r.roles;
  ++match.round_index;
  r.team_levels_after = match.team_levels;
  return r;
}

MatchRecord RunMatch(std::span<Player* const, kNumSeats> players,
                     std::uint64_t seed, const RunOptions& options) {
  MatchRecord record;
  record.seed = seed;
  MatchState match = StartMatch(seed);
  std::vector<Combination> legal;
  while (!match.terminated) {
    Round round = StartRound(match);
    while (!round.IsOver()) {
      round.LegalActionsInto(legal);
      const int seat = round.current_seat();
      const int index = players[seat]->SelectAction(round, match, seat, legal);
      if (index < 0 || index >= static_cast<int>(legal.size())) {
        throw AgentFault(seat, "seat " + std::to_string(seat) +
                                   " chose index " + std::to_string(index) +
                                   " outside [0, " +
                                   std::to_string(legal.size() - 1) + "]");
      }
      RecordStep step;
      step.round_index = match.round_index;
      step.seat = seat;
      step.phase = round.phase();
      step.action = legal[index];
      round.Apply(seat, step.action);
      for (int s = 0; s < kNumSeats; ++s) step.hand_sizes[s] = round.hand(s).Total();
      step.state_hash = round.StateHash();
      record.steps.push_back(step);
      if (options.check_invariants) {
        if (auto err = round.CheckInvariants(); !err.empty()) {
          throw std::logic_error("invariant violated at step " +
                                 std::to_string(record.steps.size()) + ": " +
                                 err);
        }
      }
      if (record.steps.size() > options.max_steps) {
        throw std::runtime_error("match exceeded step ceiling");
      }
    }
    record.rounds.push_back(SettleRound(round, match));
  }
  record.final_levels = match.team_levels;
  record.winning_team = *match.winning_team;
  return record;
}

MatchState Replay(const MatchRecord& record, ReplayObserver* observer) {
  MatchState match = StartMatch(record.seed);
  std::size_t i = 0;
  std::size_t round_no = 0;
  while (!match.terminated) {
    Round round = StartRound(match);
    while (!round.IsOver()) {
      if (i >= record.steps.size()) {
        throw ReplayMismatch(i, "record ends before the round does");
      }
      const RecordStep& step = record.steps[i];
      if (step.round_index != match.round_index || step.seat != round.current_seat() ||
          step.phase != round.phase()) {
        throw ReplayMismatch(i, "expected seat " +
                                    std::to_string(round.current_seat()) +
                                    " in phase " +
                                    std::string(PhaseName(round.phase())));
      }
      if (observer) observer->BeforeStep(i, step, round, match);
      try {
        round.Apply(step.seat, step.action);
      } catch (const RuleError& e) {
        throw ReplayMismatch(i, e.what());
      }
      for (int s = 0; s < kNumSeats; ++s) {
        if (round.hand(s).Total() != step.hand_sizes[s]) {
          throw ReplayMismatch(i, "hand size mismatch");
        }
      }
      if (round.StateHash() != step.state_hash) {
        throw ReplayMismatch(i, "state hash mismatch");
      }
      ++i;
    }
    RoundResult result = SettleRound(round, match);
    if (round_no >= record.rounds.size()) {
      throw ReplayMismatch(i, "record is missing a round result");
    }
    const RoundResult& expected = record.rounds[round_no];
    if (expected.order != result.order || expected.rewards != result.rewards ||
        expected.level_delta != result.level_delta ||
        expected.match_over != result.match_over ||
        expected.team_levels_after != result.team_levels_after) {
      throw ReplayMismatch(i, "round result mismatch");
    }
    if (observer) observer->AfterRound(round, result, match);
    ++round_no;
  }
  if (i != record.steps.size() || round_no != record.rounds.size()) {
    throw ReplayMismatch(i, "record continues after the match ended");
  }
  if (match.team_levels != record.final_levels ||
      match.winning_team != record.winning_team) {
    throw ReplayMismatch(i, "final result mismatch");
  }
  return match;
}

namespace {

constexpr std::string_view kRecordFormat = "guandan-match-record";
constexpr int kRecordVersion = 1;

nlohmann::json LevelsToJson(const std::array<Rank, 2>& levels) {
  return nlohmann::json::array({RankString(levels[0]), RankString(levels[1])});
}

std::array<Rank, 2> LevelsFromJson(const nlohmann::json& j) {
  return {RankFromString(j.at(0).get<std::string>()),
          RankFromString(j.at(1).get<std::string>())};
}

}  // namespace

void WriteRecord(const MatchRecord& record, std::ostream& os) {
  using nlohmann::json;
  os << json{{"format", kRecordFormat},
             {"version", kRecordVersion},
             {"seed", record.seed}}
            .dump()
     << '\n';
  std::size_t step = 0;
  for (std::size_t r = 0; r < record.rounds.size(); ++r) {
    for (; step < record.steps.size() &&
           record.steps[step].round_index == static_cast<int>(r);
         ++step) {
      const RecordStep& s = record.steps[step];
      os << json{{"kind", "step"},
                 {"round", s.round_index},
                 {"seat", s.seat},
                 {"phase", PhaseName(s.phase)},
                 {"act", ActionToWire(s.action, s.phase)},
                 {"hands", s.hand_sizes},
                 {"hash", HexHash(s.state_hash)}}
                .dump()
         << '\n';
    }
    const RoundResult& rr = record.rounds[r];
    os << json{{"kind", "round"},
               {"round", r},
               {"order", rr.order},
               {"curRank", RankString(rr.round_level)},
               {"delta", rr.level_delta},
               {"rewards", rr.rewards},
               {"levels", LevelsToJson(rr.team_levels_after)},
               {"matchOver", rr.match_over}}
              .dump()
       << '\n';
  }
  os << json{{"kind", "result"},
             {"victory", record.winning_team},
             {"victoryRank", LevelsToJson(record.final_levels)}}
            .dump()
     << '\n';
}

MatchRecord ReadRecord(std::istream& is) {
  using nlohmann::json;
  MatchRecord record;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_result = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      if (!have_header) {
        if (j.at("format") != kRecordFormat || j.at("version") != kRecordVersion) {
          throw std::runtime_error("unsupported record format");
        }
        record.seed = j.at("seed").get<std::uint64_t>();
        have_header = true;
        continue;
      }
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "step") {
        RecordStep s;
        s.round_index = j.at("round").get<int>();
        s.seat = j.at("seat").get<int>();
        s.phase = PhaseFromName(j.at("phase").get<std::string>());
        s.action = ActionFromWire(j.at("act"), s.phase);
        s.hand_sizes = j.at("hands").get<std::array<int, kNumSeats>>();
        s.state_hash = ParseHexHash(j.at("hash").get<std::string>());
        record.steps.push_back(s);
      } else if (kind == "round") {
        RoundResult r;
        r.order = j.at("order").get<std::array<int, kNumSeats>>();
        r.round_level = RankFromString(j.at("curRank").get<std::string>());
        r.level_delta = j.at("delta").get<int>();
        r.rewards = j.at("rewards").get<std::array<int, kNumSeats>>();
        r.team_levels_after = LevelsFromJson(j.at("levels"));
        r.match_over = j.at("matchOver").get<bool>();
        for (int i = 0; i < kNumSeats; ++i) {
          r.roles[r.order[i]] = static_cast<Role>(i);
        }
        r.winning_team = TeamOf(r.order[0]);
        record.rounds.push_back(r);
      } else if (kind == "result") {
        record.winning_team = j.at("victory").get<int>();
        record.final_levels = LevelsFromJson(j.at("victoryRank"));
        have_result = true;
      } else {
        throw std::runtime_error("unknown record kind: " + kind);
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("record line " + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  if (!have_header) throw std::runtime_error("empty match record");
  if (!have_result) throw std::runtime_error("match record has no result line");
  return record;
}

}  // namespace guandan
