#include "guandan/agents.h"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace guandan {

ActRequest BuildActRequest(const Round& round, const MatchState& match, int seat,
                           std::span<const Combination> legal) {
  ActRequest r;
  r.stage = round.phase();
  r.seat = seat;
  r.hand = round.hand(seat);
  for (int s = 0; s < kNumSeats; ++s) r.rest[s] = round.hand(s).Total();
  r.self_rank = match.team_levels[TeamOf(seat)];
  r.oppo_rank = match.team_levels[1 - TeamOf(seat)];
  r.cur_rank = round.level().rank();
  const auto& history = round.history();
  if (!history.empty() && history.back().phase == Phase::kPlay) {
    r.cur_pos = history.back().seat;
    r.cur_action = history.back().action;
  }
  r.greater_pos = round.greater_seat();
  r.greater_action = round.greater_action();
  if (auto t = round.PendingTributeFor(seat)) {
    r.tribute_pos = t->from;
    r.tribute_card = t->card;
  }
  r.action_list.assign(legal.begin(), legal.end());
  return r;
}

int RandomAgent::OnActRequest(const ActRequest& request) {
  return static_cast<int>(rng_.Uniform(request.action_list.size()));
}

int GreedyAgent::OnActRequest(const ActRequest& request) {
  const auto& list = request.action_list;
  const Level level(request.cur_rank);
  auto pick = [&](auto eligible, auto cost) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(list.size()); ++i) {
      if (!eligible(list[i])) continue;
      if (best < 0 || cost(list[i]) < cost(list[best])) best = i;
    }
    return best;
  };

  if (request.stage != Phase::kPlay) {
    return std::max(0, pick([](const Combination&) { return true; },
                            [&](const Combination& c) {
                              return ElevatedValue(CardRank(c.cards[0]), level);
                            }));
  }
  auto strength = [&](const Combination& c) {
    return std::make_tuple(c.IsBomb(), c.IsBomb() ? BombTier(c) : 0,
                           static_cast<int>(c.size), KeyStrength(c, level));
  };
  if (!request.greater_action) {
    return std::max(0, pick([](const Combination& c) { return !c.IsPass(); },
                            strength));
  }
  auto cheaper = [&](const Combination& c) {
    return std::make_tuple(KeyStrength(c, level), static_cast<int>(c.size));
  };
  int i = pick([](const Combination& c) { return !c.IsPass() && !c.IsBomb(); },
               cheaper);
  if (i >= 0) return i;
  if (request.hand.Total() <= bomb_reserve_) {
    i = pick([](const Combination& c) { return c.IsBomb(); }, strength);
    if (i >= 0) return i;
  }
  return std::max(0, pick([](const Combination& c) { return c.IsPass(); },
                          [](const Combination&) { return 0; }));
}

std::vector<std::string> AgentNames() { return {"random", "greedy"}; }

std::unique_ptr<Agent> MakeAgent(std::string_view name, std::uint64_t seed) {
  if (name == "random") return std::make_unique<RandomAgent>(seed);
  if (name == "greedy") return std::make_unique<GreedyAgent>();
  throw std::invalid_argument("unknown agent: " + std::string(name));
}

int AgentPlayer::SelectAction(const Round& round, const MatchState& match,
                              int seat, std::span<const Combination> legal) {
  return agent_.OnActRequest(BuildActRequest(round, match, seat, legal));
}

}  // namespace guandan
