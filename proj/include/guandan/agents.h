#ifndef GUANDAN_AGENTS_H_
#define GUANDAN_AGENTS_H_

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "guandan/engine.h"

namespace guandan {

// Everything an acting seat is told: the contents of an 'act' message.
struct ActRequest {
  Phase stage = Phase::kPlay;
  int seat = 0;
  CardCounts hand;
  std::array<int, kNumSeats> rest{};
  Rank self_rank = Rank::kTwo;
  Rank oppo_rank = Rank::kTwo;
  Rank cur_rank = Rank::kTwo;
  // Latest action of the round and the open trick's incumbent; -1 and
  // empty when there is none.
  int cur_pos = -1;
  std::optional<Combination> cur_action;
  int greater_pos = -1;
  std::optional<Combination> greater_action;
  // Back-tribute only.
  int tribute_pos = -1;
  int tribute_card = -1;
  std::vector<Combination> action_list;

  int index_range() const { return static_cast<int>(action_list.size()) - 1; }
};

ActRequest BuildActRequest(const Round& round, const MatchState& match, int seat,
                           std::span<const Combination> legal);

class Agent {
 public:
  virtual ~Agent() = default;
  // Returns an index into request.action_list.
  virtual int OnActRequest(const ActRequest& request) = 0;
  virtual void OnNotification(const nlohmann::json& /*message*/) {}
};

class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}
  int OnActRequest(const ActRequest& request) override;

 private:
  Rng rng_;
};

// Leads its smallest combination, follows with the cheapest non-bomb that
// beats the incumbent, and spends bombs only once its hand is down to
// `bomb_reserve` cards. Tributes and back-tributes give the lowest card.
class GreedyAgent : public Agent {
 public:
  explicit GreedyAgent(int bomb_reserve = 8) : bomb_reserve_(bomb_reserve) {}
  int OnActRequest(const ActRequest& request) override;

 private:
  int bomb_reserve_;
};

// Registered names: "random", "greedy".
std::vector<std::string> AgentNames();
// Throws std::invalid_argument for an unknown name.
std::unique_ptr<Agent> MakeAgent(std::string_view name, std::uint64_t seed);

// Drives an Agent from the in-process engine.
class AgentPlayer : public Player {
 public:
  explicit AgentPlayer(Agent& agent) : agent_(agent) {}
  int SelectAction(const Round& round, const MatchState& match, int seat,
                   std::span<const Combination> legal) override;

 private:
  Agent& agent_;
};

}  // namespace guandan

#endif  // GUANDAN_AGENTS_H_
