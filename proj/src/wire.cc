#include "guandan/wire.h"

#include <algorithm>
#include <stdexcept>

namespace guandan {

using nlohmann::json;

json CardsToWire(const CardCounts& cards) { return json(cards.ToCodes()); }

json ActionToWire(const Combination& action, Phase phase) {
  if (phase == Phase::kTribute || phase == Phase::kBackTribute) {
    const char* label = phase == Phase::kTribute ? "tribute" : "back";
    return json::array({label, label, json::array({CardCode(action.cards[0])})});
  }
  if (action.IsPass()) return json::array({"PASS", "PASS", "PASS"});
  return json::array({std::string(ComboTypeName(action.type)),
                      RankString(action.key), action.CardCodes()});
}

Combination ActionFromWire(const json& wire, Phase phase) {
  if (!wire.is_array() || wire.size() != 3 || !wire[0].is_string() ||
      !wire[1].is_string()) {
    throw std::invalid_argument("action must be [type, rank, cards]");
  }
  const std::string type = wire[0].get<std::string>();
  if (phase == Phase::kTribute || phase == Phase::kBackTribute) {
    const char* label = phase == Phase::kTribute ? "tribute" : "back";
    if (type != label || wire[1] != label || !wire[2].is_array() ||
        wire[2].size() != 1 || !wire[2][0].is_string()) {
      throw std::invalid_argument(std::string("expected a ") + label +
                                  " action");
    }
    return Combination::SingleCard(
        CardIdFromCode(wire[2][0].get<std::string>()));
  }
  if (type == "PASS") {
    if (wire[1] != "PASS" || wire[2] != "PASS") {
      throw std::invalid_argument("pass must be [PASS, PASS, PASS]");
    }
    return Combination::Pass();
  }
  if (!wire[2].is_array() || wire[2].empty() ||
      wire[2].size() > static_cast<std::size_t>(kMaxComboSize)) {
    throw std::invalid_argument("action cards must be a non-empty array");
  }
  Combination c;
  c.type = ComboTypeFromName(type);
  if (c.type == ComboType::kPass) {
    throw std::invalid_argument("bad pass action");
  }
  c.key = RankFromString(wire[1].get<std::string>());
  std::vector<int> ids;
  for (const auto& code : wire[2]) {
    if (!code.is_string()) throw std::invalid_argument("card codes are strings");
    ids.push_back(CardIdFromCode(code.get<std::string>()));
  }
  std::sort(ids.begin(), ids.end());
  c.size = static_cast<std::uint8_t>(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    c.cards[i] = static_cast<std::uint8_t>(ids[i]);
  }
  return c;
}

}  // namespace guandan
