#ifndef GUANDAN_WIRE_H_
#define GUANDAN_WIRE_H_

#include <json.hpp>

#include "guandan/combos.h"
#include "guandan/engine.h"

namespace guandan {

// Three-element action form: [type, key rank, [card codes]]. Pass is
// ["PASS","PASS","PASS"], tributes ["tribute","tribute",[code]] and
// back-tributes ["back","back",[code]].
nlohmann::json ActionToWire(const Combination& action, Phase phase);

// Inverse of ActionToWire. Throws std::invalid_argument on malformed input
// or a label that does not belong to `phase`.
Combination ActionFromWire(const nlohmann::json& wire, Phase phase);

nlohmann::json CardsToWire(const CardCounts& cards);

}  // namespace guandan

#endif  // GUANDAN_WIRE_H_
