#ifndef GUANDAN_COMBOS_H_
#define GUANDAN_COMBOS_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "guandan/cards.h"

namespace guandan {

enum class ComboType : std::uint8_t {
  kSingle = 0,
  kPair,
  kTriple,
  kTube,       // three consecutive pairs
  kPlate,      // two consecutive triples
  kFullHouse,  // triple + pair
  kStraight,
  kBomb,       // four or more of one rank
  kStraightFlush,
  kJokerBomb,
  kPass,
};

inline constexpr int kNumComboTypes = 10;  // excludes kPass
// Eight natural cards of one rank plus both wild cards.
inline constexpr int kMaxComboSize = 10;

// Wire names: "Single", "Pair", ..., "JokerBomb"; kPass is "PASS".
std::string_view ComboTypeName(ComboType t);
ComboType ComboTypeFromName(std::string_view name);

// A concrete play. Identity (equality and canonical order) is the triple
// (type, key, card multiset); the wild assignment is carried along for
// inspection only.
struct Combination {
  ComboType type = ComboType::kPass;
  Rank key = Rank::kTwo;
  std::uint8_t size = 0;
  std::array<std::uint8_t, kMaxComboSize> cards{};  // ascending card ids
  // Rank each wild card in `cards` stands for, in card order. A wild played
  // as its own level rank maps to the level.
  std::uint8_t num_wilds = 0;
  std::array<Rank, 2> wild_ranks{};

  static Combination Pass() { return Combination{}; }
  // A one-card action (singles, tributes, back-tributes).
  static Combination SingleCard(int card_id);

  bool IsPass() const { return type == ComboType::kPass; }
  bool IsBomb() const {
    return type == ComboType::kBomb || type == ComboType::kStraightFlush ||
           type == ComboType::kJokerBomb;
  }
  std::span<const std::uint8_t> Cards() const { return {cards.data(), size}; }
  CardCounts ToCounts() const;
  std::vector<std::string> CardCodes() const;
  std::string DebugString() const;

  friend bool operator==(const Combination& a, const Combination& b) {
    return a.type == b.type && a.key == b.key && a.size == b.size &&
           std::equal(a.cards.begin(), a.cards.begin() + a.size,
                      b.cards.begin());
  }
  // Canonical order: type, key (natural index), then cards
  // lexicographically. Pass sorts first.
  friend std::strong_ordering operator<=>(const Combination& a,
                                          const Combination& b);
};

// Comparison key within a type: elevated rank value for
// single/pair/triple/full house/bomb, natural rank for sequences.
int KeyStrength(const Combination& c, Level level);

// Bomb class: 4-card bomb 0, 5-card 1, straight flush 2, n-card bomb n-3
// for n >= 6, joker bomb 8. -1 for non-bombs.
int BombTier(const Combination& c);

// True iff `challenger` may be played over `incumbent`. Pass never beats
// and is never beaten.
bool Beats(const Combination& challenger, const Combination& incumbent,
           Level level);

// Every legal play from `hand`, in canonical order. With an incumbent,
// Pass comes first followed by everything that beats it; without one (a
// lead) Pass is excluded. Throws std::invalid_argument on an empty hand.
std::vector<Combination> LegalPlays(
    const CardCounts& hand, const std::optional<Combination>& incumbent,
    Level level);
// Same, appending into `out` after clearing it; reuses capacity.
void LegalPlaysInto(const CardCounts& hand,
                    const std::optional<Combination>& incumbent, Level level,
                    std::vector<Combination>& out);

// Every interpretation of exactly `cards` (all cards used), canonical order.
std::vector<Combination> Classify(const CardCounts& cards, Level level);

// True iff `action` is one of LegalPlays(hand, incumbent, level). Cheaper
// than generating the full list.
bool IsLegalPlay(const CardCounts& hand,
                 const std::optional<Combination>& incumbent, Level level,
                 const Combination& action);

// Highest-ranked cards under the elevated order, one action per distinct
// card; heart level cards (wilds) are never surrendered.
std::vector<Combination> LegalTributes(const CardCounts& hand, Level level);

// Cards of natural rank 2..10, one action per distinct card. If there are
// none, falls back to the cards of lowest elevated rank.
std::vector<Combination> LegalBackTributes(const CardCounts& hand,
                                           Level level);

}  // namespace guandan

#endif  // GUANDAN_COMBOS_H_
