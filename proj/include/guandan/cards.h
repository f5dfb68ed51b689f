#ifndef GUANDAN_CARDS_H_
#define GUANDAN_CARDS_H_

#include <array>
#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace guandan {

// Ranks in natural order. kTwo..kAce index 0..12; jokers follow.
enum class Rank : std::uint8_t {
  kTwo = 0,
  kThree,
  kFour,
  kFive,
  kSix,
  kSeven,
  kEight,
  kNine,
  kTen,
  kJack,
  kQueen,
  kKing,
  kAce,
  kBlackJoker,
  kRedJoker,
};

enum class Suit : std::uint8_t { kSpade = 0, kHeart, kClub, kDiamond };

inline constexpr int kNumRanks = 15;
inline constexpr int kNumNormalRanks = 13;
inline constexpr int kNumSuits = 4;
// Distinct card identities: 52 suited cards + 2 jokers.
inline constexpr int kNumCardKinds = 54;
inline constexpr int kDeckSize = 108;
inline constexpr int kHandSize = 27;
inline constexpr int kNumSeats = 4;

constexpr int RankIndex(Rank r) { return static_cast<int>(r); }
constexpr Rank RankFromIndex(int i) { return static_cast<Rank>(i); }
constexpr bool IsJoker(Rank r) { return r >= Rank::kBlackJoker; }

// Single-character rank label: '2'..'9', 'T', 'J', 'Q', 'K', 'A', 'B', 'R'.
char RankChar(Rank r);
Rank RankFromChar(char c);
std::string RankString(Rank r);
Rank RankFromString(std::string_view s);

// The current round level. Only 2..A are valid levels.
class Level {
 public:
  constexpr Level() = default;
  explicit Level(Rank r);

  constexpr Rank rank() const { return rank_; }
  friend constexpr bool operator==(Level, Level) = default;

 private:
  Rank rank_ = Rank::kTwo;
};

enum class RankOrder {
  // Singles/pairs/triples/bombs: the level rank sits between A and the
  // black joker.
  kElevated,
  // Sequences (straights, tubes, plates): 2 < 3 < ... < A, no jokers.
  kNatural,
};

// Strength of a rank under the elevated order: 0..12 for non-level ranks,
// 13 for the level rank, 14/15 for the black/red joker.
int ElevatedValue(Rank r, Level level);

// Throws std::invalid_argument for a joker under RankOrder::kNatural.
std::strong_ordering CompareRank(Rank a, Rank b, Level level, RankOrder mode);

struct Card {
  Suit suit = Suit::kSpade;
  Rank rank = Rank::kTwo;

  // Dense id in [0, 54): rank * 4 + suit for suited cards, 52 = black
  // joker, 53 = red joker. Ascending id is natural rank order, suits S,H,C,D.
  constexpr int Id() const {
    if (rank == Rank::kBlackJoker) return 52;
    if (rank == Rank::kRedJoker) return 53;
    return RankIndex(rank) * kNumSuits + static_cast<int>(suit);
  }
  static constexpr Card FromId(int id) {
    if (id == 52) return Card{Suit::kSpade, Rank::kBlackJoker};
    if (id == 53) return Card{Suit::kHeart, Rank::kRedJoker};
    return Card{static_cast<Suit>(id % kNumSuits),
                RankFromIndex(id / kNumSuits)};
  }

  // Two-character code, e.g. "S2", "HT", "DA"; jokers are "SB" and "HR".
  std::string Code() const;
  static Card FromCode(std::string_view code);

  bool IsWild(Level level) const {
    return suit == Suit::kHeart && rank == level.rank();
  }

  friend constexpr bool operator==(const Card&, const Card&) = default;
};

constexpr int WildCardId(Level level) {
  return RankIndex(level.rank()) * kNumSuits + static_cast<int>(Suit::kHeart);
}
constexpr Rank CardRank(int id) { return Card::FromId(id).rank; }
constexpr Suit CardSuit(int id) { return Card::FromId(id).suit; }
std::string CardCode(int id);
int CardIdFromCode(std::string_view code);

// A multiset over the 54 card kinds; each count is in [0, 2].
class CardCounts {
 public:
  CardCounts() { counts_.fill(0); }

  int operator[](int id) const { return counts_[id]; }
  void Add(int id, int n = 1);
  // Throws std::invalid_argument if fewer than n copies are present.
  void Remove(int id, int n = 1);
  int Total() const { return total_; }
  bool Empty() const { return total_ == 0; }
  bool Contains(const CardCounts& other) const;
  int CountRank(Rank r) const;

  // Card ids in ascending order, duplicates repeated.
  std::vector<int> ToIds() const;
  std::vector<std::string> ToCodes() const;
  static CardCounts FromIds(std::span<const int> ids);
  static CardCounts FromCodes(std::span<const std::string> codes);

  const std::array<std::uint8_t, kNumCardKinds>& raw() const {
    return counts_;
  }
  friend bool operator==(const CardCounts&, const CardCounts&) = default;

 private:
  std::array<std::uint8_t, kNumCardKinds> counts_;
  int total_ = 0;
};

// The canonical 108-card deck in ascending id order.
std::vector<int> BuildDeck();

// splitmix64 finalizer over (seed, stream); used to derive independent
// child seeds for rounds, matches and agents.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

// Seedable generator. std::mt19937_64 output is fixed by the standard, and
// Uniform() avoids the implementation-defined distributions, so shuffles
// replay identically across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t Uniform(std::uint64_t bound);
  Rng Split(std::uint64_t stream) { return Rng(MixSeed(Next(), stream)); }

 private:
  std::mt19937_64 engine_;
};

void ShuffleCards(std::vector<int>& cards, Rng& rng);

struct Deal {
  std::vector<int> deck_order;  // shuffled deck, top first
  std::array<CardCounts, kNumSeats> hands;
};

// Shuffles the canonical deck and deals 27 consecutive cards to each seat.
Deal ShuffleDeal(std::uint64_t seed);

}  // namespace guandan

#endif  // GUANDAN_CARDS_H_
