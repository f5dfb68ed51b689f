#include "guandan/cards.h"

#include <algorithm>

namespace guandan {
namespace {

constexpr std::string_view kRankChars = "23456789TJQKABR";
constexpr std::string_view kSuitChars = "SHCD";

}  // namespace

char RankChar(Rank r) { return kRankChars[RankIndex(r)]; }

Rank RankFromChar(char c) {
  auto pos = kRankChars.find(c);
  if (pos == std::string_view::npos) {
    throw std::invalid_argument(std::string("bad rank character: ") + c);
  }
  return RankFromIndex(static_cast<int>(pos));
}

std::string RankString(Rank r) { return std::string(1, RankChar(r)); }

Rank RankFromString(std::string_view s) {
  if (s.size() != 1) {
    throw std::invalid_argument("bad rank string: " + std::string(s));
  }
  return RankFromChar(s[0]);
}

Level::Level(Rank r) : rank_(r) {
  if (IsJoker(r)) throw std::invalid_argument("a joker cannot be a level");
}

int ElevatedValue(Rank r, Level level) {
  if (r == Rank::kRedJoker) return 15;
  if (r == Rank::kBlackJoker) return 14;
  if (r == level.rank()) return 13;
  return RankIndex(r);
}

std::strong_ordering CompareRank(Rank a, Rank b, Level level,
                                 RankOrder mode) {
  if (mode == RankOrder::kNatural) {
    if (IsJoker(a) || IsJoker(b)) {
      throw std::invalid_argument("jokers have no natural sequence order");
    }
    return RankIndex(a) <=> RankIndex(b);
  }
  return ElevatedValue(a, level) <=> ElevatedValue(b, level);
}

std::string Card::Code() const {
  std::string code(2, ' ');
  code[0] = kSuitChars[static_cast<int>(suit)];
  code[1] = RankChar(rank);
  return code;
}

Card Card::FromCode(std::string_view code) {
  if (code == "SB") return Card{Suit::kSpade, Rank::kBlackJoker};
  if (code == "HR") return Card{Suit::kHeart, Rank::kRedJoker};
  if (code.size() != 2) {
    throw std::invalid_argument("bad card code: " + std::string(code));
  }
  auto suit = kSuitChars.find(code[0]);
  auto rank = kRankChars.find(code[1]);
  if (suit == std::string_view::npos || rank == std::string_view::npos ||
      rank >= static_cast<std::size_t>(kNumNormalRanks)) {
    throw std::invalid_argument("bad card code: " + std::string(code));
  }
  return Card{static_cast<Suit>(suit), RankFromIndex(static_cast<int>(rank))};
}

std::string CardCode(int id) { return Card::FromId(id).Code(); }
int CardIdFromCode(std::string_view code) { return Card::FromCode(code).Id(); }

void CardCounts::Add(int id, int n) {
  if (id < 0 || id >= kNumCardKinds || counts_[id] + n > 2) {
    throw std::invalid_argument("card multiplicity exceeds two decks");
  }
  counts_[id] = static_cast<std::uint8_t>(counts_[id] + n);
  total_ += n;
}

void CardCounts::Remove(int id, int n) {
  if (id < 0 || id >= kNumCardKinds || counts_[id] < n) {
    throw std::invalid_argument("card not present: " +
                                (id >= 0 && id < kNumCardKinds
                                     ? CardCode(id)
                                     : std::to_string(id)));
  }
  counts_[id] = static_cast<std::uint8_t>(counts_[id] - n);
  total_ -= n;
}

bool CardCounts::Contains(const CardCounts& other) const {
  for (int i = 0; i < kNumCardKinds; ++i) {
    if (other.counts_[i] > counts_[i]) return false;
  }
  return true;
}

int CardCounts::CountRank(Rank r) const {
  if (r == Rank::kBlackJoker) return counts_[52];
  if (r == Rank::kRedJoker) return counts_[53];
  int base = RankIndex(r) * kNumSuits;
  return counts_[base] + counts_[base + 1] + counts_[base + 2] +
         counts_[base + 3];
}

std::vector<int> CardCounts::ToIds() const {
  std::vector<int> ids;
  ids.reserve(total_);
  for (int i = 0; i < kNumCardKinds; ++i) {
    for (int c = 0; c < counts_[i]; ++c) ids.push_back(i);
  }
  return ids;
}

std::vector<std::string> CardCounts::ToCodes() const {
  std::vector<std::string> codes;
  codes.reserve(total_);
  for (int id : ToIds()) codes.push_back(CardCode(id));
  return codes;
}

CardCounts CardCounts::FromIds(std::span<const int> ids) {
  CardCounts counts;
  for (int id : ids) counts.Add(id);
  return counts;
}

CardCounts CardCounts::FromCodes(std::span<const std::string> codes) {
  CardCounts counts;
  for (const auto& code : codes) counts.Add(CardIdFromCode(code));
  return counts;
}

std::vector<int> BuildDeck() {
  std::vector<int> deck;
  deck.reserve(kDeckSize);
  for (int id = 0; id < kNumCardKinds; ++id) {
    deck.push_back(id);
    deck.push_back(id);
  }
  return deck;
}

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::Uniform(std::uint64_t bound) {
  // Values below 2^64 mod bound would bias the low residues.
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t x;
  do {
    x = Next();
  } while (x < threshold);
  return x % bound;
}

void ShuffleCards(std::vector<int>& cards, Rng& rng) {
  for (std::size_t i = cards.size(); i > 1; --i) {
    std::size_t j = rng.Uniform(i);
    std::swap(cards[i - 1], cards[j]);
  }
}

Deal ShuffleDeal(std::uint64_t seed) {
  Deal deal;
  deal.deck_order = BuildDeck();
  Rng rng(seed);
  ShuffleCards(deal.deck_order, rng);
  for (int i = 0; i < kDeckSize; ++i) {
    deal.hands[i / kHandSize].Add(deal.deck_order[i]);
  }
  return deal;
}

}  // namespace guandan
