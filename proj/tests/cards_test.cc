#include <algorithm>
#include <map>
#include <vector>

#include "doctest.h"
#include "guandan/cards.h"

namespace guandan {
namespace {

std::vector<Rank> AllRanks() {
  std::vector<Rank> ranks;
  for (int i = 0; i < kNumRanks; ++i) ranks.push_back(RankFromIndex(i));
  return ranks;
}

TEST_CASE("level card outranks ace under elevated order") {
  Level seven(Rank::kSeven);
  CHECK(CompareRank(Rank::kSeven, Rank::kAce, seven, RankOrder::kElevated) ==
        std::strong_ordering::greater);
  CHECK(CompareRank(Rank::kFive, Rank::kFive, Level(Rank::kJack),
                    RankOrder::kElevated) == std::strong_ordering::equal);
  CHECK(CompareRank(Rank::kSeven, Rank::kBlackJoker, seven,
                    RankOrder::kElevated) == std::strong_ordering::less);
  CHECK(CompareRank(Rank::kSeven, Rank::kAce, seven, RankOrder::kNatural) ==
        std::strong_ordering::less);
}

TEST_CASE("natural order rejects jokers") {
  CHECK_THROWS_AS(CompareRank(Rank::kRedJoker, Rank::kTwo, Level(Rank::kTwo),
                              RankOrder::kNatural),
                  std::invalid_argument);
  CHECK_THROWS_AS(Level(Rank::kBlackJoker), std::invalid_argument);
}

TEST_CASE("elevated order at level 7 sorts by pairwise wins") {
  // Rank each card by how many others it beats, using only CompareRank.
  Level seven(Rank::kSeven);
  std::vector<Rank> ranks = AllRanks();
  std::map<Rank, int> wins;
  for (Rank a : ranks) {
    for (Rank b : ranks) {
      if (CompareRank(a, b, seven, RankOrder::kElevated) > 0) ++wins[a];
    }
  }
  std::sort(ranks.begin(), ranks.end(),
            [&](Rank a, Rank b) { return wins[a] < wins[b]; });
  std::string order;
  for (Rank r : ranks) order += RankChar(r);
  CHECK(order == "2345689TJQKA7BR");
  // Every rank has a distinct win count, so the order is total.
  std::vector<int> counts;
  for (Rank r : ranks) counts.push_back(wins[r]);
  CHECK(std::adjacent_find(counts.begin(), counts.end()) == counts.end());
}

TEST_CASE("rank comparison is a strict total order in both modes") {
  for (int l = 0; l < kNumNormalRanks; ++l) {
    Level level(RankFromIndex(l));
    for (RankOrder mode : {RankOrder::kElevated, RankOrder::kNatural}) {
      const int n = mode == RankOrder::kNatural ? kNumNormalRanks : kNumRanks;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          auto ab = CompareRank(RankFromIndex(a), RankFromIndex(b), level, mode);
          auto ba = CompareRank(RankFromIndex(b), RankFromIndex(a), level, mode);
          CHECK((ab == 0) == (a == b));
          CHECK((ab < 0) == (ba > 0));
          for (int c = 0; c < n; ++c) {
            auto bc = CompareRank(RankFromIndex(b), RankFromIndex(c), level, mode);
            if (ab < 0 && bc < 0) {
              CHECK(CompareRank(RankFromIndex(a), RankFromIndex(c), level,
                                mode) < 0);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("card codes round-trip for all 54 identities") {
  for (int id = 0; id < kNumCardKinds; ++id) {
    Card c = Card::FromId(id);
    CHECK(c.Id() == id);
    CHECK(Card::FromCode(c.Code()) == c);
  }
  CHECK(CardCode(52) == "SB");
  CHECK(CardCode(53) == "HR");
  CHECK(Card::FromCode("HT").rank == Rank::kTen);
  CHECK_THROWS_AS(Card::FromCode("XX"), std::invalid_argument);
  CHECK_THROWS_AS(Card::FromCode("SR"), std::invalid_argument);
  CHECK_THROWS_AS(Card::FromCode("S10"), std::invalid_argument);
}

TEST_CASE("wild card predicate depends on the level") {
  Card h7{Suit::kHeart, Rank::kSeven};
  CHECK(h7.IsWild(Level(Rank::kSeven)));
  CHECK_FALSE(h7.IsWild(Level(Rank::kEight)));
  CHECK_FALSE((Card{Suit::kSpade, Rank::kSeven}).IsWild(Level(Rank::kSeven)));
}

TEST_CASE("deck composition") {
  std::vector<int> deck = BuildDeck();
  CHECK(deck.size() == 108);
  CHECK(std::count(deck.begin(), deck.end(), Card::FromCode("HR").Id()) == 2);
  CHECK(std::count(deck.begin(), deck.end(), Card::FromCode("SB").Id()) == 2);
  CHECK(std::count(deck.begin(), deck.end(), Card::FromCode("H2").Id()) == 2);
  for (int id = 0; id < kNumCardKinds; ++id) {
    CHECK(std::count(deck.begin(), deck.end(), id) == 2);
  }
}

TEST_CASE("shuffle_deal partitions the deck deterministically") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xdeadbeefULL}) {
    Deal deal = ShuffleDeal(seed);
    CardCounts all;
    for (const auto& hand : deal.hands) {
      CHECK(hand.Total() == 27);
      for (int id : hand.ToIds()) all.Add(id);
    }
    CHECK(all == CardCounts::FromIds(BuildDeck()));
    Deal again = ShuffleDeal(seed);
    CHECK(again.deck_order == deal.deck_order);
    CHECK(again.hands == deal.hands);
  }
  CHECK(ShuffleDeal(1).deck_order != ShuffleDeal(2).deck_order);
}

TEST_CASE("shuffle is roughly uniform over positions") {
  // Card 0 should land in each quarter of the deck about equally often.
  std::array<int, 4> quarter{};
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> deck(kDeckSize);
    for (int i = 0; i < kDeckSize; ++i) deck[i] = i;
    Rng rng(MixSeed(7, t));
    ShuffleCards(deck, rng);
    auto pos = std::find(deck.begin(), deck.end(), 0) - deck.begin();
    ++quarter[pos / 27];
  }
  for (int q : quarter) CHECK(std::abs(q - trials / 4) < 4 * 28);
}

TEST_CASE("card counts reject overflow and missing cards") {
  CardCounts c;
  c.Add(5);
  c.Add(5);
  CHECK_THROWS_AS(c.Add(5), std::invalid_argument);
  c.Remove(5);
  CHECK(c.Total() == 1);
  CHECK_THROWS_AS(c.Remove(6), std::invalid_argument);
}

}  // namespace
}  // namespace guandan
