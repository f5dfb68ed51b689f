#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "guandan/combos.h"
#include "oracle.h"

namespace guandan {
namespace {

CardCounts Hand(std::initializer_list<const char*> codes) {
  CardCounts c;
  for (const char* code : codes) c.Add(CardIdFromCode(code));
  return c;
}

Combination Make(ComboType type, Rank key,
                 std::initializer_list<const char*> codes) {
  Combination c;
  c.type = type;
  c.key = key;
  std::vector<int> ids;
  for (const char* code : codes) ids.push_back(CardIdFromCode(code));
  std::sort(ids.begin(), ids.end());
  c.size = static_cast<std::uint8_t>(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    c.cards[i] = static_cast<std::uint8_t>(ids[i]);
  }
  return c;
}

std::set<oracle::ActionKey> Keys(const std::vector<Combination>& combos) {
  std::set<oracle::ActionKey> keys;
  for (const auto& c : combos) keys.insert(oracle::KeyOf(c));
  return keys;
}

TEST_CASE("classify: all four jokers is only a joker bomb") {
  auto out = Classify(Hand({"SB", "SB", "HR", "HR"}), Level(Rank::kTwo));
  REQUIRE(out.size() == 1);
  CHECK(out[0].type == ComboType::kJokerBomb);
}

TEST_CASE("classify: red and black joker never pair") {
  CHECK(Classify(Hand({"SB", "HR"}), Level(Rank::kTwo)).empty());
}

TEST_CASE("classify: wild with two off-rank cards has no reading") {
  Level seven(Rank::kSeven);
  CardCounts cards = Hand({"H7", "H8", "H9"});
  auto out = Classify(cards, seven);
  CHECK(Keys(out) == oracle::Interpret(cards.ToIds(), seven));
  CHECK(out.empty());
}

TEST_CASE("classify: suited run is both straight and straight flush") {
  auto out = Classify(Hand({"S5", "S6", "S7", "S8", "S9"}), Level(Rank::kTwo));
  REQUIRE(out.size() == 2);
  CHECK(out[0].type == ComboType::kStraight);
  CHECK(out[0].key == Rank::kNine);
  CHECK(out[1].type == ComboType::kStraightFlush);
  CHECK(out[1].key == Rank::kNine);
}

TEST_CASE("classify: ace plays low and high but straights never wrap") {
  Level level(Rank::kTwo);
  auto low = Classify(Hand({"SA", "D2", "C3", "S4", "S5"}), Level(Rank::kNine));
  REQUIRE(low.size() == 1);
  CHECK(low[0].key == Rank::kFive);
  auto high = Classify(Hand({"ST", "DJ", "CQ", "SK", "SA"}), level);
  REQUIRE(high.size() == 1);
  CHECK(high[0].key == Rank::kAce);
  CHECK(Classify(Hand({"SQ", "DK", "CA", "S2", "S3"}), Level(Rank::kNine))
            .empty());
}

TEST_CASE("classify: level card keeps its natural slot inside a straight") {
  Level seven(Rank::kSeven);
  auto out = Classify(Hand({"S5", "D6", "C7", "S8", "S9"}), seven);
  REQUIRE(out.size() == 1);
  CHECK(out[0].key == Rank::kNine);
}

TEST_CASE("classify: a lone wild plays as the level card") {
  Level seven(Rank::kSeven);
  auto single = Classify(Hand({"H7"}), seven);
  REQUIRE(single.size() == 1);
  CHECK(single[0].key == Rank::kSeven);
  auto pair = Classify(Hand({"H7", "H7"}), seven);
  REQUIRE(pair.size() == 1);
  CHECK(pair[0].type == ComboType::kPair);
  CHECK(pair[0].key == Rank::kSeven);
}

TEST_CASE("classify: wild never stands in for a joker") {
  Level seven(Rank::kSeven);
  CHECK(Classify(Hand({"H7", "HR"}), seven).empty());
  CHECK(Classify(Hand({"H7", "SB", "HR", "HR"}), seven).empty());
}

TEST_CASE("classify agrees with brute force on every small multiset") {
  // Exhaustive over multisets of up to 3 cards drawn from a 9-kind pool
  // that includes jokers and the wild.
  Level seven(Rank::kSeven);
  std::vector<int> pool = {CardIdFromCode("H7"), CardIdFromCode("S7"),
                           CardIdFromCode("S6"), CardIdFromCode("S8"),
                           CardIdFromCode("D8"), CardIdFromCode("SA"),
                           CardIdFromCode("S2"), 52, 53};
  int checked = 0;
  for (std::size_t a = 0; a < pool.size(); ++a) {
    for (std::size_t b = a; b <= pool.size(); ++b) {
      for (std::size_t c = b; c <= pool.size(); ++c) {
        std::vector<int> ids = {pool[a]};
        if (b < pool.size()) ids.push_back(pool[b]);
        if (c < pool.size() && b < pool.size()) ids.push_back(pool[c]);
        CardCounts cards;
        bool ok = true;
        for (int id : ids) {
          if (cards[id] == 2) ok = false;
          if (ok) cards.Add(id);
        }
        if (!ok) continue;
        CHECK(Keys(Classify(cards, seven)) == oracle::Interpret(ids, seven));
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("beats: spec examples") {
  Level level(Rank::kSeven);
  auto six_twos = Make(ComboType::kBomb, Rank::kTwo,
                       {"S2", "S2", "H2", "H2", "C2", "D2"});
  auto flush_a = Make(ComboType::kStraightFlush, Rank::kAce,
                      {"ST", "SJ", "SQ", "SK", "SA"});
  CHECK(Beats(six_twos, flush_a, level));
  CHECK_FALSE(Beats(flush_a, six_twos, level));

  auto pair7 = Make(ComboType::kPair, Rank::kSeven, {"S7", "C7"});
  auto pair_a = Make(ComboType::kPair, Rank::kAce, {"SA", "CA"});
  CHECK(Beats(pair7, pair_a, level));

  auto straight9 = Make(ComboType::kStraight, Rank::kNine,
                        {"S5", "D6", "C7", "S8", "S9"});
  CHECK_FALSE(Beats(straight9, straight9, level));

  auto fh8 = Make(ComboType::kFullHouse, Rank::kEight,
                  {"S8", "D8", "C8", "SA", "DA"});
  auto fh9 = Make(ComboType::kFullHouse, Rank::kNine,
                  {"S9", "D9", "C9", "S2", "D2"});
  CHECK_FALSE(Beats(fh8, fh9, level));
  CHECK(Beats(fh9, fh8, level));
}

TEST_CASE("beats: bomb hierarchy") {
  Level level(Rank::kTwo);
  auto four_a = Make(ComboType::kBomb, Rank::kAce, {"SA", "HA", "CA", "DA"});
  auto five_3 = Make(ComboType::kBomb, Rank::kThree,
                     {"S3", "S3", "H3", "C3", "D3"});
  auto flush5 = Make(ComboType::kStraightFlush, Rank::kFive,
                     {"SA", "S2", "S3", "S4", "S5"});
  auto flush6 = Make(ComboType::kStraightFlush, Rank::kSix,
                     {"D2", "D3", "D4", "D5", "D6"});
  auto jokers = Make(ComboType::kJokerBomb, Rank::kRedJoker,
                     {"SB", "SB", "HR", "HR"});
  auto single = Make(ComboType::kSingle, Rank::kRedJoker, {"HR"});
  auto four_2 = Make(ComboType::kBomb, Rank::kTwo, {"S2", "D2", "C2", "D2"});
  CHECK(Beats(five_3, four_a, level));
  CHECK(Beats(flush5, five_3, level));
  CHECK(Beats(flush6, flush5, level));
  CHECK(Beats(four_a, single, level));
  CHECK(Beats(jokers, flush6, level));
  CHECK_FALSE(Beats(jokers, jokers, level));
  // The level rank outranks aces in bombs too.
  CHECK(Beats(four_2, four_a, level));
}

TEST_CASE("beats: non-bomb types are mutually incomparable") {
  Level level(Rank::kTwo);
  auto single = Make(ComboType::kSingle, Rank::kAce, {"SA"});
  auto pair = Make(ComboType::kPair, Rank::kThree, {"S3", "D3"});
  CHECK_FALSE(Beats(pair, single, level));
  CHECK_FALSE(Beats(single, pair, level));
  CHECK_FALSE(Beats(Combination::Pass(), single, level));
}

TEST_CASE("legal_plays: four jokers leading") {
  auto out = LegalPlays(Hand({"SB", "SB", "HR", "HR"}), std::nullopt,
                        Level(Rank::kTwo));
  std::vector<std::string> got;
  for (const auto& c : out) got.push_back(c.DebugString());
  CHECK(got == std::vector<std::string>{"Single(B)[SB]", "Single(R)[HR]",
                                        "Pair(B)[SB SB]", "Pair(R)[HR HR]",
                                        "JokerBomb(R)[SB SB HR HR]"});
  CHECK(Keys(out) == oracle::LegalPlays(Hand({"SB", "SB", "HR", "HR"}),
                                        std::nullopt, Level(Rank::kTwo)));
}

TEST_CASE("legal_plays: following a single two") {
  Level seven(Rank::kSeven);
  auto incumbent = Make(ComboType::kSingle, Rank::kTwo, {"D2"});
  auto out = LegalPlays(Hand({"S3", "H4"}), incumbent, seven);
  REQUIRE(out.size() == 3);
  CHECK(out[0].IsPass());
  CHECK(out[1].DebugString() == "Single(3)[S3]");
  CHECK(out[2].DebugString() == "Single(4)[H4]");
}

TEST_CASE("legal_plays: empty hand is rejected") {
  CHECK_THROWS_AS(LegalPlays(CardCounts{}, std::nullopt, Level(Rank::kTwo)),
                  std::invalid_argument);
}

TEST_CASE("legal_plays: leading never offers pass") {
  auto out = LegalPlays(Hand({"S3"}), std::nullopt, Level(Rank::kTwo));
  REQUIRE(out.size() == 1);
  CHECK_FALSE(out[0].IsPass());
}

TEST_CASE("legal_plays: wilds build ten-card bombs") {
  Level two(Rank::kTwo);
  CardCounts hand = Hand({"S9", "S9", "H9", "H9", "C9", "C9", "D9", "D9",
                          "H2", "H2"});
  auto out = LegalPlays(hand, std::nullopt, two);
  auto biggest = std::find_if(out.begin(), out.end(), [](const Combination& c) {
    return c.type == ComboType::kBomb && c.size == 10;
  });
  REQUIRE(biggest != out.end());
  CHECK(biggest->key == Rank::kNine);
  CHECK(biggest->num_wilds == 2);
}

TEST_CASE("legal_plays matches brute force on random hands") {
  Rng rng(2024);
  std::vector<int> deck = BuildDeck();
  for (int trial = 0; trial < 150; ++trial) {
    ShuffleCards(deck, rng);
    Level level(RankFromIndex(static_cast<int>(rng.Uniform(13))));
    const int n = 1 + static_cast<int>(rng.Uniform(10));
    CardCounts hand;
    for (int i = 0; i < n; ++i) hand.Add(deck[i]);
    if (trial % 3 == 0 && hand[WildCardId(level)] < 2) {
      hand.Add(WildCardId(level));
    }
    std::optional<Combination> incumbent;
    if (trial % 2 == 1) {
      CardCounts other;
      for (int i = 20; i < 32; ++i) other.Add(deck[i]);
      auto plays = LegalPlays(other, std::nullopt, level);
      incumbent = plays[rng.Uniform(plays.size())];
    }
    auto got = LegalPlays(hand, incumbent, level);
    std::optional<oracle::ActionKey> inc_key;
    if (incumbent) inc_key = oracle::KeyOf(*incumbent);
    CHECK(Keys(got) == oracle::LegalPlays(hand, inc_key, level));
    CHECK(std::is_sorted(got.begin(), got.end()));
    CHECK(std::adjacent_find(got.begin(), got.end()) == got.end());
    for (const auto& c : got) {
      CHECK(hand.Contains(c.ToCounts()));
      CHECK(IsLegalPlay(hand, incumbent, level, c));
    }
  }
}

TEST_CASE("wild assignments never name a joker") {
  Level level(Rank::kTen);
  CardCounts hand = Hand({"HT", "HT", "SB", "HR", "HR", "S9", "SJ", "SQ",
                          "DQ", "CQ", "SA"});
  for (const auto& c : LegalPlays(hand, std::nullopt, level)) {
    for (int i = 0; i < c.num_wilds; ++i) CHECK_FALSE(IsJoker(c.wild_ranks[i]));
  }
}

TEST_CASE("is_legal_play rejects cards outside the hand") {
  Level level(Rank::kTwo);
  CardCounts hand = Hand({"S3", "S4"});
  CHECK_FALSE(IsLegalPlay(hand, std::nullopt, level,
                          Make(ComboType::kSingle, Rank::kFive, {"S5"})));
  CHECK_FALSE(IsLegalPlay(hand, std::nullopt, level,
                          Make(ComboType::kPair, Rank::kThree, {"S3", "S4"})));
  CHECK_FALSE(IsLegalPlay(hand, std::nullopt, level, Combination::Pass()));
}

TEST_CASE("tributes: highest eligible card per suit") {
  Level level(Rank::kSeven);
  CardCounts hand = Hand({"S3", "HR", "SA", "D9"});
  auto out = LegalTributes(hand, level);
  REQUIRE(out.size() == 1);
  CHECK(CardCode(out[0].cards[0]) == "HR");

  auto aces = LegalTributes(Hand({"SA", "HA", "SA", "D9", "S3"}), level);
  REQUIRE(aces.size() == 2);
  CHECK(CardCode(aces[0].cards[0]) == "SA");
  CHECK(CardCode(aces[1].cards[0]) == "HA");

  // Heart level cards are never surrendered; the spade level card is.
  auto lvl = LegalTributes(Hand({"H7", "S7", "SA"}), level);
  REQUIRE(lvl.size() == 1);
  CHECK(CardCode(lvl[0].cards[0]) == "S7");
}

TEST_CASE("tributes match a linear scan on random hands") {
  Rng rng(9);
  std::vector<int> deck = BuildDeck();
  for (int trial = 0; trial < 200; ++trial) {
    ShuffleCards(deck, rng);
    Level level(RankFromIndex(static_cast<int>(rng.Uniform(13))));
    CardCounts hand;
    for (int i = 0; i < 27; ++i) hand.Add(deck[i]);
    int best = -1;
    for (int id : hand.ToIds()) {
      if (id != WildCardId(level)) {
        best = std::max(best, ElevatedValue(CardRank(id), level));
      }
    }
    std::set<int> expected;
    for (int id : hand.ToIds()) {
      if (id != WildCardId(level) && ElevatedValue(CardRank(id), level) == best) {
        expected.insert(id);
      }
    }
    std::set<int> got;
    for (const auto& c : LegalTributes(hand, level)) got.insert(c.cards[0]);
    CHECK(got == expected);
  }
}

TEST_CASE("back tributes: rank at most ten, deduplicated") {
  Level level(Rank::kTwo);
  auto one = LegalBackTributes(Hand({"C3", "SA", "SK"}), level);
  REQUIRE(one.size() == 1);
  CHECK(CardCode(one[0].cards[0]) == "C3");

  auto dup = LegalBackTributes(Hand({"D2", "D2", "S7", "SJ"}), level);
  REQUIRE(dup.size() == 2);
  CHECK(CardCode(dup[0].cards[0]) == "D2");
  CHECK(CardCode(dup[1].cards[0]) == "S7");
  CHECK(LegalBackTributes(Hand({"ST"}), level).size() == 1);
}

TEST_CASE("back tributes: fallback to the lowest elevated rank") {
  // 28 cards, none of rank 10 or below: every J, Q, K, A, jokers; at
  // level J the jacks are elevated so queens are the lowest.
  CardCounts hand;
  for (Rank r : {Rank::kJack, Rank::kQueen, Rank::kKing}) {
    for (int s = 0; s < kNumSuits; ++s) {
      hand.Add(Card{Suit(s), r}.Id(), 2);
    }
  }
  hand.Add(52, 2);
  hand.Add(53, 2);
  REQUIRE(hand.Total() == 28);
  auto out = LegalBackTributes(hand, Level(Rank::kJack));
  REQUIRE(out.size() == 4);
  for (const auto& c : out) CHECK(CardRank(c.cards[0]) == Rank::kQueen);
}

TEST_CASE("beats is irreflexive and asymmetric over generated actions") {
  Level level(Rank::kFive);
  CardCounts hand = Hand({"S3", "S3", "H3", "S4", "D4", "H5", "S5", "S6", "S7",
                          "SB", "HR", "SA", "DA", "CA"});
  auto plays = LegalPlays(hand, std::nullopt, level);
  for (const auto& a : plays) {
    CHECK_FALSE(Beats(a, a, level));
    for (const auto& b : plays) {
      if (Beats(a, b, level)) CHECK_FALSE(Beats(b, a, level));
    }
  }
}

}  // namespace
}  // namespace guandan
