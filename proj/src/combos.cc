#include "guandan/combos.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace guandan {
namespace {

constexpr std::array<std::string_view, kNumComboTypes + 1> kTypeNames = {
    "Single",   "Pair",     "Triple", "Tube",          "Plate",     "FullHouse",
    "Straight", "Bomb",     "StraightFlush", "JokerBomb", "PASS"};

constexpr int kBlackJokerId = 52;
constexpr int kRedJokerId = 53;

// Sequence positions run 0..13: position 0 is the ace played low, position
// p >= 1 is natural rank index p - 1 (so position 13 is the ace played high).
constexpr int RankAtPosition(int pos) { return pos == 0 ? 12 : pos - 1; }

using SuitCounts = std::array<std::uint8_t, kNumSuits>;

// Visits every sub-multiset of `avail` with exactly m cards.
template <typename F>
void ForEachSuitSubset(const SuitCounts& avail, int m, F&& f) {
  SuitCounts pick{};
  for (int a0 = 0; a0 <= std::min<int>(avail[0], m); ++a0) {
    for (int a1 = 0; a1 <= std::min<int>(avail[1], m - a0); ++a1) {
      for (int a2 = 0; a2 <= std::min<int>(avail[2], m - a0 - a1); ++a2) {
        int a3 = m - a0 - a1 - a2;
        if (a3 > avail[3]) continue;
        pick = {static_cast<std::uint8_t>(a0), static_cast<std::uint8_t>(a1),
                static_cast<std::uint8_t>(a2), static_cast<std::uint8_t>(a3)};
        f(pick);
      }
    }
  }
}

// Hand split into natural cards (wilds removed) and the wild count.
struct HandView {
  Level level;
  int level_index = 0;
  int wild_id = 0;
  int wilds = 0;
  std::array<SuitCounts, kNumNormalRanks> natural{};
  std::array<int, kNumNormalRanks> natural_total{};
  int black_jokers = 0;
  int red_jokers = 0;

  HandView(const CardCounts& hand, Level lvl)
      : level(lvl),
        level_index(RankIndex(lvl.rank())),
        wild_id(WildCardId(lvl)),
        wilds(hand[WildCardId(lvl)]),
        black_jokers(hand[kBlackJokerId]),
        red_jokers(hand[kRedJokerId]) {
    for (int r = 0; r < kNumNormalRanks; ++r) {
      for (int s = 0; s < kNumSuits; ++s) {
        int id = r * kNumSuits + s;
        natural[r][s] = id == wild_id ? 0 : hand[id];
        natural_total[r] += natural[r][s];
      }
    }
  }
};

// A combination under construction. Cards are pushed unordered and sorted
// on emission.
struct Draft {
  std::array<std::uint8_t, kMaxComboSize> ids{};
  int n = 0;
  int num_wilds = 0;
  std::array<Rank, 2> wild_ranks{};

  void PushNatural(int rank_index, const SuitCounts& pick) {
    for (int s = 0; s < kNumSuits; ++s) {
      for (int c = 0; c < pick[s]; ++c) {
        ids[n++] = static_cast<std::uint8_t>(rank_index * kNumSuits + s);
      }
    }
  }
  void PushCard(int id) { ids[n++] = static_cast<std::uint8_t>(id); }
  void PushWild(int wild_id, Rank as) {
    ids[n++] = static_cast<std::uint8_t>(wild_id);
    wild_ranks[num_wilds++] = as;
  }

  Combination Build(ComboType type, Rank key) const {
    Combination c;
    c.type = type;
    c.key = key;
    c.size = static_cast<std::uint8_t>(n);
    std::copy(ids.begin(), ids.begin() + n, c.cards.begin());
    std::sort(c.cards.begin(), c.cards.begin() + n);
    c.num_wilds = static_cast<std::uint8_t>(num_wilds);
    c.wild_ranks = wild_ranks;
    if (num_wilds == 2 && RankIndex(c.wild_ranks[1]) < RankIndex(c.wild_ranks[0])) {
      std::swap(c.wild_ranks[0], c.wild_ranks[1]);
    }
    return c;
  }
};

class Generator {
 public:
  Generator(const CardCounts& hand, Level level,
            const std::optional<Combination>& incumbent, int required_size,
            std::vector<Combination>& out)
      : hand_(hand),
        view_(hand, level),
        incumbent_(incumbent),
        required_size_(required_size),
        out_(out) {}

  void Run() {
    if (!incumbent_) {
      for (int t = 0; t < kNumComboTypes; ++t) GenerateType(ComboType(t));
      return;
    }
    if (!incumbent_->IsBomb()) GenerateType(incumbent_->type);
    GenerateType(ComboType::kBomb);
    GenerateType(ComboType::kStraightFlush);
    GenerateType(ComboType::kJokerBomb);
  }

 private:
  bool SizeOk(int n) const { return required_size_ < 0 || required_size_ == n; }

  void GenerateType(ComboType t) {
    switch (t) {
      case ComboType::kSingle: return Singles();
      case ComboType::kPair: return Pairs();
      case ComboType::kTriple: return Triples();
      case ComboType::kTube: return Sequences(t, 3, 2);
      case ComboType::kPlate: return Sequences(t, 2, 3);
      case ComboType::kFullHouse: return FullHouses();
      case ComboType::kStraight: return Sequences(t, 5, 1);
      case ComboType::kBomb: return Bombs();
      case ComboType::kStraightFlush: return StraightFlushes();
      case ComboType::kJokerBomb: return JokerBomb();
      case ComboType::kPass: return;
    }
  }

  // Cheap pre-filter on the key before generating a group; Emit() still
  // applies the exact Beats() test.
  bool KeyMayBeat(ComboType t, Rank key) const {
    if (!incumbent_ || incumbent_->type != t || t == ComboType::kBomb) {
      return true;
    }
    Combination probe;
    probe.type = t;
    probe.key = key;
    return KeyStrength(probe, view_.level) >
           KeyStrength(*incumbent_, view_.level);
  }

  void BeginGroup() { group_start_ = out_.size(); }
  void EndGroup() {
    auto first = out_.begin() + static_cast<std::ptrdiff_t>(group_start_);
    std::sort(first, out_.end());
    out_.erase(std::unique(first, out_.end()), out_.end());
  }

  void Emit(const Draft& d, ComboType type, Rank key) {
    if (!SizeOk(d.n)) return;
    Combination c = d.Build(type, key);
    if (incumbent_ && !Beats(c, *incumbent_, view_.level)) return;
    out_.push_back(c);
  }

  void Singles() {
    if (!SizeOk(1)) return;
    for (int id = 0; id < kNumCardKinds; ++id) {
      if (hand_[id] == 0) continue;
      Rank key = CardRank(id);
      if (!KeyMayBeat(ComboType::kSingle, key)) continue;
      Draft d;
      if (id == view_.wild_id) {
        d.PushWild(id, view_.level.rank());
      } else {
        d.PushCard(id);
      }
      Emit(d, ComboType::kSingle, key);
    }
  }

  // n-of-a-kind of rank r, k of them wilds.
  template <typename F>
  void ForEachOfAKind(int r, int n, F&& f) {
    const int max_wilds = std::min(view_.wilds, n);
    for (int k = 0; k <= max_wilds; ++k) {
      const int m = n - k;
      if (m > view_.natural_total[r]) continue;
      // Wilds on their own keep their level identity.
      if (m == 0 && r != view_.level_index) continue;
      ForEachSuitSubset(view_.natural[r], m, [&](const SuitCounts& pick) {
        Draft d;
        d.PushNatural(r, pick);
        for (int i = 0; i < k; ++i) d.PushWild(view_.wild_id, RankFromIndex(r));
        f(d, k);
      });
    }
  }

  void Pairs() {
    if (!SizeOk(2)) return;
    for (int r = 0; r < kNumNormalRanks; ++r) {
      if (!KeyMayBeat(ComboType::kPair, RankFromIndex(r))) continue;
      BeginGroup();
      ForEachOfAKind(r, 2, [&](const Draft& d, int) {
        Emit(d, ComboType::kPair, RankFromIndex(r));
      });
      EndGroup();
    }
    JokerPair(kBlackJokerId, view_.black_jokers, Rank::kBlackJoker);
    JokerPair(kRedJokerId, view_.red_jokers, Rank::kRedJoker);
  }

  void JokerPair(int id, int count, Rank key) {
    if (count < 2 || !KeyMayBeat(ComboType::kPair, key)) return;
    Draft d;
    d.PushCard(id);
    d.PushCard(id);
    Emit(d, ComboType::kPair, key);
  }

  void Triples() {
    if (!SizeOk(3)) return;
    for (int r = 0; r < kNumNormalRanks; ++r) {
      if (!KeyMayBeat(ComboType::kTriple, RankFromIndex(r))) continue;
      BeginGroup();
      ForEachOfAKind(r, 3, [&](const Draft& d, int) {
        Emit(d, ComboType::kTriple, RankFromIndex(r));
      });
      EndGroup();
    }
  }

  void Bombs() {
    for (int r = 0; r < kNumNormalRanks; ++r) {
      const int available = view_.natural_total[r] + view_.wilds;
      if (available < 4) continue;
      BeginGroup();
      for (int n = 4; n <= available; ++n) {
        if (!SizeOk(n)) continue;
        ForEachOfAKind(r, n, [&](const Draft& d, int) {
          Emit(d, ComboType::kBomb, RankFromIndex(r));
        });
      }
      EndGroup();
    }
  }

  void JokerBomb() {
    if (!SizeOk(4) || view_.black_jokers < 2 || view_.red_jokers < 2) return;
    Draft d;
    d.PushCard(kBlackJokerId);
    d.PushCard(kBlackJokerId);
    d.PushCard(kRedJokerId);
    d.PushCard(kRedJokerId);
    Emit(d, ComboType::kJokerBomb, Rank::kRedJoker);
  }

  void FullHouses() {
    if (!SizeOk(5)) return;
    for (int r = 0; r < kNumNormalRanks; ++r) {
      if (!KeyMayBeat(ComboType::kFullHouse, RankFromIndex(r))) continue;
      BeginGroup();
      ForEachOfAKind(r, 3, [&](const Draft& triple, int used) {
        const int left = view_.wilds - used;
        for (int p = 0; p < kNumNormalRanks; ++p) {
          if (p == r) continue;
          for (int k = 0; k <= std::min(left, 1); ++k) {
            const int m = 2 - k;
            if (m > view_.natural_total[p]) continue;
            ForEachSuitSubset(view_.natural[p], m, [&](const SuitCounts& pick) {
              Draft d = triple;
              d.PushNatural(p, pick);
              if (k == 1) d.PushWild(view_.wild_id, RankFromIndex(p));
              Emit(d, ComboType::kFullHouse, RankFromIndex(r));
            });
          }
        }
        if (left >= 2) {
          // Two wilds as the pair; the pair's rank is immaterial, so pick
          // the lowest rank distinct from the triple.
          Rank as = RankFromIndex(r == 0 ? 1 : 0);
          Draft d = triple;
          d.PushWild(view_.wild_id, as);
          d.PushWild(view_.wild_id, as);
          Emit(d, ComboType::kFullHouse, RankFromIndex(r));
        }
        for (int id : {kBlackJokerId, kRedJokerId}) {
          if (hand_[id] < 2) continue;
          Draft d = triple;
          d.PushCard(id);
          d.PushCard(id);
          Emit(d, ComboType::kFullHouse, RankFromIndex(r));
        }
      });
      EndGroup();
    }
  }

  // Straights (width 1), tubes (width 2) and plates (width 3) over
  // `length` consecutive positions.
  void Sequences(ComboType type, int length, int width) {
    if (!SizeOk(length * width)) return;
    for (int start = 0; start + length <= 14; ++start) {
      Rank key = RankFromIndex(RankAtPosition(start + length - 1));
      if (!KeyMayBeat(type, key)) continue;
      BeginGroup();
      Draft d;
      ExtendSequence(type, key, start, start + length, width, view_.wilds, d);
      EndGroup();
    }
  }

  void ExtendSequence(ComboType type, Rank key, int pos, int end, int width,
                      int wilds_left, Draft& d) {
    if (pos == end) {
      Emit(d, type, key);
      return;
    }
    const int r = RankAtPosition(pos);
    for (int k = 0; k <= std::min(wilds_left, width); ++k) {
      const int m = width - k;
      if (m > view_.natural_total[r]) continue;
      ForEachSuitSubset(view_.natural[r], m, [&](const SuitCounts& pick) {
        Draft next = d;
        next.PushNatural(r, pick);
        for (int i = 0; i < k; ++i) next.PushWild(view_.wild_id, RankFromIndex(r));
        ExtendSequence(type, key, pos + 1, end, width, wilds_left - k, next);
      });
    }
  }

  void StraightFlushes() {
    if (!SizeOk(5)) return;
    for (int start = 0; start + 5 <= 14; ++start) {
      Rank key = RankFromIndex(RankAtPosition(start + 4));
      BeginGroup();
      for (int s = 0; s < kNumSuits; ++s) {
        Draft d;
        ExtendFlush(key, s, start, start + 5, view_.wilds, d);
      }
      EndGroup();
    }
  }

  void ExtendFlush(Rank key, int suit, int pos, int end, int wilds_left,
                   Draft& d) {
    if (pos == end) {
      Emit(d, ComboType::kStraightFlush, key);
      return;
    }
    const int r = RankAtPosition(pos);
    if (view_.natural[r][suit] > 0) {
      Draft next = d;
      next.PushCard(r * kNumSuits + suit);
      ExtendFlush(key, suit, pos + 1, end, wilds_left, next);
    }
    if (wilds_left > 0) {
      Draft next = d;
      next.PushWild(view_.wild_id, RankFromIndex(r));
      ExtendFlush(key, suit, pos + 1, end, wilds_left - 1, next);
    }
  }

  const CardCounts& hand_;
  HandView view_;
  const std::optional<Combination>& incumbent_;
  int required_size_;
  std::vector<Combination>& out_;
  std::size_t group_start_ = 0;
};

}  // namespace

std::string_view ComboTypeName(ComboType t) {
  return kTypeNames[static_cast<int>(t)];
}

ComboType ComboTypeFromName(std::string_view name) {
  for (int i = 0; i <= kNumComboTypes; ++i) {
    if (kTypeNames[i] == name) return static_cast<ComboType>(i);
  }
  throw std::invalid_argument("unknown combination type: " + std::string(name));
}

Combination Combination::SingleCard(int card_id) {
  Combination c;
  c.type = ComboType::kSingle;
  c.key = CardRank(card_id);
  c.size = 1;
  c.cards[0] = static_cast<std::uint8_t>(card_id);
  return c;
}

CardCounts Combination::ToCounts() const {
  CardCounts counts;
  for (int i = 0; i < size; ++i) counts.Add(cards[i]);
  return counts;
}

std::vector<std::string> Combination::CardCodes() const {
  std::vector<std::string> codes;
  codes.reserve(size);
  for (int i = 0; i < size; ++i) codes.push_back(CardCode(cards[i]));
  return codes;
}

std::string Combination::DebugString() const {
  std::ostringstream os;
  os << ComboTypeName(type);
  if (IsPass()) return os.str();
  os << "(" << RankChar(key) << ")[";
  for (int i = 0; i < size; ++i) os << (i ? " " : "") << CardCode(cards[i]);
  os << "]";
  return os.str();
}

std::strong_ordering operator<=>(const Combination& a, const Combination& b) {
  const int ta = a.IsPass() ? -1 : static_cast<int>(a.type);
  const int tb = b.IsPass() ? -1 : static_cast<int>(b.type);
  if (ta != tb) return ta <=> tb;
  if (a.key != b.key) return RankIndex(a.key) <=> RankIndex(b.key);
  return std::lexicographical_compare_three_way(
      a.cards.begin(), a.cards.begin() + a.size, b.cards.begin(),
      b.cards.begin() + b.size);
}

int KeyStrength(const Combination& c, Level level) {
  switch (c.type) {
    case ComboType::kTube:
    case ComboType::kPlate:
    case ComboType::kStraight:
    case ComboType::kStraightFlush:
      return RankIndex(c.key);
    default:
      return ElevatedValue(c.key, level);
  }
}

int BombTier(const Combination& c) {
  switch (c.type) {
    case ComboType::kBomb: return c.size == 4 ? 0 : c.size == 5 ? 1 : c.size - 3;
    case ComboType::kStraightFlush: return 2;
    case ComboType::kJokerBomb: return 8;
    default: return -1;
  }
}

bool Beats(const Combination& challenger, const Combination& incumbent,
           Level level) {
  if (challenger.IsPass() || incumbent.IsPass()) return false;
  const int ct = BombTier(challenger);
  const int it = BombTier(incumbent);
  if (ct >= 0 || it >= 0) {
    if (ct != it) return ct > it;
    if (challenger.type == ComboType::kJokerBomb) return false;
    return KeyStrength(challenger, level) > KeyStrength(incumbent, level);
  }
  if (challenger.type != incumbent.type || challenger.size != incumbent.size) {
    return false;
  }
  return KeyStrength(challenger, level) > KeyStrength(incumbent, level);
}

void LegalPlaysInto(const CardCounts& hand,
                    const std::optional<Combination>& incumbent, Level level,
                    std::vector<Combination>& out) {
  if (hand.Empty()) throw std::invalid_argument("legal plays of an empty hand");
  out.clear();
  if (incumbent && incumbent->IsPass()) {
    throw std::invalid_argument("incumbent cannot be Pass");
  }
  if (incumbent) out.push_back(Combination::Pass());
  Generator(hand, level, incumbent, -1, out).Run();
}

std::vector<Combination> LegalPlays(
    const CardCounts& hand, const std::optional<Combination>& incumbent,
    Level level) {
  std::vector<Combination> out;
  LegalPlaysInto(hand, incumbent, level, out);
  return out;
}

std::vector<Combination> Classify(const CardCounts& cards, Level level) {
  std::vector<Combination> out;
  if (cards.Empty() || cards.Total() > kMaxComboSize) return out;
  Generator(cards, level, std::nullopt, cards.Total(), out).Run();
  return out;
}

bool IsLegalPlay(const CardCounts& hand,
                 const std::optional<Combination>& incumbent, Level level,
                 const Combination& action) {
  if (action.IsPass()) return incumbent.has_value();
  if (action.size == 0 || action.size > kMaxComboSize) return false;
  if (incumbent && !Beats(action, *incumbent, level)) return false;
  CardCounts cards;
  for (int i = 0; i < action.size; ++i) {
    if (action.cards[i] >= kNumCardKinds || cards[action.cards[i]] >= 2) {
      return false;
    }
    cards.Add(action.cards[i]);
  }
  if (!hand.Contains(cards)) return false;
  std::vector<Combination> readings;
  Generator(cards, level, std::nullopt, cards.Total(), readings).Run();
  return std::find(readings.begin(), readings.end(), action) != readings.end();
}

std::vector<Combination> LegalTributes(const CardCounts& hand, Level level) {
  const int wild = WildCardId(level);
  int best = -1;
  for (int id = 0; id < kNumCardKinds; ++id) {
    if (hand[id] == 0 || id == wild) continue;
    best = std::max(best, ElevatedValue(CardRank(id), level));
  }
  std::vector<Combination> out;
  for (int id = 0; id < kNumCardKinds; ++id) {
    if (hand[id] == 0 || id == wild) continue;
    if (ElevatedValue(CardRank(id), level) == best) {
      out.push_back(Combination::SingleCard(id));
    }
  }
  return out;
}

std::vector<Combination> LegalBackTributes(const CardCounts& hand,
                                           Level level) {
  std::vector<Combination> out;
  for (int id = 0; id < kNumCardKinds; ++id) {
    if (hand[id] > 0 && CardRank(id) <= Rank::kTen) {
      out.push_back(Combination::SingleCard(id));
    }
  }
  if (!out.empty()) return out;
  int lowest = 99;
  for (int id = 0; id < kNumCardKinds; ++id) {
    if (hand[id] > 0) lowest = std::min(lowest, ElevatedValue(CardRank(id), level));
  }
  for (int id = 0; id < kNumCardKinds; ++id) {
    if (hand[id] > 0 && ElevatedValue(CardRank(id), level) == lowest) {
      out.push_back(Combination::SingleCard(id));
    }
  }
  return out;
}

}  // namespace guandan
