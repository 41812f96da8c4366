#include "doctest.h"

#include <random>
#include <set>

#include "cgtrack/domain.hpp"
#include "cgtrack/nlu.hpp"

using namespace cgtrack;

TEST_CASE("colors carry the task weights in canonical order") {
  CHECK(true_weight(Color::red) == 10);
  CHECK(true_weight(Color::blue) == 10);
  CHECK(true_weight(Color::green) == 20);
  CHECK(true_weight(Color::purple) == 30);
  CHECK(true_weight(Color::yellow) == 50);
  CHECK(color_from_string("purple") == Color::purple);
  CHECK_FALSE(color_from_string("orange").has_value());
}

TEST_CASE("weights outside the five task values are rejected") {
  CHECK(Weight(40).grams() == 40);
  CHECK_THROWS_AS(Weight(15), DomainError);
  CHECK_THROWS_AS(Weight(60), DomainError);
  CHECK_FALSE(Weight::from_grams(0).has_value());
}

TEST_CASE("parse yields canonical propositions") {
  const auto p = parse_proposition("red < blue + green");
  CHECK(p.lhs() == BlockSum(Color::red));
  CHECK(p.relation() == Relation::lt);
  CHECK(*p.rhs_sum() == (BlockSum{Color::blue, Color::green}));

  CHECK(render(parse_proposition("blue = red")) == "red = blue");
  CHECK(render(parse_proposition("green + blue != red")) == "red != blue + green");
  CHECK(render(parse_proposition("blue + green > red")) == "red < blue + green");
  CHECK(render(parse_proposition("purple > 20")) == "purple > 20");
  CHECK(render(Proposition(BlockSum{Color::green, Color::purple}, Relation::eq, Weight(50))) ==
        "green + purple = 50");
}

TEST_CASE("malformed propositions are parse errors") {
  for (const auto* bad : {"", "red", "red = ", "red == 10", "red = 15", "10 = red", "red = red",
                          "red + red = 10", "red + blue < blue", "red  = 10", "Red = 10",
                          "red = blue + ", "red ~ 10", "red = 10 extra"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_proposition(bad), ParseError);
  }
}

TEST_CASE("render and parse invert each other on random sums") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> mask(1, 31), rel(0, 3), grams(1, 5), coin(0, 1);
  for (int i = 0; i < 2000; ++i) {
    const auto lhs = BlockSum::from_mask(static_cast<std::uint8_t>(mask(rng)));
    const auto r = static_cast<Relation>(rel(rng));
    std::optional<Proposition> p;
    if (coin(rng)) {
      p.emplace(lhs, r, Weight(grams(rng) * 10));
    } else {
      const auto free = static_cast<std::uint8_t>(BlockSum::kAllMask & ~lhs.mask());
      if (free == 0) continue;
      std::uint8_t m = 0;
      while (m == 0) m = static_cast<std::uint8_t>(mask(rng) & free);
      p.emplace(lhs, r, BlockSum::from_mask(m));
    }
    CHECK(parse_proposition(render(*p)) == *p);
  }
}

TEST_CASE("sum-vs-sum relations canonicalize to one representative") {
  const BlockSum a{Color::red}, b{Color::blue, Color::yellow};
  CHECK(Proposition(a, Relation::eq, b) == Proposition(b, Relation::eq, a));
  CHECK(Proposition(a, Relation::ne, b) == Proposition(b, Relation::ne, a));
  CHECK(Proposition(a, Relation::gt, b) == Proposition(b, Relation::lt, a));
  CHECK_THROWS_AS(Proposition(a, Relation::eq, BlockSum{Color::red, Color::blue}), DomainError);
}

TEST_CASE("NONE moves carry no content") {
  const auto m = EpistemicMove::make(MoveLabel::none, {parse_proposition("red = 10")});
  CHECK(m.props.empty());
  CHECK(move_from_string("ACCEPT") == MoveLabel::accept);
  CHECK_FALSE(move_from_string("accept").has_value());
}

TEST_CASE("event validation") {
  Utterance u{"u1", "P1", 10, 5, "hi", std::nullopt};
  CHECK_THROWS_AS(validate(u), DomainError);
  u.end = 10;
  CHECK_NOTHROW(validate(u));

  DeixisEvent d{"d1", "right", 0, 10, {0, 0, 0}, {0, 0, 2}};
  CHECK_THROWS_AS(validate(d), DomainError);
  d.direction = {0, 0, 1};
  CHECK_NOTHROW(validate(d));
}

// Independent enumeration: every string the grammar admits, parsed.
TEST_CASE("vocabulary matches an exhaustive grammar walk") {
  auto sum = [](unsigned m) {
    std::string s;
    for (unsigned c = 0; c < 5; ++c) {
      if (m & (1u << c)) s += (s.empty() ? "" : " + ") + std::string(to_string(static_cast<Color>(c)));
    }
    return s;
  };
  std::set<std::string> seen;
  std::size_t raw = 0;
  for (unsigned l = 1; l < 32; ++l) {
    for (const auto* rel : {"=", "!=", "<", ">"}) {
      for (int w = 10; w <= 50; w += 10) {
        seen.insert(render(parse_proposition(sum(l) + " " + rel + " " + std::to_string(w))));
        ++raw;
      }
      for (unsigned r = 1; r < 32; ++r) {
        if (l & r) continue;
        seen.insert(render(parse_proposition(sum(l) + " " + rel + " " + sum(r))));
        ++raw;
      }
    }
  }
  CHECK(raw == 620 + 4 * 180);
  const auto vocab = nlu::enumerate_propositions();
  CHECK(seen.size() == vocab.size());
  CHECK(vocab.size() == nlu::kDefaultVocabularySize);
  std::set<std::string> listed;
  for (std::size_t i = 0; i < vocab.size(); ++i) listed.insert(vocab.rendered(i));
  CHECK(listed == seen);
}
