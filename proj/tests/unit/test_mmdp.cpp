#include "doctest.h"

#include <random>

#include "cgtrack/mmdp.hpp"

using namespace cgtrack;
using namespace cgtrack::mmdp;

namespace {

Pointing pointing(std::string id, Millis start, Millis end, std::vector<std::pair<Color, double>> hits) {
  Pointing p{std::move(id), start, end, {}};
  for (const auto& [c, d] : hits) {
    p.targets.push_back({ObjectDetection{start, c, {0, 0, d}, {}}, d, 0, true});
  }
  return p;
}

}  // namespace

TEST_CASE("example paraphrases") {
  using enum Color;
  CHECK(dense_paraphrase("So, that's more than 20", {purple}) == "So, [purple block]'s more than 20");
  // With the sentence-final period the output matches the published row byte for byte.
  CHECK(dense_paraphrase("So, that's more than 20.", {purple}) ==
        "So, [purple block]'s more than 20.");
  CHECK(dense_paraphrase("So that’s a 10 and that’s a 20 right there?", {red, green}) ==
        "So [red block]’s a 10 and [green block]’s a 20 right there?");
  CHECK(dense_paraphrase("So, these are 50 on here?", {green, purple}) ==
        "So, [green block, purple block] are 50 on here?");
  CHECK(dense_paraphrase("now the first go through it bounced twice", {green}) ==
        "now the first go through [green block] bounced twice");
  CHECK(dense_paraphrase("okay, I guess this one's 10", {red}) == "okay, I guess [red block] one's 10");
}

TEST_CASE("lexicon matching") {
  auto surfaces = [](std::string_view text) {
    std::vector<std::string> out;
    for (const auto& t : find_demonstratives(text)) out.push_back(t.surface);
    return out;
  };
  CHECK(surfaces("That one is heavier than this") == std::vector<std::string>{"That one", "this"});
  CHECK(surfaces("this one's 10") == std::vector<std::string>{"this"});
  CHECK(surfaces("thistle, thatch, itself, whit") .empty());
  CHECK(surfaces("These and THOSE") == std::vector<std::string>{"These", "THOSE"});
  CHECK(surfaces("don't it") == std::vector<std::string>{"it"});
  const auto toks = find_demonstratives("so it is");
  REQUIRE(toks.size() == 1);
  CHECK(toks[0].begin == 3);
  CHECK(toks[0].end == 5);
  CHECK(toks[0].number == GrammaticalNumber::singular);
}

TEST_CASE("plural takes every remaining referent and starves later singulars") {
  using enum Color;
  const auto p = paraphrase("these and that", {red, blue, green});
  CHECK(p.text == "[red block, blue block, green block] and that");
  CHECK(p.consumed == 3);
}

TEST_CASE("queue exhaustion leaves the rest as written") {
  CHECK(dense_paraphrase("this and that", {Color::blue}) == "[blue block] and that");
  CHECK(dense_paraphrase("this and that", {}) == "this and that");
}

TEST_CASE("lexicon override") {
  Lexicon lex{{"dieser"}, {}};
  CHECK(dense_paraphrase("dieser ist 10, this too", {Color::red}, lex) == "[red block] ist 10, this too");
}

TEST_CASE("referent queue: overlap, gesture order, distance, dedup") {
  using enum Color;
  const Utterance u{"u", "P1", 1000, 2000, "", std::nullopt};
  const std::vector<Pointing> ps{
      pointing("late", 1500, 1800, {{yellow, 100}, {red, 300}}),
      pointing("early", 900, 1100, {{green, 200}, {red, 100}}),
      pointing("outside", 2001, 2500, {{purple, 50}}),
      pointing("touching", 0, 1000, {{blue, 900}}),
  };
  CHECK(build_referent_queue(u, ps) == ReferentQueue{blue, green, red, yellow});
}

TEST_CASE("overlap uses closed intervals") {
  CHECK(overlaps(0, 10, 10, 20));
  CHECK(overlaps(5, 5, 0, 10));
  CHECK_FALSE(overlaps(0, 9, 10, 20));
}

// Random utterances assembled from a word list with demonstratives mixed in.
TEST_CASE("paraphrase properties") {
  static const std::vector<std::string> words{
      "so", "is", "heavier", "than", "10", "and", "the", "scale", "this", "that", "these",
      "those", "it", "this one", "that one", "that's", "it's", "thistle", "red", "block,", "?"};
  std::mt19937 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const int n = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int i = 0; i < n; ++i) {
      if (!text.empty()) text += ' ';
      text += words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
    }
    ReferentQueue q;
    for (const auto c : kColors) {
      if (std::bernoulli_distribution(0.4)(rng)) q.push_back(c);
    }
    std::shuffle(q.begin(), q.end(), rng);
    CAPTURE(text);

    // No referents: byte-identical.
    CHECK(dense_paraphrase(text, {}) == text);

    const auto p = paraphrase(text, q);
    CHECK(p.consumed <= q.size());
    const auto demos = find_demonstratives(text);
    if (demos.empty()) CHECK(p.text == text);
    // Each referent used appears exactly once, in queue order.
    std::size_t from = 0;
    for (std::size_t i = 0; i < p.consumed; ++i) {
      const auto name = std::string(to_string(q[i])) + " block";
      const auto at = p.text.find(name, from);
      REQUIRE(at != std::string::npos);
      from = at + name.size();
    }
    // Deterministic.
    CHECK(paraphrase(text, q).text == p.text);
  }
}
