#include "doctest.h"

#include <cmath>
#include <random>

#include "cgtrack/nlu.hpp"

using namespace cgtrack;
using namespace cgtrack::nlu;

namespace {

const PropositionVocabulary& vocab() {
  static const auto v = enumerate_propositions();
  return v;
}

const CosineIndex& index() {
  static const CosineIndex i(vocab());
  return i;
}

std::vector<std::string> rendered(const std::vector<Proposition>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(render(p));
  return out;
}

std::vector<std::string> rule(std::string_view text) {
  return rendered(extract_rule(text).selected());
}

using Strings = std::vector<std::string>;

}  // namespace

TEST_CASE("vocabulary is deterministic, sorted and contains the anchors") {
  const auto a = enumerate_propositions();
  const auto b = enumerate_propositions();
  CHECK(a.export_text() == b.export_text());
  CHECK(a.size() == 980);
  CHECK(a.contains("red = 10"));
  CHECK(a.contains("red < blue + green"));
  CHECK_FALSE(a.contains("blue + green > red"));
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a.rendered(i - 1) < a.rendered(i));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(parse_proposition(a.rendered(i)) == a[i]);
}

TEST_CASE("restricted vocabularies") {
  CHECK(enumerate_propositions({true, false}).size() == 620);
  CHECK(enumerate_propositions({false, true}).size() == 360);
}

TEST_CASE("tokenizer splits clitics and folds curly apostrophes") {
  CHECK(tokenize("That's it, isn't it?") == Strings{"that", "'s", "it", "is", "n't", "it"});
  CHECK(tokenize("[green block]’s 20g") == Strings{"green", "block", "'s", "20g"});
  CHECK(tokenize("n't") == Strings{"n't"});
  CHECK(weight_token("20g")->grams() == 20);
  CHECK(weight_token("forty")->grams() == 40);
  CHECK_FALSE(weight_token("60").has_value());
  CHECK_FALSE(weight_token("100").has_value());
}

TEST_CASE("rule extraction") {
  CHECK(rule("So, [purple block]'s more than 20") == Strings{"purple > 20"});
  CHECK(rule("So [red block]’s a 10 and [green block]’s a 20 right there?") ==
        Strings{"red = 10", "green = 20"});
  CHECK(rule("So, [green block, purple block] are 50 on here?") == Strings{"green + purple = 50"});
  CHECK(rule("so purple is 30 and blue is 10?") == Strings{"purple = 30", "blue = 10"});
  CHECK(rule("red is heavier than blue") == Strings{"blue < red"});
  CHECK(rule("yellow is lighter than green plus purple") == Strings{"yellow < green + purple"});
  CHECK(rule("yellow is lighter than green and purple") == Strings{"yellow < green"});
  CHECK(rule("red isn't twenty") == Strings{"red != 20"});
  CHECK(rule("red weighs the same as blue") == Strings{"red = blue"});
  CHECK(rule("red is not heavier than blue").empty());
  CHECK(rule("yeah, that should be 40 right there").empty());
  CHECK(rule("red is red").empty());
  CHECK(rule("red is 10, red is 10") == Strings{"red = 10"});
}

TEST_CASE("cosine scores match a hand computation") {
  // Query "red is 10" projects to red:1, 10:1.
  const auto s = index().scores("red is 10");
  CHECK(s[*vocab().index_of("red = 10")] == doctest::Approx(1.0).epsilon(1e-12));
  const double two_over_root6 = 2.0 / std::sqrt(6.0);
  for (const auto* p : {"red != 10", "red < 10", "red > 10", "red + blue = 10"}) {
    CAPTURE(p);
    CHECK(s[*vocab().index_of(p)] == doctest::Approx(two_over_root6).epsilon(1e-12));
  }
  CHECK(s[*vocab().index_of("blue = 20")] == 0.0);
  CHECK(s[*vocab().index_of("red = 20")] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cosine scores agree with a direct dot product over the whole vocabulary") {
  for (const auto* text : {"red is not heavier than 20 or green", "blue blue 30", "less than fifty"}) {
    const auto q = CosineIndex::project(text);
    const auto s = index().scores(text);
    for (std::size_t j = 0; j < vocab().size(); ++j) {
      const auto p = CosineIndex::project(CosineIndex::template_text(vocab()[j]));
      double dot = 0, qq = 0, pp = 0;
      for (std::size_t d = 0; d < CosineIndex::kDims; ++d) {
        dot += q[d] * p[d];
        qq += q[d] * q[d];
        pp += p[d] * p[d];
      }
      CHECK(s[j] == doctest::Approx(std::min(1.0, dot / std::sqrt(qq * pp))).epsilon(1e-12));
    }
  }
}

TEST_CASE("cosine ranking keeps scores above the threshold in descending order") {
  const auto r = extract_cosine("red is 10", index());
  REQUIRE_FALSE(r.empty());
  CHECK(r.method == ExtractionMethod::cosine);
  CHECK(render(r.items.front().prop) == "red = 10");
  for (std::size_t i = 1; i < r.items.size(); ++i) CHECK(r.items[i - 1].score >= r.items[i].score);
  for (const auto& it : r.items) CHECK(it.score >= kDefaultCosineThreshold);
  CHECK(r.selected().size() == 1);
  CHECK(extract_cosine("hello there", index()).empty());
}

TEST_CASE("pruning keeps only propositions over mentioned blocks and weights") {
  const auto p = prune_candidates("red and blue, maybe 10", vocab());
  CHECK_FALSE(p.backoff);
  // 3 sums x 1 weight x 4 relations + (=, !=, and both < orders) for red/blue.
  CHECK(p.candidates.size() == 12 + 4);
  const auto wide = prune_candidates("red blue green 10 20 30 40 50", vocab());
  CHECK(wide.candidates.size() == 7 * 5 * 4 + 24);
  CHECK(wide.backoff);
  CHECK_FALSE(prune_candidates("red blue green 10 20 30 40 50", vocab(), 1000).backoff);
}

// Soundness: any proposition the rule pass finds is among the pruned
// candidates, so pruning never loses a rule match.
TEST_CASE("pruning is sound for rule matches") {
  static const std::vector<std::string> words{"red", "blue", "green", "purple", "yellow", "is",
                                              "not", "more", "than", "less", "10", "twenty",
                                              "30g", "and", "the", "same", "as", "heavier", ","};
  std::mt19937 rng(9);
  int checked = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    std::string text;
    const int n = std::uniform_int_distribution<int>(1, 9)(rng);
    for (int i = 0; i < n; ++i) {
      text += words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)] + " ";
    }
    const auto found = extract_rule(text).selected();
    const auto pruned = prune_candidates(text, vocab(), vocab().size());
    for (const auto& p : found) {
      const auto idx = vocab().index_of(render(p));
      REQUIRE(idx.has_value());
      CHECK(std::find(pruned.candidates.begin(), pruned.candidates.end(), *idx) !=
            pruned.candidates.end());
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("extraction falls back to cosine and backs off past the threshold") {
  const auto rule_hit = extract("red is 10", index());
  CHECK(rule_hit.method == ExtractionMethod::rule);

  const auto cos = extract("red 10 maybe", index());
  CHECK(cos.method == ExtractionMethod::cosine);
  REQUIRE_FALSE(cos.empty());
  CHECK(render(cos.selected().front()) == "red = 10");

  // Many mentions: more than 137 candidates, so the whole vocabulary is ranked.
  const auto back = extract("red blue green 10 20 30 40 50", index());
  CHECK(back.method == ExtractionMethod::cosine);

  CHECK(extract("yeah, that should be 40 right there", index()).empty());
}

TEST_CASE("baseline move labels") {
  const auto some = extract("red is 10", index());
  const ExtractionResult none;
  CHECK(baseline_label("red is 10", some) == MoveLabel::statement);
  CHECK(baseline_label("no, red is not 10", some) == MoveLabel::doubt);
  CHECK(baseline_label("wait", none) == MoveLabel::doubt);
  CHECK(baseline_label("yeah, that should be 40 right there", none) == MoveLabel::accept);
  CHECK(baseline_label("hmm let me see", none) == MoveLabel::none);

  const auto m = classify_move_baseline("hmm", none);
  CHECK(m.label == MoveLabel::none);
  CHECK(assemble_move(MoveLabel::none, some).props.empty());
  CHECK(assemble_move(MoveLabel::statement, some).props.size() == 1);
  CHECK(assemble_move(MoveLabel::accept, none).props.empty());
}
