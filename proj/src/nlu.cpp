#include "cgtrack/nlu.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "cgtrack/kernels.hpp"

namespace cgtrack::nlu {

namespace {

using Tokens = std::vector<std::string>;
using Phrase = std::vector<std::string>;

constexpr std::array<std::string_view, 5> kNumberWords{"ten", "twenty", "thirty", "forty", "fifty"};

std::vector<Phrase> phrases(std::initializer_list<std::string_view> texts) {
  std::vector<Phrase> out;
  for (const auto t : texts) out.push_back(tokenize(t));
  return out;
}

const std::vector<Phrase>& greater_cues() {
  static const auto p = phrases({"more than", "heavier", "greater"});
  return p;
}
const std::vector<Phrase>& less_cues() {
  static const auto p = phrases({"less than", "lighter"});
  return p;
}
const std::vector<Phrase>& negation_cues() {
  static const auto p = phrases({"not", "n't"});
  return p;
}
const std::vector<Phrase>& equality_cues() {
  static const auto p =
      phrases({"is", "'s", "are", "was", "be", "equals", "equal", "same as", "weighs", "weigh"});
  return p;
}
const std::vector<Phrase>& doubt_cues() {
  static const auto p = phrases({"no", "nope", "not", "wait", "don't think", "disagree", "doubt"});
  return p;
}
const std::vector<Phrase>& affirm_cues() {
  static const auto p =
      phrases({"yeah", "yes", "yep", "right", "correct", "okay", "agreed", "exactly"});
  return p;
}

bool phrase_at(const Tokens& toks, std::size_t pos, const Phrase& phrase) {
  if (phrase.empty() || pos + phrase.size() > toks.size()) return false;
  return std::equal(phrase.begin(), phrase.end(), toks.begin() + static_cast<std::ptrdiff_t>(pos));
}

struct CueHit {
  std::size_t pos = 0;
  std::size_t len = 0;
};

std::optional<CueHit> first_cue(const Tokens& toks, const std::vector<Phrase>& cues) {
  for (std::size_t i = 0; i < toks.size(); ++i) {
    for (const auto& p : cues) {
      if (phrase_at(toks, i, p)) return CueHit{i, p.size()};
    }
  }
  return std::nullopt;
}

bool any_cue(const Tokens& toks, const std::vector<Phrase>& cues) {
  return first_cue(toks, cues).has_value();
}

void push_word(std::string word, Tokens& out) {
  if (word.empty()) return;
  if (word.size() >= 3 && word.compare(word.size() - 3, 3, "n't") == 0) {
    if (word.size() > 3) out.push_back(word.substr(0, word.size() - 3));
    out.emplace_back("n't");
    return;
  }
  const auto apos = word.find('\'');
  if (apos == std::string::npos) {
    out.push_back(std::move(word));
    return;
  }
  auto stem = word.substr(0, apos);
  auto rest = word.substr(apos);
  if (!stem.empty()) out.push_back(std::move(stem));
  if (rest.size() > 1) out.push_back(std::move(rest));
}

// Splits on commas and the word "and", ignoring anything inside brackets.
std::vector<std::string_view> clauses(std::string_view text) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t begin = 0;
  auto word_byte = [&](std::size_t i) {
    return i < text.size() && std::isalnum(static_cast<unsigned char>(text[i])) != 0;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '[') ++depth;
    if (c == ']' && depth > 0) --depth;
    if (depth > 0) continue;
    if (c == ',') {
      out.push_back(text.substr(begin, i - begin));
      begin = i + 1;
    } else if ((c == 'a' || c == 'A') && (i == 0 || !word_byte(i - 1)) && i + 3 <= text.size() &&
               std::tolower(static_cast<unsigned char>(text[i + 1])) == 'n' &&
               std::tolower(static_cast<unsigned char>(text[i + 2])) == 'd' && !word_byte(i + 3)) {
      out.push_back(text.substr(begin, i - begin));
      begin = i + 3;
      i += 2;
    }
  }
  out.push_back(text.substr(begin));
  return out;
}

std::optional<Proposition> extract_clause(const Tokens& toks) {
  const auto gt = first_cue(toks, greater_cues());
  const auto lt = first_cue(toks, less_cues());
  const auto ne = first_cue(toks, negation_cues());
  const auto eq = first_cue(toks, equality_cues());

  std::optional<Relation> rel;
  std::optional<CueHit> comparative;
  if (gt && (!lt || gt->pos < lt->pos)) {
    rel = Relation::gt;
    comparative = gt;
  } else if (lt) {
    rel = Relation::lt;
    comparative = lt;
  }
  if (comparative && ne) return std::nullopt;  // "not more than" has no form here
  if (!rel && ne) rel = Relation::ne;
  if (!rel && eq) rel = Relation::eq;
  if (!rel) return std::nullopt;

  std::size_t cue = toks.size();
  for (const auto& hit : {gt, lt, ne, eq}) {
    if (hit && hit->pos < cue) cue = hit->pos;
  }

  std::uint8_t subject = 0;
  for (std::size_t i = 0; i < cue; ++i) {
    if (const auto c = color_token(toks[i])) subject |= BlockSum(*c).mask();
  }
  if (subject == 0) return std::nullopt;
  const auto lhs = BlockSum::from_mask(subject);

  std::uint8_t object = 0;
  for (std::size_t i = cue; i < toks.size(); ++i) {
    if (object == 0) {
      if (const auto w = weight_token(toks[i])) return Proposition(lhs, *rel, *w);
    }
    if (const auto c = color_token(toks[i])) object |= BlockSum(*c).mask();
  }
  if (object == 0) return std::nullopt;
  const auto rhs = BlockSum::from_mask(object);
  if (!lhs.disjoint(rhs)) return std::nullopt;
  return Proposition(lhs, *rel, rhs);
}

std::string_view relation_phrase(Relation r) {
  switch (r) {
    case Relation::eq: return "is";
    case Relation::ne: return "is not";
    case Relation::lt: return "is less than";
    case Relation::gt: return "is more than";
  }
  return "is";
}

std::string color_words(BlockSum s) {
  std::string out;
  for (const auto c : s.colors()) {
    if (!out.empty()) out += ' ';
    out += to_string(c);
  }
  return out;
}

ExtractionResult rank_cosine(const std::vector<double>& scores,
                             std::span<const std::size_t> candidates,
                             const PropositionVocabulary& vocab, double threshold) {
  std::vector<std::size_t> keep;
  for (const auto j : candidates) {
    if (scores[j] >= threshold && scores[j] > 0) keep.push_back(j);
  }
  std::stable_sort(keep.begin(), keep.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  ExtractionResult r;
  r.method = ExtractionMethod::cosine;
  for (const auto j : keep) r.items.push_back({vocab[j], scores[j]});
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

PropositionVocabulary::PropositionVocabulary(std::vector<Proposition> props) {
  std::vector<std::pair<std::string, Proposition>> keyed;
  keyed.reserve(props.size());
  for (auto& p : props) keyed.emplace_back(render(p), p);
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [text, p] : keyed) {
    if (index_.count(text)) continue;
    index_.emplace(text, props_.size());
    rendered_.push_back(text);
    props_.push_back(p);
  }
}

std::optional<std::size_t> PropositionVocabulary::index_of(std::string_view rendered) const {
  const auto it = index_.find(std::string(rendered));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string PropositionVocabulary::export_text() const {
  std::string out;
  for (const auto& r : rendered_) {
    out += r;
    out += '\n';
  }
  return out;
}

PropositionVocabulary enumerate_propositions(const VocabularyConfig& config) {
  constexpr std::array<Relation, 4> kRelations{Relation::eq, Relation::ne, Relation::lt,
                                               Relation::gt};
  std::set<Proposition> unique;
  for (std::uint8_t a = 1; a <= BlockSum::kAllMask; ++a) {
    const auto lhs = BlockSum::from_mask(a);
    if (config.sum_vs_weight) {
      for (const auto g : Weight::kGrams) {
        for (const auto r : kRelations) unique.insert(Proposition(lhs, r, Weight(g)));
      }
    }
    if (config.sum_vs_sum) {
      for (std::uint8_t b = 1; b <= BlockSum::kAllMask; ++b) {
        if (a & b) continue;
        for (const auto r : kRelations) {
          unique.insert(Proposition(lhs, r, BlockSum::from_mask(b)));
        }
      }
    }
  }
  return PropositionVocabulary({unique.begin(), unique.end()});
}

// ---------------------------------------------------------------------------

std::vector<std::string> tokenize(std::string_view text) {
  Tokens out;
  std::string word;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isalnum(c)) {
      word += static_cast<char>(std::tolower(c));
    } else if (c == '\'') {
      word += '\'';
    } else if (text.substr(i, 3) == "\xE2\x80\x99") {
      word += '\'';
      i += 2;
    } else {
      push_word(std::exchange(word, {}), out);
    }
  }
  push_word(std::move(word), out);
  return out;
}

std::optional<Color> color_token(std::string_view token) { return color_from_string(token); }

std::optional<Weight> weight_token(std::string_view token) {
  for (std::size_t i = 0; i < kNumberWords.size(); ++i) {
    if (token == kNumberWords[i]) return Weight(Weight::kGrams[i]);
  }
  if (token.size() == 3 && token.back() == 'g') token.remove_suffix(1);
  if (token.size() == 2 && token[1] == '0' && token[0] >= '1' && token[0] <= '5') {
    return Weight((token[0] - '0') * 10);
  }
  return std::nullopt;
}

Mentions mentions(std::string_view text) {
  Mentions m;
  for (const auto& t : tokenize(text)) {
    if (const auto c = color_token(t)) m.colors |= BlockSum(*c).mask();
    if (const auto w = weight_token(t)) {
      m.weights |= static_cast<std::uint8_t>(1u << (w->grams() / 10 - 1));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ExtractionMethod m) {
  return m == ExtractionMethod::rule ? "rule" : "cosine";
}

std::vector<Proposition> ExtractionResult::selected() const {
  std::vector<Proposition> out;
  if (method == ExtractionMethod::cosine) {
    if (!items.empty()) out.push_back(items.front().prop);
    return out;
  }
  for (const auto& it : items) out.push_back(it.prop);
  return out;
}

PruneResult prune_candidates(std::string_view text, const PropositionVocabulary& vocab,
                             std::size_t threshold) {
  const auto m = mentions(text);
  PruneResult r;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto& p = vocab[i];
    if (!p.blocks().subset_of(m.colors)) continue;
    if (const auto w = p.weight()) {
      if (!(m.weights & (1u << (w->grams() / 10 - 1)))) continue;
    }
    r.candidates.push_back(i);
  }
  r.backoff = r.candidates.size() > threshold;
  return r;
}

ExtractionResult extract_rule(std::string_view text) {
  ExtractionResult r;
  r.method = ExtractionMethod::rule;
  for (const auto clause : clauses(text)) {
    const auto p = extract_clause(tokenize(clause));
    if (!p) continue;
    const bool seen = std::any_of(r.items.begin(), r.items.end(),
                                  [&](const ScoredProposition& s) { return s.prop == *p; });
    if (!seen) r.items.push_back({*p, 1.0});
  }
  return r;
}

CosineIndex::CosineIndex(const PropositionVocabulary& vocab)
    : vocab_(&vocab), columns_(kDims * vocab.size(), 0.0), norms_(vocab.size(), 0.0) {
  const auto n = vocab.size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto v = project(template_text(vocab[j]));
    double sq = 0;
    for (std::size_t d = 0; d < kDims; ++d) {
      columns_[d * n + j] = v[d];
      sq += v[d] * v[d];
    }
    norms_[j] = sq;  // squared
  }
}

std::array<double, CosineIndex::kDims> CosineIndex::project(std::string_view text) {
  std::array<double, kDims> v{};
  for (const auto& t : tokenize(text)) {
    if (const auto c = color_token(t)) {
      v[static_cast<std::size_t>(*c)] += 1;
    } else if (const auto w = weight_token(t)) {
      v[5 + static_cast<std::size_t>(w->grams() / 10 - 1)] += 1;
    } else if (t == "not" || t == "n't") {
      v[10] += 1;
    } else if (t == "more" || t == "heavier" || t == "greater") {
      v[11] += 1;
    } else if (t == "less" || t == "lighter") {
      v[12] += 1;
    }
  }
  return v;
}

std::string CosineIndex::template_text(const Proposition& p) {
  std::string out = color_words(p.lhs());
  out += ' ';
  out += relation_phrase(p.relation());
  out += ' ';
  if (const auto w = p.weight()) {
    out += std::to_string(w->grams());
  } else {
    out += color_words(*p.rhs_sum());
  }
  return out;
}

std::vector<double> CosineIndex::scores(std::string_view text) const {
  const auto q = project(text);
  double qq = 0;
  for (const auto x : q) qq += x * x;
  const auto n = vocab_->size();
  std::vector<double> out(n, 0.0);
  if (qq == 0) return out;
  kernels::column_dots(q, columns_, n, out);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = std::min(1.0, out[j] / std::sqrt(qq * norms_[j]));
  }
  return out;
}

ExtractionResult extract_cosine(std::string_view text, const CosineIndex& index,
                                double threshold) {
  std::vector<std::size_t> all(index.vocabulary().size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return extract_cosine(text, index, all, threshold);
}

ExtractionResult extract_cosine(std::string_view text, const CosineIndex& index,
                                std::span<const std::size_t> candidates, double threshold) {
  return rank_cosine(index.scores(text), candidates, index.vocabulary(), threshold);
}

ExtractionResult extract(std::string_view text, const CosineIndex& index,
                         const ExtractorConfig& config) {
  const auto pruned = prune_candidates(text, index.vocabulary(), config.prune_threshold);
  if (pruned.backoff) return extract_cosine(text, index, config.cosine_threshold);
  auto rule = extract_rule(text);
  if (!rule.empty()) return rule;
  if (pruned.candidates.empty()) return rule;
  return extract_cosine(text, index, pruned.candidates, config.cosine_threshold);
}

// ---------------------------------------------------------------------------

MoveLabel baseline_label(std::string_view text, const ExtractionResult& extraction,
                         std::span<const double>) {
  const auto toks = tokenize(text);
  const bool doubt = any_cue(toks, doubt_cues());
  if (!extraction.empty() && !doubt) return MoveLabel::statement;
  if (doubt) return MoveLabel::doubt;
  if (any_cue(toks, affirm_cues())) return MoveLabel::accept;
  return MoveLabel::none;
}

EpistemicMove assemble_move(MoveLabel label, const ExtractionResult& extraction) {
  return EpistemicMove::make(label, extraction.selected());
}

EpistemicMove classify_move_baseline(std::string_view text, const ExtractionResult& extraction) {
  return assemble_move(baseline_label(text, extraction), extraction);
}

}  // namespace cgtrack::nlu
