#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cgtrack/domain.hpp"

namespace cgtrack::nlu {

// ---------------------------------------------------------------------------
// Vocabulary

struct VocabularyConfig {
  bool sum_vs_weight = true;
  bool sum_vs_sum = true;
};

class PropositionVocabulary {
 public:
  explicit PropositionVocabulary(std::vector<Proposition> props);

  std::size_t size() const { return props_.size(); }
  const Proposition& operator[](std::size_t i) const { return props_[i]; }
  const std::string& rendered(std::size_t i) const { return rendered_[i]; }
  const std::vector<Proposition>& items() const { return props_; }
  std::optional<std::size_t> index_of(std::string_view rendered) const;
  bool contains(std::string_view rendered) const { return index_of(rendered).has_value(); }

  /// One rendered proposition per line, in vocabulary (sorted) order.
  std::string export_text() const;

 private:
  std::vector<Proposition> props_;
  std::vector<std::string> rendered_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Every canonical proposition of the forms `sum rel weight` and
/// `sum rel sum` (disjoint sums), sorted by rendered string.
PropositionVocabulary enumerate_propositions(const VocabularyConfig& config = {});

// Size of the default enumeration: 31 sums x 5 weights x 4 relations, plus
// 90 unordered disjoint pairs for each of = and !=, plus 180 ordered pairs for <.
inline constexpr std::size_t kDefaultVocabularySize = 980;

// ---------------------------------------------------------------------------
// Text analysis shared by the extractors and the classifier

/// Lower-cased word tokens. Clitics are split off: "that's" -> "that", "'s";
/// "isn't" -> "is", "n't". Curly apostrophes are folded to '\''.
std::vector<std::string> tokenize(std::string_view text);

std::optional<Color> color_token(std::string_view token);
// Accepts 10..50 in digits ("20", "20g") or words ("twenty").
std::optional<Weight> weight_token(std::string_view token);

struct Mentions {
  std::uint8_t colors = 0;   // BlockSum-style mask
  std::uint8_t weights = 0;  // bit i set for Weight::kGrams[i]
};

Mentions mentions(std::string_view text);

// ---------------------------------------------------------------------------
// Extraction

enum class ExtractionMethod { rule, cosine };

std::string_view to_string(ExtractionMethod m);

struct ScoredProposition {
  Proposition prop;
  double score;
};

struct ExtractionResult {
  ExtractionMethod method = ExtractionMethod::rule;
  std::vector<ScoredProposition> items;  // descending score

  bool empty() const { return items.empty(); }
  /// Propositions passed on as move content: every rule match, or the single
  /// best cosine match.
  std::vector<Proposition> selected() const;
};

inline constexpr std::size_t kDefaultPruneThreshold = 137;
inline constexpr double kDefaultCosineThreshold = 0.5;

struct PruneResult {
  std::vector<std::size_t> candidates;  // vocabulary indices
  bool backoff = false;                 // more candidates than the threshold
};

PruneResult prune_candidates(std::string_view text, const PropositionVocabulary& vocab,
                             std::size_t threshold = kDefaultPruneThreshold);

ExtractionResult extract_rule(std::string_view text);

/// Ranks propositions by cosine similarity between term-frequency vectors of
/// the text and of each proposition's template, over the domain lexicon.
class CosineIndex {
 public:
  static constexpr std::size_t kDims = 13;  // 5 colors, 5 weights, not, more, less

  explicit CosineIndex(const PropositionVocabulary& vocab);

  const PropositionVocabulary& vocabulary() const { return *vocab_; }
  std::vector<double> scores(std::string_view text) const;

  static std::array<double, kDims> project(std::string_view text);
  static std::string template_text(const Proposition& p);

 private:
  const PropositionVocabulary* vocab_;
  std::vector<double> columns_;  // kDims x size, dimension-major
  std::vector<double> norms_;
};

ExtractionResult extract_cosine(std::string_view text, const CosineIndex& index,
                                double threshold = kDefaultCosineThreshold);
// Restricted to the given vocabulary indices.
ExtractionResult extract_cosine(std::string_view text, const CosineIndex& index,
                                std::span<const std::size_t> candidates,
                                double threshold = kDefaultCosineThreshold);

struct ExtractorConfig {
  std::size_t prune_threshold = kDefaultPruneThreshold;
  double cosine_threshold = kDefaultCosineThreshold;
};

/// Rule pass first; cosine over the pruned candidates when the rule pass
/// finds nothing, and over the whole vocabulary when pruning backs off.
ExtractionResult extract(std::string_view text, const CosineIndex& index,
                         const ExtractorConfig& config = {});

// ---------------------------------------------------------------------------
// Epistemic move classification

using MoveClassifier = std::function<MoveLabel(
    std::string_view text, const ExtractionResult& extraction, std::span<const double> features)>;

MoveLabel baseline_label(std::string_view text, const ExtractionResult& extraction,
                         std::span<const double> features = {});

/// Attaches content to a label: STATEMENT, ACCEPT and DOUBT carry the selected
/// propositions (possibly none); NONE carries nothing.
EpistemicMove assemble_move(MoveLabel label, const ExtractionResult& extraction);

EpistemicMove classify_move_baseline(std::string_view text, const ExtractionResult& extraction);

}  // namespace cgtrack::nlu
