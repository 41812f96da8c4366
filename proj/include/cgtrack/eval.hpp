#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cgtrack/cgt.hpp"
#include "cgtrack/domain.hpp"

namespace cgtrack::eval {

/// Sorensen-Dice overlap. An empty pair scores 0 (no similarity).
struct DiceScore {
  double value = 0;
  std::size_t numerator = 0;    // 2|X n Y|
  std::size_t denominator = 0;  // |X| + |Y|
};

template <class T>
DiceScore dice(const std::set<T>& x, const std::set<T>& y) {
  std::size_t shared = 0;
  for (const auto& v : x) shared += y.count(v);
  DiceScore d;
  d.numerator = 2 * shared;
  d.denominator = x.size() + y.size();
  d.value = d.denominator > 0 ? static_cast<double>(d.numerator) / static_cast<double>(d.denominator)
                              : 0.0;
  return d;
}

enum class Condition { none, gold_utterances, gold_gestures, gold_objects };

std::string_view to_string(Condition c);
std::optional<Condition> condition_from_string(std::string_view name);

struct BankScores {
  double qbank = 0, ebank = 0, fbank = 0, fue = 0;
  bool operator==(const BankScores&) const = default;
};

struct UtteranceScore {
  std::string utterance_id;
  MoveLabel move = MoveLabel::none;
  DiceScore qbank, ebank, fbank, fue;
};

BankScores score_states(const cgt::BankState& pred, const cgt::BankState& gold);

struct EvalReport {
  Condition condition = Condition::none;
  std::vector<UtteranceScore> rows;
  // Per bank, the mean over rows where either side is non-empty. A row with
  // both sides empty prints as 0 but is left out of that bank's mean, so a
  // trajectory scored against itself averages exactly 1. A bank that is empty
  // on both sides in every row has mean 1.
  BankScores mean;
  BankScores final_state;  // last predicted state against last gold state
  std::vector<std::string> unmatched;

  std::string to_csv() const;
  std::string to_json() const;
  /// Per-move DSC series: move_index,qbank,ebank,fbank,fue
  std::string plot_csv() const;
};

struct GoldMove {
  std::string utterance_id;
  MoveLabel label = MoveLabel::none;
  std::vector<Proposition> props;
};

using GoldTrajectory = std::vector<cgt::MoveRecord>;

/// Replays annotated moves through the same closure rules as prediction.
GoldTrajectory gold_trajectory(std::span<const GoldMove> moves);

/// Aligns on utterance id. Ids present on only one side are listed in
/// `unmatched` and left out of the means.
EvalReport score_trajectory(std::span<const cgt::MoveRecord> pred, const GoldTrajectory& gold,
                            Condition condition = Condition::none);

}  // namespace cgtrack::eval
