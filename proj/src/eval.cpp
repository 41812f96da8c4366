#include "cgtrack/eval.hpp"

#include <array>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

namespace cgtrack::eval {

namespace {

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::set<Proposition> fue(const cgt::BankState& s) {
  auto out = s.fbank();
  out.insert(s.ebank.begin(), s.ebank.end());
  return out;
}

double round6(double v) { return std::stod(fixed6(v)); }

}  // namespace

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::none: return "none";
    case Condition::gold_utterances: return "gold-utterances";
    case Condition::gold_gestures: return "gold-gestures";
    case Condition::gold_objects: return "gold-objects";
  }
  return "none";
}

std::optional<Condition> condition_from_string(std::string_view name) {
  for (const auto c : {Condition::none, Condition::gold_utterances, Condition::gold_gestures,
                       Condition::gold_objects}) {
    if (to_string(c) == name) return c;
  }
  if (name == "utterances") return Condition::gold_utterances;
  if (name == "gestures") return Condition::gold_gestures;
  if (name == "objects") return Condition::gold_objects;
  return std::nullopt;
}

BankScores score_states(const cgt::BankState& pred, const cgt::BankState& gold) {
  return {dice(pred.qbank, gold.qbank).value, dice(pred.ebank, gold.ebank).value,
          dice(pred.fbank(), gold.fbank()).value, dice(fue(pred), fue(gold)).value};
}

GoldTrajectory gold_trajectory(std::span<const GoldMove> moves) {
  GoldTrajectory out;
  cgt::Tracker tracker;
  for (const auto& g : moves) {
    out.push_back(tracker.apply(g.utterance_id, EpistemicMove::make(g.label, g.props)));
  }
  return out;
}

EvalReport score_trajectory(std::span<const cgt::MoveRecord> pred, const GoldTrajectory& gold,
                            Condition condition) {
  EvalReport r;
  r.condition = condition;
  std::map<std::string, const cgt::MoveRecord*> gold_by_id;
  for (const auto& g : gold) gold_by_id[g.utterance_id] = &g;

  std::set<std::string> matched;
  BankScores sum;
  std::array<std::size_t, 4> defined{};
  for (const auto& p : pred) {
    const auto it = gold_by_id.find(p.utterance_id);
    if (it == gold_by_id.end()) {
      r.unmatched.push_back(p.utterance_id);
      continue;
    }
    matched.insert(p.utterance_id);
    const auto& g = it->second->state;
    UtteranceScore row{p.utterance_id, p.move, dice(p.state.qbank, g.qbank),
                       dice(p.state.ebank, g.ebank), dice(p.state.fbank(), g.fbank()),
                       dice(fue(p.state), fue(g))};
    const std::array<const DiceScore*, 4> cells{&row.qbank, &row.ebank, &row.fbank, &row.fue};
    const std::array<double*, 4> sums{&sum.qbank, &sum.ebank, &sum.fbank, &sum.fue};
    for (std::size_t k = 0; k < 4; ++k) {
      if (cells[k]->denominator == 0) continue;
      *sums[k] += cells[k]->value;
      ++defined[k];
    }
    r.rows.push_back(std::move(row));
  }
  for (const auto& g : gold) {
    if (!matched.count(g.utterance_id)) r.unmatched.push_back(g.utterance_id);
  }
  // With no scored row both sides were empty throughout, which is agreement.
  auto mean = [](double total, std::size_t n) { return n > 0 ? total / static_cast<double>(n) : 1.0; };
  if (!r.rows.empty()) {
    r.mean = {mean(sum.qbank, defined[0]), mean(sum.ebank, defined[1]), mean(sum.fbank, defined[2]),
              mean(sum.fue, defined[3])};
  }
  const auto pred_final = pred.empty() ? cgt::initial_state() : pred.back().state;
  const auto gold_final = gold.empty() ? cgt::initial_state() : gold.back().state;
  r.final_state = score_states(pred_final, gold_final);
  return r;
}

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out << "utterance_id,move,qbank_dsc,ebank_dsc,fbank_dsc,fue_dsc\n";
  for (const auto& row : rows) {
    out << row.utterance_id << ',' << to_string(row.move) << ',' << fixed6(row.qbank.value) << ','
        << fixed6(row.ebank.value) << ',' << fixed6(row.fbank.value) << ','
        << fixed6(row.fue.value) << '\n';
  }
  out << "#mean,," << fixed6(mean.qbank) << ',' << fixed6(mean.ebank) << ',' << fixed6(mean.fbank)
      << ',' << fixed6(mean.fue) << '\n';
  out << "#final,," << fixed6(final_state.qbank) << ',' << fixed6(final_state.ebank) << ','
      << fixed6(final_state.fbank) << ',' << fixed6(final_state.fue) << '\n';
  out << "#condition=" << to_string(condition) << '\n';
  if (!unmatched.empty()) {
    out << "#unmatched=";
    for (std::size_t i = 0; i < unmatched.size(); ++i) out << (i ? ";" : "") << unmatched[i];
    out << '\n';
  }
  return out.str();
}

std::string EvalReport::to_json() const {
  using nlohmann::ordered_json;
  auto scores = [](const BankScores& s) {
    return ordered_json{{"qbank_dsc", round6(s.qbank)},
                        {"ebank_dsc", round6(s.ebank)},
                        {"fbank_dsc", round6(s.fbank)},
                        {"fue_dsc", round6(s.fue)}};
  };
  ordered_json j;
  j["condition"] = std::string(to_string(condition));
  j["rows"] = ordered_json::array();
  for (const auto& row : rows) {
    j["rows"].push_back(ordered_json{{"utterance_id", row.utterance_id},
                                     {"move", std::string(to_string(row.move))},
                                     {"qbank_dsc", round6(row.qbank.value)},
                                     {"ebank_dsc", round6(row.ebank.value)},
                                     {"fbank_dsc", round6(row.fbank.value)},
                                     {"fue_dsc", round6(row.fue.value)}});
  }
  j["mean"] = scores(mean);
  j["final"] = scores(final_state);
  j["unmatched"] = unmatched;
  return j.dump(2) + "\n";
}

std::string EvalReport::plot_csv() const {
  std::ostringstream out;
  out << "move_index,utterance_id,qbank,ebank,fbank,fue\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    out << i + 1 << ',' << row.utterance_id << ',' << fixed6(row.qbank.value) << ','
        << fixed6(row.ebank.value) << ',' << fixed6(row.fbank.value) << ','
        << fixed6(row.fue.value) << '\n';
  }
  return out.str();
}

}  // namespace cgtrack::eval
