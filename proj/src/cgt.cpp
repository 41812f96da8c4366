#include "cgtrack/cgt.hpp"

#include <algorithm>
#include <map>

namespace cgtrack::cgt {

namespace {

bool has_weight_fact(const std::set<Proposition>& fbank, Color c) {
  return std::any_of(fbank.begin(), fbank.end(), [&](const Proposition& p) {
    return p.is_block_weight_fact() && p.lhs().first() == c;
  });
}

template <class Range>
bool holds(const Range& r, const Proposition& p) {
  return std::find(r.begin(), r.end(), p) != r.end();
}

// Keeps the newest weight fact per sum; older ones go back to evidence.
bool resolve_conflicts(BankState& s) {
  std::map<BlockSum, std::size_t> newest;
  for (std::size_t i = 0; i < s.facts.size(); ++i) {
    const auto& p = s.facts[i];
    if (p.relation() == Relation::eq && p.has_weight()) newest[p.lhs()] = i;
  }
  bool flagged = false;
  std::vector<Proposition> kept;
  for (std::size_t i = 0; i < s.facts.size(); ++i) {
    const auto& p = s.facts[i];
    if (p.relation() == Relation::eq && p.has_weight() && newest[p.lhs()] != i) {
      s.ebank.insert(p);
      flagged = true;
    } else {
      kept.push_back(p);
    }
  }
  s.facts = std::move(kept);
  return flagged;
}

void derive_equalities(BankState& s) {
  s.derived.clear();
  std::map<Color, Weight> known;
  std::vector<std::pair<Color, Color>> equal;
  for (const auto& p : std::set<Proposition>(s.facts.begin(), s.facts.end())) {
    if (p.is_block_weight_fact()) known.emplace(p.lhs().first(), *p.weight());
    if (p.relation() == Relation::eq && !p.has_weight() && p.lhs().single() &&
        p.rhs_sum()->single()) {
      equal.emplace_back(p.lhs().first(), p.rhs_sum()->first());
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [a, b] : equal) {
      for (const auto& [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
        const auto w = known.find(from);
        if (w == known.end() || known.count(to)) continue;
        const Proposition entailed(BlockSum(to), Relation::eq, w->second);
        if (s.ebank.count(entailed)) continue;
        s.derived.insert(entailed);
        known.emplace(to, w->second);
        changed = true;
      }
    }
  }
}

}  // namespace

std::set<Proposition> BankState::fbank() const {
  std::set<Proposition> out(facts.begin(), facts.end());
  out.insert(derived.begin(), derived.end());
  return out;
}

bool BankState::in_fbank(const Proposition& p) const {
  return derived.count(p) > 0 || holds(facts, p);
}

BankState initial_state() {
  BankState s;
  for (const auto c : kColors) s.qbank.insert(Qud{c});
  return s;
}

Transition close(const BankState& in) {
  Transition t{in, false};
  auto& s = t.state;
  t.contradiction = resolve_conflicts(s);
  derive_equalities(s);
  const auto fb = s.fbank();
  s.qbank.clear();
  for (const auto c : kColors) {
    if (!has_weight_fact(fb, c)) s.qbank.insert(Qud{c});
  }
  return t;
}

std::vector<Proposition> resolve(const BankState& s, const EpistemicMove& m) {
  return m.props.empty() ? s.recent : m.props;
}

Transition step(const BankState& before, const EpistemicMove& m) {
  BankState s = before;
  const auto props = resolve(before, m);
  switch (m.label) {
    case MoveLabel::statement:
      for (const auto& p : props) {
        if (!before.in_fbank(p)) s.ebank.insert(p);
      }
      s.recent = props;
      break;
    case MoveLabel::accept:
      for (const auto& p : props) {
        if (before.ebank.count(p) && !holds(s.facts, p)) {
          s.ebank.erase(p);
          s.facts.push_back(p);
        }
      }
      break;
    case MoveLabel::doubt:
      for (const auto& p : props) {
        if (holds(before.facts, p)) {
          s.facts.erase(std::remove(s.facts.begin(), s.facts.end(), p), s.facts.end());
          s.ebank.insert(p);
        } else if (before.derived.count(p)) {
          s.derived.erase(p);
          s.ebank.insert(p);
        } else if (before.ebank.count(p)) {
          s.ebank.erase(p);
        }
      }
      break;
    case MoveLabel::none:
      break;
  }
  return close(s);
}

BankState apply_move(const BankState& s, const EpistemicMove& m) { return step(s, m).state; }

std::vector<std::string> invariant_violations(const BankState& s) {
  std::vector<std::string> out;
  const auto fb = s.fbank();
  for (const auto& p : s.ebank) {
    if (fb.count(p)) out.push_back("'" + render(p) + "' is in both EBank and FBank");
  }
  for (const auto c : kColors) {
    const bool open = s.qbank.count(Qud{c}) > 0;
    const bool known = has_weight_fact(fb, c);
    if (open == known) {
      out.push_back(std::string("QUD for ") + std::string(to_string(c)) +
                    (open ? " is open although its weight is a fact"
                          : " is closed although no weight fact exists"));
    }
  }
  return out;
}

MoveRecord Tracker::apply(std::string utterance_id, const EpistemicMove& m) {
  auto props = resolve(state_, m);
  if (m.label == MoveLabel::none) props.clear();
  auto t = step(state_, m);
  state_ = t.state;
  return {std::move(utterance_id), m.label, std::move(props), std::move(t.state), t.contradiction};
}

}  // namespace cgtrack::cgt
