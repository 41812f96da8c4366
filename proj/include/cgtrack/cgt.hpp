#pragma once

// Common-ground banks and the closure rules that keep them consistent.
//
//   STATEMENT(P)  P \ FBank joins EBank; P becomes the recent content
//   ACCEPT(P)     members of P in EBank move to FBank
//   DOUBT(P)      members of P in FBank move to EBank; members in EBank leave
//   NONE          no change
//
// A move with no propositions falls back to the recent content. After every
// move, closure runs:
//   - conflicting weight facts for the same sum keep only the latest accepted
//     one, the others return to EBank (the transition is flagged);
//   - equality facts between single blocks propagate weights ("red = 10" and
//     "red = blue" entail "blue = 10") unless the block already has a weight
//     fact or the entailed proposition is open evidence;
//   - QBank holds a question for every block without a weight fact.

#include <set>
#include <string>
#include <vector>

#include "cgtrack/domain.hpp"

namespace cgtrack::cgt {

struct BankState {
  std::set<Qud> qbank;
  std::set<Proposition> ebank;
  std::vector<Proposition> facts;   // accepted explicitly, oldest first
  std::set<Proposition> derived;    // entailed by facts, recomputed by closure
  std::vector<Proposition> recent;  // last stated content, empty if none

  std::set<Proposition> fbank() const;
  bool in_fbank(const Proposition& p) const;
  bool operator==(const BankState&) const = default;
};

/// Every block is an open question; evidence and facts are empty.
BankState initial_state();

struct Transition {
  BankState state;
  bool contradiction = false;
};

Transition close(const BankState& s);
Transition step(const BankState& s, const EpistemicMove& m);
BankState apply_move(const BankState& s, const EpistemicMove& m);

/// Propositions a move acts on: its own, or the recent content when empty.
std::vector<Proposition> resolve(const BankState& s, const EpistemicMove& m);

/// Human-readable descriptions of broken invariants; empty when consistent.
std::vector<std::string> invariant_violations(const BankState& s);

struct MoveRecord {
  std::string utterance_id;
  MoveLabel move = MoveLabel::none;
  std::vector<Proposition> props;  // resolved content
  BankState state;                 // after the move
  bool contradiction = false;
};

/// Single-writer owner of the evolving bank state.
class Tracker {
 public:
  Tracker() : state_(initial_state()) {}
  explicit Tracker(BankState s) : state_(std::move(s)) {}

  MoveRecord apply(std::string utterance_id, const EpistemicMove& m);
  const BankState& state() const { return state_; }

 private:
  BankState state_;
};

}  // namespace cgtrack::cgt
