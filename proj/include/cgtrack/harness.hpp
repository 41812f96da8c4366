#pragma once

#include "cgtrack/eval.hpp"
#include "cgtrack/replay.hpp"
#include "cgtrack/session.hpp"

namespace cgtrack::eval {

struct SubstitutionRun {
  replay::ReplayResult replay;
  GoldTrajectory gold;
  EvalReport report;
};

/// Replays the session with one channel swapped for its gold annotation and
/// scores the result against the gold trajectory. `condition` overrides the
/// one in `config`. Throws DomainError when the gold channel or the gold
/// moves are missing.
SubstitutionRun run_substitution(const session::SessionFile& s, Condition condition,
                                 const replay::RunConfig& config = {},
                                 const replay::ReplayOptions& options = {});

}  // namespace cgtrack::eval
