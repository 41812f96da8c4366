#include "cgtrack/harness.hpp"

namespace cgtrack::eval {

SubstitutionRun run_substitution(const session::SessionFile& s, Condition condition,
                                 const replay::RunConfig& config,
                                 const replay::ReplayOptions& options) {
  if (!s.has(session::EventKind::gold_move)) {
    throw DomainError("session has no gold_move annotations to score against");
  }
  auto cfg = config;
  cfg.condition = condition;
  SubstitutionRun run;
  run.replay = replay::replay(s, cfg, options);
  const auto moves = s.gold_moves();
  run.gold = gold_trajectory(moves);
  const auto records = run.replay.records();
  run.report = score_trajectory(records, run.gold, condition);
  return run;
}

}  // namespace cgtrack::eval
