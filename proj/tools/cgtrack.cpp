// Command-line entry point: replay, eval, substitute, vocab, profile.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cgtrack/harness.hpp"
#include "cgtrack/nlu.hpp"
#include "cgtrack/replay.hpp"
#include "cgtrack/session.hpp"

namespace fs = std::filesystem;
using namespace cgtrack;

namespace {

constexpr int kValidationFailure = 2;

struct Args {
  std::string session;
  std::string config;
  std::string out;
  std::string gold;
};

replay::RunConfig config_for(const Args& a) {
  auto c = a.config.empty() ? replay::RunConfig{} : replay::load_config(a.config);
  if (!a.out.empty()) c.out_dir = a.out;
  c.validate();
  return c;
}

void write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  std::cout << "wrote " << path.string() << "\n";
}

void print_failures(const replay::ReplayResult& r) {
  for (const auto& f : r.failures) {
    std::cerr << "node '" << f.node << "' failed on tick " << f.tick << ": " << f.message << "\n";
  }
}

int cmd_replay(const Args& a, bool profile_only) {
  const auto cfg = config_for(a);
  const auto s = session::load_session(a.session);
  const auto r = replay::replay(s, cfg);
  print_failures(r);
  const auto csv = r.ticks > 0 ? r.profile.to_csv() : std::string("node,invocations,total_ms,mean_ms\n#ticks=0,tps=0.00\n");
  if (profile_only) {
    std::cout << csv;
    std::printf("#overhead_ms_per_tick=%.6f\n", r.profile.mean_overhead_ms);
  } else {
    write_file(cfg.out_dir, "trajectory.jsonl", r.trajectory_jsonl());
    write_file(cfg.out_dir, "gaze.csv", r.gaze_csv());
  }
  write_file(cfg.out_dir, "profile.csv", csv);
  std::cout << r.steps.size() << " moves over " << r.ticks << " ticks\n";
  return 0;
}

int cmd_eval(const Args& a, std::optional<eval::Condition> forced) {
  const auto cfg = config_for(a);
  const auto s = session::load_session(a.session);
  const auto condition = forced.value_or(cfg.condition);
  const auto run = eval::run_substitution(s, condition, cfg);
  print_failures(run.replay);
  const std::string suffix = forced ? "-" + std::string(eval::to_string(condition)) : "";
  write_file(cfg.out_dir, "report" + suffix + ".csv", run.report.to_csv());
  write_file(cfg.out_dir, "report" + suffix + ".json", run.report.to_json());
  write_file(cfg.out_dir, "plot" + suffix + ".csv", run.report.plot_csv());
  write_file(cfg.out_dir, "trajectory" + suffix + ".jsonl", run.replay.trajectory_jsonl());
  const auto& m = run.report.mean;
  std::printf("condition=%s qbank=%.6f ebank=%.6f fbank=%.6f fue=%.6f\n",
              std::string(eval::to_string(condition)).c_str(), m.qbank, m.ebank, m.fbank, m.fue);
  return 0;
}

int cmd_vocab(const Args& a) {
  const auto cfg = config_for(a);
  const auto vocab = nlu::enumerate_propositions();
  write_file(cfg.out_dir, "vocabulary.txt", vocab.export_text());
  std::cout << vocab.size() << " propositions\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Common-ground tracking over multimodal session event logs"};
  app.require_subcommand(1);
  Args args;

  auto add_common = [&](CLI::App* sub, bool needs_session) {
    auto* opt = sub->add_option("--session", args.session, "Session file (JSON lines)");
    if (needs_session) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--config", args.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "Output directory");
  };

  auto* replay_cmd = app.add_subcommand("replay", "Replay a session and write the bank trajectory");
  add_common(replay_cmd, true);
  auto* eval_cmd = app.add_subcommand("eval", "Score a replay against the gold trajectory");
  add_common(eval_cmd, true);
  auto* sub_cmd = app.add_subcommand("substitute", "Score with one channel replaced by gold");
  add_common(sub_cmd, true);
  sub_cmd->add_option("--gold", args.gold, "Channel to substitute")
      ->required()
      ->check(CLI::IsMember({"utterances", "gestures", "objects"}));
  auto* vocab_cmd = app.add_subcommand("vocab", "Write the proposition vocabulary");
  add_common(vocab_cmd, false);
  auto* profile_cmd = app.add_subcommand("profile", "Replay a session and report node timings");
  add_common(profile_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationFailure;
  }

  try {
    if (replay_cmd->parsed()) return cmd_replay(args, false);
    if (profile_cmd->parsed()) return cmd_replay(args, true);
    if (eval_cmd->parsed()) return cmd_eval(args, std::nullopt);
    if (sub_cmd->parsed()) return cmd_eval(args, eval::condition_from_string(args.gold));
    if (vocab_cmd->parsed()) return cmd_vocab(args);
  } catch (const session::SessionError& e) {
    std::cerr << e.what() << "\n";
    return kValidationFailure;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
