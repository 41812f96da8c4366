#pragma once

// Session replay through the full processing graph:
//
//   utterance-events -> asr -> transcription ----------------------+
//   utterance-events -> prosody -> acoustic-features ------------+ |
//   object-events -> objects -> object-scene -+                  | |
//   deixis-events --------------> gesture -> deixis-targets -> mmdp -> dense-paraphrase
//   gaze-events ----------------> gaze -> gaze-targets (logged)       |
//                                         prop-extraction <-----------+
//                                         move-classifier -> epistemic-move -> cgt
//
// Each session event becomes one tick.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cgtrack/cgt.hpp"
#include "cgtrack/eval.hpp"
#include "cgtrack/geometry.hpp"
#include "cgtrack/mmdp.hpp"
#include "cgtrack/nlu.hpp"
#include "cgtrack/pipeline.hpp"
#include "cgtrack/session.hpp"

namespace cgtrack::replay {

struct RunConfig {
  geometry::FrustumConfig frustum;
  nlu::ExtractorConfig extractor;
  mmdp::Lexicon lexicon;
  eval::Condition condition = eval::Condition::none;
  std::filesystem::path out_dir = ".";

  /// Throws DomainError on non-positive thresholds or radii.
  void validate() const;
};

/// Keys: frustum{near_radius,far_radius,length}, cosine_threshold,
/// prune_threshold, demonstratives{singular,plural}, condition, out_dir.
/// Unknown keys are rejected.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

struct ReplayOptions {
  nlu::MoveClassifier classifier = nlu::baseline_label;
  pipeline::Clock clock = pipeline::steady_clock();
};

struct Step {
  Utterance utterance;  // paraphrase filled in
  mmdp::ReferentQueue referents;
  nlu::ExtractionResult extraction;
  cgt::MoveRecord record;
};

struct GazeSample {
  Millis time;
  std::string participant;
  std::vector<std::string> targets;  // object classes, nearest first
};

struct ReplayResult {
  std::vector<std::string> node_order;
  std::vector<Step> steps;
  std::vector<pipeline::NodeFailure> failures;
  std::vector<GazeSample> gaze;
  pipeline::ProfileReport profile;
  std::size_t ticks = 0;

  std::vector<cgt::MoveRecord> records() const;
  /// Initial state on the first line, then one line per move.
  std::string trajectory_jsonl() const;
  std::string gaze_csv() const;
};

/// Node specs for the processing graph. Exposed for graph-level tests.
std::vector<pipeline::NodeSpec> build_nodes(const RunConfig& config, const ReplayOptions& options);

/// Event kinds feeding each channel under a substitution condition.
/// Throws DomainError when the session lacks the gold channel.
struct Channels {
  session::EventKind utterances = session::EventKind::utterance;
  session::EventKind deixis = session::EventKind::deixis;
  session::EventKind objects = session::EventKind::object;
};
Channels select_channels(const session::SessionFile& s, eval::Condition condition);

ReplayResult replay(const session::SessionFile& s, const RunConfig& config,
                    const ReplayOptions& options = {});

}  // namespace cgtrack::replay
