#include "cgtrack/replay.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"

namespace cgtrack::replay {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using pipeline::Datum;
using pipeline::InterfaceId;
using pipeline::NodeInputs;
using pipeline::NodeSpec;

const InterfaceId kUtteranceEvents{"utterance-events"};
const InterfaceId kDeixisEvents{"deixis-events"};
const InterfaceId kObjectEvents{"object-events"};
const InterfaceId kGazeEvents{"gaze-events"};
const InterfaceId kTranscription{"transcription"};
const InterfaceId kAcoustic{"acoustic-features"};
const InterfaceId kScene{"object-scene"};
const InterfaceId kDeixisTargets{"deixis-targets"};
const InterfaceId kGazeTargets{"gaze-targets"};
const InterfaceId kParaphrase{"dense-paraphrase"};
const InterfaceId kPropositions{"propositions"};
const InterfaceId kMove{"epistemic-move"};
const InterfaceId kCommonGround{"common-ground"};

using Scene = std::vector<ObjectDetection>;

struct Paraphrased {
  Utterance utterance;
  mmdp::ReferentQueue referents;
};

struct GazeOut {
  GazeEvent event;
  geometry::TargetList targets;
};

struct Models {
  nlu::PropositionVocabulary vocab = nlu::enumerate_propositions();
  nlu::CosineIndex index{vocab};
};

std::size_t scene_slot(const ObjectDetection& o) {
  return o.block ? static_cast<std::size_t>(*o.block) : kColors.size();
}

double positive(const json& v, const char* key) {
  if (!v.is_number()) throw DomainError(std::string("config: '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!(d > 0)) throw DomainError(std::string("config: '") + key + "' must be positive");
  return d;
}

std::vector<std::string> string_list(const json& v, const char* key) {
  if (!v.is_array()) throw DomainError(std::string("config: '") + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string() || s.get<std::string>().empty()) {
      throw DomainError(std::string("config: '") + key + "' must hold non-empty strings");
    }
    out.push_back(s.get<std::string>());
  }
  return out;
}

ordered_json prop_list(const auto& props) {
  auto arr = ordered_json::array();
  for (const auto& p : props) arr.push_back(render(p));
  return arr;
}

ordered_json state_json(const cgt::BankState& s) {
  auto q = ordered_json::array();
  for (const auto& qud : s.qbank) q.push_back(std::string(to_string(qud.subject)));
  return {{"qbank", q}, {"ebank", prop_list(s.ebank)}, {"fbank", prop_list(s.fbank())}};
}

// Tick order within one millisecond: scene updates first, utterances last,
// so the gestures and objects an utterance relies on are already known.
int tick_priority(session::EventKind k) {
  switch (k) {
    case session::EventKind::object:
    case session::EventKind::gold_object: return 0;
    case session::EventKind::gaze: return 1;
    case session::EventKind::deixis:
    case session::EventKind::gold_deixis: return 2;
    default: return 3;
  }
}

Millis available_at(const session::Event& e) {
  if (const auto* u = std::get_if<Utterance>(&e.payload)) return u->end;
  return e.time;
}

}  // namespace

void RunConfig::validate() const {
  frustum.validate();
  if (extractor.prune_threshold == 0) throw DomainError("prune threshold must be positive");
  if (!(extractor.cosine_threshold > 0)) throw DomainError("cosine threshold must be positive");
  if (lexicon.singular.empty() && lexicon.plural.empty()) {
    throw DomainError("demonstrative lexicon is empty");
  }
}

RunConfig parse_config(std::string_view json_text) {
  const auto j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DomainError("config: not a JSON object");
  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "frustum") {
      if (!v.is_object()) throw DomainError("config: 'frustum' must be an object");
      for (const auto& [fk, fv] : v.items()) {
        if (fk == "near_radius") c.frustum.near_radius = positive(fv, "near_radius");
        else if (fk == "far_radius") c.frustum.far_radius = positive(fv, "far_radius");
        else if (fk == "length") c.frustum.length = positive(fv, "length");
        else throw DomainError("config: unknown frustum key '" + fk + "'");
      }
    } else if (key == "cosine_threshold") {
      c.extractor.cosine_threshold = positive(v, "cosine_threshold");
    } else if (key == "prune_threshold") {
      if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw DomainError("config: 'prune_threshold' must be a positive integer");
      }
      c.extractor.prune_threshold = v.get<std::size_t>();
    } else if (key == "demonstratives") {
      if (!v.is_object()) throw DomainError("config: 'demonstratives' must be an object");
      for (const auto& [dk, dv] : v.items()) {
        if (dk == "singular") c.lexicon.singular = string_list(dv, "singular");
        else if (dk == "plural") c.lexicon.plural = string_list(dv, "plural");
        else throw DomainError("config: unknown demonstratives key '" + dk + "'");
      }
    } else if (key == "condition") {
      const auto cond = v.is_string() ? eval::condition_from_string(v.get<std::string>())
                                      : std::nullopt;
      if (!cond) throw DomainError("config: invalid condition");
      c.condition = *cond;
    } else if (key == "out_dir") {
      if (!v.is_string()) throw DomainError("config: 'out_dir' must be a string");
      c.out_dir = v.get<std::string>();
    } else {
      throw DomainError("config: unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<pipeline::NodeSpec> build_nodes(const RunConfig& config, const ReplayOptions& options) {
  auto models = std::make_shared<const Models>();
  auto scene = std::make_shared<std::array<std::optional<ObjectDetection>, kColors.size() + 1>>();
  auto history = std::make_shared<std::vector<mmdp::Pointing>>();
  auto tracker = std::make_shared<cgt::Tracker>();
  const auto frustum = config.frustum;
  const auto lexicon = config.lexicon;
  const auto extractor = config.extractor;
  const auto classifier = options.classifier ? options.classifier : nlu::MoveClassifier(nlu::baseline_label);

  std::vector<NodeSpec> nodes;
  nodes.push_back(NodeSpec::source("src.utterance", kUtteranceEvents));
  nodes.push_back(NodeSpec::source("src.deixis", kDeixisEvents));
  nodes.push_back(NodeSpec::source("src.objects", kObjectEvents));
  nodes.push_back(NodeSpec::source("src.gaze", kGazeEvents));

  // Transcripts arrive already recognized; the node is the hand-off point.
  nodes.push_back({"asr", kTranscription, {kUtteranceEvents}, [](const NodeInputs& in) {
                     return in[0];
                   }});
  // No acoustic model is bundled; the classifier receives an empty feature vector.
  nodes.push_back({"prosody", kAcoustic, {kUtteranceEvents}, [](const NodeInputs& in) {
                     return in[0] ? Datum::of(std::vector<double>{}) : Datum::absent();
                   }});
  nodes.push_back({"objects", kScene, {kObjectEvents}, [scene](const NodeInputs& in) {
                     if (const auto* o = in[0].get_if<ObjectDetection>()) {
                       (*scene)[scene_slot(*o)] = *o;
                     }
                     Scene out;
                     for (const auto& slot : *scene) {
                       if (slot) out.push_back(*slot);
                     }
                     return Datum::of(std::move(out));
                   }});
  nodes.push_back({"gesture", kDeixisTargets, {kDeixisEvents, kScene},
                   [frustum](const NodeInputs& in) {
                     const auto* d = in[0].get_if<DeixisEvent>();
                     if (!d) return Datum::absent();
                     const auto* objects = in[1].get_if<Scene>();
                     const auto f = geometry::make_frustum(*d, frustum);
                     mmdp::Pointing p{d->id, d->start, d->end, {}};
                     if (objects) p.targets = geometry::select_targets(f, *objects);
                     return Datum::of(std::move(p));
                   }});
  nodes.push_back({"gaze", kGazeTargets, {kGazeEvents, kScene}, [frustum](const NodeInputs& in) {
                     const auto* g = in[0].get_if<GazeEvent>();
                     if (!g) return Datum::absent();
                     GazeOut out{*g, {}};
                     if (const auto* objects = in[1].get_if<Scene>()) {
                       out.targets =
                           geometry::gaze_targets({g->origin, g->direction}, *objects, frustum);
                     }
                     return Datum::of(std::move(out));
                   }});
  nodes.push_back({"mmdp", kParaphrase, {kTranscription, kDeixisTargets},
                   [history, lexicon](const NodeInputs& in) {
                     if (const auto* p = in[1].get_if<mmdp::Pointing>()) history->push_back(*p);
                     const auto* u = in[0].get_if<Utterance>();
                     if (!u) return Datum::absent();
                     Paraphrased out{*u, mmdp::build_referent_queue(*u, *history)};
                     out.utterance.paraphrase =
                         mmdp::dense_paraphrase(u->text, out.referents, lexicon);
                     return Datum::of(std::move(out));
                   }});
  nodes.push_back({"prop-extraction", kPropositions, {kParaphrase},
                   [models, extractor](const NodeInputs& in) {
                     const auto* p = in[0].get_if<Paraphrased>();
                     if (!p) return Datum::absent();
                     return Datum::of(
                         nlu::extract(*p->utterance.paraphrase, models->index, extractor));
                   }});
  nodes.push_back({"move-classifier", kMove, {kParaphrase, kPropositions, kAcoustic},
                   [classifier](const NodeInputs& in) {
                     const auto* p = in[0].get_if<Paraphrased>();
                     if (!p) return Datum::absent();
                     const auto* found = in[1].get_if<nlu::ExtractionResult>();
                     const nlu::ExtractionResult extraction = found ? *found : nlu::ExtractionResult{};
                     const auto* features = in[2].get_if<std::vector<double>>();
                     const auto label = classifier(
                         *p->utterance.paraphrase, extraction,
                         features ? std::span<const double>(*features) : std::span<const double>());
                     return Datum::of(nlu::assemble_move(label, extraction));
                   }});
  nodes.push_back({"cgt", kCommonGround, {kParaphrase, kMove}, [tracker](const NodeInputs& in) {
                     const auto* p = in[0].get_if<Paraphrased>();
                     const auto* m = in[1].get_if<EpistemicMove>();
                     if (!p || !m) return Datum::absent();
                     return Datum::of(tracker->apply(p->utterance.id, *m));
                   }});
  return nodes;
}

Channels select_channels(const session::SessionFile& s, eval::Condition condition) {
  using session::EventKind;
  Channels c;
  auto require = [&](EventKind k) {
    if (!s.has(k)) {
      throw DomainError("condition " + std::string(eval::to_string(condition)) +
                        " needs gold channel '" + std::string(session::to_string(k)) +
                        "' but the session has none");
    }
    return k;
  };
  switch (condition) {
    case eval::Condition::none: break;
    case eval::Condition::gold_utterances: c.utterances = require(EventKind::gold_transcript); break;
    case eval::Condition::gold_gestures: c.deixis = require(EventKind::gold_deixis); break;
    case eval::Condition::gold_objects: c.objects = require(EventKind::gold_object); break;
  }
  return c;
}

ReplayResult replay(const session::SessionFile& s, const RunConfig& config,
                    const ReplayOptions& options) {
  config.validate();
  const auto channels = select_channels(s, config.condition);

  struct Tick {
    Millis time;
    int priority;
    std::size_t index;
  };
  std::vector<Tick> ticks;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto k = s.events[i].kind;
    if (k == channels.utterances || k == channels.deixis || k == channels.objects ||
        k == session::EventKind::gaze) {
      ticks.push_back({available_at(s.events[i]), tick_priority(k), i});
    }
  }
  std::stable_sort(ticks.begin(), ticks.end(), [](const Tick& a, const Tick& b) {
    return std::tie(a.time, a.priority, a.index) < std::tie(b.time, b.priority, b.index);
  });

  pipeline::Runner runner(pipeline::build_graph(build_nodes(config, options)), options.clock);
  ReplayResult r;
  r.node_order = runner.plan().order_names();
  for (const auto& t : ticks) {
    const auto& e = s.events[t.index];
    pipeline::TickInputs inputs;
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Utterance>) inputs[kUtteranceEvents] = Datum::of(p);
          else if constexpr (std::is_same_v<T, DeixisEvent>) inputs[kDeixisEvents] = Datum::of(p);
          else if constexpr (std::is_same_v<T, ObjectDetection>) inputs[kObjectEvents] = Datum::of(p);
          else if constexpr (std::is_same_v<T, GazeEvent>) inputs[kGazeEvents] = Datum::of(p);
        },
        e.payload);
    auto out = runner.run_tick(inputs);
    r.failures.insert(r.failures.end(), out.failures.begin(), out.failures.end());

    if (const auto* g = out.at(kGazeTargets.name).get_if<GazeOut>()) {
      GazeSample sample{g->event.time, g->event.participant, {}};
      for (const auto& target : g->targets) {
        sample.targets.push_back(object_class_name(target.object));
      }
      r.gaze.push_back(std::move(sample));
    }
    if (const auto* rec = out.at(kCommonGround.name).get_if<cgt::MoveRecord>()) {
      const auto& p = out.at(kParaphrase.name).get<Paraphrased>();
      const auto* ex = out.at(kPropositions.name).get_if<nlu::ExtractionResult>();
      r.steps.push_back({p.utterance, p.referents, ex ? *ex : nlu::ExtractionResult{}, *rec});
    }
  }
  r.ticks = runner.ticks();
  if (r.ticks > 0) r.profile = runner.profile_report();
  return r;
}

std::vector<cgt::MoveRecord> ReplayResult::records() const {
  std::vector<cgt::MoveRecord> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.record);
  return out;
}

std::string ReplayResult::trajectory_jsonl() const {
  std::string out;
  ordered_json init{{"step", 0}, {"utterance_id", nullptr}};
  init.update(state_json(cgt::initial_state()));
  out += init.dump() + "\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    auto extraction = ordered_json::array();
    for (const auto& item : s.extraction.items) {
      extraction.push_back({{"prop", render(item.prop)}, {"score", item.score}});
    }
    auto referents = ordered_json::array();
    for (const auto c : s.referents) referents.push_back(std::string(to_string(c)));
    ordered_json j{{"step", i + 1},
                   {"utterance_id", s.utterance.id},
                   {"speaker", s.utterance.speaker},
                   {"start", s.utterance.start},
                   {"end", s.utterance.end},
                   {"text", s.utterance.text},
                   {"referents", referents},
                   {"paraphrase", s.utterance.paraphrase.value_or(s.utterance.text)},
                   {"extraction_method", std::string(nlu::to_string(s.extraction.method))},
                   {"extraction", extraction},
                   {"move", std::string(to_string(s.record.move))},
                   {"props", prop_list(s.record.props)}};
    j.update(state_json(s.record.state));
    j["contradiction"] = s.record.contradiction;
    out += j.dump() + "\n";
  }
  return out;
}

std::string ReplayResult::gaze_csv() const {
  std::string out = "time,participant,targets\n";
  for (const auto& g : gaze) {
    out += std::to_string(g.time) + "," + g.participant + ",";
    for (std::size_t i = 0; i < g.targets.size(); ++i) out += (i ? ";" : "") + g.targets[i];
    out += "\n";
  }
  return out;
}

}  // namespace cgtrack::replay
