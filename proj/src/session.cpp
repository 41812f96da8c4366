#include "cgtrack/session.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cgtrack/geometry.hpp"
#include "json.hpp"

namespace cgtrack::session {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct LineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::array<std::pair<std::string_view, EventKind>, 9> kKinds{{
    {"utterance", EventKind::utterance},
    {"deixis", EventKind::deixis},
    {"gaze", EventKind::gaze},
    {"object", EventKind::object},
    {"gold_transcript", EventKind::gold_transcript},
    {"gold_deixis", EventKind::gold_deixis},
    {"gold_object", EventKind::gold_object},
    {"gold_move", EventKind::gold_move},
    {"gold_props", EventKind::gold_props},
}};

void allow_only(const json& j, std::initializer_list<std::string_view> keys) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const auto key : keys) ok = ok || key == k;
    if (!ok) throw LineError("unexpected field '" + k + "'");
  }
}

const json& field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw LineError(std::string("missing field '") + name + "'");
  return *it;
}

std::string string_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) throw LineError(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

Millis time_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_integer()) {
    throw LineError(std::string("field '") + name + "' must be an integer (milliseconds)");
  }
  return v.get<Millis>();
}

Vec3 vec_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_array() || v.size() != 3 ||
      !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); })) {
    throw LineError(std::string("field '") + name + "' must be an array of 3 numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Vec3 unit_field(const json& j, const char* name) {
  const auto v = vec_field(j, name);
  const double n = norm(v);
  if (!std::isfinite(n) || std::abs(n - 1.0) > geometry::kNormalizeTolerance) {
    throw LineError(std::string("field '") + name + "' must be a unit vector (norm " +
                    std::to_string(n) + ")");
  }
  // Leave already-unit vectors untouched so a save/load round trip is exact.
  return std::abs(n - 1.0) <= 1e-12 ? v : (1.0 / n) * v;
}

Utterance parse_utterance(const json& j) {
  allow_only(j, {"kind", "id", "speaker", "start", "end", "text", "paraphrase"});
  Utterance u;
  u.id = string_field(j, "id");
  u.speaker = string_field(j, "speaker");
  u.start = time_field(j, "start");
  u.end = time_field(j, "end");
  u.text = string_field(j, "text");
  if (j.contains("paraphrase")) u.paraphrase = string_field(j, "paraphrase");
  validate(u);
  return u;
}

DeixisEvent parse_deixis(const json& j) {
  allow_only(j, {"kind", "id", "hand", "start", "end", "tip", "dir"});
  DeixisEvent d;
  d.id = string_field(j, "id");
  d.hand = string_field(j, "hand");
  d.start = time_field(j, "start");
  d.end = time_field(j, "end");
  d.tip = vec_field(j, "tip");
  d.direction = unit_field(j, "dir");
  validate(d);
  return d;
}

ObjectDetection parse_object(const json& j) {
  allow_only(j, {"kind", "time", "class", "centroid", "box"});
  ObjectDetection o;
  o.time = time_field(j, "time");
  const auto cls = string_field(j, "class");
  if (cls != "scale") {
    o.block = color_from_string(cls);
    if (!o.block) throw LineError("unknown object class '" + cls + "'");
  }
  o.centroid = vec_field(j, "centroid");
  const auto& box = field(j, "box");
  if (!box.is_object()) throw LineError("field 'box' must be an object with 'min' and 'max'");
  allow_only(box, {"min", "max"});
  o.box = {vec_field(box, "min"), vec_field(box, "max")};
  validate(o);
  return o;
}

GazeEvent parse_gaze(const json& j) {
  allow_only(j, {"kind", "time", "participant", "origin", "dir", "nose", "left_ear", "right_ear"});
  GazeEvent g;
  g.time = time_field(j, "time");
  g.participant = string_field(j, "participant");
  const bool ray = j.contains("origin") || j.contains("dir");
  const bool joints = j.contains("nose") || j.contains("left_ear") || j.contains("right_ear");
  if (ray == joints) {
    throw LineError("gaze needs either 'origin'+'dir' or 'nose'+'left_ear'+'right_ear'");
  }
  if (ray) {
    g.origin = vec_field(j, "origin");
    g.direction = unit_field(j, "dir");
  } else {
    const auto r = geometry::gaze_ray(vec_field(j, "nose"), vec_field(j, "left_ear"),
                                      vec_field(j, "right_ear"));
    g.origin = r.origin;
    g.direction = r.direction;
  }
  validate(g);
  return g;
}

GoldMoveAnnotation parse_gold_move(const json& j) {
  allow_only(j, {"kind", "time", "utterance", "move"});
  GoldMoveAnnotation g;
  g.utterance_id = string_field(j, "utterance");
  const auto name = string_field(j, "move");
  const auto label = move_from_string(name);
  if (!label) throw LineError("unknown move label '" + name + "'");
  g.label = *label;
  return g;
}

GoldPropsAnnotation parse_gold_props(const json& j) {
  allow_only(j, {"kind", "time", "utterance", "props"});
  GoldPropsAnnotation g;
  g.utterance_id = string_field(j, "utterance");
  const auto& props = field(j, "props");
  if (!props.is_array()) throw LineError("field 'props' must be an array of strings");
  for (const auto& p : props) {
    if (!p.is_string()) throw LineError("field 'props' must be an array of strings");
    g.props.push_back(parse_proposition(p.get<std::string>()));
  }
  return g;
}

Header parse_header(const json& j) {
  allow_only(j, {"kind", "session", "participants", "units"});
  Header h;
  h.session_id = string_field(j, "session");
  const auto& ps = field(j, "participants");
  if (!ps.is_array()) throw LineError("field 'participants' must be an array of strings");
  for (const auto& p : ps) {
    if (!p.is_string()) throw LineError("field 'participants' must be an array of strings");
    h.participants.push_back(p.get<std::string>());
  }
  const auto& units = field(j, "units");
  if (!units.is_object()) throw LineError("field 'units' must be an object");
  allow_only(units, {"time", "length"});
  if (string_field(units, "time") != "ms") throw LineError("time unit must be \"ms\"");
  if (string_field(units, "length") != "mm") throw LineError("length unit must be \"mm\"");
  return h;
}

ordered_json vec_json(Vec3 v) { return ordered_json::array({v.x, v.y, v.z}); }

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [name, kind] : kKinds) {
    if (kind == k) return name;
  }
  return "?";
}

bool SessionFile::has(EventKind k) const { return count(k) > 0; }

std::size_t SessionFile::count(EventKind k) const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [k](const Event& e) { return e.kind == k; }));
}

std::vector<eval::GoldMove> SessionFile::gold_moves() const {
  std::map<std::string, std::vector<Proposition>> props;
  for (const auto& a : collect<GoldPropsAnnotation>(EventKind::gold_props)) {
    auto& dst = props[a.utterance_id];
    dst.insert(dst.end(), a.props.begin(), a.props.end());
  }
  std::vector<eval::GoldMove> out;
  for (const auto& m : collect<GoldMoveAnnotation>(EventKind::gold_move)) {
    out.push_back({m.utterance_id, m.label, props[m.utterance_id]});
  }
  return out;
}

SessionError::SessionError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&] {
        std::string msg = "invalid session file:";
        for (const auto& d : diagnostics) {
          msg += "\n  line " + std::to_string(d.line) + ": " + d.message;
        }
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

SessionFile parse_session(std::istream& in) {
  SessionFile s;
  std::vector<Diagnostic> diags;
  std::map<EventKind, std::pair<Millis, std::size_t>> last_time;
  std::set<std::string> utterance_ids[2];  // automatic, gold transcript
  std::set<std::string> gold_moves;
  bool have_header = false;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      if (line.find_first_not_of(" \t") == std::string::npos) throw LineError("blank line");
      const auto j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) throw LineError("not a JSON object");
      const auto kind_name = string_field(j, "kind");

      if (kind_name == "header") {
        if (have_header) throw LineError("duplicate header");
        if (lineno != 1) throw LineError("header must be the first line");
        s.header = parse_header(j);
        have_header = true;
        continue;
      }
      if (!have_header) throw LineError("first line must be the header record");

      const auto kind_it = std::find_if(kKinds.begin(), kKinds.end(),
                                        [&](const auto& kv) { return kv.first == kind_name; });
      if (kind_it == kKinds.end()) throw LineError("unknown kind '" + kind_name + "'");
      const auto kind = kind_it->second;

      Event e{kind, lineno, 0, Utterance{}};
      switch (kind) {
        case EventKind::utterance:
        case EventKind::gold_transcript: {
          auto u = parse_utterance(j);
          e.time = u.start;
          auto& ids = utterance_ids[kind == EventKind::gold_transcript ? 1 : 0];
          if (!ids.insert(u.id).second) throw LineError("duplicate utterance id '" + u.id + "'");
          e.payload = std::move(u);
          break;
        }
        case EventKind::deixis:
        case EventKind::gold_deixis: {
          auto d = parse_deixis(j);
          e.time = d.start;
          e.payload = std::move(d);
          break;
        }
        case EventKind::object:
        case EventKind::gold_object: {
          auto o = parse_object(j);
          e.time = o.time;
          e.payload = std::move(o);
          break;
        }
        case EventKind::gaze: {
          auto g = parse_gaze(j);
          e.time = g.time;
          e.payload = std::move(g);
          break;
        }
        case EventKind::gold_move: {
          auto g = parse_gold_move(j);
          e.time = time_field(j, "time");
          if (!gold_moves.insert(g.utterance_id).second) {
            throw LineError("second gold_move for utterance '" + g.utterance_id + "'");
          }
          e.payload = std::move(g);
          break;
        }
        case EventKind::gold_props: {
          auto g = parse_gold_props(j);
          e.time = time_field(j, "time");
          e.payload = std::move(g);
          break;
        }
      }

      const auto [prev, fresh] = last_time.try_emplace(kind, e.time, lineno);
      if (!fresh) {
        if (e.time < prev->second.first) {
          throw LineError("timestamp " + std::to_string(e.time) + " precedes timestamp " +
                          std::to_string(prev->second.first) + " on line " +
                          std::to_string(prev->second.second) + " (same kind '" + kind_name +
                          "')");
        }
        prev->second = {e.time, lineno};
      }
      s.events.push_back(std::move(e));
    } catch (const LineError& err) {
      diags.push_back({lineno, err.what()});
    } catch (const DomainError& err) {
      diags.push_back({lineno, err.what()});
    } catch (const json::exception& err) {
      diags.push_back({lineno, err.what()});
    }
  }
  if (lineno == 0) diags.push_back({0, "empty file: a header line is required"});

  for (const auto& e : s.events) {
    std::string ref;
    if (const auto* m = std::get_if<GoldMoveAnnotation>(&e.payload)) ref = m->utterance_id;
    if (const auto* p = std::get_if<GoldPropsAnnotation>(&e.payload)) ref = p->utterance_id;
    if (ref.empty() && e.kind != EventKind::gold_move && e.kind != EventKind::gold_props) continue;
    if (!utterance_ids[0].count(ref) && !utterance_ids[1].count(ref)) {
      diags.push_back({e.line, std::string(to_string(e.kind)) + " references unknown utterance '" +
                                   ref + "'"});
    } else if (e.kind == EventKind::gold_props && !gold_moves.count(ref)) {
      diags.push_back({e.line, "gold_props for utterance '" + ref + "' has no gold_move"});
    }
  }

  if (!diags.empty()) {
    std::stable_sort(diags.begin(), diags.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    throw SessionError(std::move(diags));
  }
  return s;
}

SessionFile parse_session_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_session(in);
}

SessionFile load_session(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SessionError({{0, "cannot open '" + path.string() + "'"}});
  return parse_session(in);
}

std::string to_jsonl(const SessionFile& s) {
  std::string out;
  ordered_json h{{"kind", "header"},
                 {"session", s.header.session_id},
                 {"participants", s.header.participants},
                 {"units", {{"time", "ms"}, {"length", "mm"}}}};
  out += h.dump() + "\n";
  for (const auto& e : s.events) {
    ordered_json j;
    j["kind"] = std::string(to_string(e.kind));
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Utterance>) {
            j["id"] = p.id;
            j["speaker"] = p.speaker;
            j["start"] = p.start;
            j["end"] = p.end;
            j["text"] = p.text;
            if (p.paraphrase) j["paraphrase"] = *p.paraphrase;
          } else if constexpr (std::is_same_v<T, DeixisEvent>) {
            j["id"] = p.id;
            j["hand"] = p.hand;
            j["start"] = p.start;
            j["end"] = p.end;
            j["tip"] = vec_json(p.tip);
            j["dir"] = vec_json(p.direction);
          } else if constexpr (std::is_same_v<T, ObjectDetection>) {
            j["time"] = p.time;
            j["class"] = object_class_name(p);
            j["centroid"] = vec_json(p.centroid);
            j["box"] = {{"min", vec_json(p.box.min)}, {"max", vec_json(p.box.max)}};
          } else if constexpr (std::is_same_v<T, GazeEvent>) {
            j["time"] = p.time;
            j["participant"] = p.participant;
            j["origin"] = vec_json(p.origin);
            j["dir"] = vec_json(p.direction);
          } else if constexpr (std::is_same_v<T, GoldMoveAnnotation>) {
            j["time"] = e.time;
            j["utterance"] = p.utterance_id;
            j["move"] = std::string(to_string(p.label));
          } else {
            j["time"] = e.time;
            j["utterance"] = p.utterance_id;
            auto arr = ordered_json::array();
            for (const auto& prop : p.props) arr.push_back(render(prop));
            j["props"] = arr;
          }
        },
        e.payload);
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace cgtrack::session
