#pragma once

// Session files: one JSON object per line. The first line is the header; the
// rest are post-perception events and gold annotations. The format is
// documented in docs/session-format.md and schema/session.schema.json.

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cgtrack/domain.hpp"
#include "cgtrack/eval.hpp"

namespace cgtrack::session {

enum class EventKind {
  utterance,
  deixis,
  gaze,
  object,
  gold_transcript,
  gold_deixis,
  gold_object,
  gold_move,
  gold_props,
};

std::string_view to_string(EventKind k);

struct Header {
  std::string session_id;
  std::vector<std::string> participants;
};

struct GoldMoveAnnotation {
  std::string utterance_id;
  MoveLabel label = MoveLabel::none;
};

struct GoldPropsAnnotation {
  std::string utterance_id;
  std::vector<Proposition> props;
};

using Payload = std::variant<Utterance, DeixisEvent, GazeEvent, ObjectDetection,
                             GoldMoveAnnotation, GoldPropsAnnotation>;

struct Event {
  EventKind kind;
  std::size_t line;  // 1-based
  Millis time;       // start for intervals, frame/annotation time otherwise
  Payload payload;
};

struct SessionFile {
  Header header;
  std::vector<Event> events;  // file order

  bool has(EventKind k) const;
  std::size_t count(EventKind k) const;

  template <class T>
  std::vector<T> collect(EventKind k) const {
    std::vector<T> out;
    for (const auto& e : events) {
      if (e.kind == k) out.push_back(std::get<T>(e.payload));
    }
    return out;
  }

  /// Gold moves in annotation order, with their gold propositions attached.
  std::vector<eval::GoldMove> gold_moves() const;
};

struct Diagnostic {
  std::size_t line;
  std::string message;
};

class SessionError : public std::runtime_error {
 public:
  explicit SessionError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Reads and validates a session; every rejected line yields a diagnostic,
/// and all diagnostics are reported together.
SessionFile parse_session(std::istream& in);
SessionFile parse_session_text(std::string_view text);
SessionFile load_session(const std::filesystem::path& path);

/// Serializes back to the line format (used by generators and tests).
std::string to_jsonl(const SessionFile& s);

}  // namespace cgtrack::session
