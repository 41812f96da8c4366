#pragma once

// Multimodal dense paraphrasing: demonstratives in an utterance are rewritten
// as the blocks picked out by pointing that overlaps the utterance in time.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cgtrack/domain.hpp"
#include "cgtrack/geometry.hpp"

namespace cgtrack::mmdp {

enum class GrammaticalNumber { singular, plural };

struct Lexicon {
  std::vector<std::string> singular{"this", "that", "this one", "that one", "it"};
  std::vector<std::string> plural{"these", "those"};
};

struct DemonstrativeToken {
  std::string surface;  // as written in the utterance
  GrammaticalNumber number;
  std::size_t begin;  // byte span [begin, end)
  std::size_t end;
};

/// Left-to-right, longest-first, case-insensitive matches on word boundaries.
/// A trailing contraction ("that's") stays outside the span, and a multiword
/// entry never swallows a contracted word ("this one's" yields "this").
std::vector<DemonstrativeToken> find_demonstratives(std::string_view text,
                                                    const Lexicon& lexicon = {});

/// Targets picked out by one pointing gesture, nearest first.
struct Pointing {
  std::string id;
  Millis start = 0;
  Millis end = 0;
  geometry::TargetList targets;
};

using ReferentQueue = std::vector<Color>;

// Closed intervals; touching endpoints count as overlap.
constexpr bool overlaps(Millis a_start, Millis a_end, Millis b_start, Millis b_end) {
  return a_start <= b_end && b_start <= a_end;
}

/// Blocks from every gesture overlapping the utterance, ordered by gesture
/// start and then by distance, keeping the first occurrence of each color.
ReferentQueue build_referent_queue(const Utterance& u, std::span<const Pointing> pointings);

struct Paraphrase {
  std::string text;
  std::size_t consumed = 0;  // referents used from the front of the queue
};

Paraphrase paraphrase(std::string_view text, const ReferentQueue& queue,
                      const Lexicon& lexicon = {});

/// Singular demonstratives take the next referent, plural ones take all that
/// remain; anything without a referent is left as written.
std::string dense_paraphrase(std::string_view text, const ReferentQueue& queue,
                             const Lexicon& lexicon = {});

std::string block_phrase(std::span<const Color> colors);

}  // namespace cgtrack::mmdp
