#pragma once

// Shared value types for the Weights Task: blocks, weights, propositions,
// epistemic moves, and the post-perception session events.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cgtrack {

using Millis = std::int64_t;

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Canonical order is the declaration order.
enum class Color : std::uint8_t { red, blue, green, purple, yellow };

inline constexpr std::array<Color, 5> kColors{Color::red, Color::blue, Color::green,
                                              Color::purple, Color::yellow};

std::string_view to_string(Color c);
std::optional<Color> color_from_string(std::string_view name);

/// Answer key: the true block weights in grams.
constexpr int true_weight(Color c) {
  constexpr std::array<int, 5> grams{10, 10, 20, 30, 50};
  return grams[static_cast<std::size_t>(c)];
}

class Weight {
 public:
  static constexpr std::array<int, 5> kGrams{10, 20, 30, 40, 50};

  explicit Weight(int grams);
  static std::optional<Weight> from_grams(int grams);

  int grams() const { return grams_; }
  auto operator<=>(const Weight&) const = default;

 private:
  int grams_;
};

/// Non-empty set of distinct blocks, stored as a bitmask in canonical order.
class BlockSum {
 public:
  static constexpr std::uint8_t kAllMask = 0x1f;

  explicit BlockSum(Color c) : mask_(bit(c)) {}
  BlockSum(std::initializer_list<Color> colors);
  static BlockSum from_mask(std::uint8_t mask);

  std::uint8_t mask() const { return mask_; }
  bool contains(Color c) const { return (mask_ & bit(c)) != 0; }
  bool disjoint(BlockSum other) const { return (mask_ & other.mask_) == 0; }
  bool subset_of(std::uint8_t mask) const { return (mask_ & ~mask) == 0; }
  int size() const;
  bool single() const { return size() == 1; }
  Color first() const;
  std::vector<Color> colors() const;

  // Lexicographic comparison of the canonical color sequences.
  bool lex_less(BlockSum other) const;

  auto operator<=>(const BlockSum&) const = default;

 private:
  static constexpr std::uint8_t bit(Color c) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  }
  std::uint8_t mask_;
};

enum class Relation : std::uint8_t { eq, ne, lt, gt };

std::string_view to_string(Relation r);

/// A relation between a block sum and either a weight literal or a disjoint
/// block sum. Instances are always in canonical form, so value equality is
/// proposition equality.
class Proposition {
 public:
  using Rhs = std::variant<Weight, BlockSum>;

  Proposition(BlockSum lhs, Relation rel, Weight rhs);
  // Canonicalizes: symmetric relations put the lexicographically smaller sum
  // on the left, and `>` between sums becomes `<` with the sides swapped.
  Proposition(BlockSum lhs, Relation rel, BlockSum rhs);

  BlockSum lhs() const { return lhs_; }
  Relation relation() const { return rel_; }
  const Rhs& rhs() const { return rhs_; }
  bool has_weight() const { return std::holds_alternative<Weight>(rhs_); }
  std::optional<Weight> weight() const;
  std::optional<BlockSum> rhs_sum() const;
  BlockSum blocks() const;  // every block mentioned on either side

  // "b = w" with a single block on the left.
  bool is_block_weight_fact() const {
    return rel_ == Relation::eq && has_weight() && lhs_.single();
  }

  auto operator<=>(const Proposition&) const = default;

 private:
  BlockSum lhs_;
  Relation rel_;
  Rhs rhs_;
};

class ParseError : public DomainError {
 public:
  using DomainError::DomainError;
};

Proposition parse_proposition(std::string_view text);
std::string render(const Proposition& p);

/// Question under discussion: "what does `subject` weigh?"
struct Qud {
  Color subject;
  auto operator<=>(const Qud&) const = default;
};

enum class MoveLabel : std::uint8_t { statement, accept, doubt, none };

std::string_view to_string(MoveLabel m);
std::optional<MoveLabel> move_from_string(std::string_view name);

struct EpistemicMove {
  MoveLabel label = MoveLabel::none;
  std::vector<Proposition> props;

  static EpistemicMove none() { return {}; }
  static EpistemicMove make(MoveLabel label, std::vector<Proposition> props);
  bool operator==(const EpistemicMove&) const = default;
};

struct Vec3 {
  double x = 0, y = 0, z = 0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  bool operator==(const Vec3&) const = default;
};

double dot(Vec3 a, Vec3 b);
double norm(Vec3 a);

struct Utterance {
  std::string id;
  std::string speaker;
  Millis start = 0;
  Millis end = 0;
  std::string text;
  std::optional<std::string> paraphrase;
};

struct DeixisEvent {
  std::string id;
  std::string hand;
  Millis start = 0;
  Millis end = 0;
  Vec3 tip;        // mm
  Vec3 direction;  // unit
};

struct Box3 {
  Vec3 min, max;
};

struct ObjectDetection {
  Millis time = 0;
  std::optional<Color> block;  // empty for the scale
  Vec3 centroid;
  Box3 box;

  bool is_scale() const { return !block.has_value(); }
};

std::string object_class_name(const ObjectDetection& o);

struct GazeEvent {
  Millis time = 0;
  std::string participant;
  Vec3 origin;
  Vec3 direction;
};

inline constexpr double kUnitTolerance = 1e-6;

// Throw DomainError when an invariant does not hold.
void validate(const Utterance& u);
void validate(const DeixisEvent& d);
void validate(const ObjectDetection& o);
void validate(const GazeEvent& g);

}  // namespace cgtrack
