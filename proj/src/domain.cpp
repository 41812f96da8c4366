#include "cgtrack/domain.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>

namespace cgtrack {

namespace {

constexpr std::array<std::string_view, 5> kColorNames{"red", "blue", "green", "purple",
                                                      "yellow"};

std::vector<std::string_view> split_spaces(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find(' ', pos);
    const auto end = next == std::string_view::npos ? text.size() : next;
    out.push_back(text.substr(pos, end - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::optional<Relation> relation_from_token(std::string_view tok) {
  if (tok == "=") return Relation::eq;
  if (tok == "!=") return Relation::ne;
  if (tok == "<") return Relation::lt;
  if (tok == ">") return Relation::gt;
  return std::nullopt;
}

// Parses tokens `c (+ c)*` starting at `pos`; advances pos past the sum.
BlockSum parse_sum(const std::vector<std::string_view>& toks, std::size_t& pos,
                   std::string_view text) {
  std::uint8_t mask = 0;
  while (true) {
    if (pos >= toks.size()) throw ParseError("truncated proposition: '" + std::string(text) + "'");
    const auto color = color_from_string(toks[pos]);
    if (!color) {
      throw ParseError("expected a block color, got '" + std::string(toks[pos]) + "' in '" +
                       std::string(text) + "'");
    }
    const auto b = BlockSum(*color).mask();
    if (mask & b) {
      throw ParseError("block listed twice in '" + std::string(text) + "'");
    }
    mask |= b;
    ++pos;
    if (pos < toks.size() && toks[pos] == "+") {
      ++pos;
      continue;
    }
    return BlockSum::from_mask(mask);
  }
}

std::string render_sum(BlockSum s) {
  std::string out;
  for (const auto c : s.colors()) {
    if (!out.empty()) out += " + ";
    out += to_string(c);
  }
  return out;
}

}  // namespace

std::string_view to_string(Color c) { return kColorNames[static_cast<std::size_t>(c)]; }

std::optional<Color> color_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kColorNames.size(); ++i) {
    if (kColorNames[i] == name) return kColors[i];
  }
  return std::nullopt;
}

Weight::Weight(int grams) : grams_(grams) {
  if (std::find(kGrams.begin(), kGrams.end(), grams) == kGrams.end()) {
    throw DomainError("weight must be one of 10, 20, 30, 40, 50 (got " + std::to_string(grams) +
                      ")");
  }
}

std::optional<Weight> Weight::from_grams(int grams) {
  if (std::find(kGrams.begin(), kGrams.end(), grams) == kGrams.end()) return std::nullopt;
  return Weight(grams);
}

BlockSum::BlockSum(std::initializer_list<Color> colors) : mask_(0) {
  for (const auto c : colors) {
    if (mask_ & bit(c)) throw DomainError("duplicate block in sum");
    mask_ |= bit(c);
  }
  if (mask_ == 0) throw DomainError("block sum must be non-empty");
}

BlockSum BlockSum::from_mask(std::uint8_t mask) {
  if (mask == 0 || (mask & ~kAllMask) != 0) throw DomainError("invalid block mask");
  BlockSum s(Color::red);
  s.mask_ = mask;
  return s;
}

int BlockSum::size() const { return std::popcount(mask_); }

Color BlockSum::first() const { return static_cast<Color>(std::countr_zero(mask_)); }

std::vector<Color> BlockSum::colors() const {
  std::vector<Color> out;
  for (const auto c : kColors) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

bool BlockSum::lex_less(BlockSum other) const {
  const auto a = colors();
  const auto b = other.colors();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::eq: return "=";
    case Relation::ne: return "!=";
    case Relation::lt: return "<";
    case Relation::gt: return ">";
  }
  return "?";
}

Proposition::Proposition(BlockSum lhs, Relation rel, Weight rhs)
    : lhs_(lhs), rel_(rel), rhs_(rhs) {}

Proposition::Proposition(BlockSum lhs, Relation rel, BlockSum rhs)
    : lhs_(lhs), rel_(rel), rhs_(rhs) {
  if (!lhs.disjoint(rhs)) {
    throw DomainError("block sums on both sides of a proposition must be disjoint");
  }
  switch (rel) {
    case Relation::eq:
    case Relation::ne:
      if (rhs.lex_less(lhs)) {
        lhs_ = rhs;
        rhs_ = lhs;
      }
      break;
    case Relation::gt:
      lhs_ = rhs;
      rhs_ = lhs;
      rel_ = Relation::lt;
      break;
    case Relation::lt:
      break;
  }
}

std::optional<Weight> Proposition::weight() const {
  if (const auto* w = std::get_if<Weight>(&rhs_)) return *w;
  return std::nullopt;
}

std::optional<BlockSum> Proposition::rhs_sum() const {
  if (const auto* s = std::get_if<BlockSum>(&rhs_)) return *s;
  return std::nullopt;
}

BlockSum Proposition::blocks() const {
  if (const auto s = rhs_sum()) {
    return BlockSum::from_mask(static_cast<std::uint8_t>(lhs_.mask() | s->mask()));
  }
  return lhs_;
}

Proposition parse_proposition(std::string_view text) {
  const auto toks = split_spaces(text);
  if (toks.empty() || toks.front().empty()) throw ParseError("empty proposition");
  if (all_digits(toks.front())) {
    throw ParseError("weight literal may not appear on the left: '" + std::string(text) + "'");
  }
  std::size_t pos = 0;
  const auto lhs = parse_sum(toks, pos, text);
  if (pos >= toks.size()) throw ParseError("missing relation in '" + std::string(text) + "'");
  const auto rel = relation_from_token(toks[pos]);
  if (!rel) {
    throw ParseError("unknown relation '" + std::string(toks[pos]) + "' in '" +
                     std::string(text) + "'");
  }
  ++pos;
  if (pos >= toks.size()) throw ParseError("missing right-hand side in '" + std::string(text) + "'");

  if (all_digits(toks[pos])) {
    if (pos + 1 != toks.size()) {
      throw ParseError("trailing input after weight in '" + std::string(text) + "'");
    }
    int grams = 0;
    const auto tok = toks[pos];
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), grams);
    const auto w = ec == std::errc{} ? Weight::from_grams(grams) : std::nullopt;
    if (!w) throw ParseError("weight must be one of 10, 20, 30, 40, 50 in '" + std::string(text) + "'");
    return {lhs, *rel, *w};
  }

  const auto rhs = parse_sum(toks, pos, text);
  if (pos != toks.size()) throw ParseError("trailing input in '" + std::string(text) + "'");
  if (!lhs.disjoint(rhs)) {
    throw ParseError("overlapping block sets in '" + std::string(text) + "'");
  }
  return {lhs, *rel, rhs};
}

std::string render(const Proposition& p) {
  std::string out = render_sum(p.lhs());
  out += ' ';
  out += to_string(p.relation());
  out += ' ';
  if (const auto w = p.weight()) {
    out += std::to_string(w->grams());
  } else {
    out += render_sum(*p.rhs_sum());
  }
  return out;
}

std::string_view to_string(MoveLabel m) {
  switch (m) {
    case MoveLabel::statement: return "STATEMENT";
    case MoveLabel::accept: return "ACCEPT";
    case MoveLabel::doubt: return "DOUBT";
    case MoveLabel::none: return "NONE";
  }
  return "NONE";
}

std::optional<MoveLabel> move_from_string(std::string_view name) {
  for (const auto m : {MoveLabel::statement, MoveLabel::accept, MoveLabel::doubt, MoveLabel::none}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

EpistemicMove EpistemicMove::make(MoveLabel label, std::vector<Proposition> props) {
  if (label == MoveLabel::none) props.clear();
  return {label, std::move(props)};
}

double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

std::string object_class_name(const ObjectDetection& o) {
  return o.block ? std::string(to_string(*o.block)) : std::string("scale");
}

void validate(const Utterance& u) {
  if (u.start > u.end) throw DomainError("utterance '" + u.id + "' ends before it starts");
  if (u.text.empty()) throw DomainError("utterance '" + u.id + "' has empty text");
}

void validate(const DeixisEvent& d) {
  if (d.start > d.end) throw DomainError("deixis '" + d.id + "' ends before it starts");
  if (std::abs(norm(d.direction) - 1.0) > kUnitTolerance) {
    throw DomainError("deixis '" + d.id + "' direction is not a unit vector");
  }
}

void validate(const ObjectDetection& o) {
  const auto& [lo, hi] = o.box;
  if (lo.x > hi.x || lo.y > hi.y || lo.z > hi.z) {
    throw DomainError("object box min corner exceeds max corner");
  }
  const auto& c = o.centroid;
  if (c.x < lo.x || c.x > hi.x || c.y < lo.y || c.y > hi.y || c.z < lo.z || c.z > hi.z) {
    throw DomainError("object centroid lies outside its box");
  }
}

void validate(const GazeEvent& g) {
  if (std::abs(norm(g.direction) - 1.0) > kUnitTolerance) {
    throw DomainError("gaze direction for '" + g.participant + "' is not a unit vector");
  }
}

}  // namespace cgtrack
