#include "cgtrack/mmdp.hpp"

#include <algorithm>
#include <cctype>

namespace cgtrack::mmdp {

namespace {

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || c == '_' || u >= 0x80;
}

// ASCII apostrophe or U+2019 (UTF-8 E2 80 99).
bool apostrophe_at(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return false;
  if (text[pos] == '\'') return true;
  return text.substr(pos, 3) == "\xE2\x80\x99";
}

bool iequals_at(std::string_view text, std::size_t pos, std::string_view word) {
  if (pos + word.size() > text.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) !=
        std::tolower(static_cast<unsigned char>(word[i]))) {
      return false;
    }
  }
  return true;
}

struct Entry {
  std::string_view word;
  GrammaticalNumber number;
};

}  // namespace

std::vector<DemonstrativeToken> find_demonstratives(std::string_view text, const Lexicon& lexicon) {
  std::vector<Entry> entries;
  for (const auto& w : lexicon.singular) entries.push_back({w, GrammaticalNumber::singular});
  for (const auto& w : lexicon.plural) entries.push_back({w, GrammaticalNumber::plural});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.word.size() > b.word.size(); });

  std::vector<DemonstrativeToken> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (pos > 0 && (is_word_byte(text[pos - 1]) || apostrophe_at(text, pos - 1))) {
      ++pos;
      continue;
    }
    bool matched = false;
    for (const auto& e : entries) {
      if (e.word.empty() || !iequals_at(text, pos, e.word)) continue;
      const auto end = pos + e.word.size();
      const bool contracted = apostrophe_at(text, end);
      if (!contracted && end < text.size() && is_word_byte(text[end])) continue;
      const bool multiword = e.word.find(' ') != std::string_view::npos;
      if (multiword && contracted) continue;
      out.push_back({std::string(text.substr(pos, e.word.size())), e.number, pos, end});
      pos = end;
      matched = true;
      break;
    }
    if (!matched) ++pos;
  }
  return out;
}

ReferentQueue build_referent_queue(const Utterance& u, std::span<const Pointing> pointings) {
  std::vector<const Pointing*> hits;
  for (const auto& p : pointings) {
    if (overlaps(u.start, u.end, p.start, p.end)) hits.push_back(&p);
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const Pointing* a, const Pointing* b) { return a->start < b->start; });
  ReferentQueue queue;
  for (const auto* p : hits) {
    for (const auto c : geometry::target_colors(p->targets)) {
      if (std::find(queue.begin(), queue.end(), c) == queue.end()) queue.push_back(c);
    }
  }
  return queue;
}

std::string block_phrase(std::span<const Color> colors) {
  std::string out = "[";
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(colors[i]);
    out += " block";
  }
  out += ']';
  return out;
}

Paraphrase paraphrase(std::string_view text, const ReferentQueue& queue, const Lexicon& lexicon) {
  Paraphrase result;
  std::size_t copied = 0;
  for (const auto& tok : find_demonstratives(text, lexicon)) {
    const auto remaining = queue.size() - result.consumed;
    if (remaining == 0) break;
    const auto take = tok.number == GrammaticalNumber::singular ? std::size_t{1} : remaining;
    result.text.append(text.substr(copied, tok.begin - copied));
    result.text += block_phrase(std::span(queue).subspan(result.consumed, take));
    result.consumed += take;
    copied = tok.end;
  }
  result.text.append(text.substr(copied));
  return result;
}

std::string dense_paraphrase(std::string_view text, const ReferentQueue& queue,
                             const Lexicon& lexicon) {
  return paraphrase(text, queue, lexicon).text;
}

}  // namespace cgtrack::mmdp
