#include <algorithm>
#include <cctype>

#include "cliquechain/ingest.hpp"

namespace cliquechain {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closing(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_opening(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// The whitespace-delimited word ending at `dot` (inclusive), without any
// opening punctuation.
std::string_view word_ending_at(std::string_view text, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  auto word = text.substr(begin, dot - begin + 1);
  while (!word.empty() && is_opening(word.front())) word.remove_prefix(1);
  return word;
}

bool protected_period(std::string_view text, std::size_t dot,
                      const std::vector<std::string>& abbreviations) {
  const auto word = word_ending_at(text, dot);
  if (word.size() == 2 && is_upper(word[0])) return true;  // initial, e.g. "J."
  return std::find(abbreviations.begin(), abbreviations.end(), word) != abbreviations.end();
}

}  // namespace

const std::vector<std::string>& Corpus::default_abbreviations() {
  static const std::vector<std::string> list = {
      "Mr.",   "Mrs.", "Ms.",   "Dr.",   "Prof.", "Sr.",  "Jr.",  "St.",  "Mt.",  "Ave.",
      "U.S.",  "U.K.", "U.N.",  "Inc.",  "Ltd.",  "Co.",  "Corp.", "Gen.", "Col.", "Lt.",
      "Sgt.",  "Capt.", "Gov.", "Sen.",  "Rep.",  "No.",  "vs.",  "e.g.", "i.e.", "Jan.",
      "Feb.",  "Mar.", "Apr.",  "Aug.",  "Sep.",  "Sept.", "Oct.", "Nov.", "Dec."};
  return list;
}

std::vector<std::string> segment_sentences(std::string_view text,
                                           const std::vector<std::string>& abbreviations) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    auto s = trim(text.substr(start, end - start));
    if (!s.empty()) sentences.emplace_back(s);
  };

  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < text.size() && is_terminal(text[end])) ++end;
    while (end < text.size() && is_closing(text[end])) ++end;

    std::size_t next = end;
    while (next < text.size() && is_space(text[next])) ++next;

    bool boundary = false;
    if (next == text.size()) {
      boundary = true;
    } else if (next > end) {
      std::size_t first = next;
      while (first < text.size() && is_opening(text[first])) ++first;
      boundary = first < text.size() && is_upper(text[first]);
    }
    // Only a lone period can belong to an abbreviation.
    if (boundary && end == i + 1 && text[i] == '.' && next < text.size() &&
        protected_period(text, i, abbreviations)) {
      boundary = false;
    }
    if (boundary) {
      emit(end);
      start = next;
    }
    i = end;
  }
  emit(text.size());
  return sentences;
}

}  // namespace cliquechain
