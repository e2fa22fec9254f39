#include <algorithm>
#include <array>
#include <cctype>

#include "cliquechain/ingest.hpp"

namespace cliquechain {
namespace {

struct Token {
  std::string core;       // punctuation-stripped form
  bool break_before = false;
  bool break_after = false;
  char trailing = '\0';   // last stripped trailing character, if any
};

constexpr std::array<std::string_view, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool contains(const std::vector<std::string>& list, std::string_view word) {
  return std::find(list.begin(), list.end(), word) != list.end();
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_stop_word(const std::vector<std::string>& stop_list, std::string_view word) {
  return std::any_of(stop_list.begin(), stop_list.end(),
                     [&](const std::string& s) { return iequals(s, word); });
}

bool is_capitalized(std::string_view word) { return !word.empty() && word[0] >= 'A' && word[0] <= 'Z'; }

bool is_number(std::string_view word, std::size_t max_len) {
  return !word.empty() && word.size() <= max_len && std::all_of(word.begin(), word.end(), is_digit);
}

bool is_month(std::string_view word) {
  return std::find(kMonths.begin(), kMonths.end(), word) != kMonths.end();
}

std::vector<Token> tokenize(std::string_view sentence,
                            const std::vector<std::string>& abbreviations) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !is_space(sentence[j])) ++j;
    if (j == i) break;
    std::string_view raw = sentence.substr(i, j - i);
    i = j;

    Token t;
    while (!raw.empty() && is_punct(raw.front())) {
      raw.remove_prefix(1);
      t.break_before = true;
    }
    if (contains(abbreviations, raw)) {
      t.core = std::string(raw);
      tokens.push_back(std::move(t));
      continue;
    }
    while (!raw.empty() && is_punct(raw.back())) {
      t.trailing = raw.back();
      raw.remove_suffix(1);
      t.break_after = true;
    }
    if (raw.size() > 2 && raw.substr(raw.size() - 2) == "'s") raw.remove_suffix(2);
    t.core = std::string(raw);
    tokens.push_back(std::move(t));
  }
  return tokens;
}

class RunBuilder {
 public:
  RunBuilder(const std::vector<Token>& tokens, const std::vector<std::string>& connectors)
      : tokens_(tokens), connectors_(connectors) {}

  // Each run is a list of token indices.
  std::vector<std::vector<std::size_t>> build() {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      const auto& t = tokens_[i];
      if (t.break_before) flush();
      if (t.core.empty()) {
        flush();
        continue;
      }
      if (is_capitalized(t.core) || joins_as_connector(i) || continues_date(t.core)) {
        current_.push_back(i);
      } else {
        flush();
        continue;
      }
      if (t.break_after && !comma_inside_date(i)) flush();
    }
    flush();
    return std::move(runs_);
  }

 private:
  bool joins_as_connector(std::size_t i) const {
    const auto& t = tokens_[i];
    if (current_.empty() || t.break_after || !contains(connectors_, t.core)) return false;
    if (i + 1 >= tokens_.size()) return false;
    const auto& next = tokens_[i + 1];
    return !next.break_before && is_capitalized(next.core);
  }

  bool continues_date(const std::string& word) const {
    if (current_.empty() || !is_number(word, 4)) return false;
    const auto& last = tokens_[current_.back()].core;
    if (is_month(last)) return true;
    return current_.size() >= 2 && is_number(last, 2) &&
           is_month(tokens_[current_[current_.size() - 2]].core);
  }

  // "March, 1993" and "March 3, 1993" stay one run across the comma.
  bool comma_inside_date(std::size_t i) const {
    const auto& t = tokens_[i];
    if (t.trailing != ',' || i + 1 >= tokens_.size()) return false;
    const auto& next = tokens_[i + 1];
    if (next.break_before || next.core.size() != 4 || !is_number(next.core, 4)) return false;
    if (is_month(t.core)) return true;
    return is_number(t.core, 2) && current_.size() >= 2 &&
           is_month(tokens_[current_[current_.size() - 2]].core);
  }

  void flush() {
    while (!current_.empty() && contains(connectors_, tokens_[current_.back()].core)) {
      current_.pop_back();
    }
    if (!current_.empty()) runs_.push_back(std::move(current_));
    current_.clear();
  }

  const std::vector<Token>& tokens_;
  const std::vector<std::string>& connectors_;
  std::vector<std::size_t> current_;
  std::vector<std::vector<std::size_t>> runs_;
};

}  // namespace

const std::vector<std::string>& Corpus::default_stop_list() {
  static const std::vector<std::string> list = {
      "A",       "About",  "According", "After",  "Also",    "Although", "An",     "And",
      "As",      "At",     "Because",   "Before", "But",     "By",       "During", "Each",
      "Every",   "For",    "From",      "He",     "Her",     "Here",     "His",    "However",
      "I",       "If",     "In",        "It",     "Its",     "Later",    "Many",   "Meanwhile",
      "Most",    "My",     "No",        "Not",    "Of",      "On",       "Once",   "One",
      "Or",      "Our",    "She",       "Since",  "So",      "Some",     "That",   "The",
      "Their",   "Then",   "There",     "These",  "They",    "This",     "Those",  "To",
      "Today",   "Two",    "We",        "What",   "When",    "Where",    "While",  "Who",
      "With",    "Yesterday", "You",    "Your"};
  return list;
}

const std::vector<std::string>& Corpus::default_connectors() {
  static const std::vector<std::string> list = {"al",  "bin", "bint", "ibn", "van", "von",
                                                "de",  "der", "del",  "la",  "le",  "el",
                                                "da",  "di",  "du"};
  return list;
}

std::set<std::string> extract_entities(std::string_view sentence, const AliasMap& alias_map,
                                       const std::vector<std::string>& stop_list,
                                       const std::vector<std::string>& connectors,
                                       const std::vector<std::string>& abbreviations) {
  const auto tokens = tokenize(sentence, abbreviations);
  auto runs = RunBuilder(tokens, connectors).build();

  std::set<std::string> entities;
  for (auto& run : runs) {
    if (run.front() == 0 && is_stop_word(stop_list, tokens[0].core)) {
      run.erase(run.begin());
      while (!run.empty() && contains(connectors, tokens[run.front()].core)) run.erase(run.begin());
    }
    if (run.empty()) continue;
    if (run.size() == 1 && is_stop_word(stop_list, tokens[run[0]].core)) continue;

    std::string surface;
    for (std::size_t k = 0; k < run.size(); ++k) {
      if (k) surface += ' ';
      surface += tokens[run[k]].core;
    }
    std::string canonical = surface;
    for (const auto& [name, forms] : alias_map) {
      if (contains(forms, surface)) {
        canonical = name;
        break;
      }
    }
    entities.insert(std::move(canonical));
  }
  return entities;
}

}  // namespace cliquechain
