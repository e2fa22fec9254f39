#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cliquechain/graph.hpp"

namespace cliquechain {

// canonical name -> surface forms that denote it
using AliasMap = std::map<std::string, std::vector<std::string>>;

struct Sentence {
  std::string text;
  std::vector<std::string> entities;  // used verbatim for pre-segmented documents
};

struct Document {
  std::string id;
  // Raw text is segmented and run through the extractor; otherwise the
  // pre-segmented sentences and their entity lists are taken as given.
  std::optional<std::string> text;
  std::vector<Sentence> sentences;
};

struct Corpus {
  std::vector<Document> documents;
  AliasMap alias_map;
  std::vector<std::string> stop_list = default_stop_list();
  std::vector<std::string> abbreviations = default_abbreviations();
  std::vector<std::string> connectors = default_connectors();

  static const std::vector<std::string>& default_stop_list();
  static const std::vector<std::string>& default_abbreviations();
  static const std::vector<std::string>& default_connectors();
};

// Corpus file: { "format_version": 1, "documents": [...], "alias_map"?,
// "stop_list"?, "abbreviations"?, "connectors"? } where each document is
// {"id", "text"} or {"id", "sentences": [{"text", "entities"}]}.
// Validation failures are kParse errors naming the offending location.
Corpus corpus_from_json(const nlohmann::json& j);
Corpus load_corpus(const std::string& path);

// Splits after . ! or ? when followed by whitespace and an uppercase letter
// (or the end of the text), unless the word carrying the period is a listed
// abbreviation or a single-letter initial.
std::vector<std::string> segment_sentences(
    std::string_view text,
    const std::vector<std::string>& abbreviations = Corpus::default_abbreviations());

// Naive rule-based extractor: maximal runs of capitalized tokens, joined
// through lowercase name connectors and month-date numbers; a sentence-initial
// stop word is dropped, as are single-token runs that are stop words. Surface
// forms are then mapped through the alias map.
std::set<std::string> extract_entities(
    std::string_view sentence, const AliasMap& alias_map,
    const std::vector<std::string>& stop_list = Corpus::default_stop_list(),
    const std::vector<std::string>& connectors = Corpus::default_connectors(),
    const std::vector<std::string>& abbreviations = Corpus::default_abbreviations());

struct SentenceRef {
  std::string document;
  std::size_t sentence = 0;

  friend auto operator<=>(const SentenceRef&, const SentenceRef&) = default;
};

struct Provenance {
  std::map<std::string, std::vector<SentenceRef>> mentions;
  // Keyed by the label pair in byte order.
  std::map<std::pair<std::string, std::string>, std::vector<SentenceRef>> cooccurrences;
};

struct EntityGraph {
  Graph graph;  // undirected, labels sorted
  Provenance provenance;
  // Document id -> segmented sentence texts, for showing evidence.
  std::map<std::string, std::vector<std::string>> sentences;
};

EntityGraph build_entity_graph(const Corpus& corpus);

nlohmann::json provenance_to_json(const EntityGraph& eg);

}  // namespace cliquechain
