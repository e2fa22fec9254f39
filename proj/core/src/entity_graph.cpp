#include <algorithm>
#include <set>

#include "cliquechain/ingest.hpp"

namespace cliquechain {

using nlohmann::json;

EntityGraph build_entity_graph(const Corpus& corpus) {
  Provenance provenance;
  std::map<std::string, std::vector<std::string>> texts;

  for (const auto& doc : corpus.documents) {
    auto& doc_texts = texts[doc.id];
    std::vector<std::set<std::string>> per_sentence;
    if (doc.text) {
      for (auto& s : segment_sentences(*doc.text, corpus.abbreviations)) {
        per_sentence.push_back(extract_entities(s, corpus.alias_map, corpus.stop_list,
                                                corpus.connectors, corpus.abbreviations));
        doc_texts.push_back(std::move(s));
      }
    } else {
      for (const auto& s : doc.sentences) {
        per_sentence.emplace_back(s.entities.begin(), s.entities.end());
        doc_texts.push_back(s.text);
      }
    }

    for (std::size_t idx = 0; idx < per_sentence.size(); ++idx) {
      const SentenceRef ref{doc.id, idx};
      const auto& entities = per_sentence[idx];
      for (const auto& e : entities) provenance.mentions[e].push_back(ref);
      for (auto a = entities.begin(); a != entities.end(); ++a) {
        for (auto b = std::next(a); b != entities.end(); ++b) {
          provenance.cooccurrences[{*a, *b}].push_back(ref);
        }
      }
    }
  }

  std::vector<std::string> labels;
  labels.reserve(provenance.mentions.size());
  for (const auto& [label, refs] : provenance.mentions) labels.push_back(label);
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(provenance.cooccurrences.size());
  for (const auto& [pair, refs] : provenance.cooccurrences) edges.push_back(pair);

  return EntityGraph{Graph::build(std::move(labels), edges, false), std::move(provenance),
                     std::move(texts)};
}

json provenance_to_json(const EntityGraph& eg) {
  auto refs_json = [](const std::vector<SentenceRef>& refs) {
    json out = json::array();
    for (const auto& r : refs) out.push_back(json::array({r.document, r.sentence}));
    return out;
  };
  json mentions = json::object();
  for (const auto& [label, refs] : eg.provenance.mentions) mentions[label] = refs_json(refs);
  json edges = json::array();
  for (const auto& [pair, refs] : eg.provenance.cooccurrences) {
    edges.push_back({{"source", pair.first}, {"target", pair.second}, {"witnesses", refs_json(refs)}});
  }
  return {{"format", "cliquechain-provenance"},
          {"format_version", 1},
          {"entities", mentions},
          {"edges", edges},
          {"sentences", eg.sentences}};
}

}  // namespace cliquechain
