#include <fstream>
#include <set>

#include "cliquechain/error.hpp"
#include "cliquechain/ingest.hpp"
#include "cliquechain/snapshot.hpp"

namespace cliquechain {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParse, "corpus " + where + ": " + what);
}

std::string string_at(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where, std::string("missing '") + key + "'");
  if (!j.at(key).is_string()) fail(where + "." + key, "expected a string");
  return j.at(key).get<std::string>();
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail(where + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

}  // namespace

Corpus corpus_from_json(const json& j) {
  if (!j.is_object()) fail("root", "expected an object");
  if (!j.contains("format_version") || j.at("format_version") != 1) {
    fail("format_version", "expected format_version 1");
  }
  if (!j.contains("documents") || !j.at("documents").is_array()) {
    fail("documents", "expected an array");
  }

  Corpus corpus;
  std::set<std::string> ids;
  const auto& docs = j.at("documents");
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const std::string where = "documents[" + std::to_string(d) + "]";
    const auto& jd = docs[d];
    if (!jd.is_object()) fail(where, "expected an object");
    Document doc;
    doc.id = string_at(jd, "id", where);
    if (!ids.insert(doc.id).second) fail(where + ".id", "duplicate document id '" + doc.id + "'");

    const bool has_text = jd.contains("text");
    const bool has_sentences = jd.contains("sentences");
    if (has_text == has_sentences) fail(where, "expected exactly one of 'text' or 'sentences'");
    if (has_text) {
      doc.text = string_at(jd, "text", where);
    } else {
      const auto& js = jd.at("sentences");
      if (!js.is_array()) fail(where + ".sentences", "expected an array");
      for (std::size_t s = 0; s < js.size(); ++s) {
        const std::string swhere = where + ".sentences[" + std::to_string(s) + "]";
        if (!js[s].is_object()) fail(swhere, "expected an object");
        Sentence sentence;
        sentence.text = js[s].contains("text") ? string_at(js[s], "text", swhere) : "";
        if (!js[s].contains("entities")) fail(swhere, "missing 'entities'");
        sentence.entities = string_list(js[s].at("entities"), swhere + ".entities");
        for (std::size_t e = 0; e < sentence.entities.size(); ++e) {
          if (sentence.entities[e].empty()) {
            fail(swhere + ".entities[" + std::to_string(e) + "]", "empty entity string");
          }
        }
        doc.sentences.push_back(std::move(sentence));
      }
    }
    corpus.documents.push_back(std::move(doc));
  }

  if (j.contains("alias_map")) {
    const auto& ja = j.at("alias_map");
    if (!ja.is_object()) fail("alias_map", "expected an object");
    for (const auto& [name, forms] : ja.items()) {
      corpus.alias_map[name] = string_list(forms, "alias_map." + name);
    }
  }
  if (j.contains("stop_list")) corpus.stop_list = string_list(j.at("stop_list"), "stop_list");
  if (j.contains("abbreviations")) {
    corpus.abbreviations = string_list(j.at("abbreviations"), "abbreviations");
  }
  if (j.contains("connectors")) corpus.connectors = string_list(j.at("connectors"), "connectors");
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open corpus '" + path + "'");
  return corpus_from_json(parse_json(in, "corpus '" + path + "'"));
}

}  // namespace cliquechain
