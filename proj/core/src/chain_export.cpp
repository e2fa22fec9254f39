#include "cliquechain/chain_export.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "cliquechain/error.hpp"
#include "cliquechain/graph_io.hpp"
#include "cliquechain/snapshot.hpp"

namespace cliquechain {

using nlohmann::json;

namespace {

constexpr const char* kChainFormat = "cliquechain-chains";

constexpr std::array<const char*, 8> kCliquePalette = {
    "#4e79a7", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7", "#9c755f"};
constexpr const char* kConnectorColor = "#f28e2b";

std::vector<std::string> labels_of(const Graph& g, const VertexSet& s) {
  std::vector<std::string> out;
  for (Vertex v : s) out.push_back(g.label(v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ExportedChain export_chain(const Graph& g, std::span<const CliquePattern> cliques,
                           const FinalizedChain& chain) {
  ExportedChain out;
  out.background_epoch = chain.background_epoch;
  for (std::size_t i = 0; i < chain.chain.cliques.size(); ++i) {
    const auto& c = cliques[chain.chain.cliques[i]];
    std::optional<double> score;
    if (i < chain.scores.size()) score = chain.scores[i];
    out.cliques.push_back({c.id, labels_of(g, c.vertices), score, chain.score_epoch});
  }
  for (const auto& connector : chain.chain.connectors) {
    out.connectors.push_back(labels_of(g, connector));
  }
  return out;
}

ChainDocument make_chain_document(std::string dataset_id, const Graph& g,
                                  std::span<const CliquePattern> cliques,
                                  std::span<const FinalizedChain> chains) {
  ChainDocument doc{std::move(dataset_id), {}};
  for (const auto& chain : chains) doc.chains.push_back(export_chain(g, cliques, chain));
  return doc;
}

json to_json(const ExportedChain& chain) {
  json cliques = json::array();
  for (const auto& c : chain.cliques) {
    cliques.push_back({{"id", c.id},
                       {"vertices", c.vertices},
                       {"score", c.score ? json(*c.score) : json(nullptr)},
                       {"score_epoch", c.score_epoch}});
  }
  return {{"cliques", cliques},
          {"connectors", chain.connectors},
          {"background_epoch", chain.background_epoch}};
}

json to_json(const ChainDocument& doc) {
  json chains = json::array();
  for (const auto& chain : doc.chains) chains.push_back(to_json(chain));
  return {{"format", kChainFormat},
          {"format_version", 1},
          {"dataset_id", doc.dataset_id},
          {"chains", chains}};
}

ChainDocument chain_document_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kChainFormat) {
      throw Error(ErrorCode::kParse, "chain document: unexpected format tag");
    }
    if (j.at("format_version").get<int>() != 1) {
      throw Error(ErrorCode::kParse, "chain document: unsupported format_version");
    }
    ChainDocument doc;
    doc.dataset_id = j.at("dataset_id").get<std::string>();
    for (const auto& jc : j.at("chains")) {
      ExportedChain chain;
      chain.background_epoch = jc.at("background_epoch").get<std::uint64_t>();
      for (const auto& jq : jc.at("cliques")) {
        ExportedClique c;
        c.id = jq.at("id").get<CliqueId>();
        c.vertices = jq.at("vertices").get<std::vector<std::string>>();
        if (!jq.at("score").is_null()) c.score = jq.at("score").get<double>();
        c.score_epoch = jq.at("score_epoch").get<std::uint64_t>();
        chain.cliques.push_back(std::move(c));
      }
      chain.connectors = jc.at("connectors").get<std::vector<std::vector<std::string>>>();
      if (!chain.cliques.empty() && chain.connectors.size() + 1 != chain.cliques.size()) {
        throw Error(ErrorCode::kParse, "chain document: connector count mismatch");
      }
      doc.chains.push_back(std::move(chain));
    }
    return doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("chain document: ") + e.what());
  }
}

void write_chain_document(std::ostream& out, const ChainDocument& doc) {
  out << to_json(doc).dump(2) << '\n';
}

ChainDocument read_chain_document(std::istream& in) {
  return chain_document_from_json(parse_json(in, "chain document"));
}

void render_chains_text(std::ostream& out, const ChainDocument& doc) {
  auto join = [](const std::vector<std::string>& labels) {
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? ", " : "") + labels[i];
    return s;
  };
  out << "dataset: " << doc.dataset_id << '\n';
  for (std::size_t i = 0; i < doc.chains.size(); ++i) {
    const auto& chain = doc.chains[i];
    out << "chain " << i + 1 << " (background epoch " << chain.background_epoch << ")\n";
    for (std::size_t j = 0; j < chain.cliques.size(); ++j) {
      const auto& c = chain.cliques[j];
      out << "  clique " << c.id << " [" << join(c.vertices) << "]";
      if (c.score) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", *c.score);
        out << " score " << buf << " (epoch " << c.score_epoch << ")";
      }
      out << '\n';
      if (j < chain.connectors.size()) out << "    via [" << join(chain.connectors[j]) << "]\n";
    }
  }
}

void render_chains_dot(std::ostream& out, const ChainDocument& doc) {
  out << "graph chains {\n  node [style=filled, fontcolor=white];\n";
  for (std::size_t i = 0; i < doc.chains.size(); ++i) {
    const auto& chain = doc.chains[i];
    const std::string prefix = "c" + std::to_string(i + 1) + ":";
    std::set<std::string> connectors;
    for (const auto& shared : chain.connectors) connectors.insert(shared.begin(), shared.end());

    out << "  subgraph " << dot_quote("cluster_" + std::to_string(i + 1)) << " {\n";
    out << "    label=" << dot_quote("chain " + std::to_string(i + 1)) << ";\n";
    std::set<std::string> emitted;
    for (std::size_t j = 0; j < chain.cliques.size(); ++j) {
      const char* color = kCliquePalette[j % kCliquePalette.size()];
      for (const auto& v : chain.cliques[j].vertices) {
        if (!emitted.insert(v).second) continue;
        out << "    " << dot_quote(prefix + v) << " [label=" << dot_quote(v)
            << ", fillcolor=" << dot_quote(connectors.count(v) ? kConnectorColor : color)
            << "];\n";
      }
    }
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& c : chain.cliques) {
      for (std::size_t a = 0; a < c.vertices.size(); ++a) {
        for (std::size_t b = a + 1; b < c.vertices.size(); ++b) {
          edges.emplace(c.vertices[a], c.vertices[b]);
        }
      }
    }
    for (const auto& [a, b] : edges) {
      out << "    " << dot_quote(prefix + a) << " -- " << dot_quote(prefix + b) << ";\n";
    }
    out << "  }\n";
  }
  out << "}\n";
}

}  // namespace cliquechain
