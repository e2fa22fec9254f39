#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "cliquechain/cliques.hpp"
#include "cliquechain/graph.hpp"
#include "cliquechain/session.hpp"

namespace cliquechain {

struct ExportedClique {
  CliqueId id = 0;
  std::vector<std::string> vertices;  // labels, sorted
  std::optional<double> score;
  std::uint64_t score_epoch = 0;
};

struct ExportedChain {
  std::vector<ExportedClique> cliques;
  std::vector<std::vector<std::string>> connectors;
  std::uint64_t background_epoch = 0;
};

// Label-level chain listing, self-contained so it can be rendered without the
// graph it came from.
struct ChainDocument {
  std::string dataset_id;
  std::vector<ExportedChain> chains;
};

ExportedChain export_chain(const Graph& g, std::span<const CliquePattern> cliques,
                           const FinalizedChain& chain);
ChainDocument make_chain_document(std::string dataset_id, const Graph& g,
                                  std::span<const CliquePattern> cliques,
                                  std::span<const FinalizedChain> chains);

nlohmann::json to_json(const ExportedChain& chain);
nlohmann::json to_json(const ChainDocument& doc);
ChainDocument chain_document_from_json(const nlohmann::json& j);

void write_chain_document(std::ostream& out, const ChainDocument& doc);
ChainDocument read_chain_document(std::istream& in);

// One block per chain: clique lines with score, then connector lines.
void render_chains_text(std::ostream& out, const ChainDocument& doc);
// One cluster per chain. Vertices exclusive to a clique take that clique's
// colour; vertices shared between adjacent cliques take the connector colour.
void render_chains_dot(std::ostream& out, const ChainDocument& doc);

}  // namespace cliquechain
