#include <sstream>

#include <gtest/gtest.h>

#include "cliquechain/chain_export.hpp"
#include "cliquechain/error.hpp"

using namespace cliquechain;

namespace {

struct Fixture {
  Graph graph = Graph::build({"a", "b", "c", "d", "e"},
                             {{"a", "b"}, {"b", "c"}, {"a", "c"}, {"c", "d"}, {"d", "e"}, {"c", "e"}},
                             false);
  std::vector<CliquePattern> cliques = enumerate_maximal_cliques(graph, 3).cliques;
  FinalizedChain chain;

  Fixture() {
    chain.chain.cliques = {0, 1};
    chain.chain.connectors = {VertexSet{2}};
    chain.scores = {0.5, 0.25};
    chain.score_epoch = 0;
    chain.background_epoch = 1;
  }
};

}  // namespace

TEST(ChainExport, UsesLabels) {
  Fixture f;
  ASSERT_EQ(f.cliques.size(), 2u);
  const auto e = export_chain(f.graph, f.cliques, f.chain);
  ASSERT_EQ(e.cliques.size(), 2u);
  EXPECT_EQ(e.cliques[0].vertices, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(e.cliques[1].vertices, (std::vector<std::string>{"c", "d", "e"}));
  EXPECT_EQ(e.connectors, (std::vector<std::vector<std::string>>{{"c"}}));
  EXPECT_EQ(e.cliques[1].score, 0.25);
  EXPECT_EQ(e.background_epoch, 1u);
}

TEST(ChainExport, DocumentRoundTrips) {
  Fixture f;
  const auto doc = make_chain_document("ds-1", f.graph, f.cliques, std::span(&f.chain, 1));
  std::stringstream buf;
  write_chain_document(buf, doc);
  const auto back = read_chain_document(buf);
  EXPECT_EQ(back.dataset_id, "ds-1");
  ASSERT_EQ(back.chains.size(), 1u);
  EXPECT_EQ(back.chains[0].cliques[0].vertices, doc.chains[0].cliques[0].vertices);
  EXPECT_EQ(back.chains[0].cliques[0].score, 0.5);
  EXPECT_EQ(back.chains[0].connectors, doc.chains[0].connectors);
}

TEST(ChainExport, RejectsBadDocuments) {
  auto code = [](const nlohmann::json& j) {
    try {
      chain_document_from_json(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code(nlohmann::json::object()), ErrorCode::kParse);
  Fixture f;
  auto j = to_json(make_chain_document("x", f.graph, f.cliques, std::span(&f.chain, 1)));
  j["chains"][0]["connectors"].push_back(nlohmann::json::array({"z"}));
  EXPECT_EQ(code(j), ErrorCode::kParse);
}

TEST(ChainExport, TextRendering) {
  Fixture f;
  std::ostringstream out;
  render_chains_text(out, make_chain_document("ds", f.graph, f.cliques, std::span(&f.chain, 1)));
  const auto text = out.str();
  EXPECT_NE(text.find("chain 1"), std::string::npos);
  EXPECT_NE(text.find("[a, b, c]"), std::string::npos) << text;
  EXPECT_NE(text.find("via [c]"), std::string::npos) << text;
}

TEST(ChainExport, DotColoursConnectorsSeparately) {
  Fixture f;
  std::ostringstream out;
  render_chains_dot(out, make_chain_document("ds", f.graph, f.cliques, std::span(&f.chain, 1)));
  const auto dot = out.str();
  EXPECT_EQ(dot.rfind("graph chains {", 0), 0u);
  EXPECT_NE(dot.find("\"c1:c\" [label=\"c\", fillcolor=\"#f28e2b\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("\"c1:a\" [label=\"a\", fillcolor=\"#4e79a7\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("\"c1:e\" [label=\"e\", fillcolor=\"#59a14f\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("\"c1:d\" -- \"c1:e\""), std::string::npos);
}
