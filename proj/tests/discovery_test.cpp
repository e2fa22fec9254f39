#include <algorithm>

#include <gtest/gtest.h>

#include "cliquechain/discovery.hpp"
#include "cliquechain/interestingness.hpp"
#include "planted_fixture.hpp"
#include "random_graphs.hpp"

using namespace cliquechain;

namespace {

std::vector<VertexSet> members(const DiscoveryResult& r, std::size_t chain) {
  std::vector<VertexSet> out;
  for (auto id : r.chains.at(chain).chain.cliques) out.push_back(r.cliques[id].vertices);
  return out;
}

bool matches_path(std::vector<VertexSet> got, const std::vector<VertexSet>& planted) {
  if (got == planted) return true;
  std::reverse(got.begin(), got.end());
  return got == planted;
}

}  // namespace

TEST(Discovery, ZeroChainsRequested) {
  DiscoveryOptions opts;
  opts.k = 0;
  const auto r = discover_chains(testkit::gnp(15, 0.3, false, 1), opts);
  EXPECT_TRUE(r.chains.empty());
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.background.epoch(), 0u);
}

TEST(Discovery, NoCliqueLargeEnough) {
  const auto g = Graph::build({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}}, false);
  DiscoveryOptions opts;
  opts.k = 3;
  opts.min_size = 3;
  const auto r = discover_chains(g, opts);
  EXPECT_TRUE(r.chains.empty());
  EXPECT_TRUE(r.cliques.empty());
}

TEST(Discovery, PlantedCliqueRankedFirstInFreshSession) {
  // One dense 6-clique among sparse noise.
  auto base = testkit::gnp(40, 0.05, false, 12);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex a = 0; a < 40; ++a) {
    for (auto b : base.out_neighbors(a)) {
      if (a < b) edges.emplace_back(a, b);
    }
  }
  for (Vertex a = 0; a < 6; ++a) {
    for (Vertex b = a + 1; b < 6; ++b) edges.emplace_back(a, b);
  }
  const Graph g(testkit::numbered_labels(40), edges, false);
  auto graph = std::make_shared<const Graph>(g);
  auto s = ExplorationSession::create("t", graph, enumerate_maximal_cliques(g, 3).cliques);
  const auto top = s.clique(s.rank_cliques().front().id).vertices;
  for (Vertex v = 0; v < 6; ++v) EXPECT_TRUE(top.contains(v)) << v;
}

TEST(Discovery, RecoversPlantedChain) {
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto fx = testkit::make_planted_fixture(seed);
    DiscoveryOptions opts;
    opts.k = 1;
    const auto r = discover_chains(fx.graph, opts);
    ASSERT_TRUE(r.complete) << r.diagnostic;
    ASSERT_EQ(r.chains.size(), 1u);
    if (matches_path(members(r, 0), fx.chain)) ++recovered;
  }
  EXPECT_GE(recovered, 4);
}

TEST(Discovery, SecondChainDiffersFromFirst) {
  const auto fx = testkit::make_planted_fixture(1);
  DiscoveryOptions opts;
  opts.k = 2;
  const auto r = discover_chains(fx.graph, opts);
  ASSERT_TRUE(r.complete);
  EXPECT_TRUE(matches_path(members(r, 0), fx.chain));
  EXPECT_EQ(r.background.epoch(), r.chains.size());
  if (r.chains.size() == 2) {
    for (auto id : r.chains[1].chain.cliques) EXPECT_FALSE(r.chains[0].chain.contains(id));
  }
  // Everything mined is explained by the final background.
  for (const auto& fc : r.chains) {
    for (auto id : fc.chain.cliques) {
      EXPECT_LE(interestingness(r.background, fx.graph, r.cliques[id].vertices), 1e-6);
    }
  }
}

TEST(Discovery, SeedIsTopRankedAndChainsAreWellFormed) {
  const auto g = testkit::gnp(30, 0.2, false, 21);
  DiscoveryOptions opts;
  opts.k = 2;
  const auto r = discover_chains(g, opts);
  auto graph = std::make_shared<const Graph>(g);
  auto fresh = ExplorationSession::create("t", graph, enumerate_maximal_cliques(g, 3).cliques);
  const auto top = fresh.rank_cliques().front();
  ASSERT_FALSE(r.chains.empty());
  EXPECT_TRUE(r.chains[0].chain.contains(top.id));
  for (const auto& fc : r.chains) {
    EXPECT_TRUE(is_well_formed(fc.chain, r.cliques));
    for (double s : fc.scores) EXPECT_GE(s, opts.min_score);
  }
}

TEST(Discovery, Deterministic) {
  const auto g = testkit::gnp(35, 0.15, true, 4);
  DiscoveryOptions opts;
  opts.k = 2;
  const auto a = discover_chains(g, opts);
  const auto b = discover_chains(g, opts);
  ASSERT_EQ(a.chains.size(), b.chains.size());
  for (std::size_t i = 0; i < a.chains.size(); ++i) {
    EXPECT_EQ(a.chains[i].chain, b.chains[i].chain);
    EXPECT_EQ(a.chains[i].scores, b.chains[i].scores);
  }
  EXPECT_EQ(a.background, b.background);
}

TEST(Discovery, HighThresholdStopsMining) {
  DiscoveryOptions opts;
  opts.k = 3;
  opts.min_score = 1e9;
  const auto r = discover_chains(testkit::gnp(20, 0.3, false, 2), opts);
  EXPECT_TRUE(r.chains.empty());
  EXPECT_TRUE(r.complete);
}
