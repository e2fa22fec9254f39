#include <sstream>

#include <gtest/gtest.h>

#include "cliquechain/error.hpp"
#include "cliquechain/graph.hpp"
#include "cliquechain/graph_io.hpp"
#include "random_graphs.hpp"

using namespace cliquechain;

namespace {

Graph path3() { return Graph::build({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, false); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInternal;
}

}  // namespace

TEST(VertexSet, SortsAndDeduplicates) {
  VertexSet s{3, 1, 3, 2};
  EXPECT_EQ(std::vector<Vertex>(s.begin(), s.end()), (std::vector<Vertex>{1, 2, 3}));
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(0));
  EXPECT_EQ(intersection(s, VertexSet{2, 3, 9}), (VertexSet{2, 3}));
  EXPECT_TRUE(intersects(s, VertexSet{0, 3}));
  EXPECT_FALSE(intersects(s, VertexSet{0, 4}));
}

TEST(Graph, BuildsPathGraph) {
  const auto g = path3();
  EXPECT_EQ(g.num_vertices(), 3u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.ordered_edge_count(), 4u);
  EXPECT_TRUE(g.has_edge(g.vertex("b"), g.vertex("a")));
  EXPECT_FALSE(g.has_edge(g.vertex("a"), g.vertex("c")));
}

TEST(Graph, RejectsSelfLoopUnlessAllowed) {
  EXPECT_EQ(code_of([] { Graph::build({"a"}, {{"a", "a"}}, false); }), ErrorCode::kInvalidArgument);
  const auto g = Graph::build({"a"}, {{"a", "a"}}, true, true);
  EXPECT_TRUE(g.has_edge(0, 0));
}

TEST(Graph, UndirectedDuplicatesCollapse) {
  const auto g = Graph::build({"a", "b"}, {{"a", "b"}, {"b", "a"}}, false);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.edges(), (std::vector<std::pair<Vertex, Vertex>>{{0, 1}}));
}

TEST(Graph, DirectedKeepsBothOrientations) {
  const auto g = Graph::build({"a", "b"}, {{"a", "b"}, {"b", "a"}}, true);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.ordered_edge_count(), 2u);
}

TEST(Graph, RejectsUnknownEndpointAndDuplicateLabel) {
  EXPECT_EQ(code_of([] { Graph::build({"a"}, {{"a", "z"}}, false); }), ErrorCode::kInvalidArgument);
  EXPECT_NE(code_of([] { Graph::build({"a", "a"}, {}, false); }), ErrorCode::kInternal);
}

TEST(NormalizedDegree, MatchesCountsOverVertexCount) {
  std::vector<std::pair<Vertex, Vertex>> arcs = {{0, 1}, {0, 2}, {0, 3}};
  const Graph d(testkit::numbered_labels(10), arcs, true);
  EXPECT_DOUBLE_EQ(normalized_degree(d, 0, Direction::kOut), 0.3);
  EXPECT_DOUBLE_EQ(normalized_degree(d, 0, Direction::kIn), 0.0);
  EXPECT_DOUBLE_EQ(normalized_degree(d, 1, Direction::kIn), 0.1);

  const auto p = path3();
  EXPECT_DOUBLE_EQ(normalized_degree(p, p.vertex("b"), Direction::kUndirected), 2.0 / 3.0);

  const auto iso = Graph::build({"a", "b", "c"}, {{"a", "b"}}, false);
  EXPECT_DOUBLE_EQ(normalized_degree(iso, iso.vertex("c"), Direction::kUndirected), 0.0);
}

TEST(NormalizedDegree, DirectionMustMatchGraph) {
  const auto p = path3();
  EXPECT_EQ(code_of([&] { normalized_degree(p, 0, Direction::kOut); }), ErrorCode::kInvalidArgument);
}

TEST(SubgraphDensity, CountsOrderedPairs) {
  const auto d = Graph::build({"a", "b", "c"}, {{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "b"}}, true);
  EXPECT_DOUBLE_EQ(subgraph_density(d, d.all_vertices()), 4.0 / 9.0);

  const auto u = Graph::build({"a", "b"}, {{"a", "b"}}, false);
  EXPECT_DOUBLE_EQ(subgraph_density(u, u.all_vertices()), 0.5);

  const auto e = Graph::build({"a", "b", "c"}, {}, false);
  EXPECT_DOUBLE_EQ(subgraph_density(e, e.all_vertices()), 0.0);
  EXPECT_EQ(code_of([&] { subgraph_density(e, VertexSet{}); }), ErrorCode::kInvalidArgument);
}

TEST(SubgraphDensity, SelfLoopsCountOnceOnTheDiagonal) {
  const auto g = Graph::build({"a", "b"}, {{"a", "a"}, {"a", "b"}}, true, true);
  EXPECT_DOUBLE_EQ(subgraph_density(g, g.all_vertices()), 2.0 / 4.0);
}

TEST(IsComplete, DetectsCliques) {
  const auto g = Graph::build({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}, {"c", "d"}}, false);
  EXPECT_TRUE(is_complete(g, VertexSet{0, 1, 2}));
  EXPECT_FALSE(is_complete(g, VertexSet{0, 1, 2, 3}));
}

TEST(EdgeList, ParsesCommentsIsolatedVerticesAndDirectedHeader) {
  std::istringstream in("# directed\n# comment\nb\ta\nc\n\na\tb\n");
  const auto g = read_edge_list(in);
  EXPECT_TRUE(g.directed());
  EXPECT_EQ(g.labels(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_TRUE(g.has_edge(g.vertex("b"), g.vertex("a")));
}

TEST(EdgeList, ReportsLineOfMalformedInput) {
  std::istringstream in("a\tb\na\tb\tc\n");
  try {
    read_edge_list(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(EdgeList, RoundTripsRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const bool directed = seed % 2 == 1;
    const auto g = testkit::gnp(15, 0.2, directed, seed);
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream in(out.str());
    const auto back = read_edge_list(in, directed);
    EXPECT_EQ(back.labels(), g.labels());
    EXPECT_EQ(back.edges(), g.edges());
    std::ostringstream again;
    write_edge_list(again, back);
    EXPECT_EQ(again.str(), out.str());
  }
}

TEST(Dot, QuotesLabels) {
  EXPECT_EQ(dot_quote("a \"b\""), "\"a \\\"b\\\"\"");
  std::ostringstream out;
  write_dot(out, path3());
  EXPECT_NE(out.str().find("\"a\" -- \"b\""), std::string::npos) << out.str();
}
