#include <algorithm>
#include <thread>

#include <gtest/gtest.h>

#include "cliquechain/chain.hpp"
#include "cliquechain/error.hpp"
#include "cliquechain/interestingness.hpp"
#include "cliquechain/session.hpp"
#include "random_graphs.hpp"

using namespace cliquechain;

namespace {

ExplorationSession make_session(const Graph& g, std::size_t min_size = 2, FitOptions fit = {}) {
  auto shared = std::make_shared<const Graph>(g);
  return ExplorationSession::create("test", shared, enumerate_maximal_cliques(g, min_size).cliques, fit);
}

CliqueId id_of(const ExplorationSession& s, std::initializer_list<const char*> labels) {
  std::vector<Vertex> vs;
  for (auto* l : labels) vs.push_back(s.graph().vertex(l));
  const VertexSet want(vs);
  for (const auto& c : s.cliques()) {
    if (c.vertices == want) return c.id;
  }
  throw std::runtime_error("no such clique");
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

// a-b-c triangle, c-d, d-e edges, plus a-x.
Graph small_chain_graph() {
  return Graph::build({"a", "b", "c", "d", "e", "x"},
                      {{"a", "b"}, {"b", "c"}, {"a", "c"}, {"c", "d"}, {"d", "e"}, {"a", "x"}}, false);
}

}  // namespace

TEST(Candidates, OnlyCliquesOverlappingAnEnd) {
  auto s = make_session(small_chain_graph());
  s.start_chain(id_of(s, {"a", "b", "c"}));
  const auto cands = s.candidate_cliques();
  std::vector<CliqueId> ids;
  for (const auto& c : cands) ids.push_back(c.id);
  EXPECT_NE(std::find(ids.begin(), ids.end(), id_of(s, {"c", "d"})), ids.end());
  EXPECT_EQ(std::find(ids.begin(), ids.end(), id_of(s, {"d", "e"})), ids.end());
  EXPECT_EQ(std::find(ids.begin(), ids.end(), id_of(s, {"a", "b", "c"})), ids.end());
  for (std::size_t i = 1; i < cands.size(); ++i) {
    EXPECT_TRUE(cands[i - 1].score > cands[i].score ||
                (cands[i - 1].score == cands[i].score && cands[i - 1].id < cands[i].id));
  }
}

TEST(Candidates, FrontAttachmentWhenOnlyFirstCliqueOverlaps) {
  const auto g = Graph::build({"a", "b", "c", "x"}, {{"a", "b"}, {"b", "c"}, {"a", "x"}}, false);
  auto s = make_session(g);
  s.start_chain(id_of(s, {"a", "b"}));
  s.extend_chain(id_of(s, {"b", "c"}));
  const auto cands = s.candidate_cliques();
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_EQ(cands[0].id, id_of(s, {"a", "x"}));
  EXPECT_EQ(cands[0].end, ChainEnd::kFront);
  EXPECT_EQ(cands[0].connector, VertexSet{g.vertex("a")});
  s.extend_chain(cands[0].id);
  EXPECT_EQ(s.current_chain()->front(), id_of(s, {"a", "x"}));
}

TEST(Candidates, OverlapWithBothEndsAttachesAtBack) {
  // Chain [{a,b},{b,c}] and clique {a,c}: overlaps both ends.
  const auto g = Graph::build({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "d"}, {"d", "c"}, {"a", "c"}}, false);
  auto s = make_session(g);
  s.start_chain(id_of(s, {"a", "b"}));
  s.extend_chain(id_of(s, {"b", "d"}));
  s.extend_chain(id_of(s, {"c", "d"}));
  const auto cands = s.candidate_cliques();
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_EQ(cands[0].end, ChainEnd::kBack);
  s.extend_chain(cands[0].id);
  EXPECT_EQ(s.current_chain()->back(), id_of(s, {"a", "c"}));
  EXPECT_TRUE(is_well_formed(*s.current_chain(), s.cliques()));
}

TEST(Candidates, RequireAnActiveChain) {
  auto s = make_session(small_chain_graph());
  EXPECT_EQ(code_of([&] { s.candidate_cliques(); }), ErrorCode::kConflict);
}

TEST(Ranking, TiesBrokenByLowerId) {
  const auto g = Graph::build({"a", "b", "c", "d", "e", "f"},
                              {{"a", "b"}, {"b", "c"}, {"a", "c"}, {"d", "e"}, {"e", "f"}, {"d", "f"}}, false);
  auto s = make_session(g, 3);
  const auto ranked = s.rank_cliques();
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_NEAR(ranked[0].score, ranked[1].score, 1e-7 * ranked[0].score);
  EXPECT_EQ(ranked[0].id, 0u);
}

TEST(Ranking, StaleScoresNeedRefreshAfterFinalize) {
  auto s = make_session(testkit::gnp(15, 0.3, false, 3), 3);
  const auto ranked = s.rank_cliques();
  ASSERT_FALSE(ranked.empty());
  EXPECT_TRUE(s.scores_fresh());
  s.start_chain(ranked[0].id);
  s.finalize_chain();
  EXPECT_FALSE(s.scores_fresh());
  EXPECT_EQ(code_of([&] { std::as_const(s).rank_cliques(); }), ErrorCode::kConflict);
  const auto after = s.rank_cliques();
  EXPECT_EQ(after.back().id, ranked[0].id);
  EXPECT_LE(after.back().score, 1e-6);
  for (const auto& c : s.cliques()) EXPECT_EQ(c.score_epoch, s.epoch());
}

TEST(StartChain, StateRules) {
  auto s = make_session(small_chain_graph());
  const auto ranked = s.rank_cliques();
  s.start_chain(ranked.back().id);  // any clique, not just the top one
  EXPECT_EQ(s.status(), SessionStatus::kExploring);
  EXPECT_EQ(s.current_chain()->size(), 1u);
  EXPECT_EQ(code_of([&] { s.start_chain(ranked[0].id); }), ErrorCode::kConflict);
  s.clear_chain();
  EXPECT_EQ(code_of([&] { s.start_chain(999); }), ErrorCode::kNotFound);
  EXPECT_EQ(code_of([&] { s.start_chain(0, 7); }), ErrorCode::kConflict);
  EXPECT_EQ(s.status(), SessionStatus::kIdle);
}

TEST(ExtendChain, AddsConnectorAndRejectsNonCandidates) {
  auto s = make_session(small_chain_graph());
  s.start_chain(id_of(s, {"a", "b", "c"}));
  s.extend_chain(id_of(s, {"c", "d"}));
  const auto& chain = *s.current_chain();
  ASSERT_EQ(chain.size(), 2u);
  EXPECT_EQ(chain.connectors[0], VertexSet{s.graph().vertex("c")});
  // {a,x} overlaps the first clique so it is still a candidate; {d,e} overlaps
  // the last. Nothing else remains, so a repeat must fail.
  EXPECT_EQ(code_of([&] { s.extend_chain(id_of(s, {"c", "d"})); }), ErrorCode::kConflict);
}

TEST(ExtendChain, RejectsDisjointClique) {
  const auto g = Graph::build({"a", "b", "c", "x", "y"}, {{"a", "b"}, {"b", "c"}, {"x", "y"}}, false);
  auto s = make_session(g);
  s.start_chain(id_of(s, {"a", "b"}));
  EXPECT_EQ(code_of([&] { s.extend_chain(id_of(s, {"x", "y"})); }), ErrorCode::kConflict);
  EXPECT_EQ(s.current_chain()->size(), 1u);
}

TEST(FinalizeChain, FoldsChainIntoBackground) {
  auto s = make_session(small_chain_graph());
  s.start_chain(id_of(s, {"a", "b", "c"}));
  s.extend_chain(id_of(s, {"c", "d"}));
  const auto epoch = s.epoch();
  const auto& done = s.finalize_chain(epoch);
  EXPECT_EQ(done.background_epoch, epoch + 1);
  EXPECT_EQ(done.score_epoch, epoch);
  EXPECT_EQ(done.scores.size(), 2u);
  EXPECT_EQ(s.status(), SessionStatus::kIdle);
  EXPECT_EQ(s.finalized_chains().size(), 1u);
  for (auto id : done.chain.cliques) {
    EXPECT_LE(interestingness(s.background(), s.graph(), s.clique(id).vertices), 1e-6);
  }
  EXPECT_EQ(code_of([&] { s.finalize_chain(); }), ErrorCode::kConflict);
}

TEST(FinalizeChain, NonConvergenceKeepsChainAndBackground) {
  const auto g = testkit::gnp(14, 0.4, false, 5);
  auto graph = std::make_shared<const Graph>(g);
  auto bg = build_background(g);
  FitOptions strict;
  strict.max_iter = 1;
  strict.tol = 1e-14;
  ExplorationSession s("t", graph, enumerate_maximal_cliques(g, 3).cliques, bg, strict);
  ASSERT_GE(s.cliques().size(), 2u);
  s.start_chain(0);
  for (const auto& c : s.cliques()) {
    if (c.id != 0 && intersects(c.vertices, s.clique(0).vertices)) {
      s.extend_chain(c.id);
      break;
    }
  }
  const auto before = *s.current_chain();
  EXPECT_EQ(code_of([&] { s.finalize_chain(); }), ErrorCode::kNonConvergence);
  EXPECT_EQ(*s.current_chain(), before);
  EXPECT_EQ(s.background(), bg);
  EXPECT_TRUE(s.finalized_chains().empty());
}

TEST(ClearChain, DropsChainOnly) {
  auto s = make_session(small_chain_graph());
  s.clear_chain();  // idle: no-op
  EXPECT_EQ(s.status(), SessionStatus::kIdle);
  s.start_chain(0);
  const auto epoch = s.epoch();
  s.clear_chain();
  EXPECT_EQ(s.status(), SessionStatus::kIdle);
  EXPECT_EQ(s.epoch(), epoch);
  EXPECT_EQ(code_of([&] { s.candidate_cliques(); }), ErrorCode::kConflict);
  s.start_chain(0);
  s.finalize_chain();
  const auto committed = s.finalized_chains();
  s.clear_chain();
  EXPECT_EQ(s.finalized_chains().size(), committed.size());
}

TEST(Restore, RejectsMalformedChains) {
  auto s = make_session(small_chain_graph());
  ChainPattern bad{{0, 0}, {VertexSet{0}}};
  EXPECT_EQ(code_of([&] { s.restore(bad, {}); }), ErrorCode::kParse);
  s.restore(ChainPattern{{0}, {}}, {});
  EXPECT_EQ(s.status(), SessionStatus::kExploring);
}

// Random legal and illegal actions checked against a reference model of the
// idle/exploring state machine.
TEST(SessionStateMachine, RandomActionSequencesFollowTheRules) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto g = testkit::gnp(12, 0.35, false, 500 + seed);
    auto s = make_session(g, 2);
    const auto n_cliques = static_cast<CliqueId>(s.cliques().size());
    ASSERT_GT(n_cliques, 0u);

    std::optional<std::vector<CliqueId>> ref_chain;
    std::uint64_t ref_epoch = s.epoch();
    std::size_t ref_finalized = 0;
    testkit::Rng rng(seed);

    for (int step = 0; step < 40; ++step) {
      const int action = static_cast<int>(rng.below(4));
      const CliqueId id = static_cast<CliqueId>(rng.below(n_cliques + 2));  // sometimes unknown
      std::optional<std::uint64_t> guard;
      bool stale_guard = false;
      switch (rng.below(3)) {
        case 0: break;
        case 1: guard = ref_epoch; break;
        default: guard = ref_epoch + 1; stale_guard = true; break;
      }

      std::optional<ErrorCode> expected;
      if (action == 0) {  // start
        if (stale_guard || ref_chain) expected = ErrorCode::kConflict;
        else if (id >= n_cliques) expected = ErrorCode::kNotFound;
      } else if (action == 1) {  // extend
        if (stale_guard || !ref_chain) {
          expected = ErrorCode::kConflict;
        } else if (id >= n_cliques) {
          expected = ErrorCode::kNotFound;
        } else {
          const auto& vs = s.clique(id).vertices;
          const bool repeat = std::count(ref_chain->begin(), ref_chain->end(), id) > 0;
          const bool touches = intersects(vs, s.clique(ref_chain->back()).vertices) ||
                               intersects(vs, s.clique(ref_chain->front()).vertices);
          if (repeat || !touches) expected = ErrorCode::kConflict;
        }
      } else if (action == 2) {  // finalize
        if (stale_guard || !ref_chain) expected = ErrorCode::kConflict;
      }

      const auto before_chain = s.current_chain();
      std::optional<ErrorCode> got;
      try {
        switch (action) {
          case 0: s.start_chain(id, guard); break;
          case 1: s.extend_chain(id, guard); break;
          case 2: s.finalize_chain(guard); break;
          default: s.clear_chain(); break;
        }
      } catch (const Error& e) {
        got = e.code();
      }
      ASSERT_EQ(got, expected) << "seed " << seed << " step " << step << " action " << action;

      if (got) {
        EXPECT_EQ(s.current_chain(), before_chain);
      } else if (action == 0) {
        ref_chain = std::vector<CliqueId>{id};
      } else if (action == 1) {
        const bool back = intersects(s.clique(id).vertices, s.clique(ref_chain->back()).vertices);
        if (back) ref_chain->push_back(id);
        else ref_chain->insert(ref_chain->begin(), id);
      } else if (action == 2) {
        ref_chain.reset();
        ++ref_epoch;
        ++ref_finalized;
      } else {
        ref_chain.reset();
      }

      EXPECT_EQ(s.status(), ref_chain ? SessionStatus::kExploring : SessionStatus::kIdle);
      EXPECT_EQ(s.epoch(), ref_epoch);
      EXPECT_EQ(s.finalized_chains().size(), ref_finalized);
      if (ref_chain) {
        ASSERT_TRUE(s.current_chain().has_value());
        EXPECT_EQ(s.current_chain()->cliques, *ref_chain);
        EXPECT_TRUE(is_well_formed(*s.current_chain(), s.cliques()));
      }
    }
  }
}

TEST(SessionConcurrency, ReadersShareFreshScores) {
  auto s = make_session(testkit::gnp(20, 0.3, false, 8), 3);
  s.refresh_scores();
  const auto& view = std::as_const(s);
  const auto expected = view.rank_cliques();
  std::vector<std::jthread> readers;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 8; ++t) {
    readers.emplace_back([&] {
      for (int i = 0; i < 50; ++i) {
        const auto r = view.rank_cliques();
        if (r.size() != expected.size() || r.front().id != expected.front().id) ++mismatches;
      }
    });
  }
  readers.clear();
  EXPECT_EQ(mismatches.load(), 0);
}
