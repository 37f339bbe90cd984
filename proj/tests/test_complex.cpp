#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"

using namespace higcn;
using higcn::testing::brute_force_cliques;
using higcn::testing::data_path;

TEST(LoadGraph, CanonicalizesAndDropsSelfLoops) {
  std::istringstream in("0 1\n1 0\n1 1\n");
  const auto list = parse_edge_list(in);
  EdgeCleanup cleanup;
  const Graph g = make_graph(2, list.edges, &cleanup);
  EXPECT_EQ(g.edges, (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(cleanup.self_loops, 1u);
  EXPECT_EQ(cleanup.duplicates, 1u);
}

TEST(LoadGraph, HeaderOnlyFileGivesIsolatedNodes) {
  std::istringstream in("#n=3\n");
  const auto list = parse_edge_list(in);
  ASSERT_TRUE(list.declared_n.has_value());
  EXPECT_EQ(*list.declared_n, 3u);
  const Graph g = make_graph(*list.declared_n, list.edges);
  EXPECT_EQ(g.n, 3u);
  EXPECT_TRUE(g.edges.empty());
}

TEST(LoadGraph, CompleteGraphFile) {
  const auto lg = load_graph(data_path("k4.tsv"));
  EXPECT_EQ(lg.graph.n, 4u);
  EXPECT_EQ(lg.graph.num_edges(), 6u);
}

TEST(LoadGraph, BadRowReportsLineNumber) {
  std::istringstream in("0\t1\n1\tx\n");
  try {
    parse_edge_list(in, "g.tsv");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("g.tsv:2"), std::string::npos) << e.what();
  }
}

TEST(LoadGraph, FeatureAndLabelValidation) {
  const std::string dir = ::testing::TempDir();
  const std::string edges = dir + "/lg_edges.tsv";
  const std::string feats = dir + "/lg_feats.csv";
  const std::string labels = dir + "/lg_labels.csv";
  std::ofstream(edges) << "0\t1\n1\t2\n";
  std::ofstream(feats) << "1,0\n0,1\n";
  std::ofstream(labels) << "0\n1\n3\n";
  EXPECT_THROW(load_graph(edges, feats), DataError);
  std::ofstream(feats) << "1,0\n0,1\n0.5,0.5\n";
  EXPECT_NO_THROW(load_graph(edges, feats, labels));
  EXPECT_THROW(load_graph(edges, feats, labels, 2), DataError);
  const auto ok = load_graph(edges, feats, labels, 4);
  ASSERT_TRUE(ok.graph.features.has_value());
  EXPECT_EQ((*ok.graph.features)(2, 1), 0.5);
  EXPECT_EQ((*ok.graph.labels)[2], 3);
}

TEST(LoadGraph, MissingFileIsDataError) { EXPECT_THROW(load_graph("/nonexistent/edges.tsv"), DataError); }

TEST(CliqueLift, CompleteGraphOnFourNodes) {
  const auto k = clique_lift(synthetic::complete(4), 3);
  EXPECT_EQ(k.count(1), 6u);
  EXPECT_EQ(k.count(2), 4u);
  EXPECT_EQ(k.count(3), 1u);
}

TEST(CliqueLift, SixCycleHasNoTriangles) {
  const auto k = clique_lift(synthetic::cycle(6), 2);
  EXPECT_EQ(k.count(1), 6u);
  EXPECT_EQ(k.count(2), 0u);
}

TEST(CliqueLift, TwoDisjointTriangles) {
  const auto k = clique_lift(synthetic::disjoint_triangles(2), 2);
  EXPECT_EQ(k.count(1), 6u);
  EXPECT_EQ(k.count(2), 2u);
  const std::vector<NodeId> first(k.simplex(2, 0).begin(), k.simplex(2, 0).end());
  EXPECT_EQ(first, (std::vector<NodeId>{0, 1, 2}));
}

TEST(CliqueLift, RejectsZeroOrder) { EXPECT_THROW(clique_lift(synthetic::complete(3), 0), UsageError); }

TEST(CliqueLift, MatchesBruteForceEnumeration) {
  Rng rng = make_rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 12);
    const Graph g = synthetic::erdos_renyi(n, uniform(rng, 0.2, 0.8), rng);
    const std::size_t P = 1 + uniform_index(rng, 4);
    const auto k = clique_lift(g, P);
    const auto oracle = brute_force_cliques(g, P);
    for (std::size_t p = 1; p <= P; ++p) {
      std::vector<std::vector<NodeId>> got;
      for (std::size_t i = 0; i < k.count(p); ++i) got.emplace_back(k.simplex(p, i).begin(), k.simplex(p, i).end());
      EXPECT_EQ(got, oracle[p]) << "trial " << trial << " order " << p;
    }
  }
}

TEST(CliqueLift, DownwardClosureOnRandomGraphs) {
  Rng rng = make_rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 63);
    const auto k = clique_lift(synthetic::erdos_renyi(n, 0.3, rng), 3);
    EXPECT_NO_THROW(k.validate());
    for (std::size_t p = 2; p <= 3; ++p)
      for (std::size_t i = 0; i < k.count(p); ++i) {
        const auto s = k.simplex(p, i);
        for (std::size_t skip = 0; skip <= p; ++skip) {
          std::vector<NodeId> face;
          for (std::size_t j = 0; j <= p; ++j)
            if (j != skip) face.push_back(s[j]);
          EXPECT_TRUE(k.contains(face));
        }
      }
  }
}

TEST(CloseDownward, AddsAllFaces) {
  const auto k = close_downward(5, {{0, 1, 2, 3}, {3, 4}});
  EXPECT_EQ(k.max_order(), 3u);
  EXPECT_EQ(k.count(3), 1u);
  EXPECT_EQ(k.count(2), 4u);
  EXPECT_EQ(k.count(1), 7u);
  EXPECT_NO_THROW(k.validate());
  EXPECT_THROW(close_downward(3, {{0, 5}}), DataError);
  EXPECT_THROW(close_downward(3, {{1, 1}}), DataError);
}

TEST(Incidence, TriangleSecondOrderIsColumnOfOnes) {
  const auto k = clique_lift(synthetic::complete(3), 2);
  const auto h = incidence_matrix(k, 2);
  ASSERT_EQ(h.h.rows(), 3u);
  ASSERT_EQ(h.h.cols(), 1u);
  for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(h.h.at(v, 0), 1.0);
}

TEST(Incidence, TriangleFirstOrderRowSums) {
  const auto k = clique_lift(synthetic::complete(3), 2);
  const auto h = incidence_matrix(k, 1);
  EXPECT_EQ(h.h.rows(), 3u);
  EXPECT_EQ(h.h.cols(), 3u);
  EXPECT_EQ(h.node_degrees(), (std::vector<double>{2, 2, 2}));
}

TEST(Incidence, EmptyPetalHasZeroColumns) {
  const auto k = clique_lift(synthetic::cycle(6), 2);
  const auto h = incidence_matrix(k, 2);
  EXPECT_EQ(h.h.rows(), 6u);
  EXPECT_EQ(h.h.cols(), 0u);
}

TEST(Incidence, OutOfRangeOrderThrows) {
  const auto k = clique_lift(synthetic::complete(3), 2);
  EXPECT_THROW(incidence_matrix(k, 0), UsageError);
  EXPECT_THROW(incidence_matrix(k, 3), UsageError);
}

TEST(Incidence, EntrySumAndColumnCounts) {
  Rng rng = make_rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto k = clique_lift(synthetic::erdos_renyi(2 + uniform_index(rng, 40), 0.3, rng), 3);
    for (std::size_t p = 1; p <= 3; ++p) {
      const auto h = incidence_matrix(k, p);
      double total = 0.0;
      for (double v : h.h.values()) total += v;
      EXPECT_EQ(total, static_cast<double>((p + 1) * k.count(p)));
      const auto ht = transpose(h.h);
      for (std::size_t c = 0; c < ht.rows(); ++c) EXPECT_EQ(ht.row_cols(c).size(), p + 1);
    }
  }
}

TEST(PermuteGraph, MapsEdgesAndAttributes) {
  Graph g = make_graph(3, {{0, 1}});
  g.labels = std::vector<int>{5, 6, 7};
  const std::vector<std::size_t> perm{2, 0, 1};
  const Graph h = permute_graph(g, perm);
  EXPECT_EQ(h.edges, (std::vector<Edge>{{0, 2}}));
  EXPECT_EQ(*h.labels, (std::vector<int>{6, 7, 5}));
}
