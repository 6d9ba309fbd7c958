#include <gtest/gtest.h>

#include <random>

#include "covereval/quality.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace covereval;

namespace {

Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph::from_edges(n, e);
}

CommunityStats stats(const Graph& g, std::vector<NodeId> s) { return community_stats(g, s); }

}  // namespace

TEST(CommunityStats, WholeK4) {
  const auto cs = stats(complete(4), {0, 1, 2, 3});
  EXPECT_EQ(cs.n_s, 4u);
  EXPECT_EQ(cs.m_s, 6u);
  EXPECT_EQ(cs.e_out, 0u);
  EXPECT_EQ(cs.out_frac, std::vector<double>(4, 0.0));
  EXPECT_EQ(avg_degree_score(cs), 3.0);
  EXPECT_EQ(internal_density_score(cs), 1.0);
  EXPECT_EQ(max_odf_score(cs), 0.0);
  EXPECT_EQ(avg_odf_score(cs), 0.0);
  EXPECT_EQ(flake_odf_score(cs), 0.0);
}

TEST(CommunityStats, TriangleOfK4) {
  const auto cs = stats(complete(4), {0, 1, 2});
  EXPECT_EQ(cs.n_s, 3u);
  EXPECT_EQ(cs.m_s, 3u);
  EXPECT_EQ(cs.e_out, 3u);
  for (double f : cs.out_frac) EXPECT_DOUBLE_EQ(f, 1.0 / 3.0);
  EXPECT_EQ(avg_degree_score(cs), 2.0);
  EXPECT_EQ(internal_density_score(cs), 1.0);
  EXPECT_DOUBLE_EQ(max_odf_score(cs), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(avg_odf_score(cs), 1.0 / 3.0);
  EXPECT_EQ(flake_odf_score(cs), 0.0);
}

TEST(CommunityStats, SingleNodeOfK4) {
  const auto cs = stats(complete(4), {2});
  bool degenerate = false;
  EXPECT_EQ(avg_degree_score(cs), 0.0);
  EXPECT_EQ(internal_density_score(cs, &degenerate), 0.0);
  EXPECT_TRUE(degenerate);
  EXPECT_EQ(max_odf_score(cs), 1.0);
  EXPECT_EQ(flake_odf_score(cs), 1.0);
}

TEST(CommunityStats, IndependentNodes) {
  const auto g = Graph::from_edges(5, std::vector<Edge>{{0, 1}});
  const auto cs = stats(g, {2, 3, 4});
  EXPECT_EQ(internal_density_score(cs), 0.0);
  EXPECT_EQ(cs.isolated, 3u);
  EXPECT_EQ(avg_odf_score(cs), 0.0);
}

TEST(CommunityStats, RandomCommunityMatchesEdgeScan) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = gen::random_graph(40, 0.15, rng);
    const auto s = gen::random_sets(40, 1, 20, rng)[0];
    const auto cs = community_stats(g, s);
    std::uint64_t in = 0, out = 0;
    for (auto [u, v] : g.edges()) {
      const bool a = std::binary_search(s.begin(), s.end(), u), b = std::binary_search(s.begin(), s.end(), v);
      if (a && b) ++in;
      else if (a || b) ++out;
    }
    EXPECT_EQ(cs.m_s, in);
    EXPECT_EQ(cs.e_out, out);
  }
}

TEST(AvgDegree, CompleteGraphs) {
  for (std::size_t n = 2; n <= 20; ++n) {
    const auto g = complete(n);
    std::vector<NodeId> all(n);
    std::iota(all.begin(), all.end(), NodeId{0});
    EXPECT_EQ(avg_degree_score(community_stats(g, all)), static_cast<double>(n - 1));
  }
}

TEST(OverlappingModularity, WholeGraphIsZero) {
  std::mt19937_64 rng(3);
  const auto g = gen::random_graph(30, 0.2, rng);
  std::vector<NodeId> all(30);
  std::iota(all.begin(), all.end(), NodeId{0});
  EXPECT_EQ(overlapping_modularity(g, Cover({all}, 30)), 0.0);
}

TEST(OverlappingModularity, TwoTriangles) {
  const auto g = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  EXPECT_NEAR(overlapping_modularity(g, Cover({{0, 1, 2}, {3, 4, 5}}, 6)), 0.5, 1e-12);
}

TEST(OverlappingModularity, PartitionEqualsNewmanModularity) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = gen::random_graph(35, 0.12, rng);
    if (g.edge_count() == 0) continue;
    const auto labels = gen::random_labels(35, 4, rng);
    const Cover c(gen::partition_sets(labels), 35);
    EXPECT_NEAR(overlapping_modularity(g, c), oracle::newman_modularity(g, labels), 1e-12);
  }
}

TEST(OverlappingModularity, DisjointEdgeClassification) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = gen::random_graph(30, 0.2, rng);
    const auto labels = gen::random_labels(30, 3, rng);
    std::uint64_t in = 0, out = 0;
    for (const auto& s : gen::partition_sets(labels)) {
      const auto cs = community_stats(g, s);
      in += cs.e_in;
      out += cs.e_out;
    }
    // Each inter-community edge is seen from both sides.
    EXPECT_EQ(in + out / 2, g.edge_count());
  }
}

TEST(OverlappingModularity, ErrorsOnEdgelessGraph) {
  const auto g = Graph::from_edges(3, std::vector<Edge>{});
  EXPECT_THROW(overlapping_modularity(g, Cover({{0, 1}}, 3)), ValidationError);
}

TEST(QualityReport, DuplicatedCommunityGivesSameMeans) {
  std::mt19937_64 rng(6);
  const auto g = gen::random_graph(30, 0.2, rng);
  const std::vector<NodeId> s{1, 4, 7, 9, 12, 20};
  const auto one = quality_report(g, Cover({s}, 30));
  const auto two = quality_report(g, Cover({s, s}, 30));
  EXPECT_DOUBLE_EQ(two.avg_degree, one.avg_degree);
  EXPECT_DOUBLE_EQ(two.internal_density, one.internal_density);
  EXPECT_DOUBLE_EQ(two.max_odf, one.max_odf);
  EXPECT_DOUBLE_EQ(two.avg_odf, one.avg_odf);
  EXPECT_DOUBLE_EQ(two.flake_odf, one.flake_odf);
}

TEST(QualityReport, RandomInstancesMatchRecomputation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = gen::random_graph(40, 0.1, rng);
    if (g.edge_count() == 0) continue;
    const auto sets = gen::random_sets(40, 6, 15, rng);
    const auto r = quality_report(g, Cover(sets, 40));
    const auto o = oracle::quality(g, sets);
    EXPECT_NEAR(r.avg_degree, o.ad, 1e-12);
    EXPECT_NEAR(r.internal_density, o.id, 1e-12);
    EXPECT_NEAR(r.max_odf, o.mo, 1e-12);
    EXPECT_NEAR(r.avg_odf, o.ao, 1e-12);
    EXPECT_NEAR(r.flake_odf, o.fo, 1e-12);
    EXPECT_NEAR(r.q_ov, o.qov, 1e-12);
  }
}

TEST(QualityReport, OdfInvariantUnderRelabeling) {
  std::mt19937_64 rng(8);
  const std::size_t n = 30;
  const auto g = gen::random_graph(n, 0.2, rng);
  const auto sets = gen::random_sets(n, 5, 12, rng);
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Edge> e;
  for (auto [u, v] : g.edges()) e.emplace_back(perm[u], perm[v]);
  auto relabelled = sets;
  for (auto& s : relabelled) {
    for (auto& u : s) u = perm[u];
    std::sort(s.begin(), s.end());
  }
  const auto a = quality_report(g, Cover(sets, n));
  const auto b = quality_report(Graph::from_edges(n, e), Cover(relabelled, n));
  EXPECT_NEAR(a.max_odf, b.max_odf, 1e-12);
  EXPECT_NEAR(a.avg_odf, b.avg_odf, 1e-12);
  EXPECT_NEAR(a.flake_odf, b.flake_odf, 1e-12);
}

TEST(QualityReport, CountsDegenerateParts) {
  const auto g = Graph::from_edges(4, std::vector<Edge>{{0, 1}});
  const auto r = quality_report(g, Cover({{0, 1}, {2}, {3}}, 4));
  EXPECT_EQ(r.degenerate_communities, 2u);
  EXPECT_EQ(r.isolated_members, 2u);
}
