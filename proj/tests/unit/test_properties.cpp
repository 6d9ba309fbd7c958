#include <gtest/gtest.h>

#include <map>
#include <random>

#include "covereval/properties.hpp"
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

Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Graph::from_edges(leaves + 1, e);
}

Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return Graph::from_edges(n, e);
}

// Ring lattice with k neighbors per side, each edge rewired with probability p.
Graph small_world(std::size_t n, std::size_t k, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution rewire(p);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (std::size_t j = 1; j <= k; ++j) {
      NodeId v = static_cast<NodeId>((u + j) % n);
      if (rewire(rng)) v = node(rng);
      e.emplace_back(u, v);
    }
  return Graph::from_edges(n, e);
}

void expect_matches_oracle(const Graph& g) {
  const auto p = basic_properties(g, HopOptions{HopMode::Exact});
  const auto o = oracle::basic(g);
  EXPECT_EQ(p.V, o.V);
  EXPECT_EQ(p.E, o.E);
  EXPECT_EQ(p.max_deg, o.max_deg);
  EXPECT_NEAR(p.rho, o.rho, 1e-9);
  EXPECT_NEAR(p.avg_deg, o.avg_deg, 1e-9);
  ASSERT_EQ(p.d.has_value(), o.d.has_value());
  if (p.d) EXPECT_EQ(*p.d, *o.d);
  ASSERT_EQ(p.l_G.has_value(), o.l_G.has_value());
  if (p.l_G) EXPECT_NEAR(*p.l_G, *o.l_G, 1e-9);
  ASSERT_EQ(p.tau.has_value(), o.tau.has_value());
  if (p.tau) EXPECT_NEAR(*p.tau, *o.tau, 1e-9);
  ASSERT_EQ(p.C.has_value(), o.C.has_value());
  if (p.C) EXPECT_NEAR(*p.C, *o.C, 1e-9);
}

}  // namespace

TEST(BasicProperties, CompleteGraph) {
  const auto p = basic_properties(complete(5));
  EXPECT_EQ(p.V, 5u);
  EXPECT_EQ(p.E, 10u);
  EXPECT_DOUBLE_EQ(p.rho, 1.0);
  EXPECT_EQ(p.d, 1.0);
  EXPECT_EQ(p.l_G, 1.0);
  EXPECT_EQ(p.C, 1.0);
  EXPECT_DOUBLE_EQ(p.avg_deg, 4.0);
  EXPECT_EQ(p.max_deg, 4u);
  // Every degree is equal, so assortativity is undefined.
  EXPECT_FALSE(p.tau.has_value());
}

TEST(BasicProperties, Star) {
  const auto p = basic_properties(star(5));
  EXPECT_EQ(p.C, 0.0);
  EXPECT_EQ(p.d, 2.0);
  EXPECT_EQ(p.max_deg, 5u);
  ASSERT_TRUE(p.tau.has_value());
  EXPECT_LT(*p.tau, 0.0);
  EXPECT_NEAR(*p.tau, -1.0, 1e-12);
}

TEST(BasicProperties, RandomGraphMatchesOracle) {
  std::mt19937_64 rng(50);
  expect_matches_oracle(gen::random_graph(50, 0.1, rng));
}

TEST(BasicProperties, SmallGraphsMatchOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> p(0.02, 0.4);
  std::uniform_int_distribution<std::size_t> n(2, 60);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = gen::random_graph(n(rng), p(rng), rng);
    expect_matches_oracle(g);
    const auto b = basic_properties(g);
    if (b.d) EXPECT_GE(*b.d, std::ceil(*b.l_G));
    EXPECT_GE(static_cast<double>(b.max_deg), b.avg_deg);
  }
}

TEST(BasicProperties, EdgelessGraph) {
  const auto g = Graph::from_edges(4, std::vector<Edge>{});
  const auto p = basic_properties(g);
  EXPECT_EQ(p.E, 0u);
  EXPECT_FALSE(p.d.has_value());
  EXPECT_FALSE(p.l_G.has_value());
  EXPECT_FALSE(p.tau.has_value());
  EXPECT_FALSE(p.C.has_value());
  EXPECT_THROW(basic_properties(Graph::from_edges(1, std::vector<Edge>{})), ValidationError);
}

TEST(BasicProperties, PathsUseGiantComponent) {
  // Triangle plus a disjoint edge: the pair 3-4 does not count.
  const std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}};
  const auto p = basic_properties(Graph::from_edges(5, e));
  EXPECT_EQ(p.d, 1.0);
  EXPECT_EQ(p.l_G, 1.0);
}

TEST(BasicProperties, ExplicitModeOverload) {
  const auto g = path(6);
  const auto exact = basic_properties(g, true, 10);
  EXPECT_FALSE(exact.paths_sampled);
  const auto sampled = basic_properties(g, false, 6, 3);
  EXPECT_TRUE(sampled.paths_sampled);
  EXPECT_EQ(sampled.l_G, exact.l_G);
  EXPECT_THROW(basic_properties(g, false, 3), ValidationError);
}

TEST(Transitivity, CompleteGraphsAndTrees) {
  for (std::size_t n = 3; n < 8; ++n) EXPECT_EQ(transitivity(complete(n)), 1.0);
  EXPECT_EQ(transitivity(path(7)), 0.0);
  EXPECT_EQ(transitivity(star(4)), 0.0);
  EXPECT_FALSE(transitivity(path(2)).has_value());
}

TEST(Transitivity, InUnitInterval) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = transitivity(gen::random_graph(30, 0.2, rng));
    ASSERT_TRUE(c.has_value());
    EXPECT_GE(*c, 0.0);
    EXPECT_LE(*c, 1.0);
  }
}

TEST(DegreeDistribution, Examples) {
  EXPECT_EQ(degree_distribution(complete(4)).samples(), (std::vector<double>{3, 3, 3, 3}));
  EXPECT_EQ(degree_distribution(path(3)).samples(), (std::vector<double>{1, 1, 2}));
}

TEST(DegreeDistribution, HandshakeIdentity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = gen::random_graph(40, 0.15, rng);
    EXPECT_EQ(degree_distribution(g).sum(), 2.0 * static_cast<double>(g.edge_count()));
  }
}

TEST(ClusteringByDegree, Examples) {
  EXPECT_EQ(clustering_by_degree(complete(4)), (std::vector<DegreeClustering>{{3, 1.0, 4}}));
  EXPECT_EQ(clustering_by_degree(star(5)), (std::vector<DegreeClustering>{{1, 0.0, 5}, {5, 0.0, 1}}));
  std::size_t excluded = 0;
  EXPECT_TRUE(clustering_by_degree_samples(star(5), &excluded).empty());
  EXPECT_EQ(excluded, 2u);
}

TEST(ClusteringByDegree, SmallWorldMatchesTriangleOracle) {
  const auto g = small_world(120, 3, 0.1, 17);
  const auto a = oracle::adjacency(g);
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (std::size_t u = 0; u < a.size(); ++u) {
    std::vector<std::size_t> nb;
    for (std::size_t v = 0; v < a.size(); ++v)
      if (a[u][v]) nb.push_back(v);
    double links = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) links += a[nb[i]][nb[j]];
    const double k = static_cast<double>(nb.size());
    const double c = nb.size() < 2 ? 0.0 : 2.0 * links / (k * (k - 1));
    acc[nb.size()].first += c;
    ++acc[nb.size()].second;
  }
  const auto got = clustering_by_degree(g);
  ASSERT_EQ(got.size(), acc.size());
  std::size_t i = 0;
  for (const auto& [k, sn] : acc) {
    EXPECT_EQ(got[i].degree, k);
    EXPECT_EQ(got[i].node_count, sn.second);
    EXPECT_NEAR(got[i].mean_clustering, sn.first / static_cast<double>(sn.second), 1e-12);
    ++i;
  }
}

TEST(HopDistribution, Path) {
  const auto h = hop_distribution(path(5));
  EXPECT_EQ(h.distribution.samples(), (std::vector<double>{1, 1, 1, 1, 2, 2, 2, 3, 3, 4}));
  EXPECT_EQ(h.diameter, 4.0);
  EXPECT_EQ(h.median_path, 2.0);
  EXPECT_FALSE(h.sampled);
}

TEST(HopDistribution, CompleteGraph) {
  const auto h = hop_distribution(complete(6));
  EXPECT_EQ(h.distribution.size(), 15u);
  EXPECT_EQ(h.median_path, 1.0);
  EXPECT_EQ(h.effective_diameter, 1.0);
  EXPECT_EQ(h.diameter, 1.0);
}

TEST(HopDistribution, SampledWithAllSourcesEqualsExact) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = gen::random_graph(60, 0.06, rng);
    const auto exact = hop_distribution(g, {HopMode::Exact});
    const auto n = static_cast<std::uint32_t>(giant_component(g).node_count());
    const auto sampled = hop_distribution(g, {HopMode::Sampled, n, 99u});
    EXPECT_TRUE(sampled.sampled);
    EXPECT_EQ(sampled.distribution, exact.distribution);
    EXPECT_EQ(sampled.diameter, exact.diameter);
  }
}

TEST(HopDistribution, ExactSizeIsGiantComponentPairs) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = gen::random_graph(50, 0.04, rng);
    const auto giant = giant_component(g).node_count();
    if (giant < 2) continue;
    EXPECT_EQ(hop_distribution(g, {HopMode::Exact}).distribution.size(), giant * (giant - 1) / 2);
  }
}

TEST(HopDistribution, SampledNeedsSeedAndClampsSources) {
  const auto g = path(8);
  EXPECT_THROW(hop_distribution(g, {HopMode::Sampled, 4}), ValidationError);
  EXPECT_THROW(hop_distribution(g, {HopMode::Sampled, 0, 1u}), ValidationError);
  const auto h = hop_distribution(g, {HopMode::Sampled, 100, 1u});
  EXPECT_EQ(h.source_count, 8u);
  EXPECT_EQ(h.warnings.size(), 1u);
}

TEST(HopDistribution, SampledIsDeterministicPerSeed) {
  std::mt19937_64 rng(4);
  const auto g = gen::random_graph(200, 0.03, rng);
  const HopOptions o{HopMode::Sampled, 20, 5u};
  EXPECT_EQ(hop_distribution(g, o), hop_distribution(g, o));
}

TEST(HopDistribution, AutoSwitchesToSamplingAboveLimit) {
  HopOptions o;
  o.exact_limit = 5;
  o.seed = 1;
  o.sources = 3;
  const auto h = hop_distribution(path(10), o);
  EXPECT_TRUE(h.sampled);
  EXPECT_EQ(h.source_count, 3u);
}

TEST(GiantComponent, TieGoesToComponentOfLowestNode) {
  const std::vector<Edge> e{{1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}};
  const auto g = Graph::from_edges(7, e);
  const auto giant = giant_component(g);
  EXPECT_EQ(giant.node_count(), 3u);
  EXPECT_EQ(giant.edge_count(), 3u);
  EXPECT_EQ(giant_component_nodes(g), (std::vector<NodeId>{1, 2, 3}));
}

TEST(GiantComponent, ConnectedGraphIsIdentity) {
  const auto g = complete(5);
  EXPECT_EQ(giant_component(g), g);
}

TEST(GiantComponent, MatchesUnionFindAndIsIdempotent) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = gen::random_graph(100, 0.012, rng);
    const auto expected = oracle::giant_component(g.node_count(), g.edges());
    EXPECT_EQ(giant_component_nodes(g).size(), expected.size());

    const auto comp = connected_components(g);
    std::map<std::uint32_t, std::size_t> sizes;
    for (auto c : comp) ++sizes[c];
    oracle::UnionFind uf(g.node_count());
    for (auto [u, v] : g.edges()) uf.unite(u, v);
    std::map<std::size_t, std::size_t> uf_sizes;
    for (NodeId u = 0; u < g.node_count(); ++u) ++uf_sizes[uf.find(u)];
    std::multiset<std::size_t> a, b;
    for (auto [k, s] : sizes) a.insert(s);
    for (auto [k, s] : uf_sizes) b.insert(s);
    EXPECT_EQ(a, b);

    const auto once = giant_component(g);
    EXPECT_EQ(giant_component(once), once);
  }
}
