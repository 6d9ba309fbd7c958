#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "covereval/empirical.hpp"
#include "covereval/error.hpp"
#include "covereval/graph.hpp"

namespace covereval {

// ---------------------------------------------------------------------------
// Connected components
// ---------------------------------------------------------------------------

/// Component label per node; labels are assigned in order of the smallest
/// node id of each component, so component 0 contains node 0.
inline std::vector<std::uint32_t> connected_components(const Graph& g) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> comp(g.node_count(), unset);
  std::vector<NodeId> stack;
  std::uint32_t next = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.neighbors(u)) {
        if (comp[v] == unset) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

/// Nodes of the largest connected component in increasing id order. Ties go
/// to the component with the smallest minimum node id.
inline std::vector<NodeId> giant_component_nodes(const Graph& g) {
  if (g.node_count() == 0) return {};
  const auto comp = connected_components(g);
  const auto count = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> sizes(count, 0);
  for (auto c : comp) ++sizes[c];
  // max_element returns the first maximum, i.e. the lowest label.
  const auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<NodeId> nodes;
  nodes.reserve(sizes[best]);
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (comp[u] == best) nodes.push_back(u);
  return nodes;
}

/// Induced subgraph of the largest connected component.
inline Graph giant_component(const Graph& g) {
  const auto nodes = giant_component_nodes(g);
  if (nodes.size() == g.node_count()) return g;
  return g.induced_subgraph(nodes);
}

// ---------------------------------------------------------------------------
// Triangles and clustering
// ---------------------------------------------------------------------------

/// Number of triangles through each node.
inline std::vector<std::uint64_t> triangles_per_node(const Graph& g) {
  std::vector<std::uint64_t> tri(g.node_count(), 0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto nu = g.neighbors(u);
    for (NodeId v : nu) {
      if (v <= u) continue;
      const auto nv = g.neighbors(v);
      // Common neighbors w > v close the triangle u < v < w.
      auto a = std::upper_bound(nu.begin(), nu.end(), v);
      auto b = std::upper_bound(nv.begin(), nv.end(), v);
      while (a != nu.end() && b != nv.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++tri[u];
          ++tri[v];
          ++tri[*a];
          ++a;
          ++b;
        }
      }
    }
  }
  return tri;
}

/// Local clustering coefficient 2*tri(u) / (d(u)(d(u)-1)); 0 when d(u) < 2.
inline std::vector<double> local_clustering(const Graph& g) {
  const auto tri = triangles_per_node(g);
  std::vector<double> c(g.node_count(), 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const double d = static_cast<double>(g.degree(u));
    if (d >= 2.0) c[u] = 2.0 * static_cast<double>(tri[u]) / (d * (d - 1.0));
  }
  return c;
}

/// Transitivity: 3 * #triangles / #connected triples. nullopt when the graph
/// has no connected triple.
inline std::optional<double> transitivity(const Graph& g) {
  const auto tri = triangles_per_node(g);
  const std::uint64_t closed = std::accumulate(tri.begin(), tri.end(), std::uint64_t{0});  // = 3 * triangles
  std::uint64_t triples = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const std::uint64_t d = g.degree(u);
    if (d >= 2) triples += d * (d - 1) / 2;
  }
  if (triples == 0) return std::nullopt;
  return static_cast<double>(closed) / static_cast<double>(triples);
}

/// Degree assortativity: Pearson correlation of endpoint degrees over both
/// orientations of every edge. nullopt without edges or when every edge joins
/// nodes of one common degree (zero variance).
inline std::optional<double> degree_assortativity(const Graph& g) {
  if (g.edge_count() == 0) return std::nullopt;
  long double sx = 0, sxx = 0, sxy = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const long double du = static_cast<long double>(g.degree(u));
    for (NodeId v : g.neighbors(u)) {
      const long double dv = static_cast<long double>(g.degree(v));
      sx += du;
      sxx += du * du;
      sxy += du * dv;
    }
  }
  const long double m2 = 2.0L * static_cast<long double>(g.edge_count());
  const long double mean = sx / m2;
  const long double var = sxx / m2 - mean * mean;
  if (!(var > 1e-15L * std::max(1.0L, mean * mean))) return std::nullopt;
  const long double cov = sxy / m2 - mean * mean;
  return static_cast<double>(cov / var);
}

// ---------------------------------------------------------------------------
// Microscopic distributions
// ---------------------------------------------------------------------------

/// One sample per node: its degree (zero-degree nodes included).
inline EmpiricalDistribution degree_distribution(const Graph& g) {
  if (g.node_count() == 0) throw ValidationError("degree distribution of an empty graph");
  std::map<double, std::uint64_t> counts;
  for (NodeId u = 0; u < g.node_count(); ++u) ++counts[static_cast<double>(g.degree(u))];
  return EmpiricalDistribution::from_counts(counts);
}

struct DegreeClustering {
  std::uint64_t degree = 0;
  double mean_clustering = 0.0;
  std::uint64_t node_count = 0;

  bool operator==(const DegreeClustering&) const = default;
};

/// Mean local clustering coefficient per degree class, increasing degree.
inline std::vector<DegreeClustering> clustering_by_degree(const Graph& g) {
  if (g.node_count() < 3) throw ValidationError("clustering by degree needs at least 3 nodes");
  const auto c = local_clustering(g);
  std::map<std::uint64_t, std::pair<double, std::uint64_t>> acc;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto& [sum, n] = acc[g.degree(u)];
    sum += c[u];
    ++n;
  }
  std::vector<DegreeClustering> out;
  out.reserve(acc.size());
  for (const auto& [k, sn] : acc) out.push_back({k, sn.first / static_cast<double>(sn.second), sn.second});
  return out;
}

/// The per-degree mean clustering values as a sample set for distribution
/// fitting. Zero entries are excluded; `excluded` receives their number.
inline EmpiricalDistribution clustering_by_degree_samples(const Graph& g, std::size_t* excluded = nullptr) {
  std::vector<double> values;
  std::size_t zeros = 0;
  for (const auto& e : clustering_by_degree(g)) {
    if (e.mean_clustering > 0.0) {
      values.push_back(e.mean_clustering);
    } else {
      ++zeros;
    }
  }
  if (excluded) *excluded = zeros;
  return EmpiricalDistribution::from_samples(std::move(values));
}

// ---------------------------------------------------------------------------
// Hop plot
// ---------------------------------------------------------------------------

enum class HopMode { Auto, Exact, Sampled };

struct HopOptions {
  HopMode mode = HopMode::Auto;
  std::uint32_t sources = 1000;
  std::optional<std::uint64_t> seed;
  /// Auto mode runs exact all-pairs BFS up to this many nodes.
  std::size_t exact_limit = 20000;
};

struct HopSummary {
  EmpiricalDistribution distribution;
  double median_path = 0;
  double effective_diameter = 0;
  double diameter = 0;
  bool sampled = false;
  std::uint32_t source_count = 0;
  std::vector<std::string> warnings;

  bool operator==(const HopSummary&) const = default;
};

namespace detail {

inline void bfs_histogram(const Graph& g, NodeId source, std::vector<std::uint32_t>& dist, std::vector<NodeId>& queue,
                          const std::vector<char>& is_source, std::vector<std::uint64_t>& histogram) {
  constexpr auto unseen = std::numeric_limits<std::uint32_t>::max();
  std::fill(dist.begin(), dist.end(), unseen);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] != unseen) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
      // A pair of two sources is counted once, from its smaller endpoint.
      if (!is_source[v] || v > source) {
        if (histogram.size() <= dist[v]) histogram.resize(dist[v] + 1, 0);
        ++histogram[dist[v]];
      }
    }
  }
}

}  // namespace detail

/// Distribution of pairwise hop distances over the giant component.
///
/// Exact mode runs one BFS per node and counts every unordered pair once.
/// Sampled mode runs BFS from `sources` roots drawn uniformly without
/// replacement with the given seed; a pair whose endpoints are both roots is
/// counted once, so sampling every node reproduces exact mode. Percentiles
/// use the nearest-rank convention.
inline HopSummary hop_distribution(const Graph& graph, const HopOptions& opts = {}) {
  const Graph g = giant_component(graph);
  const std::size_t n = g.node_count();
  if (n < 2) throw ValidationError("hop distribution needs a giant component with at least 2 nodes");

  HopSummary out;
  bool sampled = opts.mode == HopMode::Sampled || (opts.mode == HopMode::Auto && n > opts.exact_limit);
  std::vector<NodeId> sources;
  if (sampled) {
    if (!opts.seed) throw ValidationError("sampled hop distribution requires a seed");
    std::size_t k = opts.sources;
    if (k == 0) throw ValidationError("sampled hop distribution requires at least one source");
    if (k > n) {
      out.warnings.push_back("sources (" + std::to_string(k) + ") exceeds node count; clamped to " +
                             std::to_string(n));
      k = n;
    }
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::mt19937_64 rng(*opts.seed);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
      std::swap(perm[i], perm[j]);
    }
    sources.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(sources.begin(), sources.end());
  } else {
    sources.resize(n);
    std::iota(sources.begin(), sources.end(), NodeId{0});
  }

  std::vector<char> is_source(n, 0);
  for (NodeId s : sources) is_source[s] = 1;
  std::vector<std::uint32_t> dist(n);
  std::vector<NodeId> queue;
  queue.reserve(n);
  std::vector<std::uint64_t> histogram;
  for (NodeId s : sources) detail::bfs_histogram(g, s, dist, queue, is_source, histogram);

  std::map<double, std::uint64_t> counts;
  for (std::size_t h = 1; h < histogram.size(); ++h)
    if (histogram[h] > 0) counts.emplace(static_cast<double>(h), histogram[h]);
  out.distribution = EmpiricalDistribution::from_counts(counts);
  out.median_path = out.distribution.percentile(50);
  out.effective_diameter = out.distribution.percentile(90);
  out.diameter = out.distribution.percentile(100);
  out.sampled = sampled;
  out.source_count = static_cast<std::uint32_t>(sources.size());
  return out;
}

// ---------------------------------------------------------------------------
// Basic (global) properties
// ---------------------------------------------------------------------------

/// Global properties of a graph. Diameter and average shortest path refer to
/// the giant component; fields that are undefined for the input are nullopt.
struct BasicProperties {
  std::uint64_t V = 0;
  std::uint64_t E = 0;
  double rho = 0;
  std::optional<double> d;
  std::optional<double> l_G;
  double avg_deg = 0;
  std::uint64_t max_deg = 0;
  std::optional<double> tau;
  std::optional<double> C;
  bool paths_sampled = false;
  std::uint32_t path_sources = 0;

  bool operator==(const BasicProperties&) const = default;
};

inline BasicProperties basic_properties(const Graph& g, const HopOptions& hops = {}) {
  const std::size_t n = g.node_count();
  if (n < 2) throw ValidationError("basic properties need at least 2 nodes");
  BasicProperties p;
  p.V = n;
  p.E = g.edge_count();
  p.rho = 2.0 * static_cast<double>(p.E) / (static_cast<double>(n) * static_cast<double>(n - 1));
  p.avg_deg = 2.0 * static_cast<double>(p.E) / static_cast<double>(n);
  for (NodeId u = 0; u < n; ++u) p.max_deg = std::max<std::uint64_t>(p.max_deg, g.degree(u));
  p.tau = degree_assortativity(g);
  p.C = transitivity(g);
  if (p.E > 0) {
    const auto h = hop_distribution(g, hops);
    p.d = h.diameter;
    p.l_G = h.distribution.mean();
    p.paths_sampled = h.sampled;
    p.path_sources = h.source_count;
  }
  return p;
}

/// Same, with an explicit choice between exact and sampled path statistics.
inline BasicProperties basic_properties(const Graph& g, bool exact_paths, std::uint32_t sources,
                                        std::optional<std::uint64_t> seed = std::nullopt) {
  HopOptions h;
  h.mode = exact_paths ? HopMode::Exact : HopMode::Sampled;
  h.sources = sources;
  h.seed = seed;
  return basic_properties(g, h);
}

}  // namespace covereval
