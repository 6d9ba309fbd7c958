#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "covereval/cover.hpp"
#include "covereval/error.hpp"
#include "covereval/graph.hpp"

namespace covereval {

struct CommunityStats {
  std::uint64_t n_s = 0;
  /// Edges with both endpoints in S.
  std::uint64_t m_s = 0;
  /// Per member (in increasing node order): fraction of its edges leaving S.
  std::vector<double> out_frac;
  /// Per member: number of neighbors inside S, and degree.
  std::vector<std::uint64_t> intra_degree;
  std::vector<std::uint64_t> degree;
  std::uint64_t e_in = 0;
  /// Edge endpoints leaving S, counted once per inside endpoint.
  std::uint64_t e_out = 0;
  /// Members with degree 0 (their out_frac is 0).
  std::uint64_t isolated = 0;
};

/// Counts for the sorted, duplicate-free node set `s`.
inline CommunityStats community_stats(const Graph& g, std::span<const NodeId> s) {
  if (s.empty()) throw ValidationError("community is empty");
  CommunityStats cs;
  cs.n_s = s.size();
  cs.out_frac.reserve(s.size());
  cs.intra_degree.reserve(s.size());
  cs.degree.reserve(s.size());
  std::uint64_t inside_endpoints = 0;
  for (NodeId u : s) {
    if (u >= g.node_count()) throw ValidationError("community member outside the graph");
    std::uint64_t in = 0;
    for (NodeId v : g.neighbors(u))
      if (std::binary_search(s.begin(), s.end(), v)) ++in;
    const auto d = g.degree(u);
    cs.intra_degree.push_back(in);
    cs.degree.push_back(d);
    cs.out_frac.push_back(d == 0 ? 0.0 : static_cast<double>(d - in) / static_cast<double>(d));
    if (d == 0) ++cs.isolated;
    inside_endpoints += in;
    cs.e_out += d - in;
  }
  cs.m_s = inside_endpoints / 2;
  cs.e_in = cs.m_s;
  return cs;
}

/// 2 m_s / n_s.
inline double avg_degree_score(const CommunityStats& cs) {
  return 2.0 * static_cast<double>(cs.m_s) / static_cast<double>(cs.n_s);
}

/// m_s / (n_s (n_s - 1) / 2); 0 for a single node, with `degenerate` set.
inline double internal_density_score(const CommunityStats& cs, bool* degenerate = nullptr) {
  if (degenerate) *degenerate = cs.n_s < 2;
  if (cs.n_s < 2) return 0.0;
  const double n = static_cast<double>(cs.n_s);
  return static_cast<double>(cs.m_s) / (n * (n - 1.0) / 2.0);
}

inline double max_odf_score(const CommunityStats& cs) {
  return *std::max_element(cs.out_frac.begin(), cs.out_frac.end());
}

inline double avg_odf_score(const CommunityStats& cs) {
  double s = 0.0;
  for (double f : cs.out_frac) s += f;
  return s / static_cast<double>(cs.n_s);
}

/// Fraction of members whose intra-degree is below half their degree.
inline double flake_odf_score(const CommunityStats& cs) {
  std::uint64_t bad = 0;
  for (std::size_t i = 0; i < cs.degree.size(); ++i)
    if (2 * cs.intra_degree[i] < cs.degree[i]) ++bad;
  return static_cast<double>(bad) / static_cast<double>(cs.n_s);
}

/// Q_ov = sum_c [ e_in(c) / |E| - ((2 e_in(c) + e_out(c)) / (2 |E|))^2 ].
/// Overlapping nodes contribute to every community containing them.
inline double overlapping_modularity(const Graph& g, const Cover& c) {
  if (g.edge_count() == 0) throw ValidationError("overlapping modularity of a graph without edges");
  if (c.node_count() > g.node_count()) throw ValidationError("cover references nodes outside the graph");
  const double m = static_cast<double>(g.edge_count());
  double q = 0.0;
  for (const auto& s : c.communities()) {
    const auto cs = community_stats(g, s);
    const double tot = (2.0 * static_cast<double>(cs.e_in) + static_cast<double>(cs.e_out)) / (2.0 * m);
    q += static_cast<double>(cs.e_in) / m - tot * tot;
  }
  return q;
}

/// Cover-level means of the per-community scores plus Q_ov.
struct QualityReport {
  double avg_degree = 0;
  double internal_density = 0;
  double max_odf = 0;
  double avg_odf = 0;
  double flake_odf = 0;
  double q_ov = 0;
  /// Single-node communities (internal density defined as 0).
  std::uint64_t degenerate_communities = 0;
  /// Community members of degree 0 (out fraction defined as 0).
  std::uint64_t isolated_members = 0;

  bool operator==(const QualityReport&) const = default;
};

/// Unweighted mean over communities of each score.
inline QualityReport quality_report(const Graph& g, const Cover& c) {
  if (c.size() == 0) throw ValidationError("quality report of an empty cover");
  QualityReport r;
  for (const auto& s : c.communities()) {
    const auto cs = community_stats(g, s);
    bool degenerate = false;
    r.avg_degree += avg_degree_score(cs);
    r.internal_density += internal_density_score(cs, &degenerate);
    r.max_odf += max_odf_score(cs);
    r.avg_odf += avg_odf_score(cs);
    r.flake_odf += flake_odf_score(cs);
    r.degenerate_communities += degenerate;
    r.isolated_members += cs.isolated;
  }
  const double k = static_cast<double>(c.size());
  r.avg_degree /= k;
  r.internal_density /= k;
  r.max_odf /= k;
  r.avg_odf /= k;
  r.flake_odf /= k;
  r.q_ov = overlapping_modularity(g, c);
  return r;
}

}  // namespace covereval
