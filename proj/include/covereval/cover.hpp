#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "covereval/empirical.hpp"
#include "covereval/error.hpp"
#include "covereval/graph.hpp"
#include "covereval/properties.hpp"

namespace covereval {

using CommunityId = std::uint32_t;

/// A set of possibly overlapping communities over nodes [0, node_count).
/// Communities are kept sorted and duplicate-free; the membership index is
/// the exact inverse of the community lists.
class Cover {
 public:
  Cover() = default;

  Cover(std::vector<std::vector<NodeId>> communities, std::size_t node_count)
      : communities_(std::move(communities)), memberships_(node_count) {
    for (std::size_t c = 0; c < communities_.size(); ++c) {
      auto& s = communities_[c];
      if (s.empty()) throw ValidationError("community " + std::to_string(c) + " is empty");
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      for (NodeId u : s) {
        if (u >= node_count) throw ValidationError("community member out of range");
        memberships_[u].push_back(static_cast<CommunityId>(c));
      }
    }
    for (NodeId u = 0; u < node_count; ++u)
      if (!memberships_[u].empty()) universe_.push_back(u);
  }

  std::size_t size() const noexcept { return communities_.size(); }
  std::size_t node_count() const noexcept { return memberships_.size(); }

  const std::vector<std::vector<NodeId>>& communities() const noexcept { return communities_; }
  std::span<const NodeId> community(CommunityId c) const { return communities_.at(c); }

  /// Communities containing u, increasing.
  std::span<const CommunityId> memberships(NodeId u) const { return memberships_.at(u); }

  /// Nodes that belong to at least one community, increasing.
  std::span<const NodeId> universe() const noexcept { return universe_; }

  bool contains(CommunityId c, NodeId u) const {
    const auto& s = communities_.at(c);
    return std::binary_search(s.begin(), s.end(), u);
  }

  /// Restriction to the nodes for which keep[u] is true. Communities left
  /// empty are dropped; the remaining ones keep their relative order.
  Cover restricted_to(const std::vector<char>& keep) const {
    std::vector<std::vector<NodeId>> out;
    for (const auto& s : communities_) {
      std::vector<NodeId> r;
      for (NodeId u : s)
        if (u < keep.size() && keep[u]) r.push_back(u);
      if (!r.empty()) out.push_back(std::move(r));
    }
    return Cover(std::move(out), node_count());
  }

  bool operator==(const Cover& o) const {
    return communities_ == o.communities_ && memberships_.size() == o.memberships_.size();
  }

 private:
  std::vector<std::vector<NodeId>> communities_;
  std::vector<std::vector<CommunityId>> memberships_;
  std::vector<NodeId> universe_;
};

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

namespace detail {

template <typename Resolve>
std::vector<std::vector<NodeId>> read_cover_lines(std::istream& in, Resolve&& resolve) {
  std::vector<std::vector<NodeId>> communities;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank_or_comment(line)) continue;
    std::vector<NodeId> members;
    for (const auto& token : split_ws(line)) {
      if (auto id = resolve(token)) members.push_back(*id);
    }
    communities.push_back(std::move(members));
  }
  return communities;
}

}  // namespace detail

/// Reads a cover file (one community per line, whitespace separated node
/// labels) and resolves labels through the graph's label map.
inline Cover load_cover(std::istream& in, const Graph& g) {
  std::vector<std::string> unknown;
  auto communities = detail::read_cover_lines(in, [&](const std::string& label) -> std::optional<NodeId> {
    auto id = g.find(label);
    if (!id && std::find(unknown.begin(), unknown.end(), label) == unknown.end()) unknown.push_back(label);
    return id;
  });
  if (!unknown.empty()) {
    std::string msg = "cover references " + std::to_string(unknown.size()) + " unknown node label(s):";
    for (std::size_t i = 0; i < unknown.size() && i < 20; ++i) msg += " " + unknown[i];
    if (unknown.size() > 20) msg += " ...";
    throw ValidationError(msg);
  }
  if (communities.empty()) throw ValidationError("cover has no communities");
  return Cover(std::move(communities), g.node_count());
}

inline Cover load_cover_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open cover file: " + path);
  return load_cover(in, g);
}

struct LabelledCover {
  Cover cover;
  std::vector<std::string> labels;
};

/// Reads a cover without a reference graph. Unseen labels get the next dense
/// id and are appended to `labels`, so several covers can share one label map.
inline Cover load_cover_labelled(std::istream& in, std::unordered_map<std::string, NodeId>& ids,
                                 std::vector<std::string>& labels) {
  auto communities = detail::read_cover_lines(in, [&](const std::string& label) -> std::optional<NodeId> {
    auto [it, inserted] = ids.try_emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  });
  if (communities.empty()) throw ValidationError("cover has no communities");
  return Cover(std::move(communities), labels.size());
}

/// Labels become dense ids in order of first appearance.
inline LabelledCover load_cover_standalone(std::istream& in) {
  std::unordered_map<std::string, NodeId> ids;
  LabelledCover out;
  out.cover = load_cover_labelled(in, ids, out.labels);
  return out;
}

// ---------------------------------------------------------------------------
// Mesoscopic profile
// ---------------------------------------------------------------------------

/// Sizes of all non-empty pairwise intersections, keyed by (i, j), i < j.
/// Built from the membership index, so only overlapping pairs are touched.
inline std::map<std::pair<CommunityId, CommunityId>, std::uint64_t> pairwise_overlaps(const Cover& c) {
  std::unordered_map<std::uint64_t, std::uint64_t> acc;
  for (NodeId u : c.universe()) {
    const auto m = c.memberships(u);
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b) ++acc[(std::uint64_t{m[a]} << 32) | m[b]];
  }
  std::map<std::pair<CommunityId, CommunityId>, std::uint64_t> out;
  for (const auto& [key, n] : acc)
    out.emplace(std::pair{static_cast<CommunityId>(key >> 32), static_cast<CommunityId>(key & 0xffffffffu)}, n);
  return out;
}

struct MesoscopicProfile {
  EmpiricalDistribution community_sizes;
  EmpiricalDistribution memberships;
  /// Empty when no two communities overlap.
  EmpiricalDistribution overlap_sizes;
  std::uint64_t community_count = 0;
  std::uint64_t max_size = 0;
  double avg_size = 0;

  bool operator==(const MesoscopicProfile&) const = default;
};

/// Community size, node membership and overlap size distributions, computed
/// on the full cover.
inline MesoscopicProfile mesoscopic_profile(const Cover& c) {
  MesoscopicProfile p;
  std::map<double, std::uint64_t> sizes, members, overlaps;
  for (const auto& s : c.communities()) {
    ++sizes[static_cast<double>(s.size())];
    p.max_size = std::max<std::uint64_t>(p.max_size, s.size());
  }
  for (NodeId u : c.universe()) ++members[static_cast<double>(c.memberships(u).size())];
  for (const auto& [pair, n] : pairwise_overlaps(c)) ++overlaps[static_cast<double>(n)];
  p.community_sizes = EmpiricalDistribution::from_counts(sizes);
  p.memberships = EmpiricalDistribution::from_counts(members);
  p.overlap_sizes = EmpiricalDistribution::from_counts(overlaps);
  p.community_count = c.size();
  p.avg_size = c.size() ? p.community_sizes.mean() : 0.0;
  return p;
}

// ---------------------------------------------------------------------------
// Community-graph
// ---------------------------------------------------------------------------

struct CommunityGraph {
  /// Giant component of the community-graph. Node i stands for community
  /// communities[i] of the cover; labels are the community indices.
  Graph graph;
  std::vector<CommunityId> communities;
  /// Community-graph before giant-component extraction (node i = community i).
  Graph full;
  /// True when the giant component is a single community (no overlaps in it).
  bool degenerate = false;
};

/// Graph whose nodes are communities, with an edge between every two
/// communities that share at least one node, reduced to its giant connected
/// component. Edges are generated from the membership index (every pair of
/// communities of each node) instead of testing all community pairs.
inline CommunityGraph build_community_graph(const Cover& c) {
  if (c.size() == 0) throw ValidationError("community-graph of an empty cover");
  std::vector<Edge> edges;
  for (NodeId u : c.universe()) {
    const auto m = c.memberships(u);
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b) edges.emplace_back(m[a], m[b]);
  }
  CommunityGraph out;
  out.full = Graph::from_edges(c.size(), edges);
  const auto nodes = giant_component_nodes(out.full);
  out.graph = out.full.induced_subgraph(nodes);
  out.communities.assign(nodes.begin(), nodes.end());
  out.degenerate = nodes.size() < 2;
  return out;
}

}  // namespace covereval
