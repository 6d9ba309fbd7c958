#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "covereval/error.hpp"

namespace covereval {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph over dense node ids [0, V), stored as CSR with
/// sorted neighbor lists. Immutable once built.
class Graph {
 public:
  Graph() = default;

  /// Builds from an arbitrary edge list. Self-loops and duplicate edges
  /// (in either orientation) are dropped. `labels`, when given, must have
  /// one entry per node; otherwise nodes are labelled by their id.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges,
                          std::vector<std::string> labels = {}) {
    Graph g;
    std::vector<Edge> arcs;
    arcs.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
      if (u >= node_count || v >= node_count) throw ValidationError("edge endpoint out of range");
      if (u == v) continue;
      arcs.emplace_back(u, v);
      arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    g.offsets_.assign(node_count + 1, 0);
    for (const auto& a : arcs) ++g.offsets_[a.first + 1];
    for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.reserve(arcs.size());
    for (const auto& a : arcs) g.targets_.push_back(a.second);

    if (labels.empty()) {
      labels.reserve(node_count);
      for (std::size_t i = 0; i < node_count; ++i) labels.push_back(std::to_string(i));
    } else if (labels.size() != node_count) {
      throw ValidationError("label count does not match node count");
    }
    g.labels_ = std::move(labels);
    g.index_.reserve(g.labels_.size());
    for (std::size_t i = 0; i < g.labels_.size(); ++i) g.index_.emplace(g.labels_[i], static_cast<NodeId>(i));
    return g;
  }

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }

  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  bool has_edge(NodeId u, NodeId v) const {
    const auto n = neighbors(u);
    return std::binary_search(n.begin(), n.end(), v);
  }

  const std::string& label(NodeId u) const { return labels_.at(u); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<NodeId> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Each undirected edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
      for (NodeId v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  /// Subgraph induced by `nodes` (any order, no duplicates). Node i of the
  /// result is nodes[i] of this graph and keeps its label.
  Graph induced_subgraph(std::span<const NodeId> nodes) const {
    std::unordered_map<NodeId, NodeId> remap;
    remap.reserve(nodes.size());
    std::vector<std::string> labels;
    labels.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      remap.emplace(nodes[i], static_cast<NodeId>(i));
      labels.push_back(labels_.at(nodes[i]));
    }
    std::vector<Edge> sub;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (NodeId v : neighbors(nodes[i])) {
        auto it = remap.find(v);
        if (it != remap.end() && i < it->second) sub.emplace_back(static_cast<NodeId>(i), it->second);
      }
    }
    return from_edges(nodes.size(), sub, std::move(labels));
  }

  bool operator==(const Graph& other) const {
    return offsets_ == other.offsets_ && targets_ == other.targets_ && labels_ == other.labels_;
  }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) tokens.push_back(std::move(t));
  return tokens;
}

inline bool is_blank_or_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r\n");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace detail

/// Reads a SNAP-style edge list: one edge per line, two whitespace separated
/// labels, '#' comment lines ignored. Labels become dense ids in order of
/// first appearance.
inline Graph load_edge_list(std::istream& in) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = ids.try_emplace(s, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(s);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank_or_comment(line)) continue;
    auto tokens = detail::split_ws(line);
    if (tokens.size() != 2)
      throw ParseError(lineno, "expected 2 node labels, found " + std::to_string(tokens.size()));
    const NodeId u = intern(tokens[0]);
    const NodeId v = intern(tokens[1]);
    edges.emplace_back(u, v);
  }
  if (labels.empty()) throw ValidationError("edge list is empty");
  const std::size_t n = labels.size();
  return Graph::from_edges(n, edges, std::move(labels));
}

inline Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open edge list: " + path);
  return load_edge_list(in);
}

}  // namespace covereval
