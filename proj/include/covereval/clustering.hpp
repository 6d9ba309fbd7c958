#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "covereval/cover.hpp"
#include "covereval/error.hpp"

namespace covereval {

/// Both covers restricted to the nodes they both cover.
struct AlignedCovers {
  Cover first;
  Cover second;
  /// Nodes covered by exactly one of the inputs, increasing.
  std::vector<NodeId> dropped;
};

inline AlignedCovers align_covers(const Cover& a, const Cover& b) {
  const std::size_t n = std::max(a.node_count(), b.node_count());
  std::vector<char> in_a(n, 0), in_b(n, 0), keep(n, 0);
  for (NodeId u : a.universe()) in_a[u] = 1;
  for (NodeId u : b.universe()) in_b[u] = 1;
  AlignedCovers out;
  for (std::size_t u = 0; u < n; ++u) {
    keep[u] = in_a[u] && in_b[u];
    if (in_a[u] != in_b[u]) out.dropped.push_back(static_cast<NodeId>(u));
  }
  if (out.dropped.empty()) {
    out.first = a;
    out.second = b;
  } else {
    if (std::none_of(keep.begin(), keep.end(), [](char k) { return k != 0; }))
      throw ValidationError("covers share no nodes");
    out.first = a.restricted_to(keep);
    out.second = b.restricted_to(keep);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Omega index
// ---------------------------------------------------------------------------

/// Pair-multiplicity tallies of two covers over a common universe of n nodes.
/// t1[j] (t2[j]) counts pairs sharing exactly j communities in the first
/// (second) cover; agree counts pairs with equal multiplicity in both.
struct AgreementTable {
  std::vector<std::uint64_t> t1, t2;
  std::uint64_t agree = 0;
  std::uint64_t pairs = 0;
};

/// Tallies co-membership multiplicities from the membership index. Pairs
/// never co-clustered in either cover are counted by complement.
inline AgreementTable agreement_table(const Cover& c1, const Cover& c2) {
  const auto universe = c1.universe();
  const std::size_t n = universe.size();
  if (n < 2) throw ValidationError("omega index needs at least 2 covered nodes");
  const std::size_t span = std::max(c1.node_count(), c2.node_count());

  AgreementTable t;
  t.pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  t.t1.assign(c1.size() + 1, 0);
  t.t2.assign(c2.size() + 1, 0);

  std::vector<std::uint32_t> cnt1(span, 0), cnt2(span, 0);
  std::vector<NodeId> touched;
  for (std::size_t r = 0; r < n; ++r) {
    const NodeId u = universe[r];
    touched.clear();
    for (CommunityId c : c1.memberships(u))
      for (NodeId v : c1.community(c))
        if (v > u) {
          if (cnt1[v] == 0 && cnt2[v] == 0) touched.push_back(v);
          ++cnt1[v];
        }
    for (CommunityId c : c2.memberships(u))
      for (NodeId v : c2.community(c))
        if (v > u) {
          if (cnt1[v] == 0 && cnt2[v] == 0) touched.push_back(v);
          ++cnt2[v];
        }
    for (NodeId v : touched) {
      ++t.t1[cnt1[v]];
      ++t.t2[cnt2[v]];
      if (cnt1[v] == cnt2[v]) ++t.agree;
      cnt1[v] = cnt2[v] = 0;
    }
    const std::uint64_t untouched = (n - 1 - r) - touched.size();
    t.t1[0] += untouched;
    t.t2[0] += untouched;
    t.agree += untouched;
  }
  return t;
}

/// Chance-corrected agreement from the tallies:
/// (w_u - w_e) / (1 - w_e) = (agree M - S) / (M^2 - S), S = sum_j t1[j] t2[j],
/// evaluated on exact integers. Both covers in identical classes by chance
/// (w_e = 1) give 1 when w_u = 1 and throw otherwise.
inline double omega_from_table(const AgreementTable& t) {
  using i128 = __int128;
  i128 s = 0;
  for (std::size_t j = 0; j < std::min(t.t1.size(), t.t2.size()); ++j) s += static_cast<i128>(t.t1[j]) * t.t2[j];
  const i128 m = t.pairs;
  const i128 num = static_cast<i128>(t.agree) * m - s;
  const i128 den = m * m - s;
  if (den == 0) {
    if (t.agree == t.pairs) return 1.0;
    throw ComputationError("omega index undefined: expected agreement is 1");
  }
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

/// Omega index of two covers, computed on the nodes covered by both.
inline double omega_index(const Cover& c1, const Cover& c2) {
  const auto al = align_covers(c1, c2);
  return omega_from_table(agreement_table(al.first, al.second));
}

// ---------------------------------------------------------------------------
// Overlapping NMI
// ---------------------------------------------------------------------------

enum class OnmiVariant {
  /// I = 1/2 [H(X) - H(X|Y) + H(Y) - H(Y|X)] with unnormalized conditional
  /// entropies, divided by max(H(X), H(Y)).
  Max,
  /// Same, with each conditional entropy replaced by its normalized form
  /// H(X|Y) / H(X).
  NormalizedConditional,
};

namespace detail {

/// -p log2 p for p = w / n.
inline long double h(std::uint64_t w, std::uint64_t n) {
  if (w == 0) return 0.0L;
  const long double p = static_cast<long double>(w) / static_cast<long double>(n);
  return -p * std::log2(p);
}

inline long double indicator_entropy(std::uint64_t size, std::uint64_t n) { return h(size, n) + h(n - size, n); }

/// Entropy of community X given community Y for the 2x2 contingency table
/// a = in neither, b = Y only, c = X only, d = both. Falls back to H(X) when
/// the two are negatively correlated.
inline long double conditional_entropy_pair(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                                            std::uint64_t n) {
  if (h(a, n) + h(d, n) >= h(b, n) + h(c, n)) {
    // H(X, Y) - H(Y), grouped so that X == Y gives exactly 0.
    const long double v = (h(a, n) - h(a + c, n)) + (h(d, n) - h(b + d, n)) + h(b, n) + h(c, n);
    return std::max(v, 0.0L);
  }
  return h(c + d, n) + h(a + b, n);
}

/// sum_k min_l H*(X_k | Y_l), over communities X_k of x and Y_l of y.
/// Per-community terms are summed in sorted order.
inline long double cover_conditional_entropy(const Cover& x, const Cover& y, std::uint64_t n) {
  std::vector<long double> terms;
  terms.reserve(x.size());
  std::unordered_map<CommunityId, std::uint64_t> inter;
  for (CommunityId k = 0; k < x.size(); ++k) {
    inter.clear();
    for (NodeId u : x.community(k))
      for (CommunityId l : y.memberships(u)) ++inter[l];
    const std::uint64_t sx = x.community(k).size();
    long double best = std::numeric_limits<long double>::infinity();
    for (const auto& [l, d] : inter) {
      const std::uint64_t sy = y.community(l).size();
      const std::uint64_t c = sx - d, b = sy - d, a = n - d - c - b;
      best = std::min(best, conditional_entropy_pair(a, b, c, d, n));
    }
    terms.push_back(std::isinf(best) ? indicator_entropy(sx, n) : best);
  }
  std::sort(terms.begin(), terms.end());
  long double s = 0.0L;
  for (auto t : terms) s += t;
  return s;
}

inline long double cover_entropy(const Cover& x, std::uint64_t n) {
  std::vector<long double> terms;
  terms.reserve(x.size());
  for (const auto& s : x.communities()) terms.push_back(indicator_entropy(s.size(), n));
  std::sort(terms.begin(), terms.end());
  long double s = 0.0L;
  for (auto t : terms) s += t;
  return s;
}

}  // namespace detail

/// Overlapping NMI normalized by the larger cover entropy, computed on the
/// nodes covered by both. A zero-entropy cover (every community spans the
/// whole universe) gives 0, or 1 if both covers are identical.
inline double onmi_max(const Cover& c1, const Cover& c2, OnmiVariant variant = OnmiVariant::Max) {
  if (c1.size() == 0 || c2.size() == 0) throw ValidationError("NMI of an empty cover");
  const auto al = align_covers(c1, c2);
  const auto& x = al.first;
  const auto& y = al.second;
  const std::uint64_t n = x.universe().size();
  const long double hx = detail::cover_entropy(x, n);
  const long double hy = detail::cover_entropy(y, n);
  if (hx == 0.0L || hy == 0.0L) {
    if (hx == 0.0L && hy == 0.0L) return x.communities() == y.communities() ? 1.0 : 0.0;
    return 0.0;
  }
  long double hxy = detail::cover_conditional_entropy(x, y, n);
  long double hyx = detail::cover_conditional_entropy(y, x, n);
  if (variant == OnmiVariant::NormalizedConditional) {
    hxy /= hx;
    hyx /= hy;
  }
  const long double mi = 0.5L * ((hx - hxy) + (hy - hyx));
  const long double v = mi / std::max(hx, hy);
  return static_cast<double>(std::clamp(v, 0.0L, 1.0L));
}

// ---------------------------------------------------------------------------
// Best-match F1
// ---------------------------------------------------------------------------

struct MatchScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;

  bool operator==(const MatchScores&) const = default;
};

namespace detail {

struct BestMatch {
  double precision = 0, recall = 0, f1 = 0;
};

/// For each community of `from`, the community of `to` with the largest F1
/// (first one on ties).
inline std::vector<BestMatch> best_matches(const Cover& from, const Cover& to) {
  std::vector<BestMatch> out;
  out.reserve(from.size());
  std::unordered_map<CommunityId, std::uint64_t> inter;
  for (CommunityId k = 0; k < from.size(); ++k) {
    inter.clear();
    for (NodeId u : from.community(k))
      for (CommunityId l : to.memberships(u)) ++inter[l];
    const double sf = static_cast<double>(from.community(k).size());
    BestMatch best;
    CommunityId best_l = std::numeric_limits<CommunityId>::max();
    for (const auto& [l, tp] : inter) {
      const double st = static_cast<double>(to.community(l).size());
      const double f1 = 2.0 * static_cast<double>(tp) / (sf + st);
      if (f1 > best.f1 || (f1 == best.f1 && l < best_l)) {
        best = {static_cast<double>(tp) / sf, static_cast<double>(tp) / st, f1};
        best_l = l;
      }
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace detail

/// Precision and recall: means over detected communities of the values for
/// their best-F1 truth match. F1: average of the mean best-match F1 in both
/// directions.
inline MatchScores f1_best_match(const Cover& detected, const Cover& truth) {
  if (detected.size() == 0 || truth.size() == 0) throw ValidationError("F1 of an empty cover");
  const auto al = align_covers(detected, truth);
  const auto fwd = detail::best_matches(al.first, al.second);
  const auto bwd = detail::best_matches(al.second, al.first);
  MatchScores s;
  double f_fwd = 0.0, f_bwd = 0.0;
  for (const auto& m : fwd) {
    s.precision += m.precision;
    s.recall += m.recall;
    f_fwd += m.f1;
  }
  for (const auto& m : bwd) f_bwd += m.f1;
  s.precision /= static_cast<double>(fwd.size());
  s.recall /= static_cast<double>(fwd.size());
  s.f1 = 0.5 * (f_fwd / static_cast<double>(fwd.size()) + f_bwd / static_cast<double>(bwd.size()));
  return s;
}

// ---------------------------------------------------------------------------
// Combined
// ---------------------------------------------------------------------------

struct ClusteringScores {
  double nmi = 0;
  double omega = 0;
  double f1 = 0;
  double precision = 0;
  double recall = 0;
  /// Nodes covered by only one of the two covers (ignored by all metrics).
  std::vector<NodeId> dropped;

  bool operator==(const ClusteringScores&) const = default;
};

inline ClusteringScores compare_covers(const Cover& detected, const Cover& truth,
                                       OnmiVariant variant = OnmiVariant::Max) {
  ClusteringScores s;
  s.dropped = align_covers(detected, truth).dropped;
  s.nmi = onmi_max(detected, truth, variant);
  s.omega = omega_index(detected, truth);
  const auto m = f1_best_match(detected, truth);
  s.f1 = m.f1;
  s.precision = m.precision;
  s.recall = m.recall;
  return s;
}

}  // namespace covereval
