#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "covereval/distfit.hpp"
#include "covereval/empirical.hpp"
#include "covereval/error.hpp"

namespace covereval {

using Rank = std::uint32_t;

/// Ranks of alternatives (rows) under criteria (columns); 1 is best.
struct RankingTable {
  std::vector<std::string> alternatives;
  std::vector<std::string> criteria;
  /// ranks[a][c]
  std::vector<std::vector<Rank>> ranks;
  std::vector<std::string> notes;

  std::size_t alternative_count() const noexcept { return alternatives.size(); }
  std::size_t criterion_count() const noexcept { return criteria.size(); }

  std::vector<Rank> column(std::size_t c) const {
    std::vector<Rank> out;
    out.reserve(ranks.size());
    for (const auto& row : ranks) out.push_back(row.at(c));
    return out;
  }

  void add_column(std::string name, const std::vector<Rank>& col) {
    if (ranks.empty()) ranks.resize(alternatives.size());
    if (col.size() != alternatives.size()) throw ValidationError("ranking column length mismatch");
    criteria.push_back(std::move(name));
    for (std::size_t a = 0; a < col.size(); ++a) ranks[a].push_back(col[a]);
  }

  bool operator==(const RankingTable&) const = default;
};

/// Competition ranking ("1224"): tied scores share the smallest rank and the
/// following ranks are skipped. Missing scores rank after all present ones.
inline std::vector<Rank> competition_ranks(const std::vector<std::optional<double>>& scores, bool ascending = true) {
  const std::size_t m = scores.size();
  std::vector<Rank> r(m);
  for (std::size_t a = 0; a < m; ++a) {
    Rank better = 0;
    for (std::size_t b = 0; b < m; ++b) {
      if (!scores[b]) continue;
      if (!scores[a] || (ascending ? *scores[b] < *scores[a] : *scores[b] > *scores[a])) ++better;
    }
    r[a] = better + 1;
  }
  return r;
}

inline std::vector<Rank> competition_ranks(const std::vector<double>& scores, bool ascending = true) {
  return competition_ranks(std::vector<std::optional<double>>(scores.begin(), scores.end()), ascending);
}

/// Ranks every property column by ascending |reference[p] - candidates[a][p]|.
inline RankingTable rank_scalar(const std::vector<double>& reference, const std::vector<std::vector<double>>& candidates,
                                const std::vector<std::string>& alternatives, const std::vector<std::string>& properties) {
  if (reference.size() != properties.size()) throw ValidationError("reference/property count mismatch");
  if (candidates.size() != alternatives.size()) throw ValidationError("candidate/alternative count mismatch");
  RankingTable t;
  t.alternatives = alternatives;
  for (std::size_t p = 0; p < properties.size(); ++p) {
    if (!std::isfinite(reference[p])) throw ValidationError("non-finite reference value for property " + properties[p]);
    std::vector<double> dist;
    for (std::size_t a = 0; a < alternatives.size(); ++a) {
      if (candidates[a].size() != properties.size()) throw ValidationError("candidate row length mismatch");
      const double v = candidates[a][p];
      if (!std::isfinite(v))
        throw ValidationError("non-finite value for alternative " + alternatives[a] + ", property " + properties[p]);
      dist.push_back(std::abs(reference[p] - v));
    }
    t.add_column(properties[p], competition_ranks(dist));
  }
  return t;
}

/// Distance of an optional candidate value to an optional reference value:
/// 0 when both are missing, missing when exactly one is.
inline std::optional<double> scalar_distance(std::optional<double> reference, std::optional<double> value) {
  if (!reference && !value) return 0.0;
  if (!reference || !value) return std::nullopt;
  return std::abs(*reference - *value);
}

// ---------------------------------------------------------------------------
// Distributional ranking
// ---------------------------------------------------------------------------

enum class DistributionRankMode {
  /// KS of each candidate's own fit of the reference's best family.
  OwnFitKS,
  /// |KS of the candidate's fit - KS of the reference's fit|.
  DeltaToReference,
};

struct DistributionRanking {
  /// Best family of the reference; unset when the reference could not be fitted.
  std::optional<Family> family;
  std::optional<double> reference_ks;
  /// Per candidate: KS of its fit of `family`, when applicable.
  std::vector<std::optional<double>> ks;
  /// Per candidate: the ranking score (KS or KS delta).
  std::vector<std::optional<double>> score;
  std::vector<Rank> ranks;
  std::vector<std::string> notes;

  bool operator==(const DistributionRanking&) const = default;
};

/// Fits the reference's best family to every candidate and ranks candidates
/// by ascending score. Candidates the family does not apply to rank last.
inline DistributionRanking rank_distribution(const FitReport& reference,
                                             const std::vector<EmpiricalDistribution>& candidates,
                                             const std::vector<std::string>& names,
                                             DistributionRankMode mode = DistributionRankMode::OwnFitKS,
                                             const FitOptions& opts = {}) {
  if (names.size() != candidates.size()) throw ValidationError("candidate/name count mismatch");
  DistributionRanking out;
  out.family = reference.best;
  out.reference_ks = reference.best_fit().ks;
  out.ks.assign(candidates.size(), std::nullopt);
  out.score.assign(candidates.size(), std::nullopt);
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    const auto& data = candidates[a];
    if (data.size() < opts.min_samples) {
      out.notes.push_back(names[a] + ": fewer than " + std::to_string(opts.min_samples) + " samples");
      continue;
    }
    const auto r = try_fit(*out.family, data, opts);
    if (!r.ok()) {
      out.notes.push_back(names[a] + ": " + std::string(family_name(*out.family)) + " " +
                          std::string(fit_status_name(r.status)) + (r.note.empty() ? "" : " (" + r.note + ")"));
      continue;
    }
    out.ks[a] = r.fit->ks;
    out.score[a] = mode == DistributionRankMode::OwnFitKS ? r.fit->ks : std::abs(r.fit->ks - *out.reference_ks);
  }
  out.ranks = competition_ranks(out.score);
  return out;
}

/// Same, fitting the ten families to the reference samples first. When the
/// reference cannot be fitted every candidate ranks 1.
inline DistributionRanking rank_distribution(const EmpiricalDistribution& reference,
                                             const std::vector<EmpiricalDistribution>& candidates,
                                             const std::vector<std::string>& names,
                                             DistributionRankMode mode = DistributionRankMode::OwnFitKS,
                                             const FitOptions& opts = {}) {
  if (names.size() != candidates.size()) throw ValidationError("candidate/name count mismatch");
  std::optional<FitReport> ref;
  try {
    ref = best_fit(reference, opts);
  } catch (const Error& e) {
    DistributionRanking out;
    out.ks.assign(candidates.size(), std::nullopt);
    out.score.assign(candidates.size(), std::nullopt);
    out.ranks.assign(candidates.size(), 1);
    out.notes.push_back(std::string("reference not fitted: ") + e.what());
    return out;
  }
  return rank_distribution(*ref, candidates, names, mode, opts);
}

// ---------------------------------------------------------------------------
// Kemeny consensus
// ---------------------------------------------------------------------------

struct KemenyResult {
  /// Alternative indices, best first.
  std::vector<std::size_t> order;
  /// Position (1-based) of every alternative in `order`.
  std::vector<Rank> ranks;
  /// Sum over ordered pairs (a before b) of the number of criteria that
  /// rank a strictly above b.
  std::int64_t score = 0;
  /// Set when the local-search heuristic was used.
  bool approximate = false;

  bool operator==(const KemenyResult&) const = default;
};

/// P[a][b] = number of criteria ranking a strictly above b.
inline std::vector<std::vector<std::int64_t>> preference_matrix(const RankingTable& t) {
  const std::size_t m = t.alternative_count();
  std::vector<std::vector<std::int64_t>> p(m, std::vector<std::int64_t>(m, 0));
  for (std::size_t c = 0; c < t.criterion_count(); ++c)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        if (t.ranks[a][c] < t.ranks[b][c]) ++p[a][b];
  return p;
}

inline std::int64_t kemeny_score(const std::vector<std::vector<std::int64_t>>& p, const std::vector<std::size_t>& order) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) s += p[order[i]][order[j]];
  return s;
}

inline constexpr std::size_t kemeny_exact_limit = 10;

/// Ordering maximizing total pairwise agreement with the criteria. Up to
/// kemeny_exact_limit alternatives every ordering is scored and ties go to
/// the lexicographically smallest sequence of names. Beyond that, adjacent
/// swap hill climbing from the mean-rank ordering and each of its cyclic
/// rotations, keeping the best.
inline KemenyResult kemeny_consensus(const RankingTable& t) {
  const std::size_t m = t.alternative_count();
  if (m == 0 || t.criterion_count() == 0) throw ValidationError("Kemeny consensus of an empty table");
  const auto p = preference_matrix(t);

  std::vector<std::size_t> by_name(m);
  std::iota(by_name.begin(), by_name.end(), std::size_t{0});
  std::stable_sort(by_name.begin(), by_name.end(),
                   [&](std::size_t a, std::size_t b) { return t.alternatives[a] < t.alternatives[b]; });

  KemenyResult res;
  if (m <= kemeny_exact_limit) {
    // Permute positions into the name-sorted list, so lexicographic order of
    // positions is lexicographic order of names.
    std::vector<std::size_t> pos(m);
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    std::vector<std::size_t> cur(m);
    std::int64_t best = -1;
    do {
      for (std::size_t i = 0; i < m; ++i) cur[i] = by_name[pos[i]];
      const auto s = kemeny_score(p, cur);
      if (s > best) {
        best = s;
        res.order = cur;
      }
    } while (std::next_permutation(pos.begin(), pos.end()));
    res.score = best;
  } else {
    std::vector<double> mean(m, 0.0);
    for (std::size_t a = 0; a < m; ++a)
      for (Rank r : t.ranks[a]) mean[a] += r;
    std::vector<std::size_t> start = by_name;
    std::stable_sort(start.begin(), start.end(), [&](std::size_t a, std::size_t b) { return mean[a] < mean[b]; });
    std::int64_t best = -1;
    for (std::size_t rot = 0; rot < m; ++rot) {
      std::vector<std::size_t> cur(m);
      for (std::size_t i = 0; i < m; ++i) cur[i] = start[(i + rot) % m];
      for (bool improved = true; improved;) {
        improved = false;
        for (std::size_t i = 0; i + 1 < m; ++i) {
          if (p[cur[i + 1]][cur[i]] > p[cur[i]][cur[i + 1]]) {
            std::swap(cur[i], cur[i + 1]);
            improved = true;
          }
        }
      }
      const auto s = kemeny_score(p, cur);
      if (s > best) {
        best = s;
        res.order = cur;
      }
    }
    res.score = best;
    res.approximate = true;
  }
  res.ranks.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) res.ranks[res.order[i]] = static_cast<Rank>(i + 1);
  return res;
}

// ---------------------------------------------------------------------------
// TOPSIS
// ---------------------------------------------------------------------------

enum class Orientation { Cost, Benefit };

struct DecisionMatrix {
  /// values[a][c]
  std::vector<std::vector<double>> values;
  std::vector<Orientation> orientation;
  /// Positive weights per criterion; empty means equal weights. Normalized
  /// to sum 1 before use.
  std::vector<double> weights;
};

struct TopsisResult {
  /// Relative closeness to the ideal solution, per alternative.
  std::vector<double> closeness;
  std::vector<Rank> ranks;

  bool operator==(const TopsisResult&) const = default;
};

/// Vector-normalizes each column, applies the weights, and scores each
/// alternative by D- / (D+ + D-), the Euclidean distances to the worst and
/// best per-column values. Ranks by descending closeness. An alternative at
/// both ideals at once (all columns constant) scores 0.5.
inline TopsisResult topsis(const DecisionMatrix& dm) {
  const std::size_t m = dm.values.size();
  if (m < 2) throw ValidationError("TOPSIS needs at least 2 alternatives");
  const std::size_t k = dm.orientation.size();
  if (k == 0) throw ValidationError("TOPSIS needs at least 1 criterion");
  for (const auto& row : dm.values) {
    if (row.size() != k) throw ValidationError("decision matrix row length mismatch");
    for (double v : row)
      if (!std::isfinite(v)) throw ValidationError("decision matrix has a non-finite entry");
  }
  std::vector<double> w = dm.weights.empty() ? std::vector<double>(k, 1.0) : dm.weights;
  if (w.size() != k) throw ValidationError("weight count mismatch");
  double wsum = 0.0;
  for (double x : w) {
    if (!(x > 0.0)) throw ValidationError("weights must be positive");
    wsum += x;
  }
  for (double& x : w) x /= wsum;

  std::vector<std::vector<double>> v(m, std::vector<double>(k));
  std::vector<double> best(k), worst(k);
  for (std::size_t c = 0; c < k; ++c) {
    double norm = 0.0;
    for (std::size_t a = 0; a < m; ++a) norm += dm.values[a][c] * dm.values[a][c];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw ValidationError("decision matrix column " + std::to_string(c) + " has zero norm");
    for (std::size_t a = 0; a < m; ++a) v[a][c] = w[c] * dm.values[a][c] / norm;
    double lo = v[0][c], hi = v[0][c];
    for (std::size_t a = 1; a < m; ++a) {
      lo = std::min(lo, v[a][c]);
      hi = std::max(hi, v[a][c]);
    }
    best[c] = dm.orientation[c] == Orientation::Cost ? lo : hi;
    worst[c] = dm.orientation[c] == Orientation::Cost ? hi : lo;
  }

  TopsisResult res;
  res.closeness.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    double dp = 0.0, dn = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      dp += (v[a][c] - best[c]) * (v[a][c] - best[c]);
      dn += (v[a][c] - worst[c]) * (v[a][c] - worst[c]);
    }
    dp = std::sqrt(dp);
    dn = std::sqrt(dn);
    res.closeness[a] = dp + dn == 0.0 ? 0.5 : dn / (dp + dn);
  }
  res.ranks = competition_ranks(res.closeness, /*ascending=*/false);
  return res;
}

/// TOPSIS over a ranking table, every rank column a cost criterion.
inline TopsisResult topsis_on_ranks(const RankingTable& t) {
  DecisionMatrix dm;
  for (const auto& row : t.ranks) dm.values.emplace_back(row.begin(), row.end());
  dm.orientation.assign(t.criterion_count(), Orientation::Cost);
  return topsis(dm);
}

// ---------------------------------------------------------------------------
// Rank correlation
// ---------------------------------------------------------------------------

using CorrelationMatrix = std::vector<std::vector<std::optional<double>>>;

/// Pairwise Pearson correlation of the rank columns as stored (tied ranks
/// are used as they are, not re-ranked). Entries involving a constant column
/// are missing.
inline CorrelationMatrix spearman_matrix(const RankingTable& t) {
  const std::size_t m = t.alternative_count();
  if (m < 3) throw ValidationError("rank correlation needs at least 3 alternatives");
  const std::size_t k = t.criterion_count();
  std::vector<std::vector<double>> dev(k, std::vector<double>(m));
  std::vector<double> ss(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    double mean = 0.0;
    for (std::size_t a = 0; a < m; ++a) mean += t.ranks[a][c];
    mean /= static_cast<double>(m);
    for (std::size_t a = 0; a < m; ++a) {
      dev[c][a] = t.ranks[a][c] - mean;
      ss[c] += dev[c][a] * dev[c][a];
    }
  }
  CorrelationMatrix r(k, std::vector<std::optional<double>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    if (ss[i] == 0.0) continue;
    r[i][i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      if (ss[j] == 0.0) continue;
      double s = 0.0;
      for (std::size_t a = 0; a < m; ++a) s += dev[i][a] * dev[j][a];
      const double v = std::clamp(s / std::sqrt(ss[i] * ss[j]), -1.0, 1.0);
      r[i][j] = r[j][i] = v;
    }
  }
  return r;
}

}  // namespace covereval
