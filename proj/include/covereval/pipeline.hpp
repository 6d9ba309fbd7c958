#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "covereval/clustering.hpp"
#include "covereval/cover.hpp"
#include "covereval/distfit.hpp"
#include "covereval/error.hpp"
#include "covereval/graph.hpp"
#include "covereval/properties.hpp"
#include "covereval/quality.hpp"
#include "covereval/ranking.hpp"

namespace covereval {

enum class PropertyGroup { Basic, Microscopic, Mesoscopic, Quality, Clustering };

inline constexpr std::array<PropertyGroup, 5> all_property_groups = {
    PropertyGroup::Basic, PropertyGroup::Microscopic, PropertyGroup::Mesoscopic, PropertyGroup::Quality,
    PropertyGroup::Clustering};

inline std::string_view group_name(PropertyGroup g) {
  constexpr std::array<std::string_view, 5> names = {"basic", "microscopic", "mesoscopic", "quality", "clustering"};
  return names[static_cast<std::size_t>(g)];
}

inline const std::vector<std::string>& group_columns(PropertyGroup g) {
  static const std::array<std::vector<std::string>, 5> cols = {
      std::vector<std::string>{"V", "E", "rho", "d", "l_G", "avg_deg", "max_deg", "tau", "C"},
      std::vector<std::string>{"DD", "Av", "HD"},
      std::vector<std::string>{"CS", "M", "OS"},
      std::vector<std::string>{"AD", "AO", "FO", "ID", "MO", "OM"},
      std::vector<std::string>{"NMI", "OI", "F1-score"},
  };
  return cols[static_cast<std::size_t>(g)];
}

enum class TopsisInput { Ranks, Distances };

struct CandidateSpec {
  std::string name;
  std::string cover;

  bool operator==(const CandidateSpec&) const = default;
};

struct RunConfig {
  std::string network;
  std::string ground_truth;
  std::vector<CandidateSpec> candidates;
  std::vector<PropertyGroup> groups{all_property_groups.begin(), all_property_groups.end()};
  HopOptions hops;
  bool kemeny = true;
  bool topsis = true;
  TopsisInput topsis_input = TopsisInput::Ranks;
  DistributionRankMode distribution_mode = DistributionRankMode::DeltaToReference;
  OnmiVariant onmi_variant = OnmiVariant::Max;
  FitOptions fit;
  std::string output_dir;

  bool has(PropertyGroup g) const { return std::find(groups.begin(), groups.end(), g) != groups.end(); }
};

/// Checks the invariants of a configuration. Paths are not opened here.
inline void validate(const RunConfig& cfg) {
  if (cfg.candidates.empty()) throw ValidationError("config: at least one candidate is required");
  std::set<std::string> names;
  for (const auto& c : cfg.candidates) {
    if (c.name.empty()) throw ValidationError("config: candidate with empty name");
    if (!names.insert(c.name).second) throw ValidationError("config: duplicate candidate name " + c.name);
  }
  if (cfg.hops.mode == HopMode::Sampled && !cfg.hops.seed)
    throw ValidationError("config: sampled hop mode requires a seed");
  if (cfg.hops.sources == 0) throw ValidationError("config: hop sources must be positive");
}

namespace detail {

template <typename E, std::size_t N>
E parse_enum(const nlohmann::json& j, const char* key, const std::array<std::pair<std::string_view, E>, N>& table) {
  if (!j.is_string()) throw ValidationError(std::string("config: ") + key + " must be a string");
  const auto s = j.get<std::string>();
  for (const auto& [name, value] : table)
    if (s == name) return value;
  throw ValidationError(std::string("config: invalid ") + key + " '" + s + "'");
}

inline std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  if (p.empty() || base.empty()) return p;
  const std::filesystem::path path(p);
  return path.is_absolute() ? p : (base / path).lexically_normal().string();
}

}  // namespace detail

/// Reads a run configuration. Relative paths are resolved against `base_dir`.
inline RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  static const std::set<std::string> known = {"network", "ground_truth", "candidates", "property_groups",
                                              "hops", "mcdm", "topsis_input", "distribution_ranking",
                                              "onmi", "discrete_power_law", "output_dir"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ValidationError("config: unknown key '" + key + "'");

  RunConfig cfg;
  try {
    cfg.network = detail::resolve_path(j.at("network").get<std::string>(), base_dir);
    cfg.ground_truth = detail::resolve_path(j.at("ground_truth").get<std::string>(), base_dir);
    for (const auto& c : j.at("candidates"))
      cfg.candidates.push_back({c.at("name").get<std::string>(),
                                detail::resolve_path(c.at("cover").get<std::string>(), base_dir)});
    if (j.contains("property_groups")) {
      static constexpr std::array<std::pair<std::string_view, PropertyGroup>, 5> table = {{
          {"basic", PropertyGroup::Basic},
          {"microscopic", PropertyGroup::Microscopic},
          {"mesoscopic", PropertyGroup::Mesoscopic},
          {"quality", PropertyGroup::Quality},
          {"clustering", PropertyGroup::Clustering},
      }};
      std::set<PropertyGroup> chosen;
      for (const auto& g : j.at("property_groups")) chosen.insert(detail::parse_enum(g, "property group", table));
      // No topological group selected: quality and clustering only.
      if (chosen.empty()) chosen = {PropertyGroup::Quality, PropertyGroup::Clustering};
      cfg.groups.clear();
      for (auto g : all_property_groups)
        if (chosen.count(g)) cfg.groups.push_back(g);
    }
    if (j.contains("hops")) {
      const auto& h = j.at("hops");
      static constexpr std::array<std::pair<std::string_view, HopMode>, 3> modes = {{
          {"auto", HopMode::Auto}, {"exact", HopMode::Exact}, {"sampled", HopMode::Sampled}}};
      if (h.contains("mode")) cfg.hops.mode = detail::parse_enum(h.at("mode"), "hop mode", modes);
      if (h.contains("sources")) cfg.hops.sources = h.at("sources").get<std::uint32_t>();
      if (h.contains("seed")) cfg.hops.seed = h.at("seed").get<std::uint64_t>();
      if (h.contains("exact_limit")) cfg.hops.exact_limit = h.at("exact_limit").get<std::size_t>();
    }
    if (j.contains("mcdm")) {
      cfg.kemeny = cfg.topsis = false;
      for (const auto& m : j.at("mcdm")) {
        const auto s = m.get<std::string>();
        if (s == "kemeny") cfg.kemeny = true;
        else if (s == "topsis") cfg.topsis = true;
        else throw ValidationError("config: invalid mcdm method '" + s + "'");
      }
    }
    if (j.contains("topsis_input")) {
      static constexpr std::array<std::pair<std::string_view, TopsisInput>, 2> t = {{
          {"ranks", TopsisInput::Ranks}, {"distances", TopsisInput::Distances}}};
      cfg.topsis_input = detail::parse_enum(j.at("topsis_input"), "topsis_input", t);
    }
    if (j.contains("distribution_ranking")) {
      static constexpr std::array<std::pair<std::string_view, DistributionRankMode>, 2> t = {{
          {"ks_delta", DistributionRankMode::DeltaToReference}, {"own_ks", DistributionRankMode::OwnFitKS}}};
      cfg.distribution_mode = detail::parse_enum(j.at("distribution_ranking"), "distribution_ranking", t);
    }
    if (j.contains("onmi")) {
      static constexpr std::array<std::pair<std::string_view, OnmiVariant>, 2> t = {{
          {"max", OnmiVariant::Max}, {"normalized_conditional", OnmiVariant::NormalizedConditional}}};
      cfg.onmi_variant = detail::parse_enum(j.at("onmi"), "onmi", t);
    }
    if (j.contains("discrete_power_law")) cfg.fit.discrete_power_law = j.at("discrete_power_law").get<bool>();
    if (j.contains("output_dir")) cfg.output_dir = detail::resolve_path(j.at("output_dir").get<std::string>(), base_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  return parse_run_config(j, std::filesystem::path(path).parent_path());
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

/// Everything computed for one cover. Fields of groups that were not
/// selected, or that failed (see notes), are empty.
struct CoverEvaluation {
  std::string name;
  std::uint64_t community_count = 0;
  std::uint64_t community_graph_nodes = 0;
  std::optional<BasicProperties> basic;
  /// Keyed by column code (DD, Av, HD, CS, M, OS).
  std::map<std::string, EmpiricalDistribution> distributions;
  std::optional<QualityReport> quality;
  std::optional<ClusteringScores> clustering;
  std::vector<std::string> notes;

  bool operator==(const CoverEvaluation&) const = default;
};

/// Distribution property: the reference fits and the candidate ranking.
struct PropertyFit {
  std::string property;
  std::optional<FitReport> reference;
  DistributionRanking ranking;

  bool operator==(const PropertyFit&) const = default;
};

struct GroupRanking {
  std::string name;
  RankingTable table;
  std::optional<KemenyResult> kemeny;
  std::optional<TopsisResult> topsis;
  /// Empty when there are fewer than 3 candidates.
  CorrelationMatrix spearman;

  bool operator==(const GroupRanking&) const = default;
};

struct EvaluationReport {
  std::vector<std::string> groups;
  CoverEvaluation truth;
  std::vector<CoverEvaluation> candidates;
  std::vector<PropertyFit> fits;
  std::vector<GroupRanking> rankings;
  std::vector<std::string> notes;

  const GroupRanking* ranking(const std::string& name) const {
    for (const auto& r : rankings)
      if (r.name == name) return &r;
    return nullptr;
  }

  bool operator==(const EvaluationReport&) const = default;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

template <typename F>
void attempt(std::vector<std::string>& notes, const std::string& what, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    notes.push_back(what + ": " + e.what());
  }
}

inline std::vector<std::optional<double>> basic_values(const std::optional<BasicProperties>& b) {
  if (!b) return std::vector<std::optional<double>>(9);
  return {static_cast<double>(b->V), static_cast<double>(b->E), b->rho, b->d, b->l_G, b->avg_deg,
          static_cast<double>(b->max_deg), b->tau, b->C};
}

inline std::vector<std::optional<double>> quality_values(const std::optional<QualityReport>& q) {
  if (!q) return std::vector<std::optional<double>>(6);
  return {q->avg_degree, q->avg_odf, q->flake_odf, q->internal_density, q->max_odf, q->q_ov};
}

inline std::vector<std::optional<double>> clustering_values(const std::optional<ClusteringScores>& c) {
  if (!c) return std::vector<std::optional<double>>(3);
  return {c->nmi, c->omega, c->f1};
}

struct ScoreColumn {
  std::string name;
  std::vector<std::optional<double>> score;
  Orientation orientation = Orientation::Cost;
};

}  // namespace detail

/// Computes every selected property of one cover. `truth` is null for the
/// ground truth itself. Property failures become notes.
inline CoverEvaluation evaluate_cover(const Graph& g, const Cover& c, const Cover* truth, const std::string& name,
                                      const RunConfig& cfg) {
  CoverEvaluation ev;
  ev.name = name;
  ev.community_count = c.size();
  const auto cg = build_community_graph(c);
  ev.community_graph_nodes = cg.graph.node_count();

  if (cfg.has(PropertyGroup::Basic))
    detail::attempt(ev.notes, "basic", [&] { ev.basic = basic_properties(cg.graph, cfg.hops); });
  if (cfg.has(PropertyGroup::Microscopic)) {
    detail::attempt(ev.notes, "DD", [&] { ev.distributions["DD"] = degree_distribution(cg.graph); });
    detail::attempt(ev.notes, "Av", [&] {
      std::size_t zeros = 0;
      ev.distributions["Av"] = clustering_by_degree_samples(cg.graph, &zeros);
      if (zeros) ev.notes.push_back("Av: " + std::to_string(zeros) + " zero entries excluded");
    });
    detail::attempt(ev.notes, "HD", [&] { ev.distributions["HD"] = hop_distribution(cg.graph, cfg.hops).distribution; });
  }
  if (cfg.has(PropertyGroup::Mesoscopic)) {
    const auto meso = mesoscopic_profile(c);
    ev.distributions["CS"] = meso.community_sizes;
    ev.distributions["M"] = meso.memberships;
    ev.distributions["OS"] = meso.overlap_sizes;
  }
  if (cfg.has(PropertyGroup::Quality)) detail::attempt(ev.notes, "quality", [&] { ev.quality = quality_report(g, c); });
  if (truth && cfg.has(PropertyGroup::Clustering))
    detail::attempt(ev.notes, "clustering", [&] { ev.clustering = compare_covers(c, *truth, cfg.onmi_variant); });
  return ev;
}

namespace detail {

inline GroupRanking make_group(const std::string& name, const std::vector<std::string>& alternatives,
                               const std::vector<ScoreColumn>& columns, const RunConfig& cfg) {
  GroupRanking gr;
  gr.name = name;
  gr.table.alternatives = alternatives;
  for (const auto& col : columns)
    gr.table.add_column(col.name, competition_ranks(col.score, col.orientation == Orientation::Cost));
  if (cfg.kemeny) gr.kemeny = kemeny_consensus(gr.table);
  if (cfg.topsis && alternatives.size() < 2) gr.table.notes.push_back("TOPSIS skipped: needs at least 2 candidates");
  if (cfg.topsis && alternatives.size() >= 2) {
    bool done = false;
    if (cfg.topsis_input == TopsisInput::Distances) {
      DecisionMatrix dm;
      dm.values.assign(alternatives.size(), {});
      bool complete = true;
      for (const auto& col : columns) {
        dm.orientation.push_back(col.orientation);
        for (std::size_t a = 0; a < alternatives.size(); ++a) {
          if (!col.score[a]) complete = false;
          dm.values[a].push_back(col.score[a].value_or(0.0));
        }
      }
      if (complete) {
        try {
          gr.topsis = topsis(dm);
          done = true;
        } catch (const ValidationError& e) {
          gr.table.notes.push_back(std::string("TOPSIS on distances failed, using ranks: ") + e.what());
        }
      } else {
        gr.table.notes.push_back("TOPSIS on distances needs every value; using ranks");
      }
    }
    if (!done) gr.topsis = topsis_on_ranks(gr.table);
  }
  if (alternatives.size() >= 3) gr.spearman = spearman_matrix(gr.table);
  return gr;
}

}  // namespace detail

/// Evaluates already loaded inputs; see run().
inline EvaluationReport evaluate(const Graph& g, const Cover& truth, const std::vector<std::string>& names,
                                 const std::vector<Cover>& covers, const RunConfig& cfg) {
  if (names.size() != covers.size()) throw ValidationError("candidate name/cover count mismatch");
  if (names.empty()) throw ValidationError("at least one candidate is required");
  EvaluationReport rep;
  for (auto grp : cfg.groups) rep.groups.emplace_back(group_name(grp));

  rep.truth = evaluate_cover(g, truth, nullptr, "ground-truth", cfg);
  for (std::size_t i = 0; i < covers.size(); ++i) rep.candidates.push_back(evaluate_cover(g, covers[i], &truth, names[i], cfg));

  const std::size_t m = names.size();
  std::map<PropertyGroup, std::vector<detail::ScoreColumn>> columns;

  auto scalar_group = [&](PropertyGroup grp, auto&& values_of) {
    const auto ref = values_of(rep.truth);
    const auto& cols = group_columns(grp);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      detail::ScoreColumn col{cols[p], {}, Orientation::Cost};
      for (const auto& ev : rep.candidates) {
        const auto d = scalar_distance(ref[p], values_of(ev)[p]);
        if (!d) rep.notes.push_back(cols[p] + ": " + ev.name + " has no value; ranked last");
        col.score.push_back(d);
      }
      columns[grp].push_back(std::move(col));
    }
  };
  if (cfg.has(PropertyGroup::Basic))
    scalar_group(PropertyGroup::Basic, [](const CoverEvaluation& ev) { return detail::basic_values(ev.basic); });

  for (auto grp : {PropertyGroup::Microscopic, PropertyGroup::Mesoscopic}) {
    if (!cfg.has(grp)) continue;
    for (const auto& prop : group_columns(grp)) {
      PropertyFit pf;
      pf.property = prop;
      std::vector<EmpiricalDistribution> data;
      for (const auto& ev : rep.candidates) {
        auto it = ev.distributions.find(prop);
        data.push_back(it == ev.distributions.end() ? EmpiricalDistribution{} : it->second);
      }
      auto ref_it = rep.truth.distributions.find(prop);
      if (ref_it != rep.truth.distributions.end()) {
        try {
          pf.reference = best_fit(ref_it->second, cfg.fit);
        } catch (const Error& e) {
          pf.ranking.notes.push_back(std::string("reference not fitted: ") + e.what());
        }
      } else {
        pf.ranking.notes.push_back("reference distribution unavailable");
      }
      if (pf.reference) {
        pf.ranking = rank_distribution(*pf.reference, data, names, cfg.distribution_mode, cfg.fit);
      } else {
        pf.ranking.ks.assign(m, std::nullopt);
        pf.ranking.score.assign(m, std::nullopt);
        pf.ranking.ranks.assign(m, 1);
      }
      detail::ScoreColumn col{prop, pf.ranking.score, Orientation::Cost};
      // An unfitted reference ties every candidate.
      if (!pf.reference) col.score.assign(m, 0.0);
      for (const auto& n : pf.ranking.notes) rep.notes.push_back(prop + ": " + n);
      columns[grp].push_back(std::move(col));
      rep.fits.push_back(std::move(pf));
    }
  }

  if (cfg.has(PropertyGroup::Quality))
    scalar_group(PropertyGroup::Quality, [](const CoverEvaluation& ev) { return detail::quality_values(ev.quality); });

  if (cfg.has(PropertyGroup::Clustering)) {
    const auto& cols = group_columns(PropertyGroup::Clustering);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      detail::ScoreColumn col{cols[p], {}, Orientation::Benefit};
      for (const auto& ev : rep.candidates) col.score.push_back(detail::clustering_values(ev.clustering)[p]);
      columns[PropertyGroup::Clustering].push_back(std::move(col));
    }
    rep.notes.push_back("clustering metrics ranked by descending value");
  }

  for (auto grp : cfg.groups) rep.rankings.push_back(detail::make_group(std::string(group_name(grp)), names, columns[grp], cfg));

  const bool topo = cfg.has(PropertyGroup::Basic) && cfg.has(PropertyGroup::Microscopic) && cfg.has(PropertyGroup::Mesoscopic);
  if (topo) {
    std::vector<detail::ScoreColumn> all;
    for (auto grp : {PropertyGroup::Basic, PropertyGroup::Microscopic, PropertyGroup::Mesoscopic})
      all.insert(all.end(), columns[grp].begin(), columns[grp].end());
    rep.rankings.push_back(detail::make_group("all-topological", names, all, cfg));
    if (cfg.has(PropertyGroup::Quality) && cfg.has(PropertyGroup::Clustering)) {
      for (auto grp : {PropertyGroup::Quality, PropertyGroup::Clustering})
        all.insert(all.end(), columns[grp].begin(), columns[grp].end());
      rep.rankings.push_back(detail::make_group("all-properties", names, all, cfg));
    }
  }
  return rep;
}

/// Loads the network, ground truth and candidate covers named by the config
/// and evaluates them. Load failures abort the run.
inline EvaluationReport run(const RunConfig& cfg) {
  validate(cfg);
  const Graph g = load_edge_list_file(cfg.network);
  const Cover truth = load_cover_file(cfg.ground_truth, g);
  std::vector<std::string> names;
  std::vector<Cover> covers;
  for (const auto& c : cfg.candidates) {
    names.push_back(c.name);
    try {
      covers.push_back(load_cover_file(c.cover, g));
    } catch (const ValidationError& e) {
      throw ValidationError("candidate " + c.name + ": " + e.what());
    }
  }
  return evaluate(g, truth, names, covers, cfg);
}

}  // namespace covereval
