#pragma once

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "covereval/pipeline.hpp"

namespace covereval {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Number formatting
// ---------------------------------------------------------------------------

/// Shortest representation that reads back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string format_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace detail {

template <typename T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> opt_get(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

template <typename T>
std::optional<T> opt_field(const json& j, const char* key) {
  return j.contains(key) ? opt_get<T>(j.at(key)) : std::nullopt;
}

template <typename T>
json opt_vector(const std::vector<std::optional<T>>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(opt_json(x));
  return a;
}

template <typename T>
std::vector<std::optional<T>> opt_vector_get(const json& j) {
  std::vector<std::optional<T>> out;
  for (const auto& x : j) out.push_back(opt_get<T>(x));
  return out;
}

}  // namespace detail

inline void to_json(json& j, const EmpiricalDistribution& d) {
  j = json{{"values", std::vector<double>(d.values().begin(), d.values().end())},
           {"counts", std::vector<std::uint64_t>(d.counts().begin(), d.counts().end())}};
}

inline void from_json(const json& j, EmpiricalDistribution& d) {
  const auto values = j.at("values").get<std::vector<double>>();
  const auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
  if (values.size() != counts.size()) throw ValidationError("distribution: values/counts length mismatch");
  std::map<double, std::uint64_t> m;
  for (std::size_t i = 0; i < values.size(); ++i) m[values[i]] += counts[i];
  d = EmpiricalDistribution::from_counts(m);
}

inline void to_json(json& j, Family f) { j = std::string(family_name(f)); }

inline void from_json(const json& j, Family& f) {
  auto v = family_from_string(j.get<std::string>());
  if (!v) throw ValidationError("unknown family " + j.get<std::string>());
  f = *v;
}

inline void to_json(json& j, FitStatus s) { j = std::string(fit_status_name(s)); }

inline void from_json(const json& j, FitStatus& s) {
  const auto v = j.get<std::string>();
  for (auto c : {FitStatus::Fitted, FitStatus::Inapplicable, FitStatus::Failed})
    if (v == fit_status_name(c)) {
      s = c;
      return;
    }
  throw ValidationError("unknown fit status " + v);
}

inline void to_json(json& j, const BetaRescale& r) { j = json{{"lo", r.lo}, {"width", r.width}, {"eps", r.eps}}; }

inline void from_json(const json& j, BetaRescale& r) {
  r.lo = j.at("lo").get<double>();
  r.width = j.at("width").get<double>();
  r.eps = j.at("eps").get<double>();
}

inline void to_json(json& j, const FittedDistribution& f) {
  j = json{{"family", f.family},   {"params", f.params},         {"ks", f.ks},
           {"n", f.n},             {"excluded", f.excluded},     {"degenerate", f.degenerate},
           {"discrete", f.discrete}, {"rescale", detail::opt_json(f.rescale)}};
}

inline void from_json(const json& j, FittedDistribution& f) {
  f.family = j.at("family").get<Family>();
  f.params = j.at("params").get<std::vector<double>>();
  f.ks = j.at("ks").get<double>();
  f.n = j.at("n").get<std::uint64_t>();
  f.excluded = j.at("excluded").get<std::uint64_t>();
  f.degenerate = j.at("degenerate").get<bool>();
  f.discrete = j.at("discrete").get<bool>();
  f.rescale = detail::opt_field<BetaRescale>(j, "rescale");
}

inline void to_json(json& j, const FitResult& r) {
  j = json{{"family", r.family}, {"status", r.status}, {"fit", detail::opt_json(r.fit)}, {"note", r.note}};
}

inline void from_json(const json& j, FitResult& r) {
  r.family = j.at("family").get<Family>();
  r.status = j.at("status").get<FitStatus>();
  r.fit = detail::opt_field<FittedDistribution>(j, "fit");
  r.note = j.at("note").get<std::string>();
}

inline void to_json(json& j, const FitReport& r) { j = json{{"results", r.results}, {"best", r.best}}; }

inline void from_json(const json& j, FitReport& r) {
  r.results = j.at("results").get<std::vector<FitResult>>();
  r.best = j.at("best").get<Family>();
}

inline void to_json(json& j, const BasicProperties& p) {
  j = json{{"V", p.V},
           {"E", p.E},
           {"rho", p.rho},
           {"d", detail::opt_json(p.d)},
           {"l_G", detail::opt_json(p.l_G)},
           {"avg_deg", p.avg_deg},
           {"max_deg", p.max_deg},
           {"tau", detail::opt_json(p.tau)},
           {"C", detail::opt_json(p.C)},
           {"paths_sampled", p.paths_sampled},
           {"path_sources", p.path_sources}};
}

inline void from_json(const json& j, BasicProperties& p) {
  p.V = j.at("V").get<std::uint64_t>();
  p.E = j.at("E").get<std::uint64_t>();
  p.rho = j.at("rho").get<double>();
  p.d = detail::opt_field<double>(j, "d");
  p.l_G = detail::opt_field<double>(j, "l_G");
  p.avg_deg = j.at("avg_deg").get<double>();
  p.max_deg = j.at("max_deg").get<std::uint64_t>();
  p.tau = detail::opt_field<double>(j, "tau");
  p.C = detail::opt_field<double>(j, "C");
  p.paths_sampled = j.at("paths_sampled").get<bool>();
  p.path_sources = j.at("path_sources").get<std::uint32_t>();
}

inline void to_json(json& j, const QualityReport& q) {
  j = json{{"AD", q.avg_degree},
           {"AO", q.avg_odf},
           {"FO", q.flake_odf},
           {"ID", q.internal_density},
           {"MO", q.max_odf},
           {"OM", q.q_ov},
           {"degenerate_communities", q.degenerate_communities},
           {"isolated_members", q.isolated_members}};
}

inline void from_json(const json& j, QualityReport& q) {
  q.avg_degree = j.at("AD").get<double>();
  q.avg_odf = j.at("AO").get<double>();
  q.flake_odf = j.at("FO").get<double>();
  q.internal_density = j.at("ID").get<double>();
  q.max_odf = j.at("MO").get<double>();
  q.q_ov = j.at("OM").get<double>();
  q.degenerate_communities = j.at("degenerate_communities").get<std::uint64_t>();
  q.isolated_members = j.at("isolated_members").get<std::uint64_t>();
}

inline void to_json(json& j, const ClusteringScores& c) {
  j = json{{"NMI", c.nmi},         {"OI", c.omega},      {"F1-score", c.f1},
           {"precision", c.precision}, {"recall", c.recall}, {"dropped", c.dropped}};
}

inline void from_json(const json& j, ClusteringScores& c) {
  c.nmi = j.at("NMI").get<double>();
  c.omega = j.at("OI").get<double>();
  c.f1 = j.at("F1-score").get<double>();
  c.precision = j.at("precision").get<double>();
  c.recall = j.at("recall").get<double>();
  c.dropped = j.at("dropped").get<std::vector<NodeId>>();
}

inline void to_json(json& j, const CoverEvaluation& e) {
  j = json{{"name", e.name},
           {"community_count", e.community_count},
           {"community_graph_nodes", e.community_graph_nodes},
           {"basic", detail::opt_json(e.basic)},
           {"distributions", e.distributions},
           {"quality", detail::opt_json(e.quality)},
           {"clustering", detail::opt_json(e.clustering)},
           {"notes", e.notes}};
}

inline void from_json(const json& j, CoverEvaluation& e) {
  e.name = j.at("name").get<std::string>();
  e.community_count = j.at("community_count").get<std::uint64_t>();
  e.community_graph_nodes = j.at("community_graph_nodes").get<std::uint64_t>();
  e.basic = detail::opt_field<BasicProperties>(j, "basic");
  e.distributions = j.at("distributions").get<std::map<std::string, EmpiricalDistribution>>();
  e.quality = detail::opt_field<QualityReport>(j, "quality");
  e.clustering = detail::opt_field<ClusteringScores>(j, "clustering");
  e.notes = j.at("notes").get<std::vector<std::string>>();
}

inline void to_json(json& j, const RankingTable& t) {
  j = json{{"alternatives", t.alternatives}, {"criteria", t.criteria}, {"ranks", t.ranks}, {"notes", t.notes}};
}

inline void from_json(const json& j, RankingTable& t) {
  t.alternatives = j.at("alternatives").get<std::vector<std::string>>();
  t.criteria = j.at("criteria").get<std::vector<std::string>>();
  t.ranks = j.at("ranks").get<std::vector<std::vector<Rank>>>();
  t.notes = j.at("notes").get<std::vector<std::string>>();
}

inline void to_json(json& j, const DistributionRanking& r) {
  j = json{{"family", detail::opt_json(r.family)},
           {"reference_ks", detail::opt_json(r.reference_ks)},
           {"ks", detail::opt_vector(r.ks)},
           {"score", detail::opt_vector(r.score)},
           {"ranks", r.ranks},
           {"notes", r.notes}};
}

inline void from_json(const json& j, DistributionRanking& r) {
  r.family = detail::opt_field<Family>(j, "family");
  r.reference_ks = detail::opt_field<double>(j, "reference_ks");
  r.ks = detail::opt_vector_get<double>(j.at("ks"));
  r.score = detail::opt_vector_get<double>(j.at("score"));
  r.ranks = j.at("ranks").get<std::vector<Rank>>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
}

inline void to_json(json& j, const PropertyFit& f) {
  j = json{{"property", f.property}, {"reference", detail::opt_json(f.reference)}, {"ranking", f.ranking}};
}

inline void from_json(const json& j, PropertyFit& f) {
  f.property = j.at("property").get<std::string>();
  f.reference = detail::opt_field<FitReport>(j, "reference");
  f.ranking = j.at("ranking").get<DistributionRanking>();
}

inline void to_json(json& j, const KemenyResult& k) {
  j = json{{"order", k.order}, {"ranks", k.ranks}, {"score", k.score}, {"approximate", k.approximate}};
}

inline void from_json(const json& j, KemenyResult& k) {
  k.order = j.at("order").get<std::vector<std::size_t>>();
  k.ranks = j.at("ranks").get<std::vector<Rank>>();
  k.score = j.at("score").get<std::int64_t>();
  k.approximate = j.at("approximate").get<bool>();
}

inline void to_json(json& j, const TopsisResult& t) { j = json{{"closeness", t.closeness}, {"ranks", t.ranks}}; }

inline void from_json(const json& j, TopsisResult& t) {
  t.closeness = j.at("closeness").get<std::vector<double>>();
  t.ranks = j.at("ranks").get<std::vector<Rank>>();
}

inline void to_json(json& j, const GroupRanking& g) {
  json sp = json::array();
  for (const auto& row : g.spearman) sp.push_back(detail::opt_vector(row));
  j = json{{"name", g.name},
           {"table", g.table},
           {"kemeny", detail::opt_json(g.kemeny)},
           {"topsis", detail::opt_json(g.topsis)},
           {"spearman", sp}};
}

inline void from_json(const json& j, GroupRanking& g) {
  g.name = j.at("name").get<std::string>();
  g.table = j.at("table").get<RankingTable>();
  g.kemeny = detail::opt_field<KemenyResult>(j, "kemeny");
  g.topsis = detail::opt_field<TopsisResult>(j, "topsis");
  g.spearman.clear();
  for (const auto& row : j.at("spearman")) g.spearman.push_back(detail::opt_vector_get<double>(row));
}

inline void to_json(json& j, const EvaluationReport& r) {
  j = json{{"groups", r.groups}, {"truth", r.truth},       {"candidates", r.candidates},
           {"fits", r.fits},     {"rankings", r.rankings}, {"notes", r.notes}};
}

inline void from_json(const json& j, EvaluationReport& r) {
  r.groups = j.at("groups").get<std::vector<std::string>>();
  r.truth = j.at("truth").get<CoverEvaluation>();
  r.candidates = j.at("candidates").get<std::vector<CoverEvaluation>>();
  r.fits = j.at("fits").get<std::vector<PropertyFit>>();
  r.rankings = j.at("rankings").get<std::vector<GroupRanking>>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
  out << '\n';
}

/// Letters, digits, '.', '_' and '-' kept; everything else becomes '_'.
inline std::string file_stem(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-') ? c : '_';
  return out;
}

}  // namespace detail

/// Alternatives as rows, criteria as columns, then Kconsensus and TOPSIS.
inline void write_ranking_csv(std::ostream& out, const GroupRanking& g) {
  std::vector<std::string> header{"algorithm"};
  header.insert(header.end(), g.table.criteria.begin(), g.table.criteria.end());
  if (g.kemeny) header.push_back("Kconsensus");
  if (g.topsis) header.push_back("TOPSIS");
  detail::csv_row(out, header);
  for (std::size_t a = 0; a < g.table.alternative_count(); ++a) {
    std::vector<std::string> row{g.table.alternatives[a]};
    for (Rank r : g.table.ranks[a]) row.push_back(std::to_string(r));
    if (g.kemeny) row.push_back(std::to_string(g.kemeny->ranks[a]));
    if (g.topsis) row.push_back(std::to_string(g.topsis->ranks[a]));
    detail::csv_row(out, row);
  }
}

inline void write_correlation_csv(std::ostream& out, const std::vector<std::string>& criteria,
                                  const CorrelationMatrix& m) {
  std::vector<std::string> header{""};
  header.insert(header.end(), criteria.begin(), criteria.end());
  detail::csv_row(out, header);
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<std::string> row{criteria[i]};
    for (const auto& v : m[i]) row.push_back(format_number(v));
    detail::csv_row(out, row);
  }
}

inline void write_fit_csv(std::ostream& out, const FitReport& r) {
  detail::csv_row(out, {"family", "code", "status", "ks", "params", "note"});
  for (const auto& res : r.results) {
    std::string params;
    if (res.fit)
      for (std::size_t i = 0; i < res.fit->params.size(); ++i)
        params += (i ? " " : "") + format_number(res.fit->params[i]);
    detail::csv_row(out, {std::string(family_name(res.family)), std::string(family_code(res.family)),
                          std::string(fit_status_name(res.status)), res.fit ? format_number(res.fit->ks) : "", params,
                          res.note});
  }
}

/// Two columns: distinct value and ECDF at that value.
inline void write_ecdf_csv(std::ostream& out, const EmpiricalDistribution& d) {
  detail::csv_row(out, {"value", "ecdf"});
  std::uint64_t below = 0;
  for (std::size_t i = 0; i < d.values().size(); ++i) {
    below += d.counts()[i];
    detail::csv_row(out, {format_number(d.values()[i]),
                          format_number(static_cast<double>(below) / static_cast<double>(d.size()))});
  }
}

namespace detail {

class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_))
      throw ValidationError("cannot create output directory " + dir_.string());
  }

  template <typename F>
  void write(const std::filesystem::path& rel, F&& f) const {
    const auto path = dir_ / rel;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    f(out);
    if (!out) throw ValidationError("error writing " + path.string());
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace detail

/// Writes report.json, one CSV per table and the ECDF dump of every
/// distribution into `dir`.
inline void emit_reports(const EvaluationReport& rep, const std::filesystem::path& dir) {
  const detail::OutputDir out(dir);
  out.write("report.json", [&](std::ostream& o) { o << json(rep).dump(2) << '\n'; });

  std::vector<const CoverEvaluation*> all{&rep.truth};
  for (const auto& c : rep.candidates) all.push_back(&c);
  auto has_group = [&](std::string_view g) { return std::find(rep.groups.begin(), rep.groups.end(), g) != rep.groups.end(); };

  if (has_group("basic")) {
    out.write("basic_properties.csv", [&](std::ostream& o) {
      std::vector<std::string> header{"name"};
      const auto& cols = group_columns(PropertyGroup::Basic);
      header.insert(header.end(), cols.begin(), cols.end());
      detail::csv_row(o, header);
      for (const auto* ev : all) {
        std::vector<std::string> row{ev->name};
        for (const auto& v : detail::basic_values(ev->basic)) row.push_back(format_number(v));
        detail::csv_row(o, row);
      }
    });
  }
  if (has_group("quality")) {
    out.write("quality_metrics.csv", [&](std::ostream& o) {
      std::vector<std::string> header{"name"};
      const auto& cols = group_columns(PropertyGroup::Quality);
      header.insert(header.end(), cols.begin(), cols.end());
      detail::csv_row(o, header);
      for (const auto* ev : all) {
        std::vector<std::string> row{ev->name};
        for (const auto& v : detail::quality_values(ev->quality)) row.push_back(format_number(v));
        detail::csv_row(o, row);
      }
    });
  }
  if (has_group("clustering")) {
    out.write("clustering_metrics.csv", [&](std::ostream& o) {
      detail::csv_row(o, {"name", "NMI", "OI", "F1-score", "precision", "recall"});
      for (const auto& ev : rep.candidates) {
        std::vector<std::string> row{ev.name};
        for (const auto& v : detail::clustering_values(ev.clustering)) row.push_back(format_number(v));
        row.push_back(ev.clustering ? format_number(ev.clustering->precision) : "");
        row.push_back(ev.clustering ? format_number(ev.clustering->recall) : "");
        detail::csv_row(o, row);
      }
    });
  }
  for (const auto& f : rep.fits) {
    const auto stem = detail::file_stem(f.property);
    if (f.reference) out.write("fits_" + stem + ".csv", [&](std::ostream& o) { write_fit_csv(o, *f.reference); });
    out.write("ks_" + stem + ".csv", [&](std::ostream& o) {
      detail::csv_row(o, {"algorithm", "family", "ks", "score", "rank"});
      const std::string fam = f.ranking.family ? std::string(family_code(*f.ranking.family)) : "";
      for (std::size_t a = 0; a < rep.candidates.size(); ++a)
        detail::csv_row(o, {rep.candidates[a].name, fam, format_number(f.ranking.ks.at(a)),
                            format_number(f.ranking.score.at(a)), std::to_string(f.ranking.ranks.at(a))});
    });
  }
  for (const auto& g : rep.rankings) {
    const auto stem = detail::file_stem(g.name);
    out.write("ranking_" + stem + ".csv", [&](std::ostream& o) { write_ranking_csv(o, g); });
    if (!g.spearman.empty())
      out.write("spearman_" + stem + ".csv", [&](std::ostream& o) { write_correlation_csv(o, g.table.criteria, g.spearman); });
  }
  // distributions/<index>_<name>/<property>.csv, index 0 being the ground truth.
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto sub = std::filesystem::path("distributions") / (std::to_string(i) + "_" + detail::file_stem(all[i]->name));
    for (const auto& [prop, dist] : all[i]->distributions)
      out.write(sub / (detail::file_stem(prop) + ".csv"), [&](std::ostream& o) { write_ecdf_csv(o, dist); });
  }
}

}  // namespace covereval
