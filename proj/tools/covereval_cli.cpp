#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "covereval/clustering.hpp"
#include "covereval/cover.hpp"
#include "covereval/distfit.hpp"
#include "covereval/graph.hpp"
#include "covereval/pipeline.hpp"
#include "covereval/properties.hpp"
#include "covereval/quality.hpp"
#include "covereval/ranking.hpp"
#include "covereval/report_io.hpp"

namespace ce = covereval;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::string hop_mode;
  std::optional<std::uint32_t> sources;
};

void apply_hops(const Common& o, ce::HopOptions& h) {
  if (o.hop_mode == "exact") h.mode = ce::HopMode::Exact;
  else if (o.hop_mode == "sampled") h.mode = ce::HopMode::Sampled;
  if (o.sources) h.sources = *o.sources;
  if (o.seed) h.seed = *o.seed;
}

/// Sends text to --output when given, stdout otherwise.
void emit(const Common& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw ce::ValidationError("cannot write " + o.output);
  out << text;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ce::ValidationError("cannot open " + path);
  return in;
}

ce::EmpiricalDistribution read_samples(const std::string& path) {
  auto in = open_input(path);
  std::vector<double> xs;
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::getline(in, tok);
      continue;
    }
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ce::ParseError(0, path + ": not a number: " + tok);
    }
  }
  return ce::EmpiricalDistribution::from_samples(std::move(xs));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') field += line[++i];
      else if (ch == '"') quoted = false;
      else field += ch;
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  out.push_back(std::move(field));
  return out;
}

/// Rank table CSV: header "algorithm,<criteria...>", one row per alternative.
ce::RankingTable read_rank_table(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ce::ValidationError(path + ": empty rank table");
  const auto header = split_csv(line);
  if (header.size() < 2) throw ce::ParseError(1, path + ": header needs at least one criterion");
  ce::RankingTable t;
  t.criteria.assign(header.begin() + 1, header.end());
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto row = split_csv(line);
    if (row.size() != header.size())
      throw ce::ParseError(lineno, path + ": expected " + std::to_string(header.size()) + " fields");
    t.alternatives.push_back(row[0]);
    std::vector<ce::Rank> ranks;
    for (std::size_t c = 1; c < row.size(); ++c) {
      try {
        std::size_t used = 0;
        const long v = std::stol(row[c], &used);
        if (used != row[c].size() || v < 1) throw std::invalid_argument(row[c]);
        ranks.push_back(static_cast<ce::Rank>(v));
      } catch (const std::exception&) {
        throw ce::ParseError(lineno, path + ": invalid rank '" + row[c] + "'");
      }
    }
    t.ranks.push_back(std::move(ranks));
  }
  if (t.alternatives.empty()) throw ce::ValidationError(path + ": rank table has no rows");
  return t;
}

int cmd_community_graph(const Common& o, const std::string& cover_path, const std::string& network, bool full) {
  ce::Cover cover;
  if (network.empty()) {
    auto in = open_input(cover_path);
    cover = ce::load_cover_standalone(in).cover;
  } else {
    cover = ce::load_cover_file(cover_path, ce::load_edge_list_file(network));
  }
  const auto cg = ce::build_community_graph(cover);
  const auto& g = full ? cg.full : cg.graph;
  std::ostringstream out;
  out << "# community-graph: " << g.node_count() << " communities, " << g.edge_count() << " edges\n";
  for (auto [u, v] : g.edges()) out << g.label(u) << '\t' << g.label(v) << '\n';
  emit(o, out.str());
  return 0;
}

int cmd_props(const Common& o, const std::string& network) {
  ce::HopOptions hops;
  apply_hops(o, hops);
  const auto g = ce::load_edge_list_file(network);
  json j = ce::basic_properties(g, hops);
  emit(o, j.dump(2) + "\n");
  return 0;
}

int cmd_fit(const Common& o, const std::string& input, bool discrete, const std::string& family) {
  ce::FitOptions opts;
  opts.discrete_power_law = discrete;
  const auto data = read_samples(input);
  if (!family.empty()) {
    const auto f = ce::family_from_string(family);
    if (!f) throw ce::ValidationError("unknown family '" + family + "'");
    ce::FitReport single;
    single.results.push_back(ce::fit_mle(*f, data, opts));
    std::ostringstream out;
    ce::write_fit_csv(out, single);
    emit(o, out.str());
    return 0;
  }
  const auto report = ce::best_fit(data, opts);
  std::ostringstream out;
  ce::write_fit_csv(out, report);
  out << "# best: " << ce::family_name(report.best) << '\n';
  emit(o, out.str());
  return 0;
}

int cmd_quality(const Common& o, const std::string& network, const std::string& cover_path) {
  const auto g = ce::load_edge_list_file(network);
  json j = ce::quality_report(g, ce::load_cover_file(cover_path, g));
  emit(o, j.dump(2) + "\n");
  return 0;
}

int cmd_clustering(const Common& o, const std::string& detected, const std::string& truth, const std::string& network,
                   const std::string& variant) {
  ce::Cover d, t;
  if (network.empty()) {
    std::unordered_map<std::string, ce::NodeId> ids;
    std::vector<std::string> labels;
    auto in_d = open_input(detected);
    auto in_t = open_input(truth);
    d = ce::load_cover_labelled(in_d, ids, labels);
    t = ce::load_cover_labelled(in_t, ids, labels);
  } else {
    const auto g = ce::load_edge_list_file(network);
    d = ce::load_cover_file(detected, g);
    t = ce::load_cover_file(truth, g);
  }
  const auto v = variant == "normalized_conditional" ? ce::OnmiVariant::NormalizedConditional : ce::OnmiVariant::Max;
  json j = ce::compare_covers(d, t, v);
  emit(o, j.dump(2) + "\n");
  return 0;
}

int cmd_rank(const Common& o, const std::string& table_path, bool spearman) {
  ce::GroupRanking gr;
  gr.name = "input";
  gr.table = read_rank_table(table_path);
  gr.kemeny = ce::kemeny_consensus(gr.table);
  gr.topsis = ce::topsis_on_ranks(gr.table);
  std::ostringstream out;
  ce::write_ranking_csv(out, gr);
  if (spearman) {
    out << '\n';
    ce::write_correlation_csv(out, gr.table.criteria, ce::spearman_matrix(gr.table));
  }
  emit(o, out.str());
  return 0;
}

int cmd_run(const Common& o) {
  if (o.config.empty()) throw ce::ValidationError("run requires --config");
  auto cfg = ce::load_run_config(o.config);
  apply_hops(o, cfg.hops);
  if (!o.output.empty()) cfg.output_dir = o.output;
  if (cfg.output_dir.empty()) throw ce::ValidationError("run requires an output directory (--output or output_dir)");
  ce::validate(cfg);
  const auto rep = ce::run(cfg);
  ce::emit_reports(rep, cfg.output_dir);
  for (const auto& g : rep.rankings) {
    if (g.name != "all-properties" || !g.kemeny) continue;
    std::cout << "consensus (" << g.name << "):";
    for (auto a : g.kemeny->order) std::cout << ' ' << g.table.alternatives[a];
    std::cout << '\n';
  }
  for (const auto& n : rep.notes) std::cerr << "note: " << n << '\n';
  std::cout << "reports written to " << cfg.output_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate community covers against a ground truth"};
  app.require_subcommand(1);
  Common o;

  auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "Output file (directory for run)"); };
  auto add_hops = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Seed for sampled hop statistics");
    sub->add_option("--hop-mode", o.hop_mode, "Shortest-path mode")->check(CLI::IsMember({"exact", "sampled"}));
    sub->add_option("--sources", o.sources, "BFS sources in sampled mode")->check(CLI::PositiveNumber);
  };

  std::string network, cover, detected, truth, input, table, family, variant = "max";
  bool full = false, discrete = false, spearman = false;

  auto* cg = app.add_subcommand("community-graph", "Edge list of the community-graph of a cover");
  cg->add_option("cover", cover, "Cover file")->required();
  cg->add_option("-n,--network", network, "Network the cover refers to");
  cg->add_flag("--full", full, "Keep every component");
  add_output(cg);

  auto* props = app.add_subcommand("props", "Global properties of a network");
  props->add_option("network", network, "Edge list")->required();
  add_output(props);
  add_hops(props);

  auto* fit = app.add_subcommand("fit", "Fit the candidate families to a sample file");
  fit->add_option("samples", input, "Whitespace separated numbers")->required();
  fit->add_flag("--discrete", discrete, "Discrete power-law likelihood");
  fit->add_option("--family", family, "Fit only this family (name or code); no fallback on failure");
  add_output(fit);

  auto* quality = app.add_subcommand("quality", "Quality metrics of a cover");
  quality->add_option("network", network, "Edge list")->required();
  quality->add_option("cover", cover, "Cover file")->required();
  add_output(quality);

  auto* clustering = app.add_subcommand("clustering", "Compare a detected cover with a reference cover");
  clustering->add_option("detected", detected, "Detected cover")->required();
  clustering->add_option("truth", truth, "Reference cover")->required();
  clustering->add_option("-n,--network", network, "Network both covers refer to");
  clustering->add_option("--onmi", variant, "ONMI normalization")->check(CLI::IsMember({"max", "normalized_conditional"}));
  add_output(clustering);

  auto* rank = app.add_subcommand("rank", "Consensus of a rank table (CSV)");
  rank->add_option("table", table, "CSV: algorithm,<criteria...>")->required();
  rank->add_flag("--spearman", spearman, "Append the criterion correlation matrix");
  add_output(rank);

  auto* run = app.add_subcommand("run", "Full evaluation from a JSON config");
  run->add_option("-c,--config", o.config, "Run configuration")->required();
  add_output(run);
  add_hops(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*cg) return cmd_community_graph(o, cover, network, full);
    if (*props) return cmd_props(o, network);
    if (*fit) return cmd_fit(o, input, discrete, family);
    if (*quality) return cmd_quality(o, network, cover);
    if (*clustering) return cmd_clustering(o, detected, truth, network, variant);
    if (*rank) return cmd_rank(o, table, spearman);
    if (*run) return cmd_run(o);
  } catch (const ce::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ce::ComputationError& e) {
    std::cerr << "computation error: " << e.what() << '\n';
    return 2;
  } catch (const ce::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
