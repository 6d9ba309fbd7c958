#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "covereval/report_io.hpp"

using namespace covereval;
namespace fs = std::filesystem;

namespace {

const EvaluationReport& sample_report() {
  static const EvaluationReport rep = run(load_run_config(std::string(COVEREVAL_SAMPLES) + "/config.json"));
  return rep;
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("covereval_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return out;
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(std::optional<double>{}), "");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(Json, ReportRoundTrip) {
  const auto& rep = sample_report();
  const json j = rep;
  const auto back = j.get<EvaluationReport>();
  EXPECT_EQ(back, rep);
  EXPECT_EQ(json(back).dump(), j.dump());
}

TEST(Json, FitReportRoundTrip) {
  std::vector<double> xs;
  for (int i = 1; i <= 200; ++i) xs.push_back(1.0 + (i % 17) * 0.7);
  const auto rep = best_fit(EmpiricalDistribution::from_samples(xs));
  EXPECT_EQ(json(rep).get<FitReport>(), rep);
}

TEST(Csv, RankingLayout) {
  GroupRanking g;
  g.name = "demo";
  g.table.alternatives = {"a", "b,c"};
  g.table.add_column("x", {1, 2});
  g.kemeny = KemenyResult{{0, 1}, {1, 2}, 1, false};
  std::ostringstream out;
  write_ranking_csv(out, g);
  EXPECT_EQ(out.str(), "algorithm,x,Kconsensus\na,1,1\n\"b,c\",2,2\n");
}

TEST(Csv, EcdfEndsAtOne) {
  std::ostringstream out;
  write_ecdf_csv(out, EmpiricalDistribution::from_samples({1, 1, 2, 4}));
  EXPECT_EQ(out.str(), "value,ecdf\n1,0.5\n2,0.75\n4,1\n");
}

TEST(Csv, CorrelationBlankForUndefined) {
  std::ostringstream out;
  write_correlation_csv(out, {"p", "q"}, {{1.0, std::nullopt}, {std::nullopt, std::nullopt}});
  EXPECT_EQ(out.str(), ",p,q\np,1,\nq,,\n");
}

TEST(EmitReports, WritesEveryTable) {
  const auto dir = fresh_dir("emit");
  emit_reports(sample_report(), dir);
  for (const char* f : {"report.json", "basic_properties.csv", "quality_metrics.csv", "clustering_metrics.csv",
                        "ranking_all-properties.csv", "spearman_all-properties.csv", "ks_DD.csv", "fits_CS.csv",
                        "distributions/0_ground-truth/DD.csv", "distributions/3_shuffled/OS.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const auto parsed = json::parse(slurp(dir / "report.json")).get<EvaluationReport>();
  EXPECT_EQ(parsed, sample_report());
}

TEST(EmitReports, ByteIdenticalAcrossRuns) {
  const auto a = fresh_dir("rerun_a"), b = fresh_dir("rerun_b");
  emit_reports(run(load_run_config(std::string(COVEREVAL_SAMPLES) + "/config.json")), a);
  emit_reports(run(load_run_config(std::string(COVEREVAL_SAMPLES) + "/config.json")), b);
  EXPECT_EQ(tree(a), tree(b));
}

TEST(EmitReports, NoTopologicalGroups) {
  auto cfg = load_run_config(std::string(COVEREVAL_SAMPLES) + "/config.json");
  cfg.groups = {PropertyGroup::Quality, PropertyGroup::Clustering};
  const auto dir = fresh_dir("subset");
  emit_reports(run(cfg), dir);
  std::set<std::string> csv;
  for (const auto& [name, body] : tree(dir))
    if (name.find('/') == std::string::npos && name.ends_with(".csv")) csv.insert(name);
  EXPECT_EQ(csv, (std::set<std::string>{"clustering_metrics.csv", "quality_metrics.csv", "ranking_clustering.csv",
                                        "ranking_quality.csv", "spearman_clustering.csv", "spearman_quality.csv"}));
  EXPECT_FALSE(fs::exists(dir / "distributions"));
}

TEST(EmitReports, UnwritableDirectory) {
  const auto file = fresh_dir("blocker");
  std::ofstream(file) << "x";
  EXPECT_THROW(emit_reports(sample_report(), file / "sub"), ValidationError);
  fs::remove(file);
}
