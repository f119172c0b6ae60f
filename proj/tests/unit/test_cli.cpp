#include <gtest/gtest.h>

#include <json.hpp>

#include "test_util.hpp"

namespace mt = mtg::testing;
namespace fs = std::filesystem;

namespace {

const std::string kCli = MTGENDER_CLI;

mt::CommandResult cli(const std::string& args) { return mt::run_command(mt::shell_quote(kCli) + " " + args); }

std::string data(const std::string& name) { return mt::shell_quote((mt::data_dir() / name).string()); }

std::string inputs() {
  return "--corpus " + data("corpus.jsonl") + " --annotations " + data("annotations.jsonl") + " --parse-cache " +
         data("parses.jsonl");
}

int count_files(const fs::path& dir, const std::string& ext) {
  int n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli("").exit_code, 2);
  EXPECT_EQ(cli("frobnicate").exit_code, 2);
  const auto missing = cli("attribute");
  EXPECT_EQ(missing.exit_code, 2);
  EXPECT_NE(missing.output.find("--corpus"), std::string::npos) << missing.output;
  EXPECT_EQ(cli("attribute --corpus /nonexistent/corpus.jsonl").exit_code, 2);
  mt::TempDir dir("cli-usage");
  const auto out = " --out-dir " + mt::shell_quote(dir.path().string());
  EXPECT_EQ(cli("analyze " + inputs() + out + " --grid 5,abc").exit_code, 2);
  EXPECT_EQ(cli("all " + inputs() + out + " --grid 0,10").exit_code, 2);
  EXPECT_EQ(cli("analyze --corpus " + data("corpus.jsonl") + out).exit_code, 2);
  EXPECT_EQ(cli("all " + inputs() + out + " --backend nonsense").exit_code, 2);
  EXPECT_EQ(cli("--help").exit_code, 0);
}

TEST(Cli, AttributeThenWarmRerun) {
  mt::TempDir dir("cli-attr");
  const auto out = " --out-dir " + mt::shell_quote(dir.path().string());
  const auto first = cli("attribute --corpus " + data("corpus.jsonl") + out);
  ASSERT_EQ(first.exit_code, 0) << first.output;
  EXPECT_NE(first.output.find("10 computed, 0 from cache"), std::string::npos) << first.output;
  EXPECT_EQ(count_files(dir / "wordscores", ".csv"), 10);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  const auto second = cli("attribute --corpus " + data("corpus.jsonl") + out);
  ASSERT_EQ(second.exit_code, 0) << second.output;
  EXPECT_NE(second.output.find("0 computed, 10 from cache"), std::string::npos) << second.output;
}

TEST(Cli, AnalyzeNeedsCachedAttributions) {
  mt::TempDir dir("cli-analyze");
  const auto out = " --out-dir " + mt::shell_quote(dir.path().string());
  ASSERT_EQ(cli("attribute --corpus " + data("corpus.jsonl") + out).exit_code, 0);
  const auto ok = cli("analyze " + inputs() + out);
  ASSERT_EQ(ok.exit_code, 0) << ok.output;
  EXPECT_TRUE(fs::exists(dir / "overlap.csv"));

  for (const auto& e : fs::recursive_directory_iterator(dir / "cache")) {
    if (e.path().filename() == "s05.json") fs::remove(e.path());
  }
  const auto missing = cli("analyze " + inputs() + out);
  EXPECT_EQ(missing.exit_code, 1);
  EXPECT_NE(missing.output.find("s05"), std::string::npos) << missing.output;
}

TEST(Cli, AllAndReportFormats) {
  mt::TempDir dir("cli-all");
  const auto out = " --out-dir " + mt::shell_quote(dir.path().string());
  const auto run = cli("all " + inputs() + out + " --seed 0");
  ASSERT_EQ(run.exit_code, 0) << run.output;
  EXPECT_EQ(count_files(dir.path(), ".svg"), 4);
  EXPECT_TRUE(fs::exists(dir / "summary.md"));
  const auto manifest = nlohmann::json::parse(mt::read_file(dir / "manifest.json"));
  EXPECT_EQ(manifest["command"], "all");
  EXPECT_EQ(manifest["backend"]["id"], "mock");
  EXPECT_EQ(manifest["backend"]["version"], "1-seed0");
  EXPECT_GE(manifest["outputs"].size(), 10u);

  for (const auto& e : fs::directory_iterator(dir.path())) {
    if (e.path().extension() == ".svg") fs::remove(e.path());
  }
  const auto csv_only = cli("report" + out + " --format csv-only");
  ASSERT_EQ(csv_only.exit_code, 0) << csv_only.output;
  EXPECT_EQ(count_files(dir.path(), ".svg"), 0);
  ASSERT_EQ(cli("report" + out).exit_code, 0);
  EXPECT_EQ(count_files(dir.path(), ".svg"), 4);
  EXPECT_EQ(nlohmann::json::parse(mt::read_file(dir / "manifest.json"))["command"], "report");
}

TEST(Cli, SingleApproachSweep) {
  mt::TempDir dir("cli-approach");
  const auto out = " --out-dir " + mt::shell_quote(dir.path().string());
  ASSERT_EQ(cli("all " + inputs() + out + " --approach 2").exit_code, 0);
  const auto summary = mt::read_file(dir / "sweep_summary.csv");
  EXPECT_EQ(summary,
            "approach,mode,grid_size,mean_pct,std_pct,best_parameter,best_pct\n" +
                summary.substr(summary.find('\n') + 1));
  int rows = 0;
  for (char c : summary) rows += c == '\n';
  EXPECT_EQ(rows, 3);  // header plus one row per mode
  EXPECT_NE(summary.find("\n2,all,1,"), std::string::npos) << summary;

  mt::TempDir dir2("cli-grid");
  const auto out2 = " --out-dir " + mt::shell_quote(dir2.path().string());
  ASSERT_EQ(cli("all " + inputs() + out2 + " --approach 4 --grid 10,20 --mode min2").exit_code, 0);
  const auto overlap = mt::read_file(dir2 / "overlap.csv");
  int lines = 0;
  for (char c : overlap) lines += c == '\n';
  EXPECT_EQ(lines, 3);
  EXPECT_NE(overlap.find("\n4,20,min2,"), std::string::npos) << overlap;
}

TEST(Cli, ValidateStrictAndLenient) {
  const auto clean = cli("validate --corpus " + data("corpus.jsonl"));
  EXPECT_EQ(clean.exit_code, 0) << clean.output;
  EXPECT_NE(clean.output.find("MULTI_DIFF_REGION"), std::string::npos);

  mt::TempDir dir("cli-validate");
  auto corpus = mt::read_file(mt::data_dir() / "corpus.jsonl");
  auto bad = nlohmann::json::parse(corpus.substr(0, corpus.find('\n')));
  bad["id"] = "dup";
  bad["contrastive"] = std::string(bad["mt"]).replace(std::string(bad["mt"]).find(' '), 1, "  ");
  mt::write_file(dir / "corpus.jsonl", corpus + bad.dump() + "\n");
  const auto path = mt::shell_quote((dir / "corpus.jsonl").string());
  const auto strict = cli("validate --corpus " + path);
  EXPECT_EQ(strict.exit_code, 1) << strict.output;
  EXPECT_NE(strict.output.find("rejected: dup"), std::string::npos) << strict.output;
  EXPECT_EQ(cli("validate --lenient --corpus " + path).exit_code, 0);
}
