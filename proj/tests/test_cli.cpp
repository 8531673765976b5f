#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + HEX_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "hex_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ASSERT_EQ(run("train-classifier --synthetic linear --n 400 --p 2 --data-seed 7 --seed 7 -o " + path("lr.json"))
                  .code,
              0);
  }
  static std::string path(const std::string& name) { return (dir_ / name).string(); }
  static fs::path dir_;
};

fs::path Cli::dir_;

TEST_F(Cli, TrainClassifierReportsHighTestAccuracy) {
  const auto r = run("train-classifier --synthetic linear --n 400 --p 2 --data-seed 7 --seed 7 -o " + path("a.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(path("a.json")));
  const auto pos = r.out.find("test,");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_GE(std::stod(r.out.substr(pos + 5)), 0.95);
  // Same seed, same file.
  EXPECT_EQ(slurp(path("a.json")), slurp(path("lr.json")));
}

TEST_F(Cli, MissingLabelColumnExitsTwo) {
  std::ofstream(path("data.csv")) << "a,b,y\n1,2,0\n3,4,1\n5,6,0\n";
  EXPECT_EQ(run("train-classifier --data " + path("data.csv") + " --label target -o " + path("x.json")).code, 2);
}

TEST_F(Cli, CsvTrainingWorks) {
  std::ofstream csv(path("blobs.csv"));
  csv << "height,weight,label\n";
  for (int i = 0; i < 60; ++i) csv << (i % 2 ? 170 + i % 7 : 150 + i % 5) << ',' << (i % 2 ? 80 : 55) + i % 3 << ','
                                   << i % 2 << "\n";
  csv.close();
  const auto r = run("train-classifier --data " + path("blobs.csv") + " --label label --kind dt -o " + path("dt.json"));
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(slurp(path("dt.json")));
  EXPECT_EQ(j.at("feature_names"), nlohmann::json({"height", "weight"}));
  EXPECT_EQ(j.at("label_column"), "label");
}

TEST_F(Cli, SynthesizeWritesPolicyAndCurve) {
  const std::string args = "synthesize -m " + path("lr.json") + " -E 2 -T 2 --seed 3 -o " + path("p.json") +
                           " --curve " + path("c.csv");
  ASSERT_EQ(run(args).code, 0);
  EXPECT_TRUE(fs::exists(path("p.json")));
  EXPECT_EQ(count_lines(slurp(path("c.csv"))), 3u);
  const auto first = slurp(path("c.csv"));
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(slurp(path("c.csv")), first);
}

TEST_F(Cli, DeciderProfileSwitchesToHitlMode) {
  std::ofstream(path("decider.json")) << R"(["x0"])";
  ASSERT_EQ(run("synthesize -m " + path("lr.json") + " -E 2 -T 2 --decider " + path("decider.json") + " -o " +
                path("ph.json") + " --curve " + path("ch.csv"))
                .code,
            0);
  const auto j = nlohmann::json::parse(slurp(path("ph.json")));
  EXPECT_EQ(j.at("mode"), "hitl");
  EXPECT_EQ(j.at("decider_profile"), nlohmann::json({0}));
}

TEST_F(Cli, MissingModelExitsTwo) {
  EXPECT_EQ(run("synthesize -m " + path("nope.json")).code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
}

TEST_F(Cli, ExplainPolicyAndGrowShareASchema) {
  ASSERT_EQ(run("synthesize -m " + path("lr.json") + " -E 2 -T 2 -o " + path("pe.json") + " --curve " +
                path("ce.csv"))
                .code,
            0);
  ASSERT_EQ(run("explain -m " + path("lr.json") + " --policy " + path("pe.json") + " --count 3 -o " +
                path("e1.csv"))
                .code,
            0);
  ASSERT_EQ(run("explain -m " + path("lr.json") + " --explainer grow --count 3 -o " + path("e2.csv")).code, 0);
  const auto a = slurp(path("e1.csv"));
  const auto b = slurp(path("e2.csv"));
  EXPECT_EQ(count_lines(a), 4u);
  EXPECT_EQ(count_lines(b), 4u);
  EXPECT_EQ(a.substr(0, a.find('\n')), b.substr(0, b.find('\n')));
}

TEST_F(Cli, TopQLimitsBarChart) {
  ASSERT_EQ(run("train-classifier --synthetic linear --n 200 --p 8 --seed 2 -o " + path("wide.json")).code, 0);
  ASSERT_EQ(run("explain -m " + path("wide.json") + " --explainer grow --count 2 --top-q 5 --svg-dir " +
                path("svg") + " -o " + path("w.csv"))
                .code,
            0);
  const auto svg = slurp(fs::path(path("svg")) / "instance_0.svg");
  std::size_t bars = 0;
  for (auto p = svg.find("class=\"bar\""); p != std::string::npos; p = svg.find("class=\"bar\"", p + 1)) ++bars;
  EXPECT_GE(bars, 1u);
  EXPECT_LE(bars, 5u);
}

TEST_F(Cli, PolicyDimensionMismatchExitsTwo) {
  ASSERT_EQ(run("train-classifier --synthetic linear --n 200 --p 3 --seed 2 -o " + path("p3.json")).code, 0);
  ASSERT_EQ(run("synthesize -m " + path("p3.json") + " -E 1 -T 1 -o " + path("pol3.json") + " --curve " +
                path("c3.csv"))
                .code,
            0);
  EXPECT_EQ(run("explain -m " + path("lr.json") + " --policy " + path("pol3.json") + " -o " + path("bad.csv")).code,
            2);
}

TEST_F(Cli, EvaluateMatrices) {
  const std::string base = "evaluate -m " + path("lr.json") + " --trials 1 --instances 5 -E 4 -T 5 -N 8 --seed 4";
  const auto free = run(base + " --explainers hex-td3 grow --out-dir " + path("ev1"));
  ASSERT_EQ(free.code, 0);
  EXPECT_EQ(count_lines(free.out), 3u);  // header + 2 aggregate rows
  const auto again = run(base + " --explainers hex-td3 grow --out-dir " + path("ev1b"));
  EXPECT_EQ(free.out, again.out);
  EXPECT_EQ(slurp(fs::path(path("ev1")) / "records.csv"), slurp(fs::path(path("ev1b")) / "records.csv"));

  const auto hitl = run(base + " --explainers hex-td3 --scenario hitl --uaps 0.1 0.5 0.9 --out-dir " + path("ev2"));
  ASSERT_EQ(hitl.code, 0);
  EXPECT_EQ(count_lines(hitl.out), 4u);
  const auto rows = nlohmann::json::parse(slurp(fs::path(path("ev2")) / "aggregates.json"));
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_EQ(r.at("mean_uep"), 0.0);
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  const auto out = dir_ / "envout";
  ASSERT_EQ(run("report --curve " + path("c.csv") + " -o grid.svg", "HEX_OUTPUT_DIR=" + out.string()).code, 0);
  EXPECT_TRUE(fs::exists(out / "grid.svg"));
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  std::ofstream(path("run.toml")) << "[synthesize]\nepisodes = 3\niterations = 2\nseed = 9\n";
  ASSERT_EQ(run("--config " + path("run.toml") + " synthesize -m " + path("lr.json") + " -E 2 -o " +
                path("pc.json") + " --curve " + path("cc.csv"))
                .code,
            0);
  EXPECT_EQ(count_lines(slurp(path("cc.csv"))), 3u);  // flag wins: 2 episodes
  const auto j = nlohmann::json::parse(slurp(path("pc.json")));
  EXPECT_EQ(j.at("train_config").at("seed"), 9);
  EXPECT_EQ(j.at("train_config").at("inner_iterations"), 2);
}

}  // namespace
