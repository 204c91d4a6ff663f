// Copyright 2026 The xrc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "xrc/corpus.hpp"
#include "xrc/json_io.hpp"

namespace xrc {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = XRC_FIXTURES_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("xrc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, PipelineRunWritesPerfectReport) {
  const auto r = run({"pipeline", "run", "--config", (kFixtures / "perfect.json").string(), "--out", path("run")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json report = Json::parse(read_file(path("run/report.json")));
  EXPECT_EQ(report.at("em").get<double>(), 100.0);
  EXPECT_EQ(report.at("f1").get<double>(), 100.0);
  EXPECT_TRUE(fs::exists(path("run/predictions.jsonl")));
  EXPECT_TRUE(fs::exists(path("run/diagnostics.jsonl")));
  EXPECT_EQ(read_file(path("run/errors.jsonl")), "");
  EXPECT_NE(r.out.find("100.00"), std::string::npos);
  for (const auto& e : fs::directory_iterator(path("run"))) {
    EXPECT_NE(e.path().extension(), ".tmp");
  }
}

TEST_F(CliTest, WorkerOverrideKeepsFilesIdentical) {
  const std::string cfg = (kFixtures / "keyword.json").string();
  ASSERT_EQ(run({"pipeline", "run", "--config", cfg, "--workers", "1", "--out", path("a")}).code, 0);
  ASSERT_EQ(run({"pipeline", "run", "--config", cfg, "--workers", "8", "--out", path("b")}).code, 0);
  EXPECT_EQ(read_file(path("a/predictions.jsonl")), read_file(path("b/predictions.jsonl")));
  EXPECT_EQ(read_file(path("a/report.json")), read_file(path("b/report.json")));
}

TEST_F(CliTest, BaselineAndSweep) {
  const auto b = run({"pipeline", "baseline", "--config", (kFixtures / "ambiguous.json").string(), "--out",
                      path("bl")});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_LT(Json::parse(read_file(path("bl/report.json"))).at("substring_rate").get<double>(), 1.0);

  const auto s = run({"pipeline", "sweep", "--config", (kFixtures / "keyword.json").string(), "--param",
                      "paraphrase_rate", "--values", "0,0.5", "--seeds", "1,2", "--synonym-coverage", "0.3",
                      "--out", path("sw")});
  ASSERT_EQ(s.code, 0) << s.err;
  const std::string csv = read_file(path("sw/sweep.csv"));
  EXPECT_EQ(csv.rfind("param,value,f1,em,n_seeds\nparaphrase_rate,0,", 0), 0u) << csv;
  EXPECT_EQ(Json::parse(read_file(path("sw/sweep.json"))).size(), 2u);
}

TEST_F(CliTest, SeedOverrideChangesNoise) {
  const std::string cfg = (kFixtures / "keyword.json").string();
  ASSERT_EQ(run({"pipeline", "sweep", "--config", cfg, "--values", "0.3", "--seeds", "1", "--out", path("a")}).code, 0);
  ASSERT_EQ(run({"pipeline", "sweep", "--config", cfg, "--values", "0.3", "--seeds", "2", "--out", path("b")}).code, 0);
  EXPECT_NE(read_file(path("a/sweep.csv")), read_file(path("b/sweep.csv")));
}

TEST_F(CliTest, UnknownSubcommandIsUsageError) {
  const auto r = run({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"pipeline", "run"}).code, 2);
  EXPECT_EQ(run({"corpus", "split", "--in", "x", "--n-dev", "abc"}).code, 2);
}

TEST_F(CliTest, HelpExitsZero) {
  const auto r = run({"pipeline", "run", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--config"), std::string::npos);
}

TEST_F(CliTest, MissingConfigIsRunError) {
  const auto r = run({"pipeline", "run", "--config", path("nope.json"), "--out", path("o")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(path("nope.json")), std::string::npos);
}

TEST_F(CliTest, CorpusCommands) {
  std::vector<AlignedPair> pairs;
  for (int i = 0; i < 30; ++i) {
    pairs.push_back({std::vector<std::string>(3 + i, "s"), std::vector<std::string>(6, "t"), -0.6 + 0.05 * i});
  }
  write_file_atomic(path("pairs.jsonl"), pairs_to_jsonl(pairs));
  write_file_atomic(path("qs.jsonl"), pairs_to_jsonl(std::vector<AlignedPair>(pairs.begin(), pairs.begin() + 2)));

  const auto f = run({"corpus", "filter", "--in", path("pairs.jsonl"), "--lang", "ja", "--out", path("f.jsonl")});
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_EQ(read_pairs(path("f.jsonl")), filter_pairs(pairs, FilterConfig::for_language("ja")));

  ASSERT_EQ(run({"corpus", "oversample", "--corpus", path("pairs.jsonl"), "--questions", path("qs.jsonl"),
                 "--factor", "3", "--out", path("o.jsonl")})
                .code,
            0);
  EXPECT_EQ(read_pairs(path("o.jsonl")).size(), 36u);

  ASSERT_EQ(run({"corpus", "split", "--in", path("pairs.jsonl"), "--n-dev", "5", "--seed", "4", "--out",
                 path("split")})
                .code,
            0);
  EXPECT_EQ(read_pairs(path("split/train.jsonl")).size(), 25u);
  EXPECT_EQ(read_pairs(path("split/dev.jsonl")).size(), 5u);

  EXPECT_EQ(run({"corpus", "filter", "--in", path("missing.jsonl"), "--out", path("x.jsonl")}).code, 1);
}

TEST_F(CliTest, DatasetGenLoadAndEval) {
  ASSERT_EQ(run({"dataset", "gen", "--n", "12", "--seed", "3", "--out", path("gen")}).code, 0);
  const auto squad = load_dataset(path("gen/squad.json"), LanguageTag("synL"));
  EXPECT_EQ(squad, load_dataset(path("gen/examples.jsonl")));
  EXPECT_EQ(squad.size(), 12u);

  const auto l = run({"dataset", "load", "--in", path("gen/squad.json"), "--out", path("conv.jsonl")});
  ASSERT_EQ(l.code, 0) << l.err;
  EXPECT_NE(l.out.find("12"), std::string::npos);

  const auto e = run({"eval", "--dataset", (kFixtures / "substring327" / "dataset.jsonl").string(),
                      "--predictions", (kFixtures / "substring327" / "predictions.jsonl").string(), "--out",
                      path("rep.json")});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NEAR(Json::parse(read_file(path("rep.json"))).at("substring_rate").get<double>(), 143.0 / 327.0, 1e-15);
}

}  // namespace
}  // namespace xrc
