/*
 * Copyright 2026 The SelectorLab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "../tools/commands.h"
#include "json.hpp"
#include "selectorlab/binary_io.h"
#include "selectorlab/dataset.h"

namespace selectorlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "selectorlab");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).string()] = read_file(e.path().string());
    }
  }
  return files;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "selectorlab_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    for (const auto& [name, seed] :
         std::vector<std::pair<std::string, std::string>>{
             {"train", "1"}, {"test", "2"}, {"other", "3"}, {"calib", "4"}}) {
      const auto r = run_cli({"synth", "--preset", "class-gaussians", "--n", "800", "--seed",
                              seed, "--out", path(name + ".scf")});
      ASSERT_EQ(r.code, 0) << r.err;
    }
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }
  static std::string path(const std::string& name) { return (dir_ / name).string(); }
  static fs::path dir_;
};

fs::path CliTest::dir_;

TEST_F(CliTest, ScoreWritesBundleAndArtifacts) {
  const auto r = run_cli({"score", "--train", path("train.scf"), "--test", path("test.scf"),
                          "--scores", "msp,rlog,delta-mds,delta-knn,knn,mds", "--out",
                          path("score_out")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"scores.scb", "scores.csv", "metadata.json", "artifacts/mds.sst",
                        "artifacts/knn.snn", "artifacts/delta_mds_correct.sst",
                        "artifacts/delta_mds_wrong.sst", "artifacts/delta_knn_correct.snn",
                        "artifacts/delta_knn_wrong.snn"}) {
    EXPECT_TRUE(fs::exists(dir_ / "score_out" / f)) << f;
  }
  const auto csv = read_file(path("score_out/scores.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "index,msp,rlog,delta-mds,delta-knn,knn,mds");
}

TEST_F(CliTest, BundleEvalEqualsFusedEval) {
  const std::string scores = "msp,rlog,delta-mds,delta-knn-rlog";
  ASSERT_EQ(run_cli({"score", "--train", path("train.scf"), "--test", path("test.scf"),
                     "--scores", scores, "--out", path("b_score")})
                .code,
            0);
  auto r = run_cli({"eval", "--bundle", path("b_score/scores.scb"), "--test", path("test.scf"),
                    "--out", path("b_eval")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run_cli({"eval", "--train", path("train.scf"), "--test", path("test.scf"), "--scores",
               scores, "--out", path("f_eval")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(snapshot(dir_ / "b_eval"), snapshot(dir_ / "f_eval"));
  EXPECT_TRUE(fs::exists(dir_ / "f_eval" / "delta-knn-rlog_curve.csv"));
  const auto ranking = read_file(path("f_eval/ranking.csv"));
  EXPECT_EQ(ranking.rfind("rank,score,aurc,aurc_x100,naurc", 0), 0u);
}

TEST_F(CliTest, EveryCommandIsDeterministic) {
  const std::vector<std::vector<std::string>> commands{
      {"synth", "--preset", "planar", "--n", "300", "--seed", "5", "--out", path("det/p.csv"),
       "--oracle-out", path("det/p_oracle.csv")},
      {"score", "--train", path("train.scf"), "--test", path("test.scf"), "--scores",
       "energy,sirc,delta-knn", "--out", path("det/score")},
      {"eval", "--train", path("train.scf"), "--test", path("test.scf"), "--test",
       path("other.scf"), "--scores", "rlog,delta-mds-rlog", "--lambda", "auto",
       "--calibration", path("calib.scf"), "--svg", "--out", path("det/eval")},
      {"sweep", "--train", path("train.scf"), "--test", path("test.scf"), "--scores",
       "delta-knn-rlog", "--k-grid", "5,10", "--lambda-grid", "1,10", "--out",
       path("det/sweep.csv")},
      {"verify", "T1_rlog", "--out", path("det/verify.json")},
      {"report", "--inputs", path("det/eval/test"), path("det/eval/other"), "--out",
       path("det/report")},
  };
  std::map<std::string, std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& cmd : commands) {
      const auto r = run_cli(cmd);
      ASSERT_EQ(r.code, 0) << cmd[0] << ": " << r.err;
    }
    const auto files = snapshot(dir_ / "det");
    if (pass == 0) {
      first = files;
    } else {
      EXPECT_EQ(files, first);
    }
  }
  EXPECT_TRUE(first.count("eval/grouped.csv"));
  EXPECT_TRUE(first.count("eval/test/risk_coverage.svg"));
  EXPECT_TRUE(first.count("report/report.csv"));
}

TEST_F(CliTest, ThreeSampleWorkedCase) {
  // msp order: row 0, row 1, row 2. Only row 0 is wrong.
  std::ofstream(path("three.csv")) << "label,pred,f0,l0,l1\n1,,0,3,0\n0,,1,2,0\n0,,2,1,0\n";
  const auto r = run_cli({"eval", "--train", path("three.csv"), "--test",
                          path("three.csv"), "--scores", "msp", "--out", path("three_out")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(read_file(path("three_out/msp.json")));
  EXPECT_NEAR(j["aurc"].get<double>(), 11.0 / 18.0, 1e-15);
  EXPECT_NEAR(j["oracle_aurc"].get<double>(), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(j["full_risk"].get<double>(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(j["naurc"].get<double>(), 2.25, 1e-12);
  EXPECT_EQ(j["n"].get<int>(), 3);
  EXPECT_EQ(read_file(path("three_out/msp_curve.csv")).substr(0, 24), "coverage,risk,threshold\n");
}

TEST_F(CliTest, GroupByAveragesWithinGroupsFirst) {
  std::ofstream(path("groups.csv")) << "dataset,group\ntest,near\nother,near\ncalib,far\n";
  const auto r = run_cli({"eval", "--train", path("train.scf"), "--test", path("test.scf"),
                          "--test", path("other.scf"), "--test", path("calib.scf"), "--scores",
                          "rlog", "--group-by", path("groups.csv"), "--out", path("grouped")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::map<std::string, double> naurc_of;
  for (const char* ds : {"test", "other", "calib"}) {
    const auto s = json::parse(read_file(path(std::string("grouped/") + ds + "/summary.json")));
    naurc_of[ds] = s["scores"][0]["naurc"].get<double>();
  }
  std::stringstream csv(read_file(path("grouped/grouped.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "score,group,members,mean_aurc,mean_aurc_x100,mean_naurc");
  std::map<std::string, double> row_naurc;
  while (std::getline(csv, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 6u) << line;
    row_naurc[cols[1]] = std::stod(cols[5]);
  }
  const double near = (naurc_of["test"] + naurc_of["other"]) / 2;
  EXPECT_NEAR(row_naurc["near"], near, 1e-12);
  EXPECT_NEAR(row_naurc["far"], naurc_of["calib"], 1e-12);
  EXPECT_NEAR(row_naurc["overall"], (near + naurc_of["calib"]) / 2, 1e-12);
}

TEST_F(CliTest, SweepMarksTooSmallFractionsNotApplicable) {
  const auto r = run_cli({"sweep", "--train", path("train.scf"), "--test", path("test.scf"),
                          "--scores", "delta-mds", "--fraction-grid", "0.005,1", "--out",
                          path("sweep.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_file(path("sweep.csv"));
  EXPECT_NE(csv.find(",not-applicable,"), std::string::npos) << csv;
  EXPECT_NE(csv.find(",ok,*"), std::string::npos) << csv;
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(run_cli({"eval", "--bogus-flag"}).code, cli::kExitValidation);
  EXPECT_EQ(run_cli({"score", "--train", path("train.scf"), "--test", path("test.scf")}).code,
            cli::kExitValidation);  // --out missing
  auto r = run_cli({"score", "--train", path("train.scf"), "--test", path("test.scf"),
                    "--scores", "no-such-score", "--out", path("x")});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("no-such-score"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"verify", "T9"}).code, cli::kExitValidation);
  std::ofstream(path("broken.csv")) << "label,pred,f0,l0,l1\n0,,nan,1,0\n";
  r = run_cli({"eval", "--train", path("train.scf"), "--test", path("broken.csv"), "--scores",
               "msp", "--out", path("x")});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("row 0"), std::string::npos) << r.err;
  r = run_cli({"eval", "--train", path("train.scf"), "--test", path("test.scf"), "--scores",
               "delta-mds-rlog", "--lambda", "auto", "--out", path("x")});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("calibration"), std::string::npos) << r.err;
}

TEST_F(CliTest, VerifyAllReportsSixChecks) {
  const auto r = run_cli({"verify", "--all", "--out", path("verify.json")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  const auto j = json::parse(read_file(path("verify.json")));
  EXPECT_TRUE(j["all_pass"].get<bool>());
  ASSERT_EQ(j["results"].size(), 6u);
  EXPECT_EQ(j["results"][0]["id"], "T1_msp");
  EXPECT_EQ(json::parse(r.out), j);
}

}  // namespace
}  // namespace selectorlab
