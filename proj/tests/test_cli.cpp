// Copyright 2026 The polycbf Authors
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

#include "polycbf/cli.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace polycbf
{
namespace
{

namespace fs = std::filesystem;

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           (std::string("polycbf_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::vector<std::string> & args)
  {
    out_.str("");
    err_.str("");
    return run_command(args, out_, err_);
  }

  std::vector<std::string> lines(const fs::path & p)
  {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) {
      out.push_back(l);
    }
    return out;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, RunOnStraightMap)
{
  const auto out = (dir_ / "run").string();
  ASSERT_EQ(
    run({"run", "--map", "scurve", "--curvature", "0", "--planner", "pure_pursuit", "--filter",
         "on", "--seed", "3", "--out", out}),
    0)
    << err_.str();
  const auto trace = lines(dir_ / "run" / "trace.jsonl");
  EXPECT_EQ(trace.size(), 600u);
  const auto first = nlohmann::json::parse(trace.front());
  EXPECT_EQ(first.at("step"), 0);
  EXPECT_TRUE(first.contains("rows"));

  std::ifstream s(dir_ / "run" / "summary.json");
  const auto summary = nlohmann::json::parse(s);
  EXPECT_EQ(summary.at("summary").at("steps"), 600);
  EXPECT_EQ(summary.at("summary").at("collisions"), 0);
  EXPECT_EQ(summary.at("seed"), 3);
  EXPECT_TRUE(summary.at("config").contains("filter"));
  EXPECT_NE(out_.str().find("collisions=0"), std::string::npos);
}

TEST_F(CliTest, RunIsReproducible)
{
  const std::vector<std::string> base{"run", "--map", "loop", "--planner", "adversarial", "--steps",
                                      "80", "--seed", "4"};
  auto a = base;
  a.insert(a.end(), {"--out", (dir_ / "a").string()});
  auto b = base;
  b.insert(b.end(), {"--out", (dir_ / "b").string()});
  ASSERT_EQ(run(a), 0) << err_.str();
  ASSERT_EQ(run(b), 0) << err_.str();
  const auto ta = lines(dir_ / "a" / "trace.jsonl");
  const auto tb = lines(dir_ / "b" / "trace.jsonl");
  ASSERT_EQ(ta.size(), tb.size());
  for (std::size_t k = 0; k < ta.size(); ++k) {
    auto ja = nlohmann::json::parse(ta[k]);
    auto jb = nlohmann::json::parse(tb[k]);
    for (auto * j : {&ja, &jb}) {
      j->erase("distance_time_s");
      j->erase("solve_time_s");
    }
    EXPECT_EQ(ja, jb);
  }
}

TEST_F(CliTest, FilterOffCollisionsDoNotFail)
{
  EXPECT_EQ(
    run({"run", "--map", "scurve", "--planner", "adversarial", "--filter", "off", "--steps", "200",
         "--out", (dir_ / "off").string()}),
    0)
    << err_.str();
}

TEST_F(CliTest, BenchPrintsFiveRows)
{
  const auto tsv = (dir_ / "bench.tsv").string();
  ASSERT_EQ(
    run({"bench", "--map", "scurve", "--spacing", "0.02", "--steps", "20", "--repeats", "2", "--out",
         tsv}),
    0)
    << err_.str();
  const auto rows = lines(tsv);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "n_circles\tdistance_ms\tqp_ms\ttotal_ms");
  for (int n = 1; n <= 5; ++n) {
    EXPECT_EQ(rows[n].substr(0, 2), std::to_string(n) + "\t");
  }
  EXPECT_EQ(out_.str().substr(0, 9), "n_circles");
}

TEST_F(CliTest, GenThenValidate)
{
  const auto file = (dir_ / "map.json").string();
  ASSERT_EQ(run({"gen", "--kind", "intersection", "--seed", "2", "--out", file}), 0) << err_.str();
  EXPECT_TRUE(fs::exists(file));
  EXPECT_EQ(run({"validate", file}), 0) << err_.str();
  EXPECT_EQ(out_.str().substr(0, 3), "ok:");

  ASSERT_EQ(run({"gen", "--kind", "loop"}), 0);
  EXPECT_TRUE(nlohmann::json::accept(out_.str()));
}

TEST_F(CliTest, ScenarioFileDrivesRun)
{
  const auto file = (dir_ / "map.json").string();
  ASSERT_EQ(run({"gen", "--kind", "scurve", "--curvature", "0", "--out", file}), 0);
  ASSERT_EQ(run({"run", "--scenario", file, "--steps", "10", "--out", (dir_ / "r").string()}), 0)
    << err_.str();
  EXPECT_EQ(lines(dir_ / "r" / "trace.jsonl").size(), 10u);
}

TEST_F(CliTest, Failures)
{
  EXPECT_NE(run({"fly"}), 0);
  EXPECT_NE(run({}), 0);
  EXPECT_EQ(run({"validate", (dir_ / "missing.json").string()}), 3);
  EXPECT_FALSE(err_.str().empty());

  std::ofstream(dir_ / "broken.json") << "{";
  EXPECT_EQ(run({"validate", (dir_ / "broken.json").string()}), 3);
  EXPECT_NE(run({"gen", "--kind", "roundabout"}), 0);  // usage error
  EXPECT_NE(run({"run", "--steps", "5"}), 0);  // no scenario source
  EXPECT_NE(run({"run", "--map", "loop", "--filter", "maybe"}), 0);
}

TEST_F(CliTest, HelpExitsZero)
{
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(out_.str().find("run"), std::string::npos);
}

}  // namespace
}  // namespace polycbf
