// Copyright 2026 The sfgraph Authors
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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "sfgraph/io.hpp"

namespace sfg {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(SFGEN_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("sfgen_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string data(const std::string& name) {
    return (fs::path(SFG_TEST_DATA) / name).string();
  }

  fs::path dir_;
};

TEST_F(CliTest, GeneratePbaFourRanks) {
  const auto r = run("generate-pba --ranks 4 --vertices-per-rank 5 --edges-per-vertex 2 "
                     "--factions-file " + data("four_rank.factions") + " --seed 42 -o " + path("g.bin"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("edges=40\n"), std::string::npos);
  EXPECT_NE(r.out.find("edges_per_rank=10,10,10,10\n"), std::string::npos);
  const auto g = read_edge_list(fs::path(path("g.bin")));
  EXPECT_EQ(g.edges.size(), 40u);
  EXPECT_EQ(g.vertex_count, 20u);
}

TEST_F(CliTest, GeneratePkText) {
  const auto r = run("generate-pk --seed-graph " + data("five_vertex.seed") +
                     " --iterations 1 -o " + path("g.txt") + " --format text");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto text = slurp(path("g.txt"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 121);
  EXPECT_NE(r.out.find("max_stack_depth="), std::string::npos);
}

TEST_F(CliTest, MetricsOnPathGraph) {
  {
    std::ofstream out(path("p.txt"));
    out << "0 1\n1 2\n2 3\n3 4\n";
  }
  const auto w = run("metrics " + path("p.txt") + " --sources all --degree-csv " + path("d.csv"));
  ASSERT_EQ(w.code, 0) << w.out;
  EXPECT_NE(w.out.find("avg_path_length=2.0\n"), std::string::npos);
  EXPECT_NE(w.out.find("diameter=4\n"), std::string::npos);
  EXPECT_EQ(slurp(path("d.csv")), "k,count\n1,2\n2,3\n");
}

TEST_F(CliTest, RasterAscii) {
  {
    std::ofstream out(path("d.txt"));
    out << "0 0\n1 1\n2 2\n3 3\n";
  }
  const auto r = run("raster " + path("d.txt") + " -o " + path("d.pgm") + " --resolution 2 --ascii");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(slurp(path("d.pgm")), "P2\n2 2\n255\n255 0\n0 255\n");
}

TEST_F(CliTest, ReproducibleAndWorkerIndependent) {
  const std::string base = "generate-pba --ranks 8 --vertices-per-rank 200 --edges-per-vertex 3 "
                           "--factions blocks:3 --inter-faction-prob 0.1 -o ";
  ASSERT_EQ(run(base + path("a.bin") + " --workers 1").code, 0);
  ASSERT_EQ(run(base + path("b.bin") + " --workers 8").code, 0);
  ASSERT_EQ(run(base + path("c.bin")).code, 0);
  EXPECT_EQ(slurp(path("a.bin")), slurp(path("b.bin")));
  EXPECT_EQ(slurp(path("a.bin")), slurp(path("c.bin")));

  const std::string pk = "generate-pk --seed-graph " + data("five_vertex.seed") +
                         " --iterations 2 --ranks 8 --noise seed-perturb:0.1 -o ";
  ASSERT_EQ(run(pk + path("p1.bin") + " --workers 1").code, 0);
  ASSERT_EQ(run(pk + path("p8.bin") + " --workers 8").code, 0);
  EXPECT_EQ(slurp(path("p1.bin")), slurp(path("p8.bin")));
}

TEST_F(CliTest, MessageLog) {
  const auto r = run("generate-pba --ranks 2 --vertices-per-rank 4 --edges-per-vertex 2 -o " +
                     path("g.bin") + " --message-log " + path("m.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto log = slurp(path("m.csv"));
  EXPECT_EQ(log.rfind("phase,from,to,bytes\n", 0), 0u);
  EXPECT_NE(log.find("\n0,0,"), std::string::npos);
}

TEST_F(CliTest, ConfigurationErrorsExitTwoNamingFlag) {
  auto r = run("generate-pba --ranks 8 --vertices-per-rank 2 --edges-per-vertex 1 -o " + path("x"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("--vertices-per-rank"), std::string::npos);

  r = run("generate-pk --seed-graph " + path("missing.seed") + " -o " + path("x"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("--seed-graph"), std::string::npos);

  r = run("generate-pk --seed-graph " + data("five_vertex.seed") + " --noise warp -o " + path("x"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("--noise"), std::string::npos);

  r = run("generate-pba --factions ring -o " + path("x"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("--factions"), std::string::npos);

  r = run("generate-pba --ranks 0 -o " + path("x"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("--ranks"), std::string::npos);

  EXPECT_EQ(run("metrics " + path("x") + " --sources many").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(CliTest, RuntimeFailuresExitOne) {
  EXPECT_EQ(run("metrics " + path("missing.txt")).code, 1);
  {
    std::ofstream out(path("bad.txt"));
    out << "0 1\nfoo bar\n";
  }
  const auto r = run("metrics " + path("bad.txt"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("line 2"), std::string::npos);
}

}  // namespace
}  // namespace sfg
