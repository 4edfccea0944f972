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

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "sfgraph/metrics.hpp"
#include "sfgraph/pba.hpp"
#include "sfgraph/pk.hpp"
#include "sfgraph/report.hpp"

namespace sfg {
namespace {

struct ExactPaths {
  double avg = 0;
  std::uint64_t diameter = 0;
  std::uint64_t pairs = 0;
};

// Floyd-Warshall over the symmetrized graph; independent of the BFS code.
ExactPaths floyd_warshall(const EdgeList& g) {
  const auto n = g.vertex_count;
  constexpr auto inf = std::numeric_limits<std::uint64_t>::max() / 4;
  std::vector<std::uint64_t> d(n * n, inf);
  for (std::uint64_t i = 0; i < n; ++i) d[i * n + i] = 0;
  for (const auto& e : g.edges) {
    if (e.u == e.v) continue;
    d[e.u * n + e.v] = d[e.v * n + e.u] = 1;
  }
  for (std::uint64_t k = 0; k < n; ++k)
    for (std::uint64_t i = 0; i < n; ++i)
      for (std::uint64_t j = 0; j < n; ++j)
        d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  ExactPaths out;
  std::uint64_t sum = 0;
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < n; ++j) {
      if (i == j || d[i * n + j] >= inf) continue;
      sum += d[i * n + j];
      ++out.pairs;
      out.diameter = std::max(out.diameter, d[i * n + j]);
    }
  out.avg = out.pairs ? static_cast<double>(sum) / out.pairs : 0;
  return out;
}

PathStats all_sources(const EdgeList& g, std::size_t workers = 1) {
  SplitMix64 rng(1);
  return path_stats(UndirectedGraph(g), UINT64_MAX, rng, workers);
}

EdgeList path_graph(std::uint64_t n) {
  EdgeList g;
  g.vertex_count = n;
  for (std::uint64_t i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
  return g;
}

TEST(DegreeDistributionTest, Triangle) {
  const EdgeList g{{{0, 1}, {1, 2}, {2, 0}}, 3, false};
  EXPECT_EQ(degree_distribution(g).bins, (std::vector<DegreeBin>{{2, 3}}));
}

TEST(DegreeDistributionTest, Star) {
  const EdgeList g{{{0, 1}, {0, 2}, {3, 0}, {0, 4}}, 5, false};
  EXPECT_EQ(degree_distribution(g).bins, (std::vector<DegreeBin>{{1, 4}, {4, 1}}));
}

TEST(DegreeDistributionTest, SymmetrizesDedupesAndCountsLoopsTwice) {
  const EdgeList g{{{0, 1}, {1, 0}, {0, 1}, {2, 2}, {2, 2}}, 4, true};
  const UndirectedGraph ug(g);
  EXPECT_EQ(ug.edge_count(), 2u);
  EXPECT_EQ(ug.degree(0), 1u);
  EXPECT_EQ(ug.degree(2), 2u);
  EXPECT_TRUE(ug.neighbors(2).empty());
  EXPECT_EQ(degree_distribution(g).bins, (std::vector<DegreeBin>{{0, 1}, {1, 2}, {2, 1}}));
}

TEST(DegreeDistributionTest, HandshakeOnGeneratedGraphs) {
  PbaParams p;
  p.vertices_per_rank = 400;
  p.edges_per_vertex = 3;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    p.master_seed = seed;
    const auto g = generate_pba(p, FactionConfig::blocks(6, 2), {2});
    const UndirectedGraph ug(g);
    const auto h = degree_distribution(ug);
    EXPECT_EQ(h.vertex_total(), g.vertex_count);
    EXPECT_EQ(h.degree_sum(), 2 * ug.edge_count());
  }
  const auto seed = SeedGraph::from_nonzeros(3, std::vector<std::pair<std::uint64_t, std::uint64_t>>{
                                                    {0, 0}, {0, 1}, {2, 1}, {1, 2}});
  PkParams prm;
  prm.iterations = 3;
  const auto g = generate_pk(3, seed, prm);
  const UndirectedGraph ug(g);
  EXPECT_EQ(degree_distribution(ug).degree_sum(), 2 * ug.edge_count());
}

TEST(DegreeDistributionTest, EmptyGraphRejected) {
  EXPECT_THROW(degree_distribution(EdgeList{}), std::invalid_argument);
}

DegreeHistogram synthetic(double gamma) {
  DegreeHistogram h;
  for (std::uint64_t k = 1; k <= 1024; ++k) {
    const auto c = static_cast<std::uint64_t>(std::llround(1e6 * std::pow(k, -gamma)));
    if (c > 0) h.bins.push_back({k, c});
  }
  return h;
}

TEST(PowerLawFitTest, RecoversSyntheticExponents) {
  for (double gamma : {2.1, 2.5, 3.0}) {
    const auto fit = fit_power_law(synthetic(gamma));
    EXPECT_NEAR(fit.gamma, gamma, 0.1);
    EXPECT_GE(fit.bins_used, kMinFitBins);
    EXPECT_GT(fit.r2, 0.99);
  }
}

TEST(PowerLawFitTest, IgnoresSparseBinsBelowTheDensestBin) {
  DegreeHistogram tail;
  for (std::uint64_t k = 5; k <= 1024; ++k) {
    const auto c = static_cast<std::uint64_t>(std::llround(1e6 * std::pow(k, -2.5)));
    if (c > 0) tail.bins.push_back({k, c});
  }
  auto with_straggler = tail;
  with_straggler.bins.insert(with_straggler.bins.begin(), {3, 1});
  const auto a = fit_power_law(tail);
  const auto b = fit_power_law(with_straggler);
  EXPECT_DOUBLE_EQ(a.gamma, b.gamma);
  EXPECT_EQ(a.bins_used, b.bins_used);
  // Rising head then a single falling bin is too short to fit.
  EXPECT_THROW(fit_power_law(DegreeHistogram{{{1, 1}, {2, 4}, {4, 100}, {8, 10}}}), InsufficientData);
}

TEST(PowerLawFitTest, DegenerateHistograms) {
  EXPECT_THROW(fit_power_law(DegreeHistogram{{{4, 100}}}), InsufficientData);
  EXPECT_THROW(fit_power_law(DegreeHistogram{{{0, 5}, {1, 3}, {2, 1}}}), InsufficientData);
  EXPECT_NO_THROW(fit_power_law(DegreeHistogram{{{1, 10}, {2, 5}, {4, 1}}}));
}

TEST(PathStatsTest, PathGraph) {
  const auto s = all_sources(path_graph(5));
  EXPECT_DOUBLE_EQ(s.avg_path_length, 2.0);
  EXPECT_EQ(s.diameter_estimate, 4u);
  EXPECT_EQ(s.sources_sampled, 5u);
  EXPECT_EQ(s.pairs_sampled, 20u);
}

TEST(PathStatsTest, CompleteGraph) {
  EdgeList k4;
  k4.vertex_count = 4;
  for (VertexId u = 0; u < 4; ++u)
    for (VertexId v = u + 1; v < 4; ++v) k4.edges.push_back({u, v});
  const auto s = all_sources(k4);
  EXPECT_DOUBLE_EQ(s.avg_path_length, 1.0);
  EXPECT_EQ(s.diameter_estimate, 1u);
}

TEST(PathStatsTest, KroneckerGraphMatchesAllPairsOracle) {
  const auto seed = read_seed_graph(std::filesystem::path(SFG_TEST_DATA) / "five_vertex.seed");
  PkParams prm;
  prm.iterations = 1;
  const auto g = generate_pk(1, seed, prm);
  const auto exact = floyd_warshall(g);
  const auto s = all_sources(g, 3);
  EXPECT_DOUBLE_EQ(s.avg_path_length, exact.avg);
  EXPECT_EQ(s.diameter_estimate, exact.diameter);
  EXPECT_EQ(s.pairs_sampled, exact.pairs);
}

TEST(PathStatsTest, RandomGraphsMatchOracleIncludingDisconnected) {
  SplitMix64 rng(5);
  for (int t = 0; t < 15; ++t) {
    EdgeList g;
    g.vertex_count = 10 + rng() % 60;
    const auto m = rng() % (2 * g.vertex_count);
    for (std::uint64_t i = 0; i < m; ++i)
      g.edges.push_back({rng() % g.vertex_count, rng() % g.vertex_count});
    g.edges.push_back({0, 1});
    const auto exact = floyd_warshall(g);
    const auto s = all_sources(g, 1 + t % 3);
    EXPECT_DOUBLE_EQ(s.avg_path_length, exact.avg);
    EXPECT_EQ(s.diameter_estimate, exact.diameter);
    EXPECT_EQ(s.pairs_sampled + s.unreachable_pairs, g.vertex_count * (g.vertex_count - 1));
  }
}

TEST(PathStatsTest, DiameterMonotoneInSources) {
  PbaParams p;
  p.vertices_per_rank = 500;
  p.edges_per_vertex = 2;
  const UndirectedGraph ug(generate_pba(p, FactionConfig::blocks(4, 2)));
  std::uint64_t prev = 0;
  for (std::uint64_t s : {1u, 2u, 5u, 20u, 100u, 2000u}) {
    SplitMix64 rng(3);
    const auto st = path_stats(ug, s, rng);
    EXPECT_GE(st.diameter_estimate, prev);
    EXPECT_GE(st.diameter_estimate, st.avg_path_length);
    EXPECT_GE(st.avg_path_length, 1.0);
    prev = st.diameter_estimate;
  }
}

TEST(PathStatsTest, SampledAverageTracksExact) {
  PbaParams p;
  p.vertices_per_rank = 500;
  p.edges_per_vertex = 3;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    p.master_seed = seed;
    const UndirectedGraph ug(generate_pba(p, FactionConfig::all_ranks(4)));
    SplitMix64 a(1), b(seed + 10);
    const auto exact = path_stats(ug, ug.vertex_count(), a);
    const auto sampled = path_stats(ug, ug.vertex_count() / 10, b);
    EXPECT_NEAR(sampled.avg_path_length, exact.avg_path_length, 0.05 * exact.avg_path_length);
  }
}

TEST(PathStatsTest, RejectsGraphsWithoutEdges) {
  SplitMix64 rng(1);
  EXPECT_THROW(path_stats(UndirectedGraph(EdgeList{{{1, 1}}, 3, false}), 3, rng),
               std::invalid_argument);
  EXPECT_THROW(path_stats(UndirectedGraph(path_graph(3)), 0, rng), std::invalid_argument);
}

TEST(PathStatsTest, DefaultSourceCount) {
  EXPECT_EQ(default_source_count(10), 32u);
  EXPECT_EQ(default_source_count(100'000), 100u);
  EXPECT_EQ(default_source_count(100'001), 101u);
}

TEST(RasterTest, DiagonalGraph) {
  EdgeList g;
  g.vertex_count = 40;
  for (VertexId v = 0; v < 40; ++v) g.edges.push_back({v, v});
  const auto r = adjacency_raster(g, 8);
  const auto px = r.intensities();
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      EXPECT_EQ(r.count(i, j), i == j ? 5u : 0u);
      EXPECT_EQ(px[i * 8 + j] != 0, i == j);
    }
}

TEST(RasterTest, LogScaleKeepsSparsePixelsVisible) {
  EdgeList g;
  g.vertex_count = 4;
  for (int i = 0; i < 100000; ++i) g.edges.push_back({0, 0});
  g.edges.push_back({3, 3});
  const auto px = adjacency_raster(g, 2).intensities();
  EXPECT_EQ(px[0], 255);
  EXPECT_EQ(px[1], 0);
  EXPECT_GE(px[3], 1);
}

TEST(RasterTest, PgmEncodings) {
  const EdgeList g{{{0, 1}}, 2, false};
  const auto r = adjacency_raster(g, 2);
  std::ostringstream ascii, binary;
  write_pgm(r, ascii, true);
  write_pgm(r, binary, false);
  EXPECT_EQ(ascii.str(), "P2\n2 2\n255\n0 255\n0 0\n");
  EXPECT_EQ(binary.str(), std::string("P5\n2 2\n255\n\0\xff\0\0", 15));
  EXPECT_THROW(adjacency_raster(g, 0), std::invalid_argument);
}

TEST(ReportTest, KeyValueLines) {
  std::ostringstream out;
  write_report(analyze(path_graph(5), UINT64_MAX, 1, 1), out);
  const auto s = out.str();
  EXPECT_NE(s.find("avg_path_length=2.0\n"), std::string::npos);
  EXPECT_NE(s.find("diameter=4\n"), std::string::npos);
  EXPECT_NE(s.find("gamma=NA\n"), std::string::npos);
  EXPECT_EQ(format_decimal(6.26), "6.26");
  EXPECT_EQ(format_decimal(3), "3.0");
}

TEST(ReportTest, DegreeCsv) {
  std::ostringstream out;
  write_degree_csv(DegreeHistogram{{{1, 4}, {4, 1}}}, out);
  EXPECT_EQ(out.str(), "k,count\n1,4\n4,1\n");
}

}  // namespace
}  // namespace sfg
