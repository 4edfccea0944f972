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

#include "sfgraph/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace sfg {

std::string format_decimal(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.push_back('0');
  return s;
}

MetricsReport analyze(const EdgeList& g, std::uint64_t sources, std::uint64_t seed,
                      std::size_t workers) {
  MetricsReport r;
  r.vertices = g.vertex_count;
  r.input_edges = g.edges.size();
  const UndirectedGraph ug(g);
  r.undirected_edges = ug.edge_count();
  r.histogram = degree_distribution(ug);
  if (!r.histogram.bins.empty()) r.max_degree = r.histogram.bins.back().degree;
  try {
    r.fit = fit_power_law(r.histogram);
  } catch (const InsufficientData& e) {
    r.fit_error = e.what();
  }
  try {
    SplitMix64 rng(seed);
    r.paths = path_stats(ug, sources == 0 ? default_source_count(ug.vertex_count()) : sources, rng,
                         workers);
  } catch (const std::invalid_argument& e) {
    r.path_error = e.what();
  }
  return r;
}

void write_report(const MetricsReport& r, std::ostream& out) {
  out << "vertices=" << r.vertices << '\n'
      << "edges=" << r.input_edges << '\n'
      << "undirected_edges=" << r.undirected_edges << '\n'
      << "max_degree=" << r.max_degree << '\n';
  if (r.fit) {
    out << "gamma=" << format_decimal(r.fit->gamma) << '\n'
        << "gamma_intercept=" << format_decimal(r.fit->intercept) << '\n'
        << "gamma_r2=" << format_decimal(r.fit->r2) << '\n'
        << "gamma_bins=" << r.fit->bins_used << '\n';
  } else {
    out << "gamma=NA\n"
        << "gamma_error=" << r.fit_error << '\n';
  }
  if (r.paths) {
    out << "avg_path_length=" << format_decimal(r.paths->avg_path_length) << '\n'
        << "diameter=" << r.paths->diameter_estimate << '\n'
        << "sources=" << r.paths->sources_sampled << '\n'
        << "pairs=" << r.paths->pairs_sampled << '\n'
        << "unreachable_pairs=" << r.paths->unreachable_pairs << '\n';
  } else {
    out << "avg_path_length=NA\n"
        << "path_error=" << r.path_error << '\n';
  }
}

}  // namespace sfg
