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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "sfgraph/graph.hpp"
#include "sfgraph/metrics.hpp"

namespace sfg {

/// Shortest decimal with at least one fractional digit: 2 -> "2.0",
/// 6.2645 -> "6.2645". At most six fractional digits.
std::string format_decimal(double value);

struct MetricsReport {
  std::uint64_t vertices = 0;
  std::uint64_t input_edges = 0;
  std::uint64_t undirected_edges = 0;
  std::uint64_t max_degree = 0;
  DegreeHistogram histogram;
  std::optional<PowerLawFit> fit;
  std::string fit_error;
  std::optional<PathStats> paths;
  std::string path_error;
};

/// Degree histogram, power-law fit and sampled path statistics for `g`.
/// `sources == 0` selects default_source_count().
MetricsReport analyze(const EdgeList& g, std::uint64_t sources, std::uint64_t seed,
                      std::size_t workers);

/// key=value lines.
void write_report(const MetricsReport& report, std::ostream& out);

}  // namespace sfg
