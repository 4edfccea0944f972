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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "sfgraph/graph.hpp"
#include "sfgraph/rng.hpp"

namespace sfg {

/// Symmetrized, deduplicated view of an edge list in CSR form. Self-loops are
/// kept for degree counting (each adds 2) but are not BFS neighbors.
class UndirectedGraph {
 public:
  explicit UndirectedGraph(const EdgeList& g);

  std::uint64_t vertex_count() const { return offsets_.size() - 1; }
  /// Distinct undirected edges, self-loops included.
  std::uint64_t edge_count() const { return unique_edges_; }
  std::uint64_t degree(VertexId v) const { return degree_[v]; }
  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<VertexId> adjacency_;
  std::vector<std::uint64_t> degree_;
  std::uint64_t unique_edges_ = 0;
};

struct DegreeBin {
  std::uint64_t degree = 0;
  std::uint64_t count = 0;

  friend bool operator==(const DegreeBin&, const DegreeBin&) = default;
};

/// Sparse (degree, vertex count) pairs in ascending degree order. Zero-degree
/// vertices are included so that the counts sum to |V|.
struct DegreeHistogram {
  std::vector<DegreeBin> bins;

  std::uint64_t vertex_total() const;
  std::uint64_t degree_sum() const;
};

DegreeHistogram degree_distribution(const UndirectedGraph& g);
/// Throws std::invalid_argument for a graph with no vertices.
DegreeHistogram degree_distribution(const EdgeList& g);

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PowerLawFit {
  double gamma = 0.0;
  double intercept = 0.0;  // natural-log scale
  double r2 = 0.0;
  std::size_t bins_used = 0;
};

inline constexpr std::size_t kMinFitBins = 3;

/// Least-squares line through log-binned degree densities. Bin b covers
/// degrees [2^b, 2^(b+1) - 1]; its density is the vertex count divided by the
/// bin width and its abscissa is the geometric mean of the bin's end points.
/// Bins left of the densest bin are excluded (lower cutoff of the tail).
/// Throws InsufficientData with fewer than kMinFitBins usable bins.
PowerLawFit fit_power_law(const DegreeHistogram& h);

struct PathStats {
  double avg_path_length = 0.0;
  std::uint64_t diameter_estimate = 0;
  std::uint64_t sources_sampled = 0;
  std::uint64_t pairs_sampled = 0;      // reachable (source, target != source) pairs
  std::uint64_t unreachable_pairs = 0;
};

/// max(32, ceil(0.001 * |V|)).
std::uint64_t default_source_count(std::uint64_t vertex_count);

/// BFS from `sources` start vertices, taken as the prefix of a random
/// permutation drawn from `rng`, so a larger sample from the same stream is a
/// superset. `sources >= |V|` uses every vertex in id order. Throws
/// std::invalid_argument when the graph has no edge between distinct vertices.
PathStats path_stats(const UndirectedGraph& g, std::uint64_t sources, SplitMix64& rng,
                     std::size_t workers = 1);

/// Accumulated edge counts on a resolution x resolution grid.
class Raster {
 public:
  Raster(std::size_t resolution) : resolution_(resolution), counts_(resolution * resolution, 0) {}

  std::size_t resolution() const { return resolution_; }
  std::uint64_t count(std::size_t row, std::size_t col) const {
    return counts_[row * resolution_ + col];
  }
  void add(std::size_t row, std::size_t col) { ++counts_[row * resolution_ + col]; }

  /// 0 for empty pixels; otherwise round(255 * log(1 + c) / log(1 + max)),
  /// clamped to at least 1.
  std::vector<std::uint8_t> intensities() const;

 private:
  std::size_t resolution_;
  std::vector<std::uint64_t> counts_;
};

/// Edge (u, v) lands on pixel (u * res / |V|, v * res / |V|).
Raster adjacency_raster(const EdgeList& g, std::size_t resolution);

/// PGM: P5 binary, or P2 with `ascii`.
void write_pgm(const Raster& raster, std::ostream& out, bool ascii = false);
void write_pgm(const Raster& raster, const std::filesystem::path& path, bool ascii = false);

/// "k,count" lines with a header row.
void write_degree_csv(const DegreeHistogram& h, std::ostream& out);

}  // namespace sfg
