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
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfgraph/graph.hpp"
#include "sfgraph/rng.hpp"

namespace sfg {

/// Dense row-major boolean matrix. Only meant for seeds and oracle-sized
/// Kronecker powers.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool operator()(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool value = true) { cells_[r * cols_ + c] = value ? 1 : 0; }

  std::uint64_t nnz() const;
  /// Nonzero positions in row-major order.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> nonzeros() const;

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

inline constexpr std::uint64_t kDenseOracleCap = 10'000'000;

/// Block (i, j) of the result is `b` where a(i, j) is set and zero elsewhere.
/// Throws std::length_error if the result would exceed `cap` cells.
BoolMatrix kronecker_product(const BoolMatrix& a, const BoolMatrix& b,
                             std::uint64_t cap = kDenseOracleCap);

class SeedGraph {
 public:
  /// Throws ConfigError unless n0 >= 2 and at least one entry is set.
  explicit SeedGraph(BoolMatrix adjacency);
  static SeedGraph from_nonzeros(std::size_t n0,
                                 std::span<const std::pair<std::uint64_t, std::uint64_t>> cells);

  std::size_t n0() const { return adjacency_.rows(); }
  std::uint64_t e0() const { return nonzeros_.size(); }
  const BoolMatrix& adjacency() const { return adjacency_; }
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& nonzeros() const { return nonzeros_; }

 private:
  BoolMatrix adjacency_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> nonzeros_;
};

/// Seed file: first line n0, then one "r c" line per nonzero.
SeedGraph parse_seed_graph(std::istream& in);
SeedGraph read_seed_graph(const std::filesystem::path& path);

/// (T + 1)-fold Kronecker power of the seed, dense.
BoolMatrix kronecker_power(const SeedGraph& seed, unsigned iterations,
                           std::uint64_t cap = kDenseOracleCap);

struct MetaEdge {
  std::uint32_t iteration = 0;
  std::uint64_t row = 0;
  std::uint64_t col = 0;

  friend bool operator==(const MetaEdge&, const MetaEdge&) = default;
};

struct PkNoise {
  enum class Kind { kNone, kSeedPerturb, kErFlip };
  Kind kind = Kind::kNone;
  double p_mod = 0.0;
  std::uint64_t flip_count = 0;

  static PkNoise none() { return {}; }
  static PkNoise seed_perturb(double p) { return {Kind::kSeedPerturb, p, 0}; }
  static PkNoise er_flip(std::uint64_t count) { return {Kind::kErFlip, 0.0, count}; }
};

/// "none", "seed-perturb:<p>" or "er-flip:<count>".
PkNoise parse_noise(const std::string& spec);

struct PkParams {
  unsigned iterations = 0;  // final iteration T; n0^(T+1) vertices
  PkNoise noise;
  std::uint64_t master_seed = kDefaultMasterSeed;
};

/// n0^(T+1); throws ConfigError on overflow.
std::uint64_t pk_vertex_count(const SeedGraph& seed, unsigned iterations);

/// Every cell flips independently with probability p_mod. The input seed is
/// not modified. The result may be empty, so it is returned as a plain matrix.
BoolMatrix apply_seed_perturbation(const SeedGraph& seed, double p_mod, SplitMix64& rng);

/// Child layout used when expanding a meta-edge. With seed perturbation the
/// matrix for a meta-edge is drawn from a stream keyed by
/// (master_seed, iteration, row, col), so every rank derives the same
/// children for the same meta-edge.
class ChildPattern {
 public:
  ChildPattern(const SeedGraph& seed, const PkNoise& noise, std::uint64_t master_seed);

  void children(const MetaEdge& parent, std::vector<MetaEdge>& out) const;

 private:
  const SeedGraph* seed_;
  double p_mod_ = 0.0;
  std::uint64_t master_seed_;
};

struct ExpansionStats {
  std::uint64_t emitted = 0;
  std::size_t max_stack_depth = 0;
};

using EdgeSink = std::function<void(const Edge&)>;

/// Depth-first stack expansion starting from `start`. A popped meta-edge at
/// iteration T is emitted; otherwise its children are pushed in row-major
/// order.
ExpansionStats expand_meta_edges(const ChildPattern& pattern, std::span<const MetaEdge> start,
                                 unsigned iterations, const EdgeSink& emit);

/// Expansion from the seed's own edges at iteration 0.
ExpansionStats expand_meta_edges(const SeedGraph& seed, unsigned iterations, const EdgeSink& emit,
                                 const PkNoise& noise = {},
                                 std::uint64_t master_seed = kDefaultMasterSeed);

struct ProcessorGroup {
  RankId first = 0;
  std::size_t size = 0;
  std::uint32_t iteration = 0;

  bool contains(RankId r) const { return r >= first && r < first + size; }
  friend bool operator==(const ProcessorGroup&, const ProcessorGroup&) = default;
};

/// A subgroup and the half-open slice [begin, end) of meta-edges it owns.
struct GroupShare {
  ProcessorGroup members;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  std::uint64_t count() const { return end - begin; }
};

/// If the group has more ranks than meta-edges it splits into `meta_edges`
/// contiguous subgroups (sizes differ by at most one, larger ones first), each
/// owning one meta-edge. Otherwise every rank becomes a singleton owning a
/// contiguous slice (sizes differ by at most one, larger ones first).
std::vector<GroupShare> partition_groups(const ProcessorGroup& group, std::uint64_t meta_edges);

/// Sampled toggle cells for an XOR with a sparse random matrix.
std::vector<Edge> sample_flip_cells(std::uint64_t flip_count, std::uint64_t vertex_count,
                                    SplitMix64& rng);

/// Toggles every cell in `cells` in order. The result is a sorted set.
EdgeList apply_er_flip(const EdgeList& edges, std::span<const Edge> cells);
EdgeList apply_er_flip(const EdgeList& edges, std::uint64_t flip_count, SplitMix64& rng);

struct PkStats {
  std::vector<std::uint64_t> edges_per_rank;
  std::vector<std::size_t> max_stack_depth_per_rank;
  std::size_t max_stack_depth = 0;
};

struct PkOptions {
  std::size_t workers = 1;
  PkStats* stats = nullptr;
  std::ostream* volume_log = nullptr;
};

/// Partitioned expansion over `ranks` ranks. Output is directed, concatenated
/// in rank order. With noise none it is a permutation of the serial expansion.
EdgeList generate_pk(std::size_t ranks, const SeedGraph& seed, const PkParams& params,
                     const PkOptions& options = {});

}  // namespace sfg
